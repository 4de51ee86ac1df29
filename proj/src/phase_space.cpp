#include "kerrpqd/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kerrpqd/errors.hpp"
#include "grid_eval.hpp"

namespace kerrpqd {

GaussianState::GaussianState(Eigen::MatrixXd cov, Eigen::VectorXd mean) : cov_(std::move(cov)), mean_(std::move(mean)) {
    if (mean_.size() == 0 || mean_.size() % 2 != 0 || cov_.rows() != mean_.size() || cov_.cols() != mean_.size()) {
        throw InvalidArgument("Gaussian state needs a 2M x 2M covariance and a length-2M mean");
    }
    if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, cov_.cwiseAbs().maxCoeff())) {
        throw InvalidArgument("covariance matrix must be symmetric");
    }
    cov_ = 0.5 * (cov_ + cov_.transpose());
}

GaussianState GaussianState::coherent(cplx alpha) {
    return GaussianState(Eigen::Matrix2d::Identity(), Eigen::Vector2d(alpha.real(), alpha.imag()));
}

GaussianState GaussianState::thermal(double lambda) {
    if (!(lambda >= 1.0)) throw InvalidArgument("thermal covariance lambda must be >= 1");
    return GaussianState(lambda * Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero());
}

GaussianState GaussianState::squeezed_coherent(SqueezeParam squeeze, cplx alpha) {
    // S(xi)|alpha> = D(mu alpha + nu e^{i phi} alpha^*) S(xi)|0>; the stretched
    // quadrature points along e^{i phi/2}.
    const double r = squeeze.r();
    const double th = squeeze.phi() / 2.0;
    Eigen::Matrix2d rot;
    rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    const Eigen::Matrix2d diag = Eigen::Vector2d(std::exp(2.0 * r), std::exp(-2.0 * r)).asDiagonal();
    const cplx shifted = squeeze.mu() * alpha + squeeze.nu() * std::polar(1.0, squeeze.phi()) * std::conj(alpha);
    return GaussianState(rot * diag * rot.transpose(), Eigen::Vector2d(shifted.real(), shifted.imag()));
}

double GaussianPqd::operator()(const Eigen::VectorXd& beta) const {
    const Eigen::VectorXd d = beta - mean;
    return norm * std::exp(-0.5 * d.dot(precision * d));
}

double GaussianPqd::operator()(cplx beta) const { return (*this)(Eigen::Vector2d(beta.real(), beta.imag())); }

GaussianPqd gaussian_pqd(const GaussianState& state, const std::vector<double>& t_vec) {
    const int M = state.modes();
    if (static_cast<int>(t_vec.size()) != M) {
        throw InvalidArgument("need one ordering parameter per mode");
    }
    Eigen::MatrixXd x = state.cov();
    for (int j = 0; j < M; ++j) {
        x(2 * j, 2 * j) -= t_vec[j];
        x(2 * j + 1, 2 * j + 1) -= t_vec[j];
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig <= ComplexGaussianForm::kSingularTolerance) {
        std::ostringstream os;
        os << "sigma - s has eigenvalue " << min_eig << " <= " << ComplexGaussianForm::kSingularTolerance;
        throw OrderingTooHigh(os.str());
    }
    const double det = es.eigenvalues().prod();
    GaussianPqd g;
    g.norm = std::pow(2.0 / pi, M) / std::sqrt(det);
    g.precision = 4.0 * es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
    g.mean = state.mean();
    return g;
}

namespace {

/// eta = xi mu - xi^* nu e^{i phi}, the argument of S^dag D(xi) S = D(eta).
Affine squeezed_displacement(const SqueezeParam& s) {
    const Affine xi = Affine::xi();
    return xi * s.mu() + xi.conj() * (-s.nu() * std::polar(1.0, s.phi()));
}

}  // namespace

ComplexGaussianForm dyadic_char_squeezed_coherent(cplx alpha, cplx gamma, double r, double t, double phi) {
    const SqueezeParam s(r, phi);
    const Affine eta = squeezed_displacement(s);
    const Affine xi = Affine::xi();
    ExponentBuilder b;
    b.add(-0.5 * std::norm(alpha) - 0.5 * std::norm(gamma) + std::conj(gamma) * alpha)
        .add(-0.5, eta, eta.conj())
        .add(std::conj(gamma), eta)
        .add(-alpha, eta.conj())
        .add(t / 2.0, xi, xi.conj());
    return b.build();
}

ComplexGaussianForm dyadic_char_squeezed_vacua(double r, double phi, double psi, double t) {
    const SqueezeParam ket(r, phi);
    const SqueezeParam bra(r, psi);
    // <0|S(-r e^{i psi}) S(r e^{i phi}) D(eta)|0>, S(-.)S(.) = S(xi3) e^{i Phi K0}
    const auto [xi3, Phi] = compose_squeezing(bra.inverse(), ket);
    const Affine eta = squeezed_displacement(ket);
    const Affine xi = Affine::xi();
    ExponentBuilder b;
    b.add(I * Phi / 4.0 - 0.5 * std::log(xi3.mu()))
        .add(-0.5 * std::conj(xi3.zeta()) * std::polar(1.0, Phi), eta, eta)
        .add(-0.5, eta, eta.conj())
        .add(t / 2.0, xi, xi.conj());
    return b.build();
}

ComplexGaussianForm dyadic_char(const Branch& ket, const Branch& bra, double t) {
    const auto [xi3, Phi] = compose_squeezing(bra.squeeze.inverse(), ket.squeeze);
    const cplx z3 = xi3.zeta();
    const double mu3 = xi3.mu();
    const cplx a = ket.alpha;
    const cplx g = bra.alpha;
    const Affine eta = squeezed_displacement(ket.squeeze);
    // D(eta)|alpha> = e^{(eta alpha^* - eta^* alpha)/2} |alpha + eta>, then the
    // K0 rotation maps |delta> to e^{i Phi/4}|e^{i Phi/2} delta>.
    const Affine delta = (Affine::constant(a) + eta) * std::polar(1.0, Phi / 2.0);
    const Affine xi = Affine::xi();
    ExponentBuilder b;
    b.add(0.5 * std::conj(a), eta)
        .add(-0.5 * a, eta.conj())
        .add(I * Phi / 4.0 - 0.5 * std::log(mu3) + 0.5 * z3 * std::conj(g) * std::conj(g) - 0.5 * std::norm(g))
        .add(-0.5 * std::conj(z3), delta, delta)
        .add(-0.5, delta, delta.conj())
        .add(std::conj(g) / mu3, delta)
        .add(t / 2.0, xi, xi.conj());
    return b.build();
}

PqdFunction::PqdFunction(std::vector<ComplexGaussianForm> terms, std::vector<ComplexGaussianForm> real_terms,
                         double ordering)
    : terms_(std::move(terms)), real_terms_(std::move(real_terms)), ordering_(ordering) {}

cplx PqdFunction::operator()(cplx beta) const {
    cplx sum = 0.0;
    for (const auto& f : terms_) sum += f(beta);
    return sum;
}

double PqdFunction::real(cplx beta) const {
    double sum = 0.0;
    for (const auto& f : real_terms_) sum += f(beta).real();
    return sum;
}

cplx PqdFunction::integral() const {
    cplx sum = 0.0;
    for (const auto& f : terms_) sum += f.integral();
    return sum;
}

PqdFunction to_pqd_function(const GaussianPqd& g, double ordering) {
    if (g.mean.size() != 2) throw InvalidArgument("to_pqd_function needs a single-mode Gaussian PQD");
    const Eigen::Matrix2d P = g.precision;
    const Eigen::Vector2d m = g.mean;
    const ComplexGaussianForm f(std::log(g.norm) - 0.5 * m.dot(P * m), P.cast<cplx>(), (P * m).cast<cplx>());
    return PqdFunction({f}, {f}, ordering);
}

PqdFunction superposition_pqd(const SuperpositionState& state, double t) {
    const auto& br = state.branches();
    const std::size_t n = br.size();
    std::vector<ComplexGaussianForm> terms;
    std::vector<ComplexGaussianForm> paired;
    terms.reserve(n * n);
    std::vector<ComplexGaussianForm> table(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const ComplexGaussianForm ch = dyadic_char(br[a], br[b], t);
            if (!ch.integrable()) {
                std::ostringstream os;
                os << "branch pair (" << a << ", " << b << ") not integrable at t = " << t
                   << " (min eig Re(A) = " << ch.min_real_eigenvalue() << ")";
                throw NotIntegrable(os.str());
            }
            const cplx weight = std::log(br[a].coeff * std::conj(br[b].coeff));
            table[a * n + b] = fourier_transform_form(ch).scaled_log(weight);
            terms.push_back(table[a * n + b]);
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        paired.push_back(table[a * n + a]);
        for (std::size_t b = a + 1; b < n; ++b) paired.push_back(table[a * n + b].scaled_log(std::log(2.0)));
    }
    return PqdFunction(std::move(terms), std::move(paired), t);
}

double max_integrable_ordering(const SuperpositionState& state) {
    double sup = std::numeric_limits<double>::infinity();
    for (const Branch& a : state.branches()) {
        for (const Branch& b : state.branches()) {
            sup = std::min(sup, dyadic_char(a, b, 0.0).min_real_eigenvalue());
        }
    }
    return sup;
}

Grid Grid::nodes(double R, int n) {
    if (n < 2 || !(R > 0.0)) throw InvalidArgument("grid needs R > 0 and n >= 2");
    return {-R, 2.0 * R / (n - 1), n};
}

Grid Grid::midpoints(double R, int n) {
    if (n < 1 || !(R > 0.0)) throw InvalidArgument("grid needs R > 0 and n >= 1");
    const double h = 2.0 * R / n;
    return {-R + 0.5 * h, h, n};
}

GridValues evaluate_grid(const PqdFunction& w, const Grid& grid) {
    GridValues out;
    out.grid = grid;
    out.re.resize(static_cast<std::size_t>(grid.n) * grid.n);
    std::vector<cplx> row(grid.n);
    for (int iy = 0; iy < grid.n; ++iy) {
        std::fill(row.begin(), row.end(), cplx{});
        for (const auto& f : w.terms()) detail::accumulate_row(f, grid, grid.coord(iy), row.data());
        for (int ix = 0; ix < grid.n; ++ix) {
            out.re[static_cast<std::size_t>(iy) * grid.n + ix] = row[ix].real();
            out.max_abs_imag = std::max(out.max_abs_imag, std::abs(row[ix].imag()));
            out.max_abs_real = std::max(out.max_abs_real, std::abs(row[ix].real()));
        }
    }
    return out;
}

double default_window(const SuperpositionState& state) {
    const double e = std::exp(state.max_squeeze());
    return 4.0 * (state.max_displacement() * e + e);
}

}  // namespace kerrpqd
