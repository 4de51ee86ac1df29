#include "kerrpqd/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "kerrpqd/errors.hpp"

namespace kerrpqd::fock {

Matrix annihilation(int dim) {
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Matrix creation(int dim) { return annihilation(dim).adjoint(); }

Matrix number(int dim) {
    Matrix n = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

Matrix expm(const Matrix& generator) { return generator.exp(); }

Matrix displacement(cplx xi, int dim) {
    const Matrix a = annihilation(dim);
    return expm(xi * a.adjoint() - std::conj(xi) * a);
}

Matrix displacement_elements(cplx xi, int dim) {
    // D[n+k, n] = e^{ik theta} g_n and D[n, n+k] = (-e^{-i theta})^k g_n with
    // g_n = e^{-x/2} x^{k/2} sqrt(n!/(n+k)!) L_n^k(x), x = |xi|^2. The
    // normalized Laguerre recurrence runs along each diagonal.
    const double x = std::norm(xi);
    const double rho = std::sqrt(x);
    const double theta = std::arg(xi);
    Matrix d(dim, dim);
    double g0 = std::exp(-0.5 * x);  // e^{-x/2} rho^k / sqrt(k!)
    for (int k = 0; k < dim; ++k) {
        if (k > 0) g0 *= rho / std::sqrt(static_cast<double>(k));
        const cplx lower = std::polar(1.0, k * theta);
        const cplx upper = std::polar(1.0, k * (pi - theta));
        double prev = 0.0;
        double cur = g0;
        for (int n = 0; n + k < dim; ++n) {
            d(n + k, n) = lower * cur;
            d(n, n + k) = upper * cur;
            const double j = n;
            const double next =
                ((2.0 * j + 1.0 + k - x) * cur - std::sqrt(j * (j + k)) * prev) / std::sqrt((j + 1.0) * (j + 1.0 + k));
            prev = cur;
            cur = next;
        }
    }
    return d;
}

Matrix squeezing(SqueezeParam xi, int dim) {
    const Matrix a = annihilation(dim);
    const Matrix a2 = a * a;
    return expm(0.5 * (xi.xi() * a2.adjoint() - std::conj(xi.xi()) * a2));
}

Vector kerr_phases(KerrOrder order, int dim) {
    const long long period = 2LL * order.m();
    Vector u(dim);
    for (int n = 0; n < dim; ++n) {
        const long long k = (1LL * n * (n - 1)) % period;
        u(n) = std::polar(1.0, -pi * static_cast<double>(k) / order.m());
    }
    return u;
}

Vector kerr_phases(double chi, int dim) {
    Vector u(dim);
    for (int n = 0; n < dim; ++n) {
        // Rounding of chi n(n-1) grows like n^2; the KerrOrder overload is exact.
        u(n) = std::polar(1.0, -chi * static_cast<double>(n) * static_cast<double>(n - 1));
    }
    return u;
}

int padded_dim(int cutoff) { return cutoff + 41 + cutoff / 2; }

FockVector truncate(const Vector& padded, int cutoff, double budget) {
    if (cutoff < 1) throw InvalidArgument("Fock cutoff must be >= 1");
    const int dim = static_cast<int>(padded.size());
    if (cutoff + 1 > dim) throw InvalidArgument("cutoff exceeds the padded dimension");
    const double tail = padded.tail(dim - cutoff - 1).squaredNorm();
    // Mass reaching the top of the padded space means the padding itself was
    // too small and the truncated generator reflected amplitude back.
    const int band = std::max(1, dim / 10);
    const double edge = padded.tail(band).squaredNorm();
    if (tail > budget || edge > 1e-3 * budget) {
        std::ostringstream os;
        os << "cutoff " << cutoff << " loses probability " << tail << " > budget " << budget;
        throw CutoffTooSmall(os.str(), tail);
    }
    return {padded.head(cutoff + 1), tail};
}

namespace {

Vector vacuum(int dim) {
    Vector v = Vector::Zero(dim);
    v(0) = 1.0;
    return v;
}

Vector squeezed_coherent(cplx alpha, SqueezeParam xi, int dim) {
    Vector v = displacement(alpha, dim).col(0);
    if (!xi.is_identity()) v = squeezing(xi, dim) * v;
    return v;
}

}  // namespace

FockVector build_state(const StateDescription& desc, int cutoff, double budget) {
    using Kind = StateDescription::Kind;
    const int dim = padded_dim(cutoff);
    const SqueezeParam sq(desc.r, desc.phi);
    Vector v = vacuum(dim);
    switch (desc.kind) {
        case Kind::Coherent:
            v = displacement(desc.alpha, dim).col(0);
            break;
        case Kind::SqueezedVacuum:
            v = squeezing(sq, dim).col(0);
            break;
        case Kind::KerrCoherent:
            v = kerr_phases(KerrOrder(desc.m), dim).cwiseProduct(displacement(desc.alpha, dim).col(0));
            break;
        case Kind::SqueezeKerrCoherent:
            v = kerr_phases(KerrOrder(desc.m), dim).cwiseProduct(displacement(desc.alpha, dim).col(0));
            v = squeezing(sq, dim) * v;
            break;
        case Kind::KerrSqueezedVacuum:
            v = kerr_phases(KerrOrder(desc.m), dim).cwiseProduct(squeezing(SqueezeParam(desc.r, 0.0), dim).col(0));
            break;
    }
    return truncate(v, cutoff, budget);
}

FockVector build_state(const SuperpositionState& state, int cutoff, double budget) {
    const int dim = padded_dim(cutoff);
    Vector v = Vector::Zero(dim);
    for (const Branch& b : state.branches()) v += b.coeff * squeezed_coherent(b.alpha, b.squeeze, dim);
    return truncate(v, cutoff, budget);
}

cplx oracle_char(const Vector& ket, const Vector& bra, cplx xi, double t) {
    if (ket.size() != bra.size()) throw InvalidArgument("ket and bra need a common cutoff");
    const Matrix d = displacement_elements(xi, static_cast<int>(ket.size()));
    return bra.dot(d * ket) * std::exp(0.5 * t * std::norm(xi));
}

cplx oracle_char(const Matrix& rho, cplx xi, double t) {
    if (rho.rows() != rho.cols()) throw InvalidArgument("density matrix must be square");
    const Matrix d = displacement_elements(xi, static_cast<int>(rho.rows()));
    return rho.transpose().cwiseProduct(d).sum() * std::exp(0.5 * t * std::norm(xi));
}

cplx oracle_char_expm(const Vector& ket, const Vector& bra, cplx xi, double t) {
    if (ket.size() != bra.size()) throw InvalidArgument("ket and bra need a common cutoff");
    const int n = static_cast<int>(ket.size());
    const double x = std::abs(xi);
    const int dim = n + 30 + static_cast<int>(std::ceil(8.0 * x * std::sqrt(static_cast<double>(n)) + 4.0 * x * x));
    Vector k = Vector::Zero(dim);
    Vector b = Vector::Zero(dim);
    k.head(n) = ket;
    b.head(n) = bra;
    return b.dot(displacement(xi, dim) * k) * std::exp(0.5 * t * std::norm(xi));
}

namespace {

Vector coherent_amplitudes(cplx beta, int dim) {
    Vector c(dim);
    c(0) = std::exp(-0.5 * std::norm(beta));
    for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * beta / std::sqrt(static_cast<double>(n));
    return c;
}

}  // namespace

double oracle_husimi(const Matrix& rho, cplx beta) {
    const Vector c = coherent_amplitudes(beta, static_cast<int>(rho.rows()));
    return c.dot(rho * c).real() / pi;
}

double oracle_husimi(const Vector& psi, cplx beta) {
    const Vector c = coherent_amplitudes(beta, static_cast<int>(psi.size()));
    return std::norm(c.dot(psi)) / pi;
}

namespace {

// W[a][b] = h^2/pi^2 sum_{j,k} phi(y_k, x_j) exp(2i (b x_j - a y_k)) over
// every `stride`-th node.
Eigen::MatrixXcd fourier_sum(const Eigen::MatrixXcd& phi, const std::vector<double>& nodes, int stride,
                             const Grid& beta) {
    std::vector<int> idx;
    for (int j = 0; j < static_cast<int>(nodes.size()); j += stride) idx.push_back(j);
    const int n = static_cast<int>(idx.size());
    const double h = (nodes[1] - nodes[0]) * stride;
    Eigen::MatrixXcd sub(n, n);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            const double w = ((j == 0 || j == n - 1) ? 0.5 : 1.0) * ((k == 0 || k == n - 1) ? 0.5 : 1.0);
            sub(k, j) = w * phi(idx[k], idx[j]);
        }
    }
    Eigen::MatrixXcd ex(n, beta.n);
    Eigen::MatrixXcd ey(beta.n, n);
    for (int j = 0; j < n; ++j) {
        for (int ib = 0; ib < beta.n; ++ib) {
            ex(j, ib) = std::polar(1.0, 2.0 * beta.coord(ib) * nodes[idx[j]]);
            ey(ib, j) = std::polar(1.0, -2.0 * beta.coord(ib) * nodes[idx[j]]);
        }
    }
    return (h * h / (pi * pi)) * (ey * (sub * ex));
}

}  // namespace

PqdGrid oracle_pqd_grid(const Vector& psi, double t, const Grid& beta_grid, double xi_half_width, double xi_step) {
    if (!(xi_half_width > 0.0) || !(xi_step > 0.0)) throw InvalidArgument("xi window and step must be > 0");
    const double cells = 2.0 * xi_half_width / xi_step;
    const long nc = std::lround(cells);
    if (std::abs(cells - static_cast<double>(nc)) > 1e-9 || nc % 2 != 0) {
        throw InvalidArgument("xi window must hold an even number of steps");
    }
    std::vector<double> nodes(nc + 1);
    for (long j = 0; j <= nc; ++j) nodes[j] = -xi_half_width + xi_step * static_cast<double>(j);
    const int n = static_cast<int>(nodes.size());
    const int dim = static_cast<int>(psi.size());
    Eigen::MatrixXcd phi(n, n);
    double edge = 0.0;
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            const cplx xi(nodes[j], nodes[k]);
            const Matrix d = displacement_elements(xi, dim);
            phi(k, j) = psi.dot(d * psi) * std::exp(0.5 * t * std::norm(xi));
            if (j == 0 || k == 0 || j == n - 1 || k == n - 1) edge = std::max(edge, std::abs(phi(k, j)));
        }
    }
    const Eigen::MatrixXcd fine = fourier_sum(phi, nodes, 1, beta_grid);
    const Eigen::MatrixXcd coarse = fourier_sum(phi, nodes, 2, beta_grid);
    PqdGrid out;
    out.values.grid = beta_grid;
    out.values.re.resize(static_cast<std::size_t>(beta_grid.n) * beta_grid.n);
    out.discretization_err = (fine - coarse).cwiseAbs().maxCoeff();
    out.window_edge = edge;
    for (int ia = 0; ia < beta_grid.n; ++ia) {
        for (int ib = 0; ib < beta_grid.n; ++ib) {
            const cplx w = fine(ia, ib);
            out.values.re[static_cast<std::size_t>(ib) * beta_grid.n + ia] = w.real();
            out.values.max_abs_imag = std::max(out.values.max_abs_imag, std::abs(w.imag()));
            out.values.max_abs_real = std::max(out.values.max_abs_real, std::abs(w.real()));
        }
    }
    return out;
}

int interior_size(int cutoff) { return static_cast<int>(std::floor(0.9 * cutoff)) + 1; }

double verify_kerr_bch(double chi, int cutoff) {
    if (cutoff < 1) throw InvalidArgument("Fock cutoff must be >= 1");
    const int dim = cutoff + 1;
    const Matrix a = annihilation(dim);
    const Vector u = kerr_phases(chi, dim);
    const Matrix lhs = u.conjugate().asDiagonal() * a * u.asDiagonal();
    Vector rot(dim);
    for (int n = 0; n < dim; ++n) rot(n) = std::polar(1.0, -2.0 * chi * n);
    const Matrix rhs = rot.asDiagonal() * a;
    const int k = interior_size(cutoff);
    return (lhs - rhs).topLeftCorner(k, k).cwiseAbs().maxCoeff();
}

namespace {

double fidelity(const Vector& a, const Vector& b) { return std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm()); }

constexpr double kIdentityBudget = 1e-10;

}  // namespace

double verify_u2_squeeze(double r, int cutoff) {
    const int dim = padded_dim(cutoff);
    const Vector u2 = kerr_phases(KerrOrder(2), dim);
    const Vector lhs = u2.cwiseProduct(squeezing(SqueezeParam(r, 0.0), dim).col(0));
    const Vector rhs = squeezing(SqueezeParam(-r, 0.0), dim).col(0);
    return fidelity(truncate(rhs, cutoff, kIdentityBudget).amplitudes, truncate(lhs, cutoff, kIdentityBudget).amplitudes);
}

double verify_u2_squeeze_coherent(double r, cplx alpha, int cutoff) {
    const int dim = padded_dim(cutoff);
    const Vector u2 = kerr_phases(KerrOrder(2), dim);
    const Vector coh = displacement(alpha, dim).col(0);
    const Vector lhs = u2.cwiseProduct(squeezing(SqueezeParam(r, 0.0), dim) * coh);
    const Vector rhs = squeezing(SqueezeParam(-r, 0.0), dim) * u2.cwiseProduct(coh);
    return fidelity(truncate(rhs, cutoff, kIdentityBudget).amplitudes, truncate(lhs, cutoff, kIdentityBudget).amplitudes);
}

int ancilla_cutoff(double nbar) {
    if (nbar <= 0.0) return 0;
    const double q = nbar / (1.0 + nbar);
    // Thermal tail beyond N is q^{N+1}.
    return static_cast<int>(std::ceil(std::log(1e-14) / std::log(q)));
}

Matrix oracle_channel(const Matrix& rho, const NoiseParams& noise) {
    noise.validate();
    if (rho.rows() != rho.cols() || rho.rows() < 1) throw InvalidArgument("density matrix must be square");
    const int ns = static_cast<int>(rho.rows()) - 1;
    const int ne = ancilla_cutoff(noise.nbar);
    const int nout = ns + ne;
    const double theta = std::acos(std::sqrt(noise.eta_L));
    // Beam splitter exp(theta (a^dag b - a b^dag)) restricted to the block of
    // K total photons, in the basis |i, K - i>.
    std::vector<Eigen::MatrixXd> blocks(nout + 1);
    for (int K = 0; K <= nout; ++K) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(K + 1, K + 1);
        for (int i = 0; i < K; ++i) {
            const double c = std::sqrt(static_cast<double>((i + 1) * (K - i)));
            g(i + 1, i) = c;
            g(i, i + 1) = -c;
        }
        blocks[K] = (theta * g).exp();
    }
    Matrix out = Matrix::Zero(nout + 1, nout + 1);
    const double q = noise.nbar / (1.0 + noise.nbar);
    for (int k = 0; k <= ne; ++k) {
        const double pk = std::pow(q, k) / (1.0 + noise.nbar);
        // Kraus operator for ancilla k -> e shifts |j> to |j + k - e> with
        // amplitude <j + k - e, e|U|j, k>.
        for (int e = 0; e <= ns + k; ++e) {
            const int shift = k - e;
            Eigen::VectorXd d = Eigen::VectorXd::Zero(ns + 1);
            for (int j = std::max(0, -shift); j <= ns; ++j) {
                if (j + shift > nout) continue;
                d(j) = blocks[j + k](j + shift, j);
            }
            for (int j = 0; j <= ns; ++j) {
                if (d(j) == 0.0) continue;
                for (int jp = 0; jp <= ns; ++jp) {
                    if (d(jp) == 0.0) continue;
                    out(j + shift, jp + shift) += pk * d(j) * d(jp) * rho(j, jp);
                }
            }
        }
    }
    return out;
}

double p_off(const Matrix& rho, const NoiseParams& noise) {
    noise.validate();
    double sum = 0.0;
    double w = 1.0;
    for (int n = 0; n < rho.rows(); ++n) {
        sum += w * rho(n, n).real();
        w *= 1.0 - noise.eta_D;
    }
    return (1.0 - noise.p_D) * sum;
}

}  // namespace kerrpqd::fock
