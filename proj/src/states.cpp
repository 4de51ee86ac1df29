#include "kerrpqd/states.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kerrpqd/errors.hpp"

namespace kerrpqd {

namespace {

double wrap_phase(double phi) {
    double w = std::fmod(phi, 2.0 * pi);
    if (w < 0.0) w += 2.0 * pi;
    if (w >= 2.0 * pi) w = 0.0;
    return w;
}

}  // namespace

SqueezeParam::SqueezeParam(double r, double phi) {
    if (!std::isfinite(r) || !std::isfinite(phi)) {
        throw InvalidArgument("squeeze parameter must be finite");
    }
    if (r < 0.0) {
        r = -r;
        phi += pi;
    }
    r_ = r;
    phi_ = r == 0.0 ? 0.0 : wrap_phase(phi);
}

SqueezeParam SqueezeParam::from_complex(cplx xi) {
    return SqueezeParam(std::abs(xi), std::arg(xi));
}

SqueezeParam SqueezeParam::from_zeta(cplx zeta) {
    const double a = std::abs(zeta);
    if (!(a < 1.0)) throw InvalidArgument("|zeta| must be < 1");
    return SqueezeParam(std::atanh(a), std::arg(zeta));
}

KerrOrder::KerrOrder(int m) : m_(m) {
    if (m < 1) throw InvalidArgument("Kerr order m must be >= 1, got " + std::to_string(m));
}

SuperpositionState::SuperpositionState(std::vector<Branch> branches) {
    for (const Branch& b : branches) {
        if (!std::isfinite(b.coeff.real()) || !std::isfinite(b.coeff.imag()) ||
            !std::isfinite(b.alpha.real()) || !std::isfinite(b.alpha.imag())) {
            throw InvalidArgument("branch coefficients and displacements must be finite");
        }
        auto same = std::find_if(branches_.begin(), branches_.end(), [&](const Branch& o) {
            return std::abs(o.alpha - b.alpha) < kMergeTolerance &&
                   std::abs(o.squeeze.xi() - b.squeeze.xi()) < kMergeTolerance;
        });
        if (same != branches_.end()) {
            same->coeff += b.coeff;
        } else {
            branches_.push_back(b);
        }
    }
    std::erase_if(branches_, [](const Branch& b) { return std::abs(b.coeff) < kPruneTolerance; });
    if (branches_.empty()) throw InvalidArgument("superposition has no non-vanishing branch");
}

double SuperpositionState::norm_squared() const {
    cplx total = 0.0;
    for (const Branch& ket : branches_) {
        for (const Branch& bra : branches_) {
            total += std::conj(bra.coeff) * ket.coeff * branch_overlap(bra, ket);
        }
    }
    return total.real();
}

double SuperpositionState::max_displacement() const {
    double m = 0.0;
    for (const Branch& b : branches_) m = std::max(m, std::abs(b.alpha));
    return m;
}

double SuperpositionState::max_squeeze() const {
    double m = 0.0;
    for (const Branch& b : branches_) m = std::max(m, b.squeeze.r());
    return m;
}

cplx branch_overlap(const Branch& bra, const Branch& ket) {
    // <gamma|S(-xi_b) S(xi_a)|alpha> = e^{i Phi/4} <gamma|S(xi3)|e^{i Phi/2} alpha>,
    // then the normal-ordered form of S(xi3) between coherent states.
    const auto [xi3, Phi] = compose_squeezing(bra.squeeze.inverse(), ket.squeeze);
    const cplx z3 = xi3.zeta();
    const double mu3 = xi3.mu();
    const cplx g = bra.alpha;
    const cplx d = std::polar(1.0, Phi / 2.0) * ket.alpha;
    const cplx expo = I * Phi / 4.0 - 0.5 * std::log(mu3) + 0.5 * z3 * std::conj(g) * std::conj(g) -
                      0.5 * std::conj(z3) * d * d - 0.5 * std::norm(g) - 0.5 * std::norm(d) +
                      std::conj(g) * d / mu3;
    return std::exp(expo);
}

std::vector<cplx> kerr_coefficients(KerrOrder order) {
    const int m = order.m();
    std::vector<cplx> f(m);
    for (int q = 0; q < m; ++q) {
        cplx sum = 0.0;
        for (int k = 0; k < m; ++k) {
            // Reduce the integer phase numerators mod 2m before scaling by pi/m.
            const long long kerr = order.even() ? 1LL * k * k : 1LL * k * (k - 1);
            const long long num = (2LL * q * k - kerr) % (2LL * m);
            sum += std::polar(1.0, pi * static_cast<double>(num) / m);
        }
        f[q] = sum / static_cast<double>(m);
    }
    return f;
}

namespace {

SuperpositionState checked(std::vector<Branch> branches, const char* what) {
    SuperpositionState state(std::move(branches));
    const double n2 = state.norm_squared();
    if (std::abs(n2 - 1.0) > SuperpositionState::kNormTolerance) {
        throw NumericalError("NormViolation", std::string(what) + ": norm^2 = " + std::to_string(n2));
    }
    return state;
}

}  // namespace

SuperpositionState kerr_coherent_state(KerrOrder m, cplx alpha) {
    return squeeze_then_kerr_state(m, alpha, SqueezeParam{});
}

SuperpositionState squeeze_then_kerr_state(KerrOrder m, cplx alpha, SqueezeParam squeeze) {
    const auto f = kerr_coefficients(m);
    const double shift = m.even() ? pi / m.m() : 0.0;
    std::vector<Branch> branches;
    branches.reserve(f.size());
    for (int q = 0; q < m.m(); ++q) {
        const double angle = -2.0 * pi * q / m.m() + shift;
        branches.push_back({f[q], alpha * std::polar(1.0, angle), squeeze});
    }
    return checked(std::move(branches), "squeeze_then_kerr_state");
}

SuperpositionState kerr_squeezed_vacuum(KerrOrder m, double r) {
    if (!(r >= 0.0)) throw InvalidArgument("squeezing magnitude must be >= 0");
    const auto f = kerr_coefficients(m);
    std::vector<Branch> branches;
    branches.reserve(f.size());
    for (int q = 0; q < m.m(); ++q) {
        const double phase = m.even() ? (-4.0 * pi * q + 2.0 * pi) / m.m() : -4.0 * pi * q / m.m();
        branches.push_back({f[q], 0.0, SqueezeParam(r, phase)});
    }
    return checked(std::move(branches), "kerr_squeezed_vacuum");
}

SqueezeComposition compose_squeezing(SqueezeParam xi1, SqueezeParam xi2) {
    const cplx z1 = xi1.zeta();
    const cplx z2 = xi2.zeta();
    const cplx z3 = (z1 + z2) / (1.0 + std::conj(z1) * z2);
    double Phi = std::arg((1.0 + z1 * std::conj(z2)) / (1.0 + std::conj(z1) * z2));
    if (Phi == -pi) Phi = pi;
    return {SqueezeParam::from_zeta(z3), Phi};
}

Eigen::Matrix2cd su11_matrix(SqueezeParam xi) {
    Eigen::Matrix2cd m;
    const cplx e = std::polar(1.0, xi.phi());
    m << xi.mu(), e * xi.nu(), std::conj(e) * xi.nu(), xi.mu();
    return m;
}

Eigen::Matrix2cd su11_phase(double Phi) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = std::polar(1.0, Phi / 2.0);
    m(1, 1) = std::polar(1.0, -Phi / 2.0);
    return m;
}

}  // namespace kerrpqd
