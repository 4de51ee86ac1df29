#pragma once

#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace kerrpqd {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Single-mode squeezing parameter xi = r e^{i phi} of
/// S(xi) = exp(r/2 (e^{i phi} a^dag^2 - e^{-i phi} a^2)).
///
/// Negative magnitudes are folded into the phase, and the phase is kept in
/// [0, 2pi), so two parameters describing the same operator compare equal.
class SqueezeParam {
public:
    SqueezeParam() = default;
    SqueezeParam(double r, double phi);

    static SqueezeParam from_complex(cplx xi);
    /// Inverse of zeta = tanh(r) e^{i phi}; requires |zeta| < 1.
    static SqueezeParam from_zeta(cplx zeta);

    double r() const { return r_; }
    double phi() const { return phi_; }
    double mu() const { return std::cosh(r_); }
    double nu() const { return std::sinh(r_); }
    cplx xi() const { return std::polar(r_, phi_); }
    cplx zeta() const { return std::polar(std::tanh(r_), phi_); }
    bool is_identity() const { return r_ == 0.0; }

    /// Parameter of S(xi)^dagger = S(-xi).
    SqueezeParam inverse() const { return from_complex(-xi()); }

private:
    double r_ = 0.0;
    double phi_ = 0.0;
};

/// Kerr parameter chi = pi / m.
class KerrOrder {
public:
    explicit KerrOrder(int m);
    int m() const { return m_; }
    double chi() const { return pi / m_; }
    bool even() const { return m_ % 2 == 0; }

private:
    int m_;
};

/// coeff * S(squeeze)|alpha>.
struct Branch {
    cplx coeff{1.0, 0.0};
    cplx alpha{0.0, 0.0};
    SqueezeParam squeeze{};
};

/// Pure state sum_q c_q S(xi_q)|beta_q>.
///
/// Construction merges branches whose (alpha, xi) coincide within
/// `kMergeTolerance` and drops branches with |coeff| < `kPruneTolerance`.
/// Normalization is not imposed here; factory functions check it.
class SuperpositionState {
public:
    static constexpr double kMergeTolerance = 1e-12;
    static constexpr double kPruneTolerance = 1e-14;
    static constexpr double kNormTolerance = 1e-10;

    explicit SuperpositionState(std::vector<Branch> branches);

    const std::vector<Branch>& branches() const { return branches_; }
    std::size_t size() const { return branches_.size(); }

    /// <psi|psi> from pairwise branch overlaps.
    double norm_squared() const;

    /// Largest |alpha| and largest squeeze magnitude over the branches.
    double max_displacement() const;
    double max_squeeze() const;

private:
    std::vector<Branch> branches_;
};

/// <S(bra.squeeze) bra.alpha | S(ket.squeeze) ket.alpha>, coefficients ignored.
cplx branch_overlap(const Branch& bra, const Branch& ket);

/// Fourier coefficients f_q, q = 0..m-1, of U(pi/m) = exp(-i pi n(n-1)/m).
std::vector<cplx> kerr_coefficients(KerrOrder m);

/// U(pi/m)|alpha> as m coherent branches on a circle.
SuperpositionState kerr_coherent_state(KerrOrder m, cplx alpha);

/// S(squeeze) U(pi/m)|alpha>.
SuperpositionState squeeze_then_kerr_state(KerrOrder m, cplx alpha, SqueezeParam squeeze);

/// U(pi/m) S(r)|0> as m squeezed vacua with rotated squeezing phases.
SuperpositionState kerr_squeezed_vacuum(KerrOrder m, double r);

/// S(xi1) S(xi2) = S(xi3) exp(i Phi (n + 1/2) / 2), Phi in (-pi, pi].
struct SqueezeComposition {
    SqueezeParam xi3;
    double Phi;
};
SqueezeComposition compose_squeezing(SqueezeParam xi1, SqueezeParam xi2);

/// Two-dimensional su(1,1) representation of S(xi):
/// [[cosh r, e^{i phi} sinh r], [e^{-i phi} sinh r, cosh r]].
Eigen::Matrix2cd su11_matrix(SqueezeParam xi);

/// Representation of exp(i Phi K0) = diag(e^{i Phi/2}, e^{-i Phi/2}).
Eigen::Matrix2cd su11_phase(double Phi);

}  // namespace kerrpqd
