#pragma once

#include <complex>

#include <Eigen/Dense>

#include "kerrpqd/states.hpp"

namespace kerrpqd {

/// Complex-valued affine function z(x) = c + p . x of a real 2-vector x.
struct Affine {
    cplx c{0.0, 0.0};
    Eigen::Vector2cd p = Eigen::Vector2cd::Zero();

    Affine conj() const { return {std::conj(c), p.conjugate()}; }
    Affine operator+(const Affine& o) const { return {c + o.c, p + o.p}; }
    Affine operator*(cplx k) const { return {k * c, k * p}; }

    /// xi = x + i y.
    static Affine xi() { return {0.0, Eigen::Vector2cd(1.0, I)}; }
    static Affine constant(cplx c) { return {c, Eigen::Vector2cd::Zero()}; }
};

/// f(x) = exp(log_prefactor + L^T x - 1/2 x^T A x), x = (Re, Im) of a complex
/// phase-space variable. A is complex symmetric.
///
/// The prefactor is stored as a logarithm: branch overlaps and completed
/// squares routinely sit far outside the range of a double on their own.
class ComplexGaussianForm {
public:
    static constexpr double kSingularTolerance = 1e-12;

    ComplexGaussianForm() = default;
    ComplexGaussianForm(cplx log_prefactor, const Eigen::Matrix2cd& quad, const Eigen::Vector2cd& lin);

    cplx log_prefactor() const { return log_prefactor_; }
    cplx prefactor() const { return std::exp(log_prefactor_); }
    const Eigen::Matrix2cd& quad() const { return quad_; }
    const Eigen::Vector2cd& lin() const { return lin_; }

    cplx log_value(double x, double y) const;
    cplx operator()(double x, double y) const { return std::exp(log_value(x, y)); }
    cplx operator()(cplx z) const { return (*this)(z.real(), z.imag()); }

    /// Smallest eigenvalue of Re(A).
    double min_real_eigenvalue() const;
    bool integrable() const { return min_real_eigenvalue() > kSingularTolerance; }

    /// Exact integral over R^2; requires integrable().
    cplx integral() const;

    /// Multiply by exp(k).
    ComplexGaussianForm scaled_log(cplx k) const;
    /// Multiply by exp(t |z|^2 / 2).
    ComplexGaussianForm with_ordering(double t) const;

    /// Real Gaussian exp(Re(...)) bounding |f| pointwise.
    ComplexGaussianForm modulus() const;

private:
    cplx log_prefactor_{0.0, 0.0};
    Eigen::Matrix2cd quad_ = Eigen::Matrix2cd::Zero();
    Eigen::Vector2cd lin_ = Eigen::Vector2cd::Zero();
};

/// Accumulates a quadratic exponent from products of affine functions.
class ExponentBuilder {
public:
    ExponentBuilder& add(cplx k);
    ExponentBuilder& add(cplx k, const Affine& z);
    ExponentBuilder& add(cplx k, const Affine& z1, const Affine& z2);
    ComplexGaussianForm build() const;

private:
    cplx c_{0.0, 0.0};
    Eigen::Vector2cd lin_ = Eigen::Vector2cd::Zero();
    Eigen::Matrix2cd quad_ = Eigen::Matrix2cd::Zero();
};

/// sqrt(det A) continued analytically from real positive-definite A.
cplx sqrt_det(const Eigen::Matrix2cd& A);

/// W(beta) = int d^2 xi / pi^2  char(xi) exp(beta xi^* - xi beta^*), evaluated
/// in closed form by completing the square. Throws NotIntegrable.
ComplexGaussianForm fourier_transform_form(const ComplexGaussianForm& char_fn);

}  // namespace kerrpqd
