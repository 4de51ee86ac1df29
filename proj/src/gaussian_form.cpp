#include "kerrpqd/gaussian_form.hpp"

#include <cmath>
#include <sstream>

#include "kerrpqd/errors.hpp"

namespace kerrpqd {

namespace {

Eigen::Matrix2cd symmetrized(const Eigen::Matrix2cd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

ComplexGaussianForm::ComplexGaussianForm(cplx log_prefactor, const Eigen::Matrix2cd& quad,
                                         const Eigen::Vector2cd& lin)
    : log_prefactor_(log_prefactor), quad_(symmetrized(quad)), lin_(lin) {}

cplx ComplexGaussianForm::log_value(double x, double y) const {
    return log_prefactor_ + lin_(0) * x + lin_(1) * y -
           0.5 * (quad_(0, 0) * x * x + 2.0 * quad_(0, 1) * x * y + quad_(1, 1) * y * y);
}

double ComplexGaussianForm::min_real_eigenvalue() const {
    const double a = quad_(0, 0).real();
    const double b = quad_(0, 1).real();
    const double d = quad_(1, 1).real();
    const double mean = 0.5 * (a + d);
    const double half_gap = std::hypot(0.5 * (a - d), b);
    return mean - half_gap;
}

cplx ComplexGaussianForm::integral() const {
    if (!integrable()) throw NotIntegrable("integral of a non-integrable Gaussian form");
    const Eigen::Matrix2cd inv = quad_.inverse();
    const cplx quad_term = 0.5 * lin_.transpose() * inv * lin_;
    return 2.0 * pi / sqrt_det(quad_) * std::exp(log_prefactor_ + quad_term);
}

ComplexGaussianForm ComplexGaussianForm::scaled_log(cplx k) const {
    return ComplexGaussianForm(log_prefactor_ + k, quad_, lin_);
}

ComplexGaussianForm ComplexGaussianForm::with_ordering(double t) const {
    return ComplexGaussianForm(log_prefactor_, quad_ - t * Eigen::Matrix2cd::Identity(), lin_);
}

ComplexGaussianForm ComplexGaussianForm::modulus() const {
    return ComplexGaussianForm(log_prefactor_.real(), quad_.real().cast<cplx>(), lin_.real().cast<cplx>());
}

ExponentBuilder& ExponentBuilder::add(cplx k) {
    c_ += k;
    return *this;
}

ExponentBuilder& ExponentBuilder::add(cplx k, const Affine& z) {
    c_ += k * z.c;
    lin_ += k * z.p;
    return *this;
}

ExponentBuilder& ExponentBuilder::add(cplx k, const Affine& z1, const Affine& z2) {
    c_ += k * z1.c * z2.c;
    lin_ += k * (z1.c * z2.p + z2.c * z1.p);
    // k (p1.x)(p2.x) = -1/2 x^T A x  with  A = -2k sym(p1 p2^T)
    quad_ += -2.0 * k * symmetrized(z1.p * z2.p.transpose());
    return *this;
}

ComplexGaussianForm ExponentBuilder::build() const { return ComplexGaussianForm(c_, quad_, lin_); }

cplx sqrt_det(const Eigen::Matrix2cd& A) {
    // Eigenvalues of a complex symmetric matrix with Re(A) > 0 lie in the
    // right half plane; the product of their principal roots is the
    // continuation of the real square root.
    const cplx half_tr = 0.5 * (A(0, 0) + A(1, 1));
    const cplx det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    const cplx disc = std::sqrt(half_tr * half_tr - det);
    const cplx l1 = half_tr + disc;
    const cplx l2 = half_tr - disc;
    return std::sqrt(l1) * std::sqrt(l2);
}

ComplexGaussianForm fourier_transform_form(const ComplexGaussianForm& char_fn) {
    if (!char_fn.integrable()) {
        std::ostringstream os;
        os << "characteristic function is not integrable: min eig Re(A) = " << char_fn.min_real_eigenvalue();
        throw NotIntegrable(os.str());
    }
    // beta xi^* - xi beta^* = i k.x with k = 2 J beta, J = [[0, 1], [-1, 0]].
    Eigen::Matrix2cd J;
    J << 0.0, 1.0, -1.0, 0.0;
    const Eigen::Matrix2cd B = char_fn.quad().inverse();
    const Eigen::Vector2cd& L = char_fn.lin();
    const cplx lbl = L.transpose() * B * L;
    const cplx log_c = char_fn.log_prefactor() + std::log(2.0 / pi) - std::log(sqrt_det(char_fn.quad())) + 0.5 * lbl;
    const Eigen::Matrix2cd quad = 4.0 * J.transpose() * B * J;
    const Eigen::Vector2cd lin = 2.0 * I * (J.transpose() * B * L);
    return ComplexGaussianForm(log_c, quad, lin);
}

}  // namespace kerrpqd
