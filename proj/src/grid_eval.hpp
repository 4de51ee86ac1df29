#pragma once

#include <cmath>
#include <complex>

#include "kerrpqd/gaussian_form.hpp"
#include "kerrpqd/phase_space.hpp"

namespace kerrpqd::detail {

// Adds f(x_j, y) for every grid column j into out[j]. Along a row the
// exponent is quadratic in j, so consecutive values differ by a ratio that
// itself changes by a constant factor; values are recomputed directly every
// kRestart columns to bound drift and recover from underflow.
inline void accumulate_row(const ComplexGaussianForm& f, const Grid& g, double y, cplx* out) {
    constexpr int kRestart = 32;
    const auto& A = f.quad();
    const auto& L = f.lin();
    const cplx c_y = f.log_prefactor() + L(1) * y - 0.5 * A(1, 1) * y * y;
    const cplx l_y = L(0) - A(0, 1) * y;
    const cplx a00 = A(0, 0);
    const double h = g.h;
    const cplx step_ratio = std::exp(-a00 * h * h);
    for (int j0 = 0; j0 < g.n; j0 += kRestart) {
        const double x = g.coord(j0);
        cplx v = std::exp(c_y + l_y * x - 0.5 * a00 * x * x);
        cplx ratio = std::exp(l_y * h - 0.5 * a00 * (2.0 * x * h + h * h));
        const int j1 = std::min(g.n, j0 + kRestart);
        for (int j = j0; j < j1; ++j) {
            out[j] += v;
            v *= ratio;
            ratio *= step_ratio;
        }
    }
}

// Real part only, for Hermitian-paired term lists.
inline void accumulate_row_real(const ComplexGaussianForm& f, const Grid& g, double y, double* out) {
    constexpr int kRestart = 32;
    const auto& A = f.quad();
    const auto& L = f.lin();
    const cplx c_y = f.log_prefactor() + L(1) * y - 0.5 * A(1, 1) * y * y;
    const cplx l_y = L(0) - A(0, 1) * y;
    const cplx a00 = A(0, 0);
    const double h = g.h;
    const cplx step_ratio = std::exp(-a00 * h * h);
    for (int j0 = 0; j0 < g.n; j0 += kRestart) {
        const double x = g.coord(j0);
        cplx v = std::exp(c_y + l_y * x - 0.5 * a00 * x * x);
        cplx ratio = std::exp(l_y * h - 0.5 * a00 * (2.0 * x * h + h * h));
        const int j1 = std::min(g.n, j0 + kRestart);
        for (int j = j0; j < j1; ++j) {
            out[j] += v.real();
            v *= ratio;
            ratio *= step_ratio;
        }
    }
}

}  // namespace kerrpqd::detail
