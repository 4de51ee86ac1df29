#pragma once

#include <vector>

#include "kerrpqd/phase_space.hpp"
#include "kerrpqd/states.hpp"

namespace kerrpqd {

/// Square window [-R, R]^2 sampled by the midpoint rule at two dyadic
/// refinement levels: base_resolution * 2^(depth-1) and base_resolution * 2^depth
/// cells per axis.
struct QuadratureSpec {
    double half_width = 0.0;  ///< <= 0 selects default_window(state)
    int base_resolution = 256;
    int refinement_depth = 2;
    double abs_tol = 1e-6;  ///< bound on the PQD mass outside the window
    int threads = 0;        ///< 0 selects std::thread::hardware_concurrency()

    void validate() const;
    int finest_resolution() const { return base_resolution << refinement_depth; }
};

struct NegativityResult {
    double value;            ///< N(t) = int |W| - 1
    double err;              ///< refinement difference + exterior bound + normalization residual
    double tail_bound;       ///< bound on int |W| outside the window
    double norm_residual;    ///< analytic int W - 1
    double coarse_value;     ///< N at the previous refinement level
};

/// Bound on the integral of |W| outside [-R, R]^2 from the term Gaussians.
double exterior_bound(const PqdFunction& w, double R);

/// Negativity volume of an already-built PQD over a window of half-width R.
NegativityResult negativity_volume(const PqdFunction& w, double R, const QuadratureSpec& spec);
NegativityResult negativity_volume(const SuperpositionState& state, double t, const QuadratureSpec& spec = {});

struct CurvePoint {
    double t;
    double negativity;
    double err;
};

struct NegativityCurve {
    std::vector<CurvePoint> points;

    double max_err() const;
    /// N(t1) <= N(t2) + 2 max err for t1 < t2.
    bool monotone_within_error() const;
};

NegativityCurve negativity_curve(const SuperpositionState& state, double t_min, double t_max, int n_points,
                                 const QuadratureSpec& spec = {});

struct ThresholdOptions {
    double eps_neg = 1e-8;
    double tol_t = 1e-3;
    /// Distance kept below the integrability boundary.
    double sup_margin = 1e-6;
};

struct ThresholdResult {
    double t_bar;
    double t_sup;        ///< largest integrable ordering minus the margin
    int evaluations;
};

/// Largest t in [-1, t_sup] with N(t) <= eps_neg, located by bisection to
/// within tol_t. Returns exactly -1 when every probed t > -1 is negative.
ThresholdResult find_threshold(const SuperpositionState& state, const ThresholdOptions& opts = {},
                               const QuadratureSpec& spec = {});

}  // namespace kerrpqd
