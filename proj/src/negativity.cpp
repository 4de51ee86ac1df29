#include "kerrpqd/negativity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "grid_eval.hpp"
#include "kerrpqd/errors.hpp"

namespace kerrpqd {

namespace {

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Midpoint-rule integral of max(-W, 0) over the grid. Each row is reduced
// independently and the row sums are combined in row order, so the result
// does not depend on the thread count.
double negative_part(const PqdFunction& w, const Grid& g, int threads) {
    std::vector<double> row_sums(g.n, 0.0);
    auto work = [&](int row_begin, int row_end) {
        std::vector<double> row(g.n);
        for (int iy = row_begin; iy < row_end; ++iy) {
            std::fill(row.begin(), row.end(), 0.0);
            for (const auto& f : w.real_terms()) detail::accumulate_row_real(f, g, g.coord(iy), row.data());
            CompensatedSum s;
            for (double v : row) {
                if (v < 0.0) s.add(-v);
            }
            row_sums[iy] = s.value();
        }
    };
    threads = std::clamp(threads, 1, g.n);
    if (threads == 1) {
        work(0, g.n);
    } else {
        std::vector<std::jthread> pool;
        const int chunk = (g.n + threads - 1) / threads;
        for (int b = 0; b < g.n; b += chunk) pool.emplace_back(work, b, std::min(g.n, b + chunk));
    }
    CompensatedSum total;
    for (double s : row_sums) total.add(s);
    return total.value() * g.h * g.h;
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(half_width >= 0.0) || !std::isfinite(half_width)) throw InvalidArgument("window half-width must be finite");
    if (base_resolution < 64) throw InvalidArgument("quadrature base resolution must be >= 64");
    if (refinement_depth < 1 || refinement_depth > 6) throw InvalidArgument("refinement depth must be in [1, 6]");
    if (!(abs_tol > 0.0)) throw InvalidArgument("quadrature tolerance must be > 0");
}

double exterior_bound(const PqdFunction& w, double R) {
    double total = 0.0;
    for (const auto& f : w.real_terms()) {
        const Eigen::Matrix2d P = f.quad().real();
        const Eigen::Vector2d l = f.lin().real();
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(P);
        const double lmin = es.eigenvalues()(0);
        if (!(lmin > 0.0)) return std::numeric_limits<double>::infinity();
        const Eigen::Vector2d centre = P.ldlt().solve(l);
        const double log_peak = f.log_prefactor().real() + 0.5 * l.dot(centre);
        const double inset = R - centre.cwiseAbs().maxCoeff();
        if (inset <= 0.0) {
            total += std::exp(log_peak) * 2.0 * pi / std::sqrt(es.eigenvalues().prod());
        } else {
            // Everything outside the square lies outside the disc of radius
            // `inset` around the centre; bound the Gaussian by its slowest axis.
            total += std::exp(log_peak - 0.5 * lmin * inset * inset) * 2.0 * pi / lmin;
        }
    }
    return total;
}

NegativityResult negativity_volume(const PqdFunction& w, double R, const QuadratureSpec& spec) {
    spec.validate();
    const int threads = resolve_threads(spec.threads);
    const double tail = exterior_bound(w, R);
    if (!(tail <= spec.abs_tol)) {
        std::ostringstream os;
        os << "PQD mass outside window R = " << R << " bounded by " << tail << " > " << spec.abs_tol;
        throw TailBoundExceeded(os.str(), tail);
    }
    const int fine_n = spec.finest_resolution();
    const double fine = negative_part(w, Grid::midpoints(R, fine_n), threads);
    const double coarse = negative_part(w, Grid::midpoints(R, fine_n / 2), threads);
    const double residual = w.integral().real() - 1.0;
    NegativityResult out;
    out.value = 2.0 * fine + residual;
    out.coarse_value = 2.0 * coarse + residual;
    out.tail_bound = tail;
    out.norm_residual = residual;
    out.err = 2.0 * std::abs(fine - coarse) + 2.0 * tail + std::abs(residual);
    return out;
}

NegativityResult negativity_volume(const SuperpositionState& state, double t, const QuadratureSpec& spec) {
    const double R = spec.half_width > 0.0 ? spec.half_width : default_window(state);
    return negativity_volume(superposition_pqd(state, t), R, spec);
}

double NegativityCurve::max_err() const {
    double m = 0.0;
    for (const auto& p : points) m = std::max(m, p.err);
    return m;
}

bool NegativityCurve::monotone_within_error() const {
    const double slack = 2.0 * max_err();
    double running_max = -std::numeric_limits<double>::infinity();
    for (const auto& p : points) {
        if (p.negativity < -p.err) return false;
        if (running_max > p.negativity + slack) return false;
        running_max = std::max(running_max, p.negativity);
    }
    return true;
}

NegativityCurve negativity_curve(const SuperpositionState& state, double t_min, double t_max, int n_points,
                                 const QuadratureSpec& spec) {
    if (!(t_min < t_max) || n_points < 2) throw InvalidArgument("negativity curve needs t_min < t_max and >= 2 points");
    if (t_max >= max_integrable_ordering(state)) {
        std::ostringstream os;
        os << "t_max = " << t_max << " is not below the integrability bound " << max_integrable_ordering(state);
        throw NotIntegrable(os.str());
    }
    NegativityCurve curve;
    curve.points.reserve(n_points);
    for (int i = 0; i < n_points; ++i) {
        const double t = i + 1 == n_points ? t_max : t_min + (t_max - t_min) * i / (n_points - 1);
        const auto r = negativity_volume(state, t, spec);
        curve.points.push_back({t, r.value, r.err});
    }
    return curve;
}

ThresholdResult find_threshold(const SuperpositionState& state, const ThresholdOptions& opts,
                               const QuadratureSpec& spec) {
    if (!(opts.eps_neg > 0.0) || !(opts.tol_t > 0.0)) throw InvalidArgument("eps_neg and tol_t must be > 0");
    ThresholdResult out{-1.0, max_integrable_ordering(state) - opts.sup_margin, 0};
    auto vanishes = [&](double t) {
        ++out.evaluations;
        return negativity_volume(state, t, spec).value <= opts.eps_neg;
    };
    if (out.t_sup <= -1.0) return out;
    // Invariant: N(lo) <= eps_neg, t_bar in [lo, hi]. The endpoint t_sup is
    // never evaluated; cross terms there grow like exp(c / (t_sup - t)).
    double lo = -1.0;
    double hi = out.t_sup;
    while (hi - lo > opts.tol_t) {
        const double mid = 0.5 * (lo + hi);
        if (vanishes(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.t_bar = lo;
    return out;
}

}  // namespace kerrpqd
