#include "kerrpqd/simulability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <thread>

#include "kerrpqd/errors.hpp"

namespace kerrpqd {

namespace {

constexpr double kEigenMarginTolerance = 1e-10;

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

Verdict make_verdict(std::string id, double margin) {
    Verdict v;
    v.inequality = std::move(id);
    v.margin = margin;
    v.simulable = margin >= 0.0;
    return v;
}

}  // namespace

void NoiseParams::validate() const {
    if (!in_unit_interval(eta_L)) throw InvalidArgument("eta_L must lie in [0, 1]");
    if (!(eta_D > 0.0 && eta_D <= 1.0)) throw InvalidArgument("eta_D must lie in (0, 1]");
    if (!in_unit_interval(p_D)) throw InvalidArgument("p_D must lie in [0, 1]");
    if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw InvalidArgument("nbar must be finite and >= 0");
}

std::string NoiseParams::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "eta_L=" << eta_L << ",eta_D=" << eta_D << ",p_D=" << p_D << ",nbar=" << nbar;
    return os.str();
}

TransferMatrix::TransferMatrix(Eigen::MatrixXcd L) : L_(std::move(L)) {
    if (L_.rows() == 0 || L_.rows() != L_.cols()) throw InvalidArgument("transfer matrix must be square and non-empty");
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(L_);
    const double smax = svd.singularValues()(0);
    if (smax > 1.0 + kContractionTolerance) {
        std::ostringstream os;
        os << "transfer matrix is not a contraction: largest singular value " << smax;
        throw InvalidArgument(os.str());
    }
}

TransferMatrix TransferMatrix::uniform(double eta_L, const Eigen::MatrixXcd& U) {
    if (!in_unit_interval(eta_L)) throw InvalidArgument("eta_L must lie in [0, 1]");
    return TransferMatrix(std::sqrt(eta_L) * U);
}

std::string Verdict::report(const std::string& params) const {
    char m[40];
    std::snprintf(m, sizeof m, "%.16e", margin);
    std::ostringstream os;
    os << "inequality=" << inequality << " margin=" << m << " simulable=" << (simulable ? "true" : "false");
    if (always_simulable) os << " always_simulable=true";
    os << " params=" << params;
    return os.str();
}

double detector_order_threshold(const NoiseParams& noise) {
    if (!(noise.eta_D > 0.0)) throw InvalidArgument("eta_D must be > 0");
    return 1.0 - 2.0 * noise.q_D();
}

RadialGaussian detector_pqd_off(const NoiseParams& noise, double s) {
    noise.validate();
    const double d = 1.0 - noise.eta_D * (1.0 - s) / 2.0;
    if (!(d > 0.0)) {
        std::ostringstream os;
        os << "detector PQD undefined at s = " << s << " <= 1 - 2/eta_D = " << 1.0 - 2.0 / noise.eta_D;
        throw OrderingTooLow(os.str());
    }
    return {(1.0 - noise.p_D) / (pi * d), noise.eta_D / d};
}

ComplementForm detector_pqd_on(const NoiseParams& noise, double s) { return {detector_pqd_off(noise, s)}; }

Verdict transition_condition(const TransferMatrix& L, const std::vector<double>& s_vec,
                             const std::vector<double>& t_vec) {
    const int M = L.modes();
    if (static_cast<int>(s_vec.size()) != M || static_cast<int>(t_vec.size()) != M) {
        throw InvalidArgument("ordering vectors must match the transfer matrix dimension");
    }
    const Eigen::MatrixXcd& l = L.matrix();
    const Eigen::VectorXcd s = Eigen::Map<const Eigen::VectorXd>(s_vec.data(), M).cast<cplx>();
    const Eigen::VectorXcd t = Eigen::Map<const Eigen::VectorXd>(t_vec.data(), M).cast<cplx>();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(M, M) - l.adjoint() * l;
    h -= s.asDiagonal();
    h += l.adjoint() * t.asDiagonal() * l;
    h = 0.5 * (h + h.adjoint()).eval();
    double margin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly).eigenvalues()(0);
    // Exact boundaries land within rounding of zero.
    if (margin < 0.0 && margin > -kEigenMarginTolerance) margin = 0.0;
    return make_verdict("transition", margin);
}

Verdict uniform_threshold_verdict(const NoiseParams& noise, double t_bar) {
    // 2 q_D - eta_L (1 - t_bar): the same arithmetic at t_bar = -1 as twice
    // the thermal margin at nbar = 0.
    return make_verdict("uniform_threshold", 2.0 * noise.q_D() - noise.eta_L * (1.0 - t_bar));
}

Verdict gbs_qi_verdict(const NoiseParams& noise, double r, int modes, double eps) {
    if (modes < 1) throw InvalidArgument("mode count must be >= 1");
    if (!(eps > 0.0)) throw InvalidArgument("eps must be > 0");
    const double q = noise.q_D();
    double ramp = 0.0;
    if (q < 0.5) {
        const double arg = std::log((1.0 - 2.0 * q) / (noise.eta_L * std::exp(-2.0 * r) + 1.0 - noise.eta_L));
        ramp = std::max(arg, 0.0);
    }
    const double lhs = 1.0 / std::cosh(0.5 * ramp);
    const double rhs = std::exp(-eps * eps / (4.0 * modes));
    return make_verdict("gbs_qi", lhs - rhs);
}

double thermal_lambda(const NoiseParams& noise) { return noise.eta_L + noise.k() * (1.0 - noise.eta_L); }

Verdict thermal_transition_condition(const NoiseParams& noise, double s, double t) {
    return make_verdict("thermal_transition", t * noise.eta_L - s + thermal_lambda(noise) - noise.eta_L);
}

Verdict thermal_threshold_verdict(const NoiseParams& noise) {
    Verdict v = make_verdict("thermal_threshold", noise.q_D() - noise.eta_L + noise.nbar * (1.0 - noise.eta_L));
    v.always_simulable = noise.eta_L < 1.0 && noise.nbar >= noise.eta_L / (1.0 - noise.eta_L);
    return v;
}

namespace {

struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t proposals = 0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    // Pairwise merge of running moments.
    void merge(const Moments& o) {
        if (o.n == 0) {
            proposals += o.proposals;
            return;
        }
        const double na = static_cast<double>(n);
        const double nb = static_cast<double>(o.n);
        const double d = o.mean - mean;
        const double tot = na + nb;
        mean += d * nb / tot;
        m2 += o.m2 + d * d * na * nb / tot;
        n += o.n;
        proposals += o.proposals;
    }
};

// Draws complex samples from a single-mode input PQD.
class InputSampler {
public:
    virtual ~InputSampler() = default;
    virtual cplx draw(std::mt19937_64& rng, std::size_t& proposals) const = 0;
};

class GaussianSampler : public InputSampler {
public:
    explicit GaussianSampler(const GaussianPqd& g) : mean_(g.mean), chol_(g.covariance().llt().matrixL()) {}
    cplx draw(std::mt19937_64& rng, std::size_t& proposals) const override {
        std::normal_distribution<double> normal;
        ++proposals;
        const Eigen::Vector2d z(normal(rng), normal(rng));
        const Eigen::Vector2d x = mean_ + chol_ * z;
        return {x(0), x(1)};
    }

private:
    Eigen::Vector2d mean_;
    Eigen::Matrix2d chol_;
};

// Rejection sampler: the moduli of the Hermitian-paired terms form a
// Gaussian-mixture envelope that dominates W pointwise.
class MixtureSampler : public InputSampler {
public:
    explicit MixtureSampler(const PqdFunction& w) : w_(w) {
        std::vector<double> weights;
        for (const auto& f : w.real_terms()) {
            const ComplexGaussianForm g = f.modulus();
            const Eigen::Matrix2d P = g.quad().real();
            const Eigen::Vector2d l = g.lin().real();
            Component c;
            c.envelope = g;
            c.centre = P.ldlt().solve(l);
            c.chol = P.inverse().llt().matrixL();
            const double log_peak = g.log_prefactor().real() + 0.5 * l.dot(c.centre);
            weights.push_back(std::exp(log_peak) * 2.0 * pi / std::sqrt(P.determinant()));
            comps_.push_back(c);
        }
        pick_ = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
    }

    cplx draw(std::mt19937_64& rng, std::size_t& proposals) const override {
        std::normal_distribution<double> normal;
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        auto pick = pick_;
        for (;;) {
            ++proposals;
            const Component& c = comps_[pick(rng)];
            const Eigen::Vector2d z(normal(rng), normal(rng));
            const Eigen::Vector2d x = c.centre + c.chol * z;
            const cplx beta(x(0), x(1));
            double env = 0.0;
            for (const auto& k : comps_) env += k.envelope(beta).real();
            const double target = std::max(w_.real(beta), 0.0);
            if (unif(rng) * env < target) return beta;
        }
    }

private:
    struct Component {
        ComplexGaussianForm envelope;
        Eigen::Vector2d centre;
        Eigen::Matrix2d chol;
    };
    const PqdFunction& w_;
    std::vector<Component> comps_;
    std::discrete_distribution<std::size_t> pick_;
};

void check_estimator_preconditions(const NoiseParams& noise, double t, double s, const EstimatorOptions& opts) {
    noise.validate();
    if (opts.samples < 2) throw InvalidArgument("estimator needs at least 2 samples");
    if (opts.threads < 1) throw InvalidArgument("estimator thread count must be >= 1");
    const double s_bar = detector_order_threshold(noise);
    if (s < s_bar) {
        std::ostringstream os;
        os << "detector ordering s = " << s << " below s_bar = " << s_bar;
        throw PreconditionViolated(os.str());
    }
    const double kernel = thermal_transition_condition(noise, s, t).margin;
    if (kernel < opts.min_kernel_margin) {
        std::ostringstream os;
        os << "transition kernel coefficient " << kernel << " < " << opts.min_kernel_margin;
        throw PreconditionViolated(os.str());
    }
}

ClickEstimate run_estimator(const InputSampler& sampler, const NoiseParams& noise, double t, double s,
                            const EstimatorOptions& opts) {
    const RadialGaussian off = detector_pqd_off(noise, s);
    const double contraction = std::sqrt(noise.eta_L);
    const double kernel_sd = 0.5 * std::sqrt(thermal_transition_condition(noise, s, t).margin);
    const int parts = static_cast<int>(std::min<std::size_t>(opts.threads, opts.samples));
    std::vector<Moments> moments(parts);
    auto work = [&](int part) {
        const std::size_t begin = opts.samples * part / parts;
        const std::size_t end = opts.samples * (part + 1) / parts;
        std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                          static_cast<std::uint32_t>(part)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal;
        Moments& m = moments[part];
        for (std::size_t i = begin; i < end; ++i) {
            const cplx alpha = sampler.draw(rng, m.proposals);
            const double nr = normal(rng);
            const double ni = normal(rng);
            const cplx beta = contraction * alpha + kernel_sd * cplx(nr, ni);
            m.add(pi * off(beta));
        }
    };
    if (parts == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (int p = 0; p < parts; ++p) pool.emplace_back(work, p);
    }
    Moments total;
    for (const auto& m : moments) total.merge(m);
    const double n = static_cast<double>(total.n);
    ClickEstimate out;
    out.p_off = total.mean;
    out.std_error = std::sqrt(total.m2 / (n - 1.0) / n);
    out.samples = total.n;
    out.acceptance = n / static_cast<double>(total.proposals);
    return out;
}

}  // namespace

ClickEstimate estimate_click_probability(const SuperpositionState& state, const NoiseParams& noise, double t,
                                         double s, const EstimatorOptions& opts) {
    check_estimator_preconditions(noise, t, s, opts);
    const auto neg = negativity_volume(state, t, opts.quadrature);
    if (neg.value > opts.eps_neg) {
        std::ostringstream os;
        os << "input PQD at t = " << t << " has negativity " << neg.value << " > " << opts.eps_neg;
        throw PreconditionViolated(os.str());
    }
    const PqdFunction w = superposition_pqd(state, t);
    return run_estimator(MixtureSampler(w), noise, t, s, opts);
}

ClickEstimate estimate_click_probability(const GaussianState& state, const NoiseParams& noise, double t, double s,
                                         const EstimatorOptions& opts) {
    if (state.modes() != 1) throw InvalidArgument("the click estimator supports a single mode");
    check_estimator_preconditions(noise, t, s, opts);
    return run_estimator(GaussianSampler(gaussian_pqd(state, {t})), noise, t, s, opts);
}

}  // namespace kerrpqd
