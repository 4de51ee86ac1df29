#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kerrpqd/negativity.hpp"
#include "kerrpqd/phase_space.hpp"
#include "kerrpqd/states.hpp"

namespace kerrpqd {

/// Uniform network loss and noisy on/off detection.
struct NoiseParams {
    double eta_L = 1.0;  ///< network transmissivity, [0, 1]
    double eta_D = 1.0;  ///< detector efficiency, (0, 1]
    double p_D = 0.0;    ///< dark-count probability, [0, 1]
    double nbar = 0.0;   ///< environment mean photon number, >= 0

    void validate() const;
    double k() const { return 2.0 * nbar + 1.0; }
    double q_D() const { return p_D / eta_D; }
    std::string describe() const;
};

/// M x M transfer matrix of a passive lossy network, L^dag L <= I.
class TransferMatrix {
public:
    static constexpr double kContractionTolerance = 1e-12;

    explicit TransferMatrix(Eigen::MatrixXcd L);
    /// sqrt(eta_L) U.
    static TransferMatrix uniform(double eta_L, const Eigen::MatrixXcd& U);

    const Eigen::MatrixXcd& matrix() const { return L_; }
    int modes() const { return static_cast<int>(L_.rows()); }

private:
    Eigen::MatrixXcd L_;
};

struct Verdict {
    bool simulable = false;
    double margin = 0.0;
    std::string inequality;
    /// Set by the thermal verdict when the environment alone guarantees simulability.
    bool always_simulable = false;

    std::string report(const std::string& params) const;
};

/// Ordering above which the noisy detector PQD is non-negative: 1 - 2 p_D / eta_D.
double detector_order_threshold(const NoiseParams& noise);

/// amplitude * exp(-rate |beta|^2).
struct RadialGaussian {
    double amplitude;
    double rate;
    double operator()(cplx beta) const { return amplitude * std::exp(-rate * std::norm(beta)); }
};

/// 1/pi - off(beta).
struct ComplementForm {
    RadialGaussian off;
    double operator()(cplx beta) const { return 1.0 / pi - off(beta); }
    /// Minimum over the plane, attained at beta = 0 (or at infinity when off is negative).
    double minimum() const { return std::min(1.0 / pi - off.amplitude, 1.0 / pi); }
};

/// (-s)-PQD of Pi_0; throws OrderingTooLow for s <= 1 - 2/eta_D.
RadialGaussian detector_pqd_off(const NoiseParams& noise, double s);
ComplementForm detector_pqd_on(const NoiseParams& noise, double s);

/// Smallest eigenvalue of I - L^dag L - diag(s) + L^dag diag(t) L.
Verdict transition_condition(const TransferMatrix& L, const std::vector<double>& s_vec, const std::vector<double>& t_vec);

/// (2 p_D / eta_D - eta_L) + eta_L t_bar >= 0.
Verdict uniform_threshold_verdict(const NoiseParams& noise, double t_bar);

/// sech(Theta[ln((1 - 2 q_D) / (eta_L e^{-2r} + 1 - eta_L))] / 2) > exp(-eps^2 / 4M).
Verdict gbs_qi_verdict(const NoiseParams& noise, double r, int modes, double eps);

/// lambda = eta_L + (2 nbar + 1)(1 - eta_L).
double thermal_lambda(const NoiseParams& noise);

/// Single-mode transition positivity with a thermal environment:
/// t eta_L - s + lambda - eta_L >= 0.
Verdict thermal_transition_condition(const NoiseParams& noise, double s, double t);

/// p_D / eta_D >= eta_L - nbar (1 - eta_L) for inputs with t_bar = -1.
Verdict thermal_threshold_verdict(const NoiseParams& noise);

struct ClickEstimate {
    double p_off;
    double std_error;
    std::size_t samples;
    double acceptance;  ///< rejection-sampler acceptance rate for the input PQD
};

struct EstimatorOptions {
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    int threads = 1;
    double eps_neg = 1e-4;  ///< negativity allowed for the input t-PQD
    QuadratureSpec quadrature{};
    /// Smallest accepted transition-kernel coefficient.
    double min_kernel_margin = 1e-9;
};

/// Monte-Carlo estimate of p(off) for one mode: beta_in ~ W^(t), pushed
/// through the Gaussian transition kernel, scored by pi W_{Pi_0}^{(-s)}.
/// Throws PreconditionViolated when the input PQD is negative, s < s_bar, or
/// the kernel is not a proper Gaussian.
ClickEstimate estimate_click_probability(const SuperpositionState& state, const NoiseParams& noise, double t, double s,
                                         const EstimatorOptions& opts = {});
ClickEstimate estimate_click_probability(const GaussianState& state, const NoiseParams& noise, double t, double s,
                                         const EstimatorOptions& opts = {});

}  // namespace kerrpqd
