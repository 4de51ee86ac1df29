#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kerrpqd/gaussian_form.hpp"
#include "kerrpqd/states.hpp"

namespace kerrpqd {

/// M-mode Gaussian state in the convention where a coherent state has
/// covariance I_2 and first moments (Re alpha, Im alpha).
class GaussianState {
public:
    GaussianState(Eigen::MatrixXd cov, Eigen::VectorXd mean);

    static GaussianState coherent(cplx alpha);
    static GaussianState thermal(double lambda);
    /// S(squeeze)|alpha>.
    static GaussianState squeezed_coherent(SqueezeParam squeeze, cplx alpha);

    int modes() const { return static_cast<int>(mean_.size() / 2); }
    const Eigen::MatrixXd& cov() const { return cov_; }
    const Eigen::VectorXd& mean() const { return mean_; }

private:
    Eigen::MatrixXd cov_;
    Eigen::VectorXd mean_;
};

/// Real multi-mode Gaussian PQD
/// norm * exp(-1/2 (beta - mean)^T precision (beta - mean)).
struct GaussianPqd {
    double norm;
    Eigen::MatrixXd precision;
    Eigen::VectorXd mean;

    double operator()(const Eigen::VectorXd& beta) const;
    double operator()(cplx beta) const;
    /// Scale of each axis' marginal std-dev; used to build sampling grids.
    Eigen::MatrixXd covariance() const { return precision.inverse(); }
};

/// s-ordered PQD of a Gaussian state; t_vec holds one ordering per mode.
/// Throws OrderingTooHigh when sigma - s has an eigenvalue <= 1e-12.
GaussianPqd gaussian_pqd(const GaussianState& state, const std::vector<double>& t_vec);

/// Tr[S(r e^{i phi})|alpha><gamma|S^dag(r e^{i phi}) D(xi)] e^{t|xi|^2/2}.
ComplexGaussianForm dyadic_char_squeezed_coherent(cplx alpha, cplx gamma, double r, double t, double phi = 0.0);

/// Tr[S(r e^{i phi})|0><0|S^dag(r e^{i psi}) D(xi)] e^{t|xi|^2/2}, via the
/// squeezing composition rule and the normal-ordered squeezing operator.
ComplexGaussianForm dyadic_char_squeezed_vacua(double r, double phi, double psi, double t);

/// Tr[|ket><bra| D(xi)] e^{t|xi|^2/2} for arbitrary squeezed-coherent
/// branches (coefficients ignored). Reduces to the two functions above.
ComplexGaussianForm dyadic_char(const Branch& ket, const Branch& bra, double t);

/// Sum of complex Gaussian terms over beta = (Re, Im).
class PqdFunction {
public:
    PqdFunction(std::vector<ComplexGaussianForm> terms, std::vector<ComplexGaussianForm> real_terms, double ordering);

    const std::vector<ComplexGaussianForm>& terms() const { return terms_; }
    /// Hermitian-paired terms: W = Re(sum real_terms) exactly.
    const std::vector<ComplexGaussianForm>& real_terms() const { return real_terms_; }
    double ordering() const { return ordering_; }

    cplx operator()(cplx beta) const;
    double real(cplx beta) const;
    /// Analytic integral over the plane.
    cplx integral() const;

private:
    std::vector<ComplexGaussianForm> terms_;
    std::vector<ComplexGaussianForm> real_terms_;
    double ordering_;
};

/// Convert a single-mode Gaussian PQD.
PqdFunction to_pqd_function(const GaussianPqd& g, double ordering);

/// t-PQD of a branch superposition. Throws NotIntegrable naming the branch
/// pair whose dyadic characteristic function fails to decay.
PqdFunction superposition_pqd(const SuperpositionState& state, double t);

/// Supremum of orderings t for which every branch-pair form is integrable.
double max_integrable_ordering(const SuperpositionState& state);

/// Uniform axis-aligned grid over beta: x_i = x0 + i h, i < n (same on both axes).
struct Grid {
    double x0;
    double h;
    int n;

    double coord(int i) const { return x0 + h * i; }
    /// n points spanning [-R, R] inclusive.
    static Grid nodes(double R, int n);
    /// Cell midpoints of n equal cells partitioning [-R, R].
    static Grid midpoints(double R, int n);
};

/// Row-major samples: value(i_im, i_re) at index i_im * n + i_re.
struct GridValues {
    Grid grid;
    std::vector<double> re;
    double max_abs_imag = 0.0;
    double max_abs_real = 0.0;

    double at(int i_im, int i_re) const { return re[static_cast<std::size_t>(i_im) * grid.n + i_re]; }
};

/// Evaluate every term (not the paired list), tracking the imaginary part.
GridValues evaluate_grid(const PqdFunction& w, const Grid& grid);

/// Default window half-width 4 (|alpha|_max e^{r_max} + e^{r_max}).
double default_window(const SuperpositionState& state);

}  // namespace kerrpqd
