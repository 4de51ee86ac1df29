#pragma once

#include <Eigen/Dense>

#include "kerrpqd/phase_space.hpp"
#include "kerrpqd/simulability.hpp"
#include "kerrpqd/state_description.hpp"
#include "kerrpqd/states.hpp"

/// Brute-force single-mode reference in a truncated number basis.
///
/// States are built in a padded space and truncated to the requested cutoff;
/// the probability lost in truncation is reported and bounded.
namespace kerrpqd::fock {

using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kTruncationBudget = 1e-8;

struct FockVector {
    Vector amplitudes;  ///< length cutoff + 1, not renormalized
    double tail_mass;   ///< probability beyond the cutoff

    int cutoff() const { return static_cast<int>(amplitudes.size()) - 1; }
    Matrix density() const { return amplitudes * amplitudes.adjoint(); }
};

Matrix annihilation(int dim);
Matrix creation(int dim);
Matrix number(int dim);

/// exp(generator) by scaling and squaring.
Matrix expm(const Matrix& generator);

/// D(xi) = exp(xi a^dag - xi^* a) on the truncated space.
Matrix displacement(cplx xi, int dim);
/// Matrix elements <m|D(xi)|n> of the untruncated operator, m, n < dim.
Matrix displacement_elements(cplx xi, int dim);
/// S(xi) = exp(r/2 (e^{i phi} a^dag^2 - e^{-i phi} a^2)) on the truncated space.
Matrix squeezing(SqueezeParam xi, int dim);
/// Diagonal of U(chi) = exp(-i chi n(n-1)).
Vector kerr_phases(double chi, int dim);
/// Same for chi = pi/m, with n(n-1) reduced mod 2m before scaling.
Vector kerr_phases(KerrOrder order, int dim);

/// Dimension of the space states are built in before truncation.
int padded_dim(int cutoff);

/// Truncates a padded vector to cutoff + 1 entries; throws CutoffTooSmall
/// when more than `budget` probability is lost.
FockVector truncate(const Vector& padded, int cutoff, double budget = kTruncationBudget);

FockVector build_state(const StateDescription& desc, int cutoff, double budget = kTruncationBudget);
/// sum_q c_q S(xi_q)|alpha_q>.
FockVector build_state(const SuperpositionState& state, int cutoff, double budget = kTruncationBudget);

/// Tr[|ket><bra| D(xi)] e^{t|xi|^2/2} using exact displacement matrix elements.
cplx oracle_char(const Vector& ket, const Vector& bra, cplx xi, double t);
/// Tr[rho D(xi)] e^{t|xi|^2/2}.
cplx oracle_char(const Matrix& rho, cplx xi, double t);
/// Same trace through the truncated-generator exponential at an enlarged cutoff.
cplx oracle_char_expm(const Vector& ket, const Vector& bra, cplx xi, double t);

/// <beta|rho|beta> / pi.
double oracle_husimi(const Matrix& rho, cplx beta);
double oracle_husimi(const Vector& psi, cplx beta);

/// PQD sampled on `beta_grid` by a discrete Fourier transform of the
/// characteristic function over [-xi_half_width, xi_half_width]^2 with step
/// xi_step. `discretization_err` compares against the transform at twice the
/// step; `truncation` bounds the characteristic function on the window edge.
struct PqdGrid {
    GridValues values;
    double discretization_err;
    double window_edge;
};
PqdGrid oracle_pqd_grid(const Vector& psi, double t, const Grid& beta_grid, double xi_half_width, double xi_step);

/// max |U^dag a U - e^{-2i chi n} a| over the interior block.
double verify_kerr_bch(double chi, int cutoff);
/// |<S(-r)0|U(pi/2) S(r)0>|^2.
double verify_u2_squeeze(double r, int cutoff);
/// |<S(-r) U(pi/2) alpha|U(pi/2) S(r) alpha>|^2.
double verify_u2_squeeze_coherent(double r, cplx alpha, int cutoff);

/// Indices <= 0.9 cutoff, where truncation does not corrupt identities.
int interior_size(int cutoff);

/// Loss eta_L through a beam splitter with a thermal ancilla at nbar, traced
/// out. The output lives on a cutoff of input cutoff + ancilla cutoff, so no
/// photons are discarded.
Matrix oracle_channel(const Matrix& rho, const NoiseParams& noise);
/// Ancilla cutoff used by oracle_channel; thermal tail below 1e-14.
int ancilla_cutoff(double nbar);

/// Tr[Pi_0 rho] with Pi_0 = (1 - p_D) sum_n (1 - eta_D)^n |n><n|.
double p_off(const Matrix& rho, const NoiseParams& noise);

}  // namespace kerrpqd::fock
