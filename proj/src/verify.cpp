#include <algorithm>
#include <cmath>
#include <random>

#include "kerrpqd/fock_oracle.hpp"
#include "kerrpqd/run.hpp"

namespace kerrpqd {

namespace {

constexpr std::uint64_t kProbeSeed = 20240611;

double deficit(const fock::Vector& a, const fock::Vector& b) {
    return std::abs(1.0 - std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm()));
}

cplx in_disc(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(radius * std::sqrt(u(rng)), 2.0 * pi * u(rng));
}

// Shared squeeze, distinct displacements: 10 probes of the squeezed-coherent dyadic.
double squeezed_coherent_probe() {
    std::mt19937_64 rng(kProbeSeed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    constexpr int kCutoff = 150;
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double r = u(rng);
        const double t = -1.0 + 1.5 * u(rng);
        const cplx alpha = in_disc(rng, 2.0);
        const cplx gamma = in_disc(rng, 2.0);
        const cplx xi = in_disc(rng, 2.0);
        const int dim = fock::padded_dim(kCutoff);
        const fock::Matrix s = fock::squeezing(SqueezeParam(r, 0.0), dim);
        const auto ket = fock::truncate(s * fock::displacement(alpha, dim).col(0), kCutoff, 1e-14);
        const auto bra = fock::truncate(s * fock::displacement(gamma, dim).col(0), kCutoff, 1e-14);
        const cplx oracle = fock::oracle_char(ket.amplitudes, bra.amplitudes, xi, t);
        worst = std::max(worst, std::abs(oracle - dyadic_char_squeezed_coherent(alpha, gamma, r, t)(xi)));
    }
    return worst;
}

double squeezed_vacua_probe() {
    std::mt19937_64 rng(kProbeSeed + 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    constexpr int kCutoff = 120;
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double r = u(rng);
        const double phi = 2.0 * pi * u(rng);
        const double psi = 2.0 * pi * u(rng);
        const double t = -1.0 + u(rng) * (1.0 + std::exp(-2.0 * r)) * 0.9;
        const cplx xi = in_disc(rng, 2.0);
        const int dim = fock::padded_dim(kCutoff);
        const auto ket = fock::truncate(fock::squeezing(SqueezeParam(r, phi), dim).col(0), kCutoff, 1e-14);
        const auto bra = fock::truncate(fock::squeezing(SqueezeParam(r, psi), dim).col(0), kCutoff, 1e-14);
        const cplx oracle = fock::oracle_char(ket.amplitudes, bra.amplitudes, xi, t);
        worst = std::max(worst, std::abs(oracle - dyadic_char_squeezed_vacua(r, phi, psi, t)(xi)));
    }
    return worst;
}

double su11_probe() {
    std::mt19937_64 rng(kProbeSeed + 2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const SqueezeParam a(2.0 * u(rng), 2.0 * pi * u(rng));
        const SqueezeParam b(2.0 * u(rng), 2.0 * pi * u(rng));
        const auto [c, Phi] = compose_squeezing(a, b);
        const Eigen::Matrix2cd diff = su11_matrix(a) * su11_matrix(b) - su11_matrix(c) * su11_phase(Phi);
        worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
    return worst;
}

double wigner_grid_probe() {
    const SuperpositionState st = squeeze_then_kerr_state(KerrOrder(3), 1.0, SqueezeParam(0.2, 0.0));
    const PqdFunction w = superposition_pqd(st, 0.0);
    const auto psi = fock::build_state(st, 50);
    const Grid g = Grid::nodes(4.0, 81);
    const auto oracle = fock::oracle_pqd_grid(psi.amplitudes, 0.0, g, 10.0, 0.125);
    double worst = 0.0;
    for (int iy = 0; iy < g.n; ++iy) {
        for (int ix = 0; ix < g.n; ++ix) {
            worst = std::max(worst, std::abs(oracle.values.at(iy, ix) - w.real(cplx(g.coord(ix), g.coord(iy)))));
        }
    }
    return worst;
}

double normalization_probe() {
    const std::vector<SuperpositionState> corpus{
        squeeze_then_kerr_state(KerrOrder(3), 1.0, SqueezeParam(0.2, 0.0)),
        kerr_squeezed_vacuum(KerrOrder(3), 1.0),
        kerr_squeezed_vacuum(KerrOrder(5), 0.5),
        kerr_coherent_state(KerrOrder(2), cplx(1.0, 0.5)),
    };
    double worst = 0.0;
    for (const auto& st : corpus) {
        worst = std::max(worst, std::abs(st.norm_squared() - 1.0));
        const double top = max_integrable_ordering(st);
        for (int k = 0; k < 5; ++k) {
            const double t = -1.0 + (top - 1e-3 + 1.0) * k / 5.0;
            worst = std::max(worst, std::abs(superposition_pqd(st, t).integral() - 1.0));
        }
    }
    return worst;
}

double channel_trace_probe() {
    const auto psi = fock::build_state(squeeze_then_kerr_state(KerrOrder(3), 1.0, SqueezeParam(0.2, 0.0)), 50);
    NoiseParams noise;
    noise.eta_L = 0.7;
    noise.nbar = 0.5;
    const fock::Matrix rho = psi.density();
    return std::abs(fock::oracle_channel(rho, noise).trace() - rho.trace());
}

double kerr_state_probe() {
    double worst = 0.0;
    for (int m : {3, 5}) {
        const auto branches = fock::build_state(kerr_coherent_state(KerrOrder(m), 1.0), 60);
        StateDescription d;
        d.kind = StateDescription::Kind::KerrCoherent;
        d.m = m;
        d.alpha = 1.0;
        worst = std::max(worst, deficit(branches.amplitudes, fock::build_state(d, 60).amplitudes));
    }
    return worst;
}

double commutator_probe() {
    constexpr int kCutoff = 60;
    const fock::Matrix a = fock::annihilation(kCutoff + 1);
    const fock::Matrix c = a * a.adjoint() - a.adjoint() * a - fock::Matrix::Identity(kCutoff + 1, kCutoff + 1);
    const int k = fock::interior_size(kCutoff);
    return c.topLeftCorner(k, k).cwiseAbs().maxCoeff();
}

double displacement_probe() {
    constexpr int kDim = 61;
    const cplx xi(1.3, -0.4);
    const fock::Matrix exact = fock::displacement_elements(xi, kDim);
    const fock::Matrix padded = fock::displacement(xi, fock::padded_dim(kDim - 1));
    const int k = fock::interior_size(kDim - 1);
    return (exact - padded.topLeftCorner(kDim, kDim)).topLeftCorner(k, k).cwiseAbs().maxCoeff();
}

}  // namespace

std::vector<Check> verification_suite() {
    std::vector<Check> out;
    for (const auto& [name, chi] :
         {std::pair{"kerr_bch_chi_0", 0.0}, {"kerr_bch_chi_pi_5", pi / 5}, {"kerr_bch_chi_pi_3", pi / 3}, {"kerr_bch_chi_pi", pi}}) {
        out.push_back({name, fock::verify_kerr_bch(chi, 60), 1e-10});
    }
    for (const auto& [name, r] : {std::pair{"u2_squeeze_r_0.1", 0.1}, {"u2_squeeze_r_0.5", 0.5}, {"u2_squeeze_r_1", 1.0}}) {
        out.push_back({name, std::abs(1.0 - fock::verify_u2_squeeze(r, 100)), 1e-10});
    }
    out.push_back({"u2_squeeze_coherent", std::abs(1.0 - fock::verify_u2_squeeze_coherent(0.3, 1.0, 80)), 1e-9});
    out.push_back({"su11_composition", su11_probe(), 1e-10});
    out.push_back({"commutator_interior", commutator_probe(), 1e-12});
    out.push_back({"displacement_elements_vs_expm", displacement_probe(), 1e-10});
    out.push_back({"squeezed_coherent_dyadic_vs_oracle", squeezed_coherent_probe(), 1e-7});
    out.push_back({"squeezed_vacua_dyadic_vs_oracle", squeezed_vacua_probe(), 1e-7});
    out.push_back({"kerr_coherent_branches_vs_oracle", kerr_state_probe(), 1e-10});
    out.push_back({"wigner_grid_vs_oracle", wigner_grid_probe(), 5e-6});
    out.push_back({"pqd_normalization", normalization_probe(), 1e-8});
    out.push_back({"channel_trace", channel_trace_probe(), 1e-10});
    return out;
}

}  // namespace kerrpqd
