#include <doctest.h>

#include <random>

#include "kerrpqd/errors.hpp"
#include "kerrpqd/fock_oracle.hpp"
#include "kerrpqd/phase_space.hpp"
#include "reference.hpp"

using namespace kerrpqd;

namespace {

const cplx kProbes[] = {{0.0, 0.0}, {0.4, -0.3}, {-1.0, 0.8}, {1.5, 0.2}, {-0.2, -1.7}};

SuperpositionState squeezed_cat() { return squeeze_then_kerr_state(KerrOrder(3), 1.0, SqueezeParam(0.2, 0.0)); }

}  // namespace

TEST_CASE("Gaussian PQDs") {
    SUBCASE("coherent Wigner") {
        const cplx alpha(0.6, -0.9);
        const GaussianPqd w = gaussian_pqd(GaussianState::coherent(alpha), {0.0});
        for (cplx b : kProbes) CHECK(std::abs(w(b) - ref::coherent_pqd(alpha, 0.0, b)) < 1e-14);
    }
    SUBCASE("coherent Husimi") {
        const cplx alpha(0.6, -0.9);
        const GaussianPqd q = gaussian_pqd(GaussianState::coherent(alpha), {-1.0});
        for (cplx b : kProbes) CHECK(std::abs(q(b) - std::exp(-std::norm(b - alpha)) / pi) < 1e-14);
    }
    SUBCASE("squeezed vacuum at the singular ordering") {
        for (double r : {0.2, 0.7}) {
            const auto sv = GaussianState::squeezed_coherent(SqueezeParam(r, 0.0), 0.0);
            CHECK_THROWS_AS(gaussian_pqd(sv, {std::exp(-2.0 * r)}), OrderingTooHigh);
            CHECK_NOTHROW(gaussian_pqd(sv, {std::exp(-2.0 * r) - 1e-6}));
        }
    }
    SUBCASE("thermal P function") {
        const double lambda = 1.8;
        const GaussianPqd p = gaussian_pqd(GaussianState::thermal(lambda), {1.0});
        for (cplx b : kProbes) {
            const double expected = 2.0 / (pi * (lambda - 1.0)) * std::exp(-2.0 * std::norm(b) / (lambda - 1.0));
            CHECK(std::abs(p(b) - expected) < 1e-14);
        }
        CHECK_THROWS_AS(gaussian_pqd(GaussianState::coherent(0.0), {1.0}), OrderingTooHigh);
    }
    SUBCASE("two-mode product") {
        Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(4, 4);
        cov(2, 2) = cov(3, 3) = 2.0;
        const GaussianPqd w = gaussian_pqd(GaussianState(cov, Eigen::VectorXd::Zero(4)), {0.0, -1.0});
        Eigen::VectorXd beta(4);
        beta << 0.3, -0.1, 0.5, 0.2;
        const double expected = (2.0 / pi) * std::exp(-2.0 * (0.09 + 0.01)) * (2.0 / (3.0 * pi)) *
                                std::exp(-2.0 * (0.25 + 0.04) / 3.0);
        CHECK(std::abs(w(beta) - expected) < 1e-14);
    }
}

TEST_CASE("squeezed-coherent dyadic characteristic function") {
    SUBCASE("unsqueezed diagonal is the coherent characteristic function") {
        const cplx alpha(0.7, 0.3);
        for (double t : {-1.0, -0.3, 0.0}) {
            const auto f = dyadic_char_squeezed_coherent(alpha, alpha, 0.0, t);
            for (cplx xi : kProbes) {
                const cplx expected = std::exp(-0.5 * (1.0 - t) * std::norm(xi) + xi * std::conj(alpha) -
                                               std::conj(xi) * alpha);
                CHECK(std::abs(f(xi) - expected) < 1e-14);
            }
        }
    }
    SUBCASE("origin value is the coherent overlap") {
        const cplx alpha(1.0, -0.4);
        const cplx gamma(-0.2, 0.9);
        const cplx expected =
            std::exp(-0.5 * (std::norm(alpha) + std::norm(gamma)) + std::conj(gamma) * alpha);
        for (double r : {0.0, 0.3, 1.0}) {
            CHECK(std::abs(dyadic_char_squeezed_coherent(alpha, gamma, r, -0.5)(0.0) - expected) < 1e-14);
        }
    }
    SUBCASE("number-basis trace") {
        constexpr int kCutoff = 60;
        const int dim = fock::padded_dim(kCutoff);
        const fock::Matrix s = fock::squeezing(SqueezeParam(0.2, 0.0), dim);
        const fock::Vector ket = (s * ref::coherent(1.0, dim - 1)).head(kCutoff + 1);
        const fock::Vector bra = (s * ref::coherent(I, dim - 1)).head(kCutoff + 1);
        const cplx xi(0.3, 0.1);
        const cplx oracle = fock::oracle_char(ket, bra, xi, -0.5);
        CHECK(std::abs(dyadic_char_squeezed_coherent(1.0, I, 0.2, -0.5)(xi) - oracle) < 1e-8);
    }
}

TEST_CASE("squeezed-vacua dyadic characteristic function") {
    SUBCASE("equal phases give the squeezed vacuum") {
        for (double phi : {0.0, 1.3, 4.0}) {
            const double r = 0.6;
            const auto f = dyadic_char_squeezed_vacua(r, phi, phi, 0.2);
            CHECK(std::abs(f(0.0) - cplx(1.0)) < 1e-14);
            for (cplx xi : kProbes) {
                const cplx x = xi * std::cosh(r) - std::conj(xi) * std::polar(std::sinh(r), phi);
                const cplx expected = std::exp(-0.5 * std::norm(x) + 0.1 * std::norm(xi));
                CHECK(std::abs(f(xi) - expected) < 1e-13);
            }
        }
    }
    SUBCASE("origin value is the squeezed-vacuum overlap") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        constexpr int kCutoff = 400;
        for (int i = 0; i < 20; ++i) {
            const double r = 1.2 * u(rng);
            const double phi = 2.0 * pi * u(rng);
            const double psi = 2.0 * pi * u(rng);
            const cplx overlap = ref::squeezed_vacuum(r, psi, kCutoff).dot(ref::squeezed_vacuum(r, phi, kCutoff));
            CHECK(std::abs(dyadic_char_squeezed_vacua(r, phi, psi, 0.0)(0.0) - overlap) < 1e-8);
        }
    }
    SUBCASE("number-basis trace off the diagonal") {
        constexpr int kCutoff = 200;
        const ref::Vec ket = ref::squeezed_vacuum(1.0, 0.0, kCutoff);
        const ref::Vec bra = ref::squeezed_vacuum(1.0, 4.0 * pi / 3.0, kCutoff);
        const auto f = dyadic_char_squeezed_vacua(1.0, 0.0, 4.0 * pi / 3.0, -0.8);
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 10; ++i) {
            const cplx xi = std::polar(2.0 * std::sqrt(u(rng)), 2.0 * pi * u(rng));
            CHECK(std::abs(f(xi) - fock::oracle_char(ket, bra, xi, -0.8)) < 1e-7);
        }
    }
}

TEST_CASE("Fourier transform of Gaussian forms") {
    SUBCASE("vacuum characteristic function") {
        const ComplexGaussianForm chi(0.0, Eigen::Matrix2cd::Identity(), Eigen::Vector2cd::Zero());
        const ComplexGaussianForm w = fourier_transform_form(chi);
        for (cplx b : kProbes) CHECK(std::abs(w(b) - ref::coherent_pqd(0.0, 0.0, b)) < 1e-14);
    }
    SUBCASE("coherent state at the P ordering") {
        const auto chi = dyadic_char_squeezed_coherent(0.5, 0.5, 0.0, 1.0);
        CHECK_THROWS_AS(fourier_transform_form(chi), NotIntegrable);
    }
    SUBCASE("random integrable forms against direct quadrature") {
        std::mt19937_64 rng(19);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int trial = 0; trial < 3; ++trial) {
            Eigen::Matrix2cd A;
            const double a = 1.4 + 0.4 * u(rng);
            const double c = 1.2 + 0.4 * u(rng);
            const double b = 0.3 * u(rng);
            A << cplx(a, 0.3 * u(rng)), cplx(b, 0.2 * u(rng)), cplx(b, 0.2 * u(rng)), cplx(c, 0.3 * u(rng));
            A(1, 0) = A(0, 1);
            const Eigen::Vector2cd L(cplx(0.3 * u(rng), 0.4 * u(rng)), cplx(0.3 * u(rng), 0.4 * u(rng)));
            const ComplexGaussianForm chi(cplx(0.1 * u(rng), u(rng)), A, L);
            const ComplexGaussianForm w = fourier_transform_form(chi);
            for (cplx beta : kProbes) {
                const cplx numeric = ref::fourier_quadrature([&](cplx xi) { return chi(xi); }, beta, 11.0, 440);
                CHECK(std::abs(w(beta) - numeric) < 1e-7);
            }
        }
    }
}

TEST_CASE("superposition PQDs") {
    SUBCASE("single coherent branch") {
        const cplx alpha(-0.4, 1.1);
        const PqdFunction w = superposition_pqd(kerr_coherent_state(KerrOrder(1), alpha), 0.0);
        for (cplx b : kProbes) CHECK(std::abs(w.real(b) - ref::coherent_pqd(alpha, 0.0, b)) < 1e-14);
    }
    SUBCASE("squeezed vacuum branch agrees with the covariance route") {
        const double r = 0.5;
        const SqueezeParam sq(r, 0.9);
        const SuperpositionState st({{1.0, cplx(0.3, -0.2), sq}});
        for (double t : {-1.0, -0.2, 0.3}) {
            const PqdFunction w = superposition_pqd(st, t);
            const GaussianPqd g = gaussian_pqd(GaussianState::squeezed_coherent(sq, cplx(0.3, -0.2)), {t});
            for (cplx b : kProbes) CHECK(std::abs(w.real(b) - g(b)) < 1e-10);
        }
    }
    SUBCASE("Husimi floor of the squeezed cat") {
        const SuperpositionState st = squeezed_cat();
        const double R = default_window(st);
        const GridValues v = evaluate_grid(superposition_pqd(st, -1.0), Grid::nodes(R, 201));
        double lowest = 0.0;
        for (double x : v.re) lowest = std::min(lowest, x);
        CHECK(lowest >= -1e-9);
    }
    SUBCASE("normalization and reality") {
        const std::vector<SuperpositionState> corpus{squeezed_cat(), kerr_squeezed_vacuum(KerrOrder(3), 1.0),
                                                     kerr_coherent_state(KerrOrder(4), cplx(1.2, 0.3))};
        for (const auto& st : corpus) {
            for (double t : {-1.0, -0.5, 0.0}) {
                const PqdFunction w = superposition_pqd(st, t);
                CHECK(std::abs(w.integral() - cplx(1.0)) < 1e-8);
                const GridValues v = evaluate_grid(w, Grid::midpoints(default_window(st), 600));
                double sum = 0.0;
                for (double x : v.re) sum += x;
                CHECK(std::abs(sum * v.grid.h * v.grid.h - 1.0) < 1e-8);
                CHECK(v.max_abs_imag <= 1e-9 * v.max_abs_real);
            }
        }
    }
    SUBCASE("integrability boundary") {
        const SuperpositionState st = squeezed_cat();
        const double top = max_integrable_ordering(st);
        CHECK(std::abs(top - std::exp(-0.4)) < 1e-9);
        CHECK_THROWS_AS(superposition_pqd(st, top + 1e-3), NotIntegrable);
        CHECK(std::abs(max_integrable_ordering(kerr_coherent_state(KerrOrder(3), 1.0)) - 1.0) < 1e-9);
    }
}

TEST_CASE("lower orderings are Gaussian smoothings") {
    // W^(t') = W^(t) * (2 / (pi c)) exp(-2|b|^2 / c), c = t - t'.
    const SuperpositionState st = squeezed_cat();
    const double t = 0.0;
    const double tp = -0.5;
    const double c = t - tp;
    const PqdFunction hi = superposition_pqd(st, t);
    const PqdFunction lo = superposition_pqd(st, tp);
    constexpr double kHalf = 7.0;
    constexpr int kN = 560;
    const double h = 2.0 * kHalf / kN;
    for (cplx beta : kProbes) {
        double total = 0.0;
        for (int iy = 0; iy <= kN; ++iy) {
            for (int ix = 0; ix <= kN; ++ix) {
                const cplx z(-kHalf + h * ix, -kHalf + h * iy);
                const double w = (ix == 0 || ix == kN ? 0.5 : 1.0) * (iy == 0 || iy == kN ? 0.5 : 1.0);
                total += w * hi.real(z) * 2.0 / (pi * c) * std::exp(-2.0 * std::norm(beta - z) / c);
            }
        }
        CHECK(std::abs(total * h * h - lo.real(beta)) < 1e-6);
    }
}
