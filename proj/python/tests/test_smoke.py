import cmath
import math

import numpy as np
import pytest

import kerrpqd


def coherent_wigner(alpha, beta):
    return 2.0 / math.pi * math.exp(-2.0 * abs(beta - alpha) ** 2)


def test_coherent_wigner_matches_closed_form():
    state = kerrpqd.kerr_coherent_state(1, 0.7 - 0.2j)
    w = kerrpqd.superposition_pqd(state, 0.0)
    beta = np.array([[0.0, 0.5 + 0.5j], [-1.0j, 1.2]])
    expected = np.vectorize(lambda b: coherent_wigner(0.7 - 0.2j, b))(beta)
    assert np.allclose(w.evaluate(beta), expected, atol=1e-14)
    assert abs(w.integral() - 1.0) < 1e-12


def test_kerr_state_is_normalized_and_matches_number_basis():
    desc = kerrpqd.StateDescription.parse("kind=squeeze_kerr_coherent m=3 alpha_re=1 alpha_im=0 r=0.2")
    state = desc.to_superposition()
    assert len(state) == 3
    assert abs(state.norm_squared() - 1.0) < 1e-10
    psi = kerrpqd.fock.build_state(desc, 60)
    q = kerrpqd.superposition_pqd(state, -1.0)
    for beta in (0.0, 0.3 + 0.4j, -1.1 + 0.2j):
        assert abs(q(beta) - kerrpqd.fock.oracle_husimi(psi, beta)) < 1e-10


def test_negativity_vanishes_at_husimi_ordering():
    state = kerrpqd.squeeze_then_kerr_state(3, 1.0, kerrpqd.SqueezeParam(0.2))
    spec = kerrpqd.QuadratureSpec()
    spec.base_resolution = 64
    assert kerrpqd.negativity_volume(state, -1.0, spec).value < 1e-4
    assert kerrpqd.negativity_volume(state, -0.2, spec).value > 0.1


def test_squeezed_vacuum_threshold():
    r = 0.5
    res = kerrpqd.find_threshold(kerrpqd.kerr_squeezed_vacuum(1, r))
    assert abs(res.t_bar - math.exp(-2 * r)) < 1e-3


def test_composition_and_identities():
    a = kerrpqd.SqueezeParam(0.4, 0.3)
    b = kerrpqd.SqueezeParam(0.7, 2.1)
    c, phi = kerrpqd.compose_squeezing(a, b)
    lhs = kerrpqd.su11_matrix(a) @ kerrpqd.su11_matrix(b)
    rhs = kerrpqd.su11_matrix(c) @ np.diag([cmath.exp(0.5j * phi), cmath.exp(-0.5j * phi)])
    assert np.abs(lhs - rhs).max() < 1e-12
    assert kerrpqd.fock.verify_kerr_bch(math.pi / 3, 60) < 1e-10


def test_inequalities():
    noise = kerrpqd.NoiseParams(eta_L=0.9, eta_D=0.8, p_D=0.05)
    v = kerrpqd.uniform_threshold_verdict(noise, -1.0)
    assert not v.simulable
    assert v.margin == pytest.approx(-1.675, abs=1e-15)
    thermal = kerrpqd.NoiseParams(eta_L=0.7, nbar=0.2)
    assert kerrpqd.thermal_lambda(thermal) == pytest.approx(1.12, abs=1e-15)
    assert kerrpqd.thermal_threshold_verdict(kerrpqd.NoiseParams(eta_L=0.5, nbar=1.0)).always_simulable


def test_errors_map_to_exception_classes():
    with pytest.raises(kerrpqd.InvalidArgument):
        kerrpqd.StateDescription.parse("kind=coherent bogus=1")
    with pytest.raises(kerrpqd.NotIntegrable):
        kerrpqd.superposition_pqd(kerrpqd.kerr_coherent_state(1, 1.0), 1.0)
    assert issubclass(kerrpqd.NotIntegrable, kerrpqd.Error)


def test_click_estimate_for_coherent_input():
    noise = kerrpqd.NoiseParams(eta_L=0.3, eta_D=0.8, p_D=0.252)
    alpha = 0.8
    est = kerrpqd.estimate_click_probability(
        kerrpqd.kerr_coherent_state(1, alpha), noise, -1.0, 1 - 2 * 0.252 / 0.8, samples=20000, seed=3
    )
    expected = (1 - 0.252) * math.exp(-0.8 * 0.3 * alpha**2)
    assert abs(est.p_off - expected) < 4 * est.std_error


def test_run_reports_exit_codes():
    code, out, _ = kerrpqd.run({"command": "simulability", "eta-l": "0.9", "eta-d": "0.8", "p-d": "0.05", "tbar": "-1"})
    assert code == 0
    assert "simulable=false" in out
    code, _, err = kerrpqd.run({"command": "pqd", "state": "kind=coherent alpha_re=1", "t": "1"})
    assert code == 3
    assert err.startswith("error=NotIntegrable")
