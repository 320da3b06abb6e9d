import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gravnu import (
    Approx,
    GravitySource,
    OscillationParams,
    ValidationError,
    coherence_mu,
    coherence_mu_density,
    evolve_density,
    l1_norm,
    local_scenario,
    phase_flat,
    transition_probability,
)
from gravnu.coherence import coherence_from_probability, validate_density
from gravnu.oscillation import E, MU
from gravnu.selftest import random_scenario

GM = 3e7


def test_evolve_density_examples():
    rho = evolve_density(0.59, (0.0, 0.0), MU)
    np.testing.assert_allclose(rho, np.diag([0.0, 1.0]), atol=1e-15)
    rho = evolve_density(np.pi / 4, (0.0, np.pi), "mu")
    np.testing.assert_allclose(rho, np.diag([1.0, 0.0]), atol=1e-15)
    rho = evolve_density(0.0, (0.4, 2.9), MU)
    assert l1_norm(rho) == 0.0


def test_evolve_density_either_flavor():
    rho_e = evolve_density(0.59, (0.0, 1.3), E)
    rho_mu = evolve_density(0.59, (0.0, 1.3), MU)
    assert rho_e[0, 0].real == pytest.approx(rho_mu[1, 1].real, abs=1e-15)
    assert l1_norm(rho_e) == pytest.approx(l1_norm(rho_mu), abs=1e-15)


def test_l1_norm_examples():
    assert l1_norm(np.diag([0.5, 0.5])) == 0.0
    assert l1_norm(np.full((2, 2), 0.5)) == pytest.approx(1.0, abs=1e-15)
    assert l1_norm(evolve_density(0.59, (0.0, np.pi))) == pytest.approx(0.704411, abs=5e-7)
    p = np.sin(1.18) ** 2
    assert l1_norm(evolve_density(0.59, (0.0, np.pi))) == pytest.approx(2 * np.sqrt(p * (1 - p)), abs=1e-12)


@pytest.mark.parametrize(
    "rho",
    [
        np.array([[0.5, 0.1], [0.2, 0.5]]),  # not Hermitian
        np.diag([0.6, 0.6]),  # trace 1.2
        np.array([[1.2, 0.0], [0.0, -0.2]]),  # negative eigenvalue
        np.eye(3) / 3,  # wrong shape
    ],
)
def test_l1_norm_rejects_invalid(rho):
    with pytest.raises(ValidationError):
        l1_norm(rho)


@given(theta=st.floats(0, np.pi / 2), delta=st.floats(0, 4 * np.pi), shift=st.floats(-5, 5))
def test_l1_invariant_under_global_phase(theta, delta, shift):
    a = l1_norm(evolve_density(theta, (0.0, delta)))
    b = l1_norm(evolve_density(theta, (shift, delta + shift)))
    assert a == pytest.approx(b, abs=1e-12)
    assert 0.0 <= a <= 1.0 + 1e-12
    validate_density(evolve_density(theta, (0.0, delta)))


def test_coherence_from_probability():
    assert coherence_from_probability(0.5) == 1.0
    assert coherence_from_probability(0.0) == 0.0
    assert coherence_from_probability(1.0) == 0.0


def test_zero_baseline_gives_zero(default_params):
    s = local_scenario(params=default_params, source=GravitySource(GM), r_source=1e8, l_p=0.0)
    assert coherence_mu(s) == 0.0
    assert coherence_mu_density(s) == pytest.approx(0.0, abs=1e-15)


def test_half_transition_gives_one():
    # theta = pi/4 and a flat phase of pi/2 make P_mue = 1/2
    params = OscillationParams(theta=np.pi / 4)
    energy = params.delta_m2 * 3e8 / (2 * (np.pi / 2))
    s = local_scenario(params=params, source=0.0, r_source=1e8, l_p=3e8, energy=energy)
    assert transition_probability(params.theta, phase_flat(params, 3e8, energy)) == pytest.approx(0.5, abs=1e-14)
    assert coherence_mu(s) == pytest.approx(1.0, abs=1e-12)


def test_shortcut_equals_density_route(rng):
    for _ in range(300):
        gm = GM if rng.random() < 0.5 else 0.0
        approx = Approx.EXACT if rng.random() < 0.2 else Approx.WEAK
        s = random_scenario(rng, gm, "local", approx)
        assert abs(coherence_mu(s) - coherence_mu_density(s)) <= 1e-12


def test_flat_coherence_formula(default_params):
    s = local_scenario(params=default_params, source=0.0, r_source=1e8, l_p=2.7e8, energy=300.0)
    p = transition_probability(default_params.theta, phase_flat(default_params, 2.7e8, 300.0))
    assert coherence_mu(s) == pytest.approx(2 * np.sqrt(p * (1 - p)), abs=1e-12)


def test_exact_geometry_path(default_params):
    weak = local_scenario(params=default_params, source=GM, r_source=1e8, l_p=3e8)
    exact = local_scenario(params=default_params, source=GM, r_source=1e8, l_p=3e8, approx="exact")
    for s in (weak, exact):
        assert 0.0 <= coherence_mu(s) <= 1.0
        assert coherence_mu(s) == pytest.approx(coherence_mu_density(s), abs=1e-12)


def test_rejects_non_scenario():
    with pytest.raises(TypeError):
        coherence_mu({"l_p": 3e8})
