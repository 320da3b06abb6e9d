"""l1-norm of coherence for the evolved two-flavour state."""

import numpy as np

from .errors import ValidationError
from .lgi import flavor_index
from .oscillation import (
    MU,
    EnergyReference,
    PropagationScenario,
    evolution_matrix,
    scenario_phase,
    transition_probability,
)

__all__ = [
    "validate_density",
    "evolve_density",
    "l1_norm",
    "coherence_from_probability",
    "coherence_mu",
    "coherence_mu_density",
    "local_scenario",
]

_TOL = 1e-12


def validate_density(rho, tol=_TOL):
    """Return ``rho`` as a complex 2x2 array or raise :class:`ValidationError`."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValidationError(f"density matrix must be 2x2, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValidationError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ValidationError("density matrix trace differs from 1")
    if np.min(np.linalg.eigvalsh(rho)) < -tol:
        raise ValidationError("density matrix has a negative eigenvalue")
    return rho


def evolve_density(theta, phases, initial_flavor=MU):
    """Pure-state density matrix of an initial flavour after evolution."""
    a = flavor_index(initial_flavor)
    psi = evolution_matrix(theta, phases)[:, a]
    return np.outer(psi, psi.conj())


def l1_norm(rho):
    """Sum of the absolute values of the off-diagonal entries."""
    rho = validate_density(rho)
    return float(np.sum(np.abs(rho)) - np.sum(np.abs(np.diag(rho))))


def coherence_from_probability(p_transition):
    """2 sqrt(P_trans P_surv), the l1-norm of a pure two-level state."""
    p = np.asarray(p_transition, dtype=float)
    return 2.0 * np.sqrt(np.clip(p * (1.0 - p), 0.0, None))


def _check_scenario(scenario):
    if not isinstance(scenario, PropagationScenario):
        raise TypeError("expected a PropagationScenario")
    return scenario


def coherence_mu(scenario):
    """C_mu for an initial nu_mu via the transition-probability shortcut.

    Scenarios built for this observable usually carry
    ``energy_reference=EnergyReference.LOCAL`` (energy measured at the detector).
    """
    s = _check_scenario(scenario)
    phase = scenario_phase(s, s.l_p)
    return float(coherence_from_probability(transition_probability(s.params.theta, phase)))


def coherence_mu_density(scenario):
    """C_mu evaluated as the l1-norm of the evolved density matrix."""
    s = _check_scenario(scenario)
    phase = scenario_phase(s, s.l_p)
    return l1_norm(evolve_density(s.params.theta, (0.0, float(phase)), MU))


def local_scenario(**kwargs):
    """Shorthand for a scenario whose energy is measured at the detector."""
    kwargs.setdefault("energy_reference", EnergyReference.LOCAL)
    return PropagationScenario(**kwargs)
