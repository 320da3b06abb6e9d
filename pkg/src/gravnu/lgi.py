"""Leggett-Garg correlators and K3 for a source and two radial detectors.

The neutrino starts as nu_mu and the dichotomic observable is
Q = 2|nu_alpha><nu_alpha| - 1, measured at proper distances 0, L_p and 2 L_p:

    K3 = C(0, L_p) + C(L_p, 2 L_p) - C(0, 2 L_p)

Two independent routes are provided. The closed forms work on individual
transition amplitudes, and the oracle builds the Heisenberg-picture operators
U^dagger Q U and evaluates symmetrised expectation values directly. In curved
space the phase at 2 L_p is not twice the phase at L_p, so nothing here
assumes stationarity.

Notation: ``amp[d, l]`` is the amplitude U_dl(L) and ``conj`` is the overbar.
"""

from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .oscillation import E, MU, evolution_matrices, evolution_matrix, scenario_phase

__all__ = [
    "flavor_index",
    "dichotomic_observable",
    "heisenberg_observable",
    "symmetrized_correlation",
    "endpoint_correlation_from_phase",
    "middle_correlation_from_phases",
    "k3_from_phases",
    "k3_oracle_from_phases",
    "correlation_endpoints",
    "correlation_middle",
    "k3",
    "k3_direct_oracle",
    "LgiResult",
    "evaluate",
    "K3_CLASSICAL_BOUND",
    "K3_QUANTUM_BOUND",
]

K3_CLASSICAL_BOUND = 1.0
K3_QUANTUM_BOUND = 1.5

_FLAVORS = {"e": E, "mu": MU, E: E, MU: MU}


def flavor_index(alpha):
    """Map ``'e'``/``'mu'`` (or 0/1) to a flavour index."""
    key = alpha.lower() if isinstance(alpha, str) else alpha
    try:
        return _FLAVORS[key]
    except (KeyError, TypeError):
        raise DomainError(f"unknown flavour {alpha!r}; expected 'e' or 'mu'") from None


def dichotomic_observable(alpha):
    """Q = 2 |alpha><alpha| - 1 as a 2x2 matrix."""
    a = flavor_index(alpha)
    q = -np.eye(2, dtype=complex)
    q[a, a] = 1.0
    return q


def heisenberg_observable(q, u):
    """U^dagger Q U."""
    return u.conj().T @ q @ u


def symmetrized_correlation(q1, q2, initial=MU):
    """<initial| (q1 q2 + q2 q1) / 2 |initial> (complex; the real part is physical)."""
    anti = 0.5 * (q1 @ q2 + q2 @ q1)
    return anti[initial, initial]


# -- closed forms -------------------------------------------------------------


def endpoint_correlation_from_phase(theta, phase, alpha):
    """C(0, L) from the phase accumulated over L.

    2 P(mu -> mu) - 1 for alpha = mu and 1 - 2 P(mu -> alpha) otherwise.
    """
    a = flavor_index(alpha)
    amp = evolution_matrices(theta, phase)
    p = np.abs(amp[..., a, MU]) ** 2
    if a == MU:
        return 2.0 * p - 1.0
    return 1.0 - 2.0 * p


def _middle_complex(theta, phase_1, phase_2, alpha):
    a = flavor_index(alpha)
    u1 = evolution_matrices(theta, phase_1)
    u2 = evolution_matrices(theta, phase_2)
    conj = np.conj
    p1 = np.abs(u1[..., a, MU]) ** 2
    p2 = np.abs(u2[..., a, MU]) ** 2
    return (
        4 * conj(u1[..., MU, a]) * u1[..., a, MU] * conj(u2[..., MU, a]) * u2[..., a, MU]
        + 2 * conj(u1[..., MU, a]) * u1[..., a, E] * conj(u2[..., E, a]) * u2[..., a, MU]
        + 2 * conj(u2[..., MU, a]) * u2[..., a, E] * conj(u1[..., E, a]) * u1[..., a, MU]
        - 2 * p1
        - 2 * p2
        + 1
    )


def middle_correlation_from_phases(theta, phase_1, phase_2, alpha):
    """C(L_1, L_2) from the phases at both detectors (real part)."""
    return np.real(_middle_complex(theta, phase_1, phase_2, alpha))


def k3_from_phases(theta, phase_1, phase_2, alpha):
    """K3 in terms of probabilities and transition amplitudes.

    alpha = e:
        1 - 4 P_mue(L) + 4 P_mue(L) P_mue(2L)
          + 4 Re[conj(U_mue(2L)) U_ee(2L) conj(U_ee(L)) U_emu(L)]
    alpha = mu:
        1 - 4 P_mumu(2L) + 4 P_mumu(L) P_mumu(2L)
          + 4 Re[conj(U_mumu(L)) U_mue(L) conj(U_emu(2L)) U_mumu(2L)]
    """
    a = flavor_index(alpha)
    u1 = evolution_matrices(theta, phase_1)
    u2 = evolution_matrices(theta, phase_2)
    conj = np.conj
    if a == E:
        p1 = np.abs(u1[..., E, MU]) ** 2
        p2 = np.abs(u2[..., E, MU]) ** 2
        cross = conj(u2[..., MU, E]) * u2[..., E, E] * conj(u1[..., E, E]) * u1[..., E, MU]
        return 1 - 4 * p1 + 4 * p1 * p2 + 4 * np.real(cross)
    p1 = np.abs(u1[..., MU, MU]) ** 2
    p2 = np.abs(u2[..., MU, MU]) ** 2
    cross = conj(u1[..., MU, MU]) * u1[..., MU, E] * conj(u2[..., E, MU]) * u2[..., MU, MU]
    return 1 - 4 * p2 + 4 * p1 * p2 + 4 * np.real(cross)


# -- operator oracle ----------------------------------------------------------


def _oracle_correlators(theta, phase_1, phase_2, alpha):
    q = dichotomic_observable(alpha)
    q0 = q  # U(0) is the identity
    q1 = heisenberg_observable(q, evolution_matrix(theta, (0.0, phase_1)))
    q2 = heisenberg_observable(q, evolution_matrix(theta, (0.0, phase_2)))
    return (
        symmetrized_correlation(q0, q1),
        symmetrized_correlation(q1, q2),
        symmetrized_correlation(q0, q2),
    )


def k3_oracle_from_phases(theta, phase_1, phase_2, alpha, return_imag=False):
    """K3 from explicit Heisenberg-picture operators (scalar phases only)."""
    c01, c12, c02 = _oracle_correlators(theta, float(phase_1), float(phase_2), alpha)
    value = c01 + c12 - c02
    if return_imag:
        return value.real, value.imag
    return value.real


# -- scenario level -----------------------------------------------------------


def _phases(scenario):
    return scenario_phase(scenario, scenario.l_p), scenario_phase(scenario, 2.0 * scenario.l_p)


def correlation_endpoints(scenario, kappa, alpha="mu"):
    """C(0, kappa L_p) for kappa in {1, 2}."""
    if kappa not in (1, 2):
        raise DomainError("kappa must be 1 or 2")
    theta = scenario.params.theta
    phase = scenario_phase(scenario, kappa * scenario.l_p)
    return float(endpoint_correlation_from_phase(theta, phase, alpha))


def correlation_middle(scenario, alpha="mu"):
    """C(L_p, 2 L_p)."""
    phase_1, phase_2 = _phases(scenario)
    return float(middle_correlation_from_phases(scenario.params.theta, phase_1, phase_2, alpha))


def k3(scenario, alpha="mu"):
    phase_1, phase_2 = _phases(scenario)
    return float(k3_from_phases(scenario.params.theta, phase_1, phase_2, alpha))


def k3_direct_oracle(scenario, alpha="mu"):
    phase_1, phase_2 = _phases(scenario)
    return k3_oracle_from_phases(scenario.params.theta, phase_1, phase_2, alpha)


class LgiResult(NamedTuple):
    c_0_1: float
    c_1_2: float
    c_0_2: float
    k3: float

    @property
    def violation(self):
        # strict inequality, no tolerance band
        return self.k3 > K3_CLASSICAL_BOUND


def evaluate(scenario, alpha="mu"):
    """All three correlators and K3 for one scenario."""
    theta = scenario.params.theta
    phase_1, phase_2 = _phases(scenario)
    return LgiResult(
        float(endpoint_correlation_from_phase(theta, phase_1, alpha)),
        float(middle_correlation_from_phases(theta, phase_1, phase_2, alpha)),
        float(endpoint_correlation_from_phase(theta, phase_2, alpha)),
        float(k3_from_phases(theta, phase_1, phase_2, alpha)),
    )
