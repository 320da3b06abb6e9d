"""Two-flavour mixing, gravitationally corrected phases and flavour evolution.

Flavour index 0 is nu_e and 1 is nu_mu; mass index 0 is nu_1 and 1 is nu_2.
Only the phase difference between the mass eigenstates is physical, so the
convention phi_1 = 0, phi_2 = Phi_21 is used throughout.
"""

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import DomainError, ValidationError
from .geometry import (
    Direction,
    GravitySource,
    detector_radius_exact,
    detector_radius_weak,
    metric_potential,
)
from .units import UnitsMode, phase_from_kinematics

__all__ = [
    "E",
    "MU",
    "Approx",
    "EnergyReference",
    "OscillationParams",
    "MassPhases",
    "PropagationScenario",
    "DEFAULT_DELTA_M2",
    "DEFAULT_THETA",
    "mixing_matrix",
    "phase_flat",
    "phase_curved_general",
    "phase_outward",
    "phase_inward",
    "phase_local_weak",
    "scenario_phase",
    "evolution_matrix",
    "evolution_matrices",
    "transition_probability",
    "survival_probability",
]

E, MU = 0, 1

DEFAULT_DELTA_M2 = 7.92e-5  # eV^2
DEFAULT_THETA = 0.59  # rad


class Approx(str, Enum):
    """Geometry treatment: closed first-order formulas or exact inversion."""

    WEAK = "weak"
    EXACT = "exact"


class EnergyReference(str, Enum):
    """Which observer measured the energy handed to a scenario."""

    INFINITY = "infinity"
    LOCAL = "local"


@dataclass(frozen=True)
class OscillationParams:
    theta: float = DEFAULT_THETA
    delta_m2: float = DEFAULT_DELTA_M2
    units: UnitsMode = UnitsMode.PAPER_FIGURE

    def __post_init__(self):
        theta = float(self.theta)
        if not 0.0 <= theta <= np.pi / 2:
            raise ValidationError(f"mixing angle must lie in [0, pi/2], got {theta}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "delta_m2", float(self.delta_m2))
        object.__setattr__(self, "units", UnitsMode.parse(self.units))


@dataclass(frozen=True)
class MassPhases:
    phi1: float = 0.0
    phi2: float = 0.0

    @classmethod
    def from_difference(cls, delta):
        return cls(0.0, delta)

    @property
    def delta(self):
        return self.phi2 - self.phi1


def mixing_matrix(theta):
    """Real 2x2 mixing matrix, rows (e, mu), columns (1, 2)."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


def phase_flat(params, l, e0):
    """Flat-space phase difference dm2 L / (2 E0)."""
    return phase_from_kinematics(params.delta_m2, l, e0, params.units)


def phase_curved_general(params, l_p, e_loc, r_a, r_b, source):
    """Phase over proper distance ``l_p`` between radii r_a and r_b, energy local at r_b.

    Weak-field form dm2 L_p / (2 E_loc) * [1 - GM (|ln(r_b/r_a)| / L_p - 1/r_b)].
    The absolute value makes the same expression hold for inward travel
    (r_b < r_a), where the coordinate distance is L_p - GM ln(r_a/r_b).
    """
    if not isinstance(source, GravitySource):
        source = GravitySource(source)
    r_a = np.asarray(r_a, dtype=float)
    r_b = np.asarray(r_b, dtype=float)
    l_p = np.asarray(l_p, dtype=float)
    source.check_outside(r_a, "r_a")
    source.check_outside(r_b, "r_b")
    flat = phase_flat(params, l_p, e_loc)
    if source.is_flat:
        return flat
    safe = np.where(l_p > 0, l_p, 1.0)
    log_per_length = np.where(l_p > 0, np.abs(np.log(r_b / r_a)) / safe, 0.0)
    out = flat * (1.0 - source.gm * (log_per_length - 1.0 / r_b))
    return out[()] if np.ndim(out) == 0 else out


def _check_baseline(l_p):
    l_p = np.asarray(l_p, dtype=float)
    if np.any(l_p < 0):
        raise DomainError("baseline must be non-negative")
    return l_p


def _correction_term(source, l_p, log_value):
    # GM * log_value / L_p with the L_p -> 0 limit (the log vanishes linearly)
    if source.is_flat:
        return 0.0
    safe = np.where(l_p > 0, l_p, 1.0)
    return np.where(l_p > 0, source.gm * log_value / safe, 0.0)


def phase_outward(params, l_p, e0_inf, r_a, source):
    """Outward phase referenced to the energy at infinity, first order in GM.

    dm2 L_p / (2 E0) * [1 - GM ln(1 + L_p/r_A) / L_p]; call with 2 L_p for the
    second detector.
    """
    if not isinstance(source, GravitySource):
        source = GravitySource(source)
    l_p = _check_baseline(l_p)
    source.check_outside(r_a, "source radius")
    detector_radius_weak(r_a, l_p, source, Direction.OUTWARD)
    flat = phase_flat(params, l_p, e0_inf)
    out = flat * (1.0 - _correction_term(source, l_p, np.log1p(l_p / r_a)))
    return out[()] if np.ndim(out) == 0 else out


def phase_inward(params, l_p, e0_inf, r_a_prime, source):
    """Inward phase referenced to the energy at infinity, first order in GM.

    dm2 L_p / (2 E0) * [1 + GM ln(1 - L_p/r'_A) / L_p]; needs L_p < r'_A.
    """
    if not isinstance(source, GravitySource):
        source = GravitySource(source)
    l_p = _check_baseline(l_p)
    source.check_outside(r_a_prime, "source radius")
    detector_radius_weak(r_a_prime, l_p, source, Direction.INWARD)
    flat = phase_flat(params, l_p, e0_inf)
    out = flat * (1.0 + _correction_term(source, l_p, np.log1p(-l_p / r_a_prime)))
    return out[()] if np.ndim(out) == 0 else out


def phase_local_weak(params, l_p, e_loc, r_a, source, direction):
    """Phase referenced to the local energy at the detector, first order in GM.

    Outward: dm2 L_p/(2 E_loc) {1 - GM [ln(1 + L_p/r_A)/L_p - 1/(L_p + r_A)]}
    Inward:  dm2 L_p/(2 E_loc) {1 + GM [ln(1 - L_p/r_A)/L_p + 1/(L_p + r_A)]}
    These are the expressions used for the coherence curves.
    """
    if not isinstance(source, GravitySource):
        source = GravitySource(source)
    direction = Direction.parse(direction)
    l_p = _check_baseline(l_p)
    source.check_outside(r_a, "source radius")
    detector_radius_weak(r_a, l_p, source, direction)
    flat = phase_flat(params, l_p, e_loc)
    if source.is_flat:
        return flat
    blueshift = source.gm / (l_p + r_a)
    if direction is Direction.OUTWARD:
        factor = 1.0 - (_correction_term(source, l_p, np.log1p(l_p / r_a)) - blueshift)
    else:
        factor = 1.0 + (_correction_term(source, l_p, np.log1p(-l_p / r_a)) + blueshift)
    out = flat * factor
    return out[()] if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class PropagationScenario:
    """Radial propagation from a source at ``r_source`` over proper baseline ``l_p``.

    ``energy`` is in TeV and is interpreted according to ``energy_reference``:
    measured at infinity (the K3 curves) or locally at the detector (the
    coherence curves).
    """

    params: OscillationParams = field(default_factory=OscillationParams)
    source: GravitySource = field(default_factory=GravitySource)
    direction: Direction = Direction.OUTWARD
    r_source: float = 1e8
    l_p: float = 3e8
    energy: float = 300.0
    energy_reference: EnergyReference = EnergyReference.INFINITY
    approx: Approx = Approx.WEAK

    def __post_init__(self):
        if not isinstance(self.source, GravitySource):
            object.__setattr__(self, "source", GravitySource(self.source))
        object.__setattr__(self, "direction", Direction.parse(self.direction))
        object.__setattr__(self, "energy_reference", EnergyReference(self.energy_reference))
        object.__setattr__(self, "approx", Approx(self.approx))
        for name in ("r_source", "l_p", "energy"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not self.energy > 0:
            raise DomainError("energy must be positive")
        if self.l_p < 0:
            raise DomainError("baseline must be non-negative")
        self.source.check_outside(self.r_source, "source radius")

    def flat(self):
        """Same kinematics with the gravitating mass switched off."""
        return replace(self, source=GravitySource(0.0))

    def detector_radius(self, baseline):
        if self.approx is Approx.EXACT:
            return detector_radius_exact(self.r_source, baseline, self.source, self.direction)
        return detector_radius_weak(self.r_source, baseline, self.source, self.direction)


def scenario_phase(scenario, baseline=None, energy=None):
    """Phase difference Phi_21 accumulated over ``baseline`` (default ``scenario.l_p``).

    ``baseline`` and ``energy`` (which overrides ``scenario.energy``) may be
    arrays; they broadcast against each other.
    """
    s = scenario
    baseline = s.l_p if baseline is None else baseline
    energy = s.energy if energy is None else energy
    baseline = np.asarray(baseline, dtype=float)
    if s.approx is Approx.WEAK:
        if s.energy_reference is EnergyReference.LOCAL:
            return phase_local_weak(s.params, baseline, energy, s.r_source, s.source, s.direction)
        if s.direction is Direction.OUTWARD:
            return phase_outward(s.params, baseline, energy, s.r_source, s.source)
        return phase_inward(s.params, baseline, energy, s.r_source, s.source)
    # exact geometry: dm2 |r_B - r_A| / (2 E_inf), with E_inf = E_loc sqrt(B(r_B))
    r_b = np.vectorize(s.detector_radius, otypes=[float])(baseline)
    e_inf = np.asarray(energy, dtype=float)
    if s.energy_reference is EnergyReference.LOCAL:
        e_inf = e_inf * np.sqrt(metric_potential(r_b, s.source))
    out = phase_flat(s.params, np.abs(r_b - s.r_source), e_inf)
    return out[()] if np.ndim(out) == 0 else out


def evolution_matrix(theta, phases):
    """Flavour-space transition amplitudes sum_k conj(U_dk) exp(-i phi_k) U_lk."""
    u = mixing_matrix(theta)
    if not isinstance(phases, MassPhases):
        phases = MassPhases(*phases)
    d = np.exp(-1j * np.array([phases.phi1, phases.phi2]))
    return np.einsum("dk,k,lk->dl", u.conj(), d, u)


def evolution_matrices(theta, delta_phase):
    """Vectorised :func:`evolution_matrix` for phi_1 = 0, phi_2 = delta_phase.

    Returns an array of shape ``delta_phase.shape + (2, 2)``.
    """
    u = mixing_matrix(theta)
    delta_phase = np.asarray(delta_phase, dtype=float)
    d = np.stack([np.ones_like(delta_phase, dtype=complex), np.exp(-1j * delta_phase)], axis=-1)
    return np.einsum("dk,...k,lk->...dl", u.conj(), d, u)


def transition_probability(theta, delta_phase):
    """sin^2(2 theta) sin^2(delta_phase / 2)."""
    return np.sin(2.0 * theta) ** 2 * np.sin(0.5 * np.asarray(delta_phase)) ** 2


def survival_probability(theta, delta_phase):
    return 1.0 - transition_probability(theta, delta_phase)
