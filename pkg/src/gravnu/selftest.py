"""Randomised consistency suites behind ``gravnu selftest``.

Every suite draws its sample from one seeded generator, so a given seed
reproduces the exact same inputs. Each suite returns a :class:`SuiteResult`.
"""

import hashlib
from typing import NamedTuple

import numpy as np

from .coherence import coherence_mu, coherence_mu_density
from .errors import GravnuError
from .geometry import (
    Direction,
    GravitySource,
    detector_radius_exact,
    proper_distance_exact,
    proper_distance_quadrature,
)
from .lgi import k3, k3_direct_oracle, k3_from_phases, k3_oracle_from_phases
from .oscillation import (
    Approx,
    EnergyReference,
    OscillationParams,
    PropagationScenario,
    evolution_matrix,
    phase_flat,
    phase_inward,
    phase_outward,
    survival_probability,
    transition_probability,
)
from .units import UnitsMode

__all__ = ["SuiteResult", "run_all", "format_table", "random_scenario", "sample_fingerprint"]

TOL = 1e-12
ROUND_TRIP_TOL = 1e-10


class SuiteResult(NamedTuple):
    name: str
    status: str  # PASS, FAIL or SKIP
    detail: str

    @property
    def ok(self):
        return self.status != "FAIL"


def random_scenario(rng, gm, energy_reference=EnergyReference.INFINITY, approx=Approx.WEAK):
    """Valid scenario with a phase over L_p roughly uniform in (0, 4 pi]."""
    direction = Direction.OUTWARD if rng.random() < 0.5 else Direction.INWARD
    theta = rng.uniform(0.0, np.pi / 2)
    if direction is Direction.OUTWARD:
        r_source = rng.uniform(3.0, 20.0) * max(gm, 1e7)
        l_p = rng.uniform(0.1, 3.0) * r_source
    else:
        r_source = rng.uniform(30.0, 80.0) * max(gm, 1e7)
        l_p = rng.uniform(0.05, 0.45) * r_source
    params = OscillationParams(theta, 7.92e-5, UnitsMode.PAPER_FIGURE)
    target = rng.uniform(0.05, 4 * np.pi)
    energy = params.delta_m2 * l_p / (2.0 * target)
    return PropagationScenario(
        params=params,
        source=GravitySource(gm),
        direction=direction,
        r_source=r_source,
        l_p=l_p,
        energy=energy,
        energy_reference=energy_reference,
        approx=approx,
    )


def _suite_oracle(rng, gm, n):
    worst = 0.0
    worst_imag = 0.0
    for _ in range(n):
        theta = rng.uniform(0.0, np.pi / 2)
        p1, p2 = rng.uniform(0.0, 4 * np.pi, 2)
        for alpha in ("e", "mu"):
            real, imag = k3_oracle_from_phases(theta, p1, p2, alpha, return_imag=True)
            worst = max(worst, abs(float(k3_from_phases(theta, p1, p2, alpha)) - real))
            worst_imag = max(worst_imag, abs(imag))
    for _ in range(n):
        s = random_scenario(rng, gm if rng.random() < 0.5 else 0.0)
        for alpha in ("e", "mu"):
            worst = max(worst, abs(k3(s, alpha) - k3_direct_oracle(s, alpha)))
    ok = worst <= TOL and worst_imag <= TOL
    return SuiteResult("oracle-equivalence", "PASS" if ok else "FAIL",
                       f"max |k3 - oracle| = {worst:.2e}, max imag = {worst_imag:.2e}")


def _suite_unitarity(rng, n):
    worst_u = 0.0
    worst_p = 0.0
    for _ in range(n):
        theta = rng.uniform(0.0, np.pi / 2)
        phases = rng.uniform(0.0, 4 * np.pi, 2)
        u = evolution_matrix(theta, phases)
        worst_u = max(worst_u, np.max(np.abs(u.conj().T @ u - np.eye(2))))
        delta = phases[1] - phases[0]
        # probabilities from amplitudes, independent of the closed form
        p_trans = abs(u[0, 1]) ** 2
        p_surv = abs(u[1, 1]) ** 2
        worst_p = max(worst_p, abs(p_trans + p_surv - 1.0))
        worst_p = max(worst_p, abs(transition_probability(theta, delta) + survival_probability(theta, delta) - 1.0))
        worst_p = max(worst_p, abs(transition_probability(theta, delta) - p_trans))
    ok = worst_u <= TOL and worst_p <= TOL
    return SuiteResult("unitarity", "PASS" if ok else "FAIL",
                       f"max |U^+U - I| = {worst_u:.2e}, max prob error = {worst_p:.2e}")


def _suite_flat_reduction(rng, n):
    flat = GravitySource(0.0)
    mismatches = 0
    for _ in range(n):
        params = OscillationParams(rng.uniform(0.0, np.pi / 2), rng.uniform(1e-5, 1e-3), UnitsMode.PAPER_FIGURE)
        r_a = rng.uniform(1e8, 1e9)
        l_p = rng.uniform(0.0, 0.99) * r_a
        e0 = rng.uniform(10.0, 1000.0)
        reference = phase_flat(params, l_p, e0)
        if phase_outward(params, l_p, e0, r_a, flat) != reference:
            mismatches += 1
        if phase_inward(params, l_p, e0, r_a, flat) != reference:
            mismatches += 1
    return SuiteResult("gm-to-zero", "PASS" if mismatches == 0 else "FAIL",
                       f"{mismatches} mismatches in {2 * n} comparisons")


def _suite_round_trip(rng, gm, n):
    gm = gm if gm > 0 else 3e7
    source = GravitySource(gm)
    worst_rt = 0.0
    worst_q = 0.0
    for _ in range(n):
        r_a = rng.uniform(3.0, 30.0) * gm
        direction = Direction.OUTWARD if rng.random() < 0.5 else Direction.INWARD
        fraction = rng.uniform(0.01, 3.0) if direction is Direction.OUTWARD else rng.uniform(0.01, 0.6)
        l_p = fraction * r_a
        r_b = detector_radius_exact(r_a, l_p, source, direction)
        lo, hi = sorted((r_a, r_b))
        worst_rt = max(worst_rt, abs(proper_distance_exact(lo, hi, source) - l_p) / l_p)
        quad = proper_distance_quadrature(lo, hi, source)
        worst_q = max(worst_q, abs(proper_distance_exact(lo, hi, source) - quad) / quad)
    ok = worst_rt <= ROUND_TRIP_TOL and worst_q <= ROUND_TRIP_TOL
    return SuiteResult("round-trip", "PASS" if ok else "FAIL",
                       f"max inversion residual = {worst_rt:.2e}, max quadrature gap = {worst_q:.2e}")


def _suite_coherence(rng, gm, n):
    worst = 0.0
    for _ in range(n):
        s = random_scenario(rng, gm if rng.random() < 0.5 else 0.0, EnergyReference.LOCAL)
        worst = max(worst, abs(coherence_mu(s) - coherence_mu_density(s)))
    return SuiteResult("coherence-shortcut", "PASS" if worst <= TOL else "FAIL",
                       f"max |shortcut - l1(rho)| = {worst:.2e}")


def sample_fingerprint(seed, n=64):
    """Short hash of the first draws of the seeded generator."""
    draws = np.random.default_rng(seed).random(n)
    return hashlib.sha256(draws.tobytes()).hexdigest()[:16]


def run_all(gm=3e7, seed=0, samples=200, theta=None, delta_m2=None):
    """Run every suite; a bad configuration fails the first row and skips the rest."""
    try:
        GravitySource(gm)
        if theta is not None or delta_m2 is not None:
            OscillationParams(0.59 if theta is None else theta, 7.92e-5 if delta_m2 is None else delta_m2)
    except GravnuError as exc:
        results = [SuiteResult("config", "FAIL", str(exc))]
        for name in ("oracle-equivalence", "unitarity", "gm-to-zero", "round-trip", "coherence-shortcut"):
            results.append(SuiteResult(name, "SKIP", "invalid configuration"))
        return results
    rng = np.random.default_rng(seed)
    return [
        SuiteResult("config", "PASS", f"gm = {gm:g} km, seed = {seed}, samples = {samples}, sample id {sample_fingerprint(seed)}"),
        _suite_oracle(rng, gm, samples),
        _suite_unitarity(rng, samples),
        _suite_flat_reduction(rng, samples),
        _suite_round_trip(rng, gm, max(samples // 4, 1)),
        _suite_coherence(rng, gm, samples),
    ]


def format_table(results):
    width = max(len(r.name) for r in results)
    lines = [f"{'suite'.ljust(width)}  status  detail"]
    for r in results:
        lines.append(f"{r.name.ljust(width)}  {r.status.ljust(6)}  {r.detail}")
    return "\n".join(lines)
