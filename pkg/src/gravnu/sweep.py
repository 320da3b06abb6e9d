"""Flat-versus-curved parameter sweeps and their CSV/JSON serialisation.

Two sweep kinds exist:

``k3_energy``
    K3 against the energy at infinity E0 [TeV] at fixed proper baseline.
``coherence_baseline``
    C_mu against the proper baseline L_p [km] at fixed local energy.

Each grid point is evaluated twice, once with the requested GM and once with
GM = 0 and otherwise identical kinematics, so the gravitational terms are the
only difference between the two series.
"""

import json
from dataclasses import dataclass, fields, replace
from enum import Enum

import numpy as np

from . import __version__
from .coherence import coherence_from_probability
from .errors import DomainError, GravnuError, ValidationError
from .geometry import Direction, GravitySource
from .lgi import flavor_index, k3_from_phases
from .oscillation import (
    Approx,
    EnergyReference,
    OscillationParams,
    PropagationScenario,
    scenario_phase,
    transition_probability,
)
from .units import UnitsMode

__all__ = [
    "SweepKind",
    "SweepSpec",
    "SweepResult",
    "PRESETS",
    "DEFAULT_STEPS",
    "preset",
    "run_sweep",
    "run_k3_energy_sweep",
    "run_coherence_baseline_sweep",
    "local_maxima",
    "refined_max",
    "format_number",
]

DEFAULT_STEPS = 2000


class SweepKind(str, Enum):
    K3_ENERGY = "k3_energy"
    COHERENCE_BASELINE = "coherence_baseline"


@dataclass(frozen=True)
class SweepSpec:
    """Fully resolved description of one sweep.

    ``l_p`` is the fixed baseline of a K3 sweep and ``energy`` the fixed local
    energy of a coherence sweep; the other field is carried but unused.
    """

    kind: SweepKind = SweepKind.K3_ENERGY
    direction: Direction = Direction.OUTWARD
    theta: float = 0.59
    delta_m2: float = 7.92e-5
    gm: float = 3e7
    r_source: float = 1e8
    l_p: float = 3e8
    energy: float = 300.0
    x_min: float = 150.0
    x_max: float = 500.0
    steps: int = DEFAULT_STEPS
    units: UnitsMode = UnitsMode.PAPER_FIGURE
    alpha: str = "mu"
    approx: Approx = Approx.WEAK

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", SweepKind(self.kind))
            object.__setattr__(self, "direction", Direction.parse(self.direction))
            object.__setattr__(self, "units", UnitsMode.parse(self.units))
            object.__setattr__(self, "approx", Approx(self.approx))
        except ValueError as exc:
            raise ValidationError(str(exc)) from None
        for name in ("theta", "delta_m2", "gm", "r_source", "l_p", "energy", "x_min", "x_max"):
            object.__setattr__(self, name, float(getattr(self, name)))
        steps = self.steps
        if isinstance(steps, float) and steps.is_integer():
            steps = int(steps)
        if not isinstance(steps, (int, np.integer)) or isinstance(steps, bool):
            raise ValidationError(f"steps must be an integer, got {self.steps!r}")
        object.__setattr__(self, "steps", int(steps))
        alpha = str(self.alpha).lower()
        flavor_index(alpha)
        object.__setattr__(self, "alpha", alpha)

    # -- serialisation ---------------------------------------------------------

    def to_dict(self):
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            out[f.name] = value.value if isinstance(value, Enum) else value
        return out

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown sweep fields: {sorted(unknown)}")
        return cls(**data)

    # -- derived objects ---------------------------------------------------------

    def grid(self):
        return np.linspace(self.x_min, self.x_max, self.steps)

    def scenario(self, gm=None):
        """Base scenario for the curved series (or for a given ``gm``)."""
        reference = (
            EnergyReference.INFINITY if self.kind is SweepKind.K3_ENERGY else EnergyReference.LOCAL
        )
        return PropagationScenario(
            params=OscillationParams(self.theta, self.delta_m2, self.units),
            source=GravitySource(self.gm if gm is None else gm),
            direction=self.direction,
            r_source=self.r_source,
            l_p=self.l_p,
            energy=self.energy,
            energy_reference=reference,
            approx=self.approx,
        )

    def validate(self):
        """Check the whole grid before any observable is computed."""
        if self.steps < 2:
            raise ValidationError("a sweep needs at least 2 steps")
        if not self.x_min < self.x_max:
            raise ValidationError("grid minimum must be below its maximum")
        try:
            scenario = self.scenario()
            OscillationParams(self.theta, self.delta_m2, self.units)
            if self.kind is SweepKind.K3_ENERGY:
                if self.x_min <= 0:
                    raise DomainError("energies must be positive")
                if self.direction is Direction.INWARD and not 2 * self.l_p < self.r_source:
                    raise DomainError("inward baseline exceeds source radius (2 L_p must be < r_source)")
                for baseline in (self.l_p, 2 * self.l_p):
                    scenario.detector_radius(baseline)
            else:
                if self.x_min < 0:
                    raise DomainError("baselines must be non-negative")
                if self.direction is Direction.INWARD and not self.x_max < self.r_source:
                    raise DomainError("inward baseline exceeds source radius")
                np.vectorize(scenario.detector_radius, otypes=[float])(self.grid())
        except GravnuError as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(str(exc)) from exc
        return self


def _preset_table():
    common = dict(theta=0.59, delta_m2=7.92e-5, gm=3e7, units=UnitsMode.PAPER_FIGURE)
    return {
        "fig1a": SweepSpec(kind=SweepKind.K3_ENERGY, direction=Direction.OUTWARD,
                           r_source=1e8, l_p=3e8, x_min=150.0, x_max=500.0, **common),
        "fig1b": SweepSpec(kind=SweepKind.K3_ENERGY, direction=Direction.INWARD,
                           r_source=6.5e8, l_p=3e8, x_min=150.0, x_max=500.0, **common),
        "fig2a": SweepSpec(kind=SweepKind.COHERENCE_BASELINE, direction=Direction.OUTWARD,
                           r_source=1e8, energy=300.0, x_min=2e8, x_max=4e8, **common),
        "fig2b": SweepSpec(kind=SweepKind.COHERENCE_BASELINE, direction=Direction.INWARD,
                           r_source=4e8, energy=300.0, x_min=1.5e8, x_max=3e8, **common),
    }


PRESETS = _preset_table()


def preset(name, **overrides):
    try:
        spec = PRESETS[name]
    except KeyError:
        raise ValidationError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return replace(spec, **overrides) if overrides else spec


# -- maxima ------------------------------------------------------------------


def _parabolic(x, y, i):
    """Vertex of the parabola through points i-1, i, i+1 (uniform grid)."""
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom >= 0:
        return x[i], y1
    shift = 0.5 * (y0 - y2) / denom
    h = x[i + 1] - x[i]
    return x[i] + shift * h, y1 - 0.25 * (y0 - y2) * shift


def local_maxima(x, y):
    """Interior local maxima, refined with a three-point parabola.

    Returns arrays ``(positions, values)`` in increasing ``x`` order.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    idx = np.nonzero((y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:]))[0] + 1
    pos = np.empty(idx.size)
    val = np.empty(idx.size)
    for k, i in enumerate(idx):
        pos[k], val[k] = _parabolic(x, y, i)
    return pos, val


def refined_max(x, y):
    """Grid argmax with three-point parabolic refinement."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    i = int(np.argmax(y))
    if 0 < i < y.size - 1:
        return _parabolic(x, y, i)
    return x[i], y[i]


# -- results -----------------------------------------------------------------


def format_number(value):
    """17 significant digits, enough to round-trip any double."""
    return format(float(value), ".17g")


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    x: np.ndarray
    flat: np.ndarray
    curved: np.ndarray

    def __post_init__(self):
        for name in ("x", "flat", "curved"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def rows(self):
        return np.column_stack([self.x, self.flat, self.curved])

    def max_flat(self):
        return refined_max(self.x, self.flat)[1]

    def max_curved(self):
        return refined_max(self.x, self.curved)[1]

    def violations(self, series="curved"):
        """Grid points where K3 exceeds 1 (strictly); empty for coherence sweeps."""
        if self.spec.kind is not SweepKind.K3_ENERGY:
            return np.empty(0)
        y = self.curved if series == "curved" else self.flat
        return self.x[y > 1.0]

    def summary(self):
        out = {
            "max_flat": float(self.max_flat()),
            "max_curved": float(self.max_curved()),
        }
        if self.spec.kind is SweepKind.K3_ENERGY:
            out["violations"] = {
                "flat": [float(v) for v in self.violations("flat")],
                "curved": [float(v) for v in self.violations("curved")],
            }
        else:
            out["violations"] = None
        return out

    def metadata(self):
        return {
            "tool": "gravnu",
            "version": __version__,
            "units_mode": self.spec.units.value,
            "spec": self.spec.to_dict(),
        }

    def to_csv(self):
        meta = self.metadata()
        summary = self.summary()
        lines = [
            f"# tool: {meta['tool']} {meta['version']}",
            f"# units_mode: {meta['units_mode']}",
            "# spec: " + json.dumps(meta["spec"], sort_keys=True),
            f"# max_flat: {format_number(summary['max_flat'])}",
            f"# max_curved: {format_number(summary['max_curved'])}",
        ]
        if summary["violations"] is not None:
            lines.append(f"# violations_flat: {len(summary['violations']['flat'])}")
            lines.append(f"# violations_curved: {len(summary['violations']['curved'])}")
        lines.append("x,flat,curved")
        lines.extend(",".join(format_number(v) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"

    def to_json(self):
        payload = {
            "tool": "gravnu",
            "version": __version__,
            "units_mode": self.spec.units.value,
            "spec": self.spec.to_dict(),
            "rows": self.rows.tolist(),
            "summary": self.summary(),
        }
        return json.dumps(payload, sort_keys=True) + "\n"

    def dumps(self, fmt="csv"):
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValidationError(f"unknown output format {fmt!r}")

    @classmethod
    def from_csv(cls, text):
        """Rebuild a result from :meth:`to_csv` output."""
        spec = None
        rows = []
        for line in text.splitlines():
            if line.startswith("# spec: "):
                spec = SweepSpec.from_dict(json.loads(line[len("# spec: "):]))
            elif line and not line.startswith("#") and line != "x,flat,curved":
                rows.append([float(v) for v in line.split(",")])
        if spec is None:
            raise ValidationError("CSV carries no spec metadata line")
        rows = np.array(rows, dtype=float).reshape(-1, 3)
        return cls(spec, rows[:, 0], rows[:, 1], rows[:, 2])

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        rows = np.array(data["rows"], dtype=float).reshape(-1, 3)
        return cls(SweepSpec.from_dict(data["spec"]), rows[:, 0], rows[:, 1], rows[:, 2])


# -- runners -----------------------------------------------------------------


def _k3_series(spec, gm, energies):
    scenario = spec.scenario(gm)
    phase_1 = scenario_phase(scenario, spec.l_p, energies)
    phase_2 = scenario_phase(scenario, 2.0 * spec.l_p, energies)
    return k3_from_phases(spec.theta, phase_1, phase_2, spec.alpha)


def _coherence_series(spec, gm, baselines):
    scenario = spec.scenario(gm)
    phase = scenario_phase(scenario, baselines, spec.energy)
    return coherence_from_probability(transition_probability(spec.theta, phase))


def run_k3_energy_sweep(spec):
    """K3 against E0 for flat and curved spacetime."""
    if spec.kind is not SweepKind.K3_ENERGY:
        raise ValidationError("spec is not a k3_energy sweep")
    spec.validate()
    x = spec.grid()
    return SweepResult(spec, x, _k3_series(spec, 0.0, x), _k3_series(spec, spec.gm, x))


def run_coherence_baseline_sweep(spec):
    """C_mu against L_p for flat and curved spacetime."""
    if spec.kind is not SweepKind.COHERENCE_BASELINE:
        raise ValidationError("spec is not a coherence_baseline sweep")
    spec.validate()
    x = spec.grid()
    return SweepResult(spec, x, _coherence_series(spec, 0.0, x), _coherence_series(spec, spec.gm, x))


def run_sweep(spec):
    if spec.kind is SweepKind.K3_ENERGY:
        return run_k3_energy_sweep(spec)
    return run_coherence_baseline_sweep(spec)
