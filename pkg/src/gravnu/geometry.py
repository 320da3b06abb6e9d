"""Radial Schwarzschild geometry in geometrized units (G = c = 1, lengths in km).

All radii are measured from the centre of the gravitating body. The mass enters
only through ``gm`` = GM, a length; ``gm = 0`` is flat spacetime.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import integrate

from .errors import DomainError, HorizonError, InversionError, ValidationError

__all__ = [
    "Direction",
    "Fidelity",
    "GravitySource",
    "FLAT",
    "metric_potential",
    "proper_distance_exact",
    "proper_distance_weak",
    "proper_distance_quadrature",
    "detector_radius_weak",
    "detector_radius_exact",
    "local_energy",
]


class Direction(str, Enum):
    OUTWARD = "outward"
    INWARD = "inward"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(
                f"unknown direction {value!r}; expected 'outward' or 'inward'"
            ) from None


class Fidelity(str, Enum):
    FIRST_ORDER = "first_order"
    EXACT = "exact"


@dataclass(frozen=True)
class GravitySource:
    """Point mass described by GM in km."""

    gm: float = 0.0

    def __post_init__(self):
        gm = float(self.gm)
        if not np.isfinite(gm) or gm < 0:
            raise ValidationError(f"gm must be a finite non-negative length, got {self.gm!r}")
        object.__setattr__(self, "gm", gm)

    @property
    def horizon(self):
        return 2.0 * self.gm

    @property
    def is_flat(self):
        return self.gm == 0.0

    def check_outside(self, r, what="radius"):
        r = np.asarray(r, dtype=float)
        if np.any(~(r > self.horizon)):
            raise HorizonError(
                f"{what} must lie outside the horizon r = 2GM = {self.horizon:g} km"
            )


FLAT = GravitySource(0.0)


def _as_source(source):
    if isinstance(source, GravitySource):
        return source
    return GravitySource(source)


def _scalar(x):
    return x[()] if isinstance(x, np.ndarray) and x.ndim == 0 else x


def metric_potential(r, source):
    """B(r) = 1 - 2GM/r."""
    source = _as_source(source)
    r = np.asarray(r, dtype=float)
    source.check_outside(r)
    return _scalar(1.0 - 2.0 * source.gm / r)


def _check_ordered(r_a, r_b):
    if np.any(r_b < r_a):
        raise DomainError("proper distance needs r_b >= r_a")


def proper_distance_exact(r_a, r_b, source):
    """Radial proper distance between r_a <= r_b, closed form of the integral of 1/sqrt(B).

    The closed form is r sqrt(1 - 2m/r) + 2m ln(sqrt(r - 2m) + sqrt(r)) evaluated
    between the limits. Both differences are rewritten so they carry an explicit
    factor (r_b - r_a); this keeps full relative precision for short intervals.
    """
    source = _as_source(source)
    r_a = np.asarray(r_a, dtype=float)
    r_b = np.asarray(r_b, dtype=float)
    source.check_outside(r_a, "r_a")
    _check_ordered(r_a, r_b)
    m2 = source.horizon
    dr = r_b - r_a
    sa, sb = np.sqrt(r_a), np.sqrt(r_b)
    ta, tb = np.sqrt(r_a - m2), np.sqrt(r_b - m2)
    # sqrt(r_b (r_b - 2m)) - sqrt(r_a (r_a - 2m))
    root_term = dr * (r_b + r_a - m2) / (sb * tb + sa * ta)
    # ln((tb + sb) / (ta + sa)) via log1p of the relative increment
    increment = dr / (tb + ta) + dr / (sb + sa)
    log_term = m2 * np.log1p(increment / (ta + sa))
    return _scalar(root_term + log_term)


def proper_distance_weak(r_a, r_b, source):
    """First-order proper distance r_b - r_a + GM ln(r_b / r_a)."""
    source = _as_source(source)
    r_a = np.asarray(r_a, dtype=float)
    r_b = np.asarray(r_b, dtype=float)
    if np.any(~(r_a > 0)):
        raise DomainError("radii must be positive")
    _check_ordered(r_a, r_b)
    return _scalar(r_b - r_a + source.gm * np.log(r_b / r_a))


def proper_distance_quadrature(r_a, r_b, source, rtol=1e-12):
    """Proper distance by adaptive Gauss-Kronrod quadrature of 1/sqrt(B(r)).

    Independent of the closed form; used as a cross-check.
    """
    source = _as_source(source)
    r_a, r_b = float(r_a), float(r_b)
    source.check_outside(r_a, "r_a")
    _check_ordered(r_a, r_b)
    if r_a == r_b:
        return 0.0
    m2 = source.horizon
    # integrate the excess over the flat integrand, which is small and smooth
    value, _ = integrate.quad(
        lambda r: 1.0 / np.sqrt(1.0 - m2 / r) - 1.0,
        r_a, r_b, epsabs=0.0, epsrel=rtol, limit=200,
    )
    return (r_b - r_a) + value


def detector_radius_weak(r_source, l_p, source, direction):
    """Detector radius a proper distance ``l_p`` away, to first order in GM.

    Outward: r_A + L - GM ln(1 + L/r_A).
    Inward:  r_A - L - GM ln(1 - L/r_A), which needs L < r_A.
    """
    source = _as_source(source)
    direction = Direction.parse(direction)
    r_source = np.asarray(r_source, dtype=float)
    l_p = np.asarray(l_p, dtype=float)
    if np.any(~(r_source > 0)):
        raise DomainError("source radius must be positive")
    if np.any(l_p < 0):
        raise DomainError("baseline must be non-negative")
    if direction is Direction.OUTWARD:
        r_b = r_source + l_p - source.gm * np.log1p(l_p / r_source)
    else:
        if np.any(l_p >= r_source):
            raise DomainError("inward baseline exceeds source radius")
        r_b = r_source - l_p - source.gm * np.log1p(-l_p / r_source)
    source.check_outside(r_b, "detector radius")
    return _scalar(r_b)


def _safe_newton(f, dfdx, lo, hi, rtol, scale, maxiter=200):
    """Root of increasing f on [lo, hi] with f(lo) <= 0 <= f(hi).

    Newton steps that leave the bracket (or stall) fall back to bisection.
    """
    x = 0.5 * (lo + hi)
    for _ in range(maxiter):
        fx = f(x)
        if abs(fx) <= rtol * scale:
            return x
        if fx < 0:
            lo = x
        else:
            hi = x
        step = fx / dfdx(x)
        x_new = x - step
        if not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
        if x_new == x:
            return x
        x = x_new
    raise InversionError("proper-distance inversion did not converge")


def detector_radius_exact(r_source, l_p, source, direction, rtol=1e-13):
    """Detector radius at exact proper distance ``l_p`` from ``r_source``.

    Inverts :func:`proper_distance_exact` by safeguarded Newton iteration; the
    integrand 1/sqrt(B) is positive and monotone so the bracket is always valid.
    """
    source = _as_source(source)
    direction = Direction.parse(direction)
    r_source, l_p = float(r_source), float(l_p)
    source.check_outside(r_source, "source radius")
    if l_p < 0:
        raise DomainError("baseline must be non-negative")
    if l_p == 0:
        return r_source
    h = source.horizon

    def slope(r):
        return 1.0 / np.sqrt(1.0 - h / r)

    if direction is Direction.OUTWARD:
        # proper distance exceeds coordinate distance, so the root is below r_A + L
        def f(r):
            return proper_distance_exact(r_source, r, source) - l_p

        return _safe_newton(f, slope, r_source, r_source + l_p, rtol, l_p)

    # proper distance is never shorter than coordinate distance, so the root is
    # at or above r_A - L; only a horizon-limited bracket can lack a root
    lo = r_source - l_p
    if lo <= h:
        lo = np.nextafter(h, np.inf)
        if l_p > proper_distance_exact(lo, r_source, source):
            raise InversionError("inward baseline reaches the horizon")

    def g(r):
        # increasing in r when written as l_p - distance(r, r_A)
        return l_p - proper_distance_exact(r, r_source, source)

    r_b = _safe_newton(g, slope, lo, r_source, rtol, l_p)
    source.check_outside(r_b, "detector radius")
    return r_b


def local_energy(e_inf, r, source, fidelity=Fidelity.FIRST_ORDER):
    """Energy seen by a static observer at ``r`` given the energy at infinity.

    ``FIRST_ORDER`` returns E (1 + GM/r); ``EXACT`` returns E / sqrt(B(r)).
    """
    source = _as_source(source)
    fidelity = Fidelity(fidelity)
    e_inf = np.asarray(e_inf, dtype=float)
    r = np.asarray(r, dtype=float)
    if np.any(~(e_inf > 0)):
        raise DomainError("energy must be positive")
    source.check_outside(r)
    if fidelity is Fidelity.FIRST_ORDER:
        return _scalar(e_inf * (1.0 + source.gm / r))
    return _scalar(e_inf / np.sqrt(1.0 - 2.0 * source.gm / r))
