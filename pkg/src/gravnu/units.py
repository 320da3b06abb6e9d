"""Conversion of (eV^2, km, TeV) kinematics into oscillation phases."""

from enum import Enum

import numpy as np

from .errors import DomainError

__all__ = [
    "HBARC_MEV_FM",
    "UnitsMode",
    "conversion_constant",
    "phase_from_kinematics",
]

# CODATA 2018 value of hbar*c.
HBARC_MEV_FM = 197.3269804

# hbar*c in eV*km: 197.3269804 MeV fm = 1.973269804e-10 eV km.
_HBARC_EV_KM = HBARC_MEV_FM * 1e6 * 1e-18

# 1/(hbar c) such that dm2[eV^2] * L[km] / E[GeV] becomes radians:
# 1e-9 / 1.973269804e-10 = 5.06773 (documented to 6 significant digits).
PHYSICAL_PER_GEV = 1e-9 / _HBARC_EV_KM


class UnitsMode(str, Enum):
    """How dm2 [eV^2], L [km] and E [TeV] are combined into a phase.

    ``PHYSICAL`` applies the true hbar*c conversion. ``PAPER_FIGURE`` uses the
    raw number dm2 * L / (2 E) with E in TeV, which is the only convention
    under which the published comparison figures oscillate over 150-500 TeV.
    """

    PHYSICAL = "physical"
    PAPER_FIGURE = "paper_figure"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(
                f"unknown units mode {value!r}; expected 'physical' or 'paper_figure'"
            ) from None


def conversion_constant(mode):
    """Radians per (eV^2 km / TeV) for the given mode."""
    mode = UnitsMode.parse(mode)
    if mode is UnitsMode.PHYSICAL:
        # energies arrive in TeV; 1 TeV = 1e3 GeV
        return PHYSICAL_PER_GEV * 1e-3
    return 1.0


def phase_from_kinematics(delta_m2, length, energy, mode=UnitsMode.PHYSICAL):
    """Oscillation phase dm2 * L / (2 E) in radians.

    Parameters
    ----------
    delta_m2 : float or array_like
        Mass-squared splitting in eV^2.
    length : float or array_like
        Propagation length in km, ``>= 0``.
    energy : float or array_like
        Neutrino energy in TeV, ``> 0``.
    mode : UnitsMode or str

    Returns
    -------
    float or ndarray
        The full phase difference (not halved).
    """
    energy = np.asarray(energy, dtype=float)
    length = np.asarray(length, dtype=float)
    if np.any(~(energy > 0)):
        raise DomainError("energy must be positive")
    if np.any(length < 0):
        raise DomainError("length must be non-negative")
    out = conversion_constant(mode) * np.asarray(delta_m2, dtype=float) * length / (2.0 * energy)
    return out[()] if out.ndim == 0 else out
