"""Physical constants and unit conversions.

Everything downstream works in Hartree atomic units (hbar = 1): energy in
hartree, time in atomic time units, mass in electron masses, length in bohr,
dipole moment in e*bohr. Configs and reports use spectroscopic units
(eV, cm^-1, fs, AMU, Debye); this module is the single place where the
conversion factors live.

Adopted values are the CODATA 2018 recommendations:
  hartree        = 27.211386245988 eV
  hartree/(h c)  = 219474.6313632 cm^-1
  atomic time    = 0.024188843265857 fs
  atomic mass u  = 1822.888486209 m_e
  e*a0           = 2.541746473 Debye
"""

from __future__ import annotations

# energy
HARTREE_EV = 27.211386245988      # 1 hartree in eV
HARTREE_CM1 = 219474.6313632      # 1 hartree in cm^-1

# time
ATU_FS = 0.024188843265857        # 1 atomic time unit in fs
FS_ATU = 1.0 / ATU_FS             # 1 fs in atomic time units

# mass
AMU_ME = 1822.888486209           # 1 AMU in electron masses

# dipole
EBOHR_DEBYE = 2.541746473         # 1 e*bohr in Debye

ENERGY = "energy"
TIME = "time"
MASS = "mass"
DIPOLE = "dipole"
LENGTH = "length"

# unit -> (dimension, value of one unit in the canonical atomic unit)
_UNITS = {
    "hartree": (ENERGY, 1.0),
    "ev": (ENERGY, 1.0 / HARTREE_EV),
    "cm-1": (ENERGY, 1.0 / HARTREE_CM1),
    "atu": (TIME, 1.0),
    "fs": (TIME, FS_ATU),
    "m_e": (MASS, 1.0),
    "amu": (MASS, AMU_ME),
    "e_bohr": (DIPOLE, 1.0),
    "debye": (DIPOLE, 1.0 / EBOHR_DEBYE),
    "bohr": (LENGTH, 1.0),
}


class UnitError(ValueError):
    """Unknown unit name or conversion between incompatible dimensions."""


def _lookup(unit: str):
    try:
        return _UNITS[unit.lower()]
    except KeyError:
        raise UnitError(
            f"unknown unit {unit!r}; known units: {sorted(_UNITS)}"
        ) from None


def convert(value: float, frm: str, to: str) -> float:
    """Convert ``value`` from unit ``frm`` to unit ``to``.

    Raises UnitError if the two units measure different dimensions.
    """
    dim_a, fac_a = _lookup(frm)
    dim_b, fac_b = _lookup(to)
    if dim_a != dim_b:
        raise UnitError(
            f"cannot convert {frm!r} ({dim_a}) to {to!r} ({dim_b})"
        )
    return value * (fac_a / fac_b)


def to_au(value: float, unit: str) -> float:
    """Express ``value`` given in ``unit`` in the canonical atomic unit."""
    return value * _lookup(unit)[1]


def from_au(value: float, unit: str) -> float:
    """Express an atomic-unit ``value`` in ``unit``."""
    return value / _lookup(unit)[1]


def known_units() -> dict[str, tuple[str, float]]:
    """Mapping unit -> (dimension, factor to canonical atomic unit)."""
    return dict(_UNITS)
