"""Molecular model: Morse/harmonic potentials, dipole functions, 1D eigensolver.

Potentials and dipole functions are parametrized along the vibrational
coordinate q (bohr). The bundled presets are two Morse curves ("VA", "VB"),
a harmonic curve with the same fundamental ("VC"), and two dipole functions
("PR" polar-right, "NP" non-polar). All quantities in atomic units unless a
suffix says otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import units
from .qgrid import Grid1D

__all__ = [
    "MorseParams", "HarmonicParams", "DipoleParams",
    "POTENTIALS", "DIPOLES", "FUNDAMENTAL_CM1",
    "potential_energy", "dipole_moment", "morse_level", "anharmonic_shift",
    "vibrational_eigenstates", "transition_dipole",
]

#: nominal fundamental frequency shared by the presets (cm^-1)
FUNDAMENTAL_CM1 = 1838.26

#: reduced mass of the presets: 8.5 AMU, in electron masses
REDUCED_MASS = 8.5 * units.AMU_ME


@dataclass(frozen=True)
class MorseParams:
    """Morse curve De*(1 - exp(-alpha*(q - q_eq)))**2 - De."""

    de: float        # dissociation energy, hartree
    alpha: float     # range/anharmonicity parameter, 1/bohr
    q_eq: float      # equilibrium coordinate, bohr
    mass: float      # reduced mass, electron masses

    def __post_init__(self):
        if self.de <= 0 or self.alpha <= 0 or self.mass <= 0:
            raise ValueError("Morse parameters must be positive")
        if self.bound_states < 3:
            raise ValueError("Morse well too shallow: need at least v = 0, 1, 2")

    @property
    def omega_e(self) -> float:
        """Harmonic frequency alpha*sqrt(2 De / mass), hartree."""
        return self.alpha * math.sqrt(2.0 * self.de / self.mass)

    @property
    def chi(self) -> float:
        """Anharmonicity constant alpha^2 / (2 mass), hartree."""
        return self.alpha**2 / (2.0 * self.mass)

    @property
    def bound_states(self) -> int:
        """Number of bound levels."""
        vmax = math.floor(math.sqrt(2.0 * self.mass * self.de) / self.alpha - 0.5)
        return vmax + 1

    @property
    def fundamental(self) -> float:
        """Analytic 0->1 gap, hartree."""
        return self.omega_e - 2.0 * self.chi

    def energy(self, q):
        return self.de * (1.0 - np.exp(-self.alpha * (np.asarray(q, dtype=float) - self.q_eq)))**2 - self.de


@dataclass(frozen=True)
class HarmonicParams:
    """Harmonic curve 0.5*mass*omega^2*(q - q_eq)^2 (minimum at zero)."""

    omega: float     # fundamental frequency, hartree
    q_eq: float      # bohr
    mass: float      # electron masses

    def __post_init__(self):
        if self.omega <= 0 or self.mass <= 0:
            raise ValueError("harmonic parameters must be positive")

    @property
    def fundamental(self) -> float:
        return self.omega

    def energy(self, q):
        dq = np.asarray(q, dtype=float) - self.q_eq
        return 0.5 * self.mass * self.omega**2 * dq**2


@dataclass(frozen=True)
class DipoleParams:
    """Dipole function d0*(q - q0)*exp(-(q - q1)^2 / (2 sigma^2))."""

    d0: float        # amplitude, e*bohr
    q0: float        # zero crossing, bohr
    q1: float        # Gaussian center, bohr
    sigma: float     # Gaussian width, bohr

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")

    def moment(self, q):
        q = np.asarray(q, dtype=float)
        return self.d0 * (q - self.q0) * np.exp(-(q - self.q1)**2 / (2.0 * self.sigma**2))


def _solve_de(fundamental: float, alpha: float, mass: float) -> float:
    """De for which the analytic Morse 0->1 gap equals ``fundamental``."""
    # fundamental = alpha*sqrt(2 De/mass) - alpha^2/mass
    return (fundamental + alpha**2 / mass)**2 * mass / (2.0 * alpha**2)


_WV = units.to_au(FUNDAMENTAL_CM1, "cm-1")

# De of the strongly anharmonic preset is anchored so its analytic fundamental
# is exactly 1838.26 cm^-1; the result, 6.80287 eV, equals the nominal
# dissociation energy 6.80 eV at display precision.
POTENTIALS: dict[str, MorseParams | HarmonicParams] = {
    "VA": MorseParams(de=_solve_de(_WV, 1.5, REDUCED_MASS), alpha=1.5,
                      q_eq=4.0, mass=REDUCED_MASS),
    "VB": MorseParams(de=units.to_au(9.8, "ev"), alpha=1.25,
                      q_eq=4.0, mass=REDUCED_MASS),
    "VC": HarmonicParams(omega=_WV, q_eq=4.0, mass=REDUCED_MASS),
}

DIPOLES: dict[str, DipoleParams] = {
    "PR": DipoleParams(d0=units.to_au(2.54, "debye"), q0=2.7, q1=4.5, sigma=0.6),
    "NP": DipoleParams(d0=units.to_au(5.08, "debye"), q0=4.0, q1=4.0, sigma=0.6),
}


def potential_energy(q, kind: MorseParams | HarmonicParams | str):
    """Potential energy at q (scalar or array), hartree."""
    if isinstance(kind, str):
        kind = POTENTIALS[kind]
    return kind.energy(q)


def dipole_moment(q, d: DipoleParams | str):
    """Dipole moment at q (scalar or array), e*bohr."""
    if isinstance(d, str):
        d = DIPOLES[d]
    return d.moment(q)


def morse_level(v: int, p: MorseParams) -> float:
    """Analytic bound-level energy E_v (hartree, zero at dissociation)."""
    if not 0 <= v < p.bound_states:
        raise ValueError(f"v={v} outside the {p.bound_states} bound levels")
    return p.omega_e * (v + 0.5) - p.chi * (v + 0.5)**2 - p.de


def anharmonic_shift(p: MorseParams) -> float:
    """(E1-E0) - (E2-E1) = 2*chi, hartree."""
    return (morse_level(1, p) - morse_level(0, p)) - (morse_level(2, p) - morse_level(1, p))


def kinetic_matrix(grid: Grid1D, mass: float) -> np.ndarray:
    """Dense Fourier-spectral kinetic matrix -(1/2m) d^2/dq^2 on the grid."""
    k2 = grid.wavenumbers()**2 / (2.0 * mass)
    f = np.fft.fft(np.eye(grid.n), axis=0)
    t = np.fft.ifft(k2[:, None] * f, axis=0)
    t = np.real(t)
    return (t + t.T) / 2.0


def vibrational_eigenstates(kind: MorseParams | HarmonicParams | str,
                            grid: Grid1D, n_states: int):
    """Lowest eigenpairs of the 1D vibrational Hamiltonian on the grid.

    Returns (energies, wavefunctions) with wavefunctions[:, v] normalized to
    sum(|psi|^2)*dq = 1 and energies ascending. Signs follow the ladder
    convention <v|(q - q_eq)|v+1> > 0 with psi_0 positive at its maximum.
    """
    if isinstance(kind, str):
        kind = POTENTIALS[kind]
    if isinstance(kind, MorseParams) and n_states > kind.bound_states:
        raise ValueError(f"requested {n_states} states, only {kind.bound_states} bound")
    q = grid.points()
    h = kinetic_matrix(grid, kind.mass) + np.diag(kind.energy(q))
    energies, vecs = sla.eigh(h, subset_by_index=(0, n_states - 1))
    vecs = vecs / math.sqrt(grid.spacing)

    resid = np.max(np.abs(h @ (vecs * grid.spacing) - (vecs * grid.spacing) * energies))
    if not np.isfinite(resid) or resid > 1e-8:
        raise RuntimeError(f"eigensolver residual {resid:.2e} exceeds 1e-8")

    if vecs[np.argmax(np.abs(vecs[:, 0])), 0] < 0:
        vecs[:, 0] = -vecs[:, 0]
    dq_op = (q - kind.q_eq) * grid.spacing
    for v in range(1, n_states):
        if np.dot(vecs[:, v - 1] * dq_op, vecs[:, v]) < 0:
            vecs[:, v] = -vecs[:, v]
    return energies, vecs


def transition_dipole(bra: np.ndarray, ket: np.ndarray,
                      d: DipoleParams | str, grid: Grid1D) -> float:
    """Matrix element <bra| d(q) |ket> by trapezoid quadrature on the grid."""
    if bra.shape != (grid.n,) or ket.shape != (grid.n,):
        raise ValueError("states and grid have mismatched sizes")
    vals = bra * dipole_moment(grid.points(), d) * ket
    return float(np.trapezoid(vals, dx=grid.spacing))
