"""Uniform grids, 2D complex wavefunctions and Fourier-spectral machinery.

The wavefunction lives on the product grid (q, x) with the Riemann-sum
measure dq*dx. Both axes use the periodic Fourier representation, which is
exact as long as amplitudes stay negligible at the grid edges.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

__all__ = [
    "Grid1D", "Wavefunction2D", "GridMismatchError",
    "inner_product", "expectation", "momentum_moments",
    "apply_diagonal_phase", "apply_kinetic_phase",
    "save_snapshot", "load_snapshot",
]


class GridMismatchError(ValueError):
    """Operands are defined on different grids."""


@dataclass(frozen=True)
class Grid1D:
    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("grid needs at least two points")
        if not self.hi > self.lo:
            raise ValueError("grid upper bound must exceed lower bound")

    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / (self.n - 1)

    def points(self) -> np.ndarray:
        return self.lo + self.spacing * np.arange(self.n)

    def wavenumbers(self) -> np.ndarray:
        """Angular wavenumbers of the periodic Fourier representation."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)


class Wavefunction2D:
    """Complex amplitudes psi[i_q, i_x] on a (q, x) product grid."""

    __slots__ = ("psi", "qgrid", "xgrid")

    def __init__(self, psi: np.ndarray, qgrid: Grid1D, xgrid: Grid1D):
        psi = np.asarray(psi, dtype=np.complex128)
        if psi.shape != (qgrid.n, xgrid.n):
            raise ValueError(f"psi shape {psi.shape} != grid shape {(qgrid.n, xgrid.n)}")
        self.psi = psi
        self.qgrid = qgrid
        self.xgrid = xgrid

    @property
    def measure(self) -> float:
        return self.qgrid.spacing * self.xgrid.spacing

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.psi)**2) * self.measure))

    def normalize(self) -> "Wavefunction2D":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero wavefunction")
        self.psi /= n
        return self

    def copy(self) -> "Wavefunction2D":
        return Wavefunction2D(self.psi.copy(), self.qgrid, self.xgrid)

    def same_grids(self, other: "Wavefunction2D") -> bool:
        return self.qgrid == other.qgrid and self.xgrid == other.xgrid

    def edge_fraction(self) -> float:
        """max |psi| on the boundary rows/columns over global max |psi|."""
        a = np.abs(self.psi)
        peak = a.max()
        if peak == 0.0:
            return 0.0
        edge = max(a[0, :].max(), a[-1, :].max(), a[:, 0].max(), a[:, -1].max())
        return float(edge / peak)


def _require_same_grids(a: Wavefunction2D, b: Wavefunction2D):
    if not a.same_grids(b):
        raise GridMismatchError("wavefunctions live on different grids")


def inner_product(a: Wavefunction2D, b: Wavefunction2D) -> complex:
    """<a|b> = sum conj(a) * b * dq * dx."""
    _require_same_grids(a, b)
    return complex(np.vdot(a.psi, b.psi) * a.measure)


def expectation(wf: Wavefunction2D, values: np.ndarray,
                imag_tol: float = 1e-10) -> float:
    """<psi| f |psi> for a real multiplicative f given by its grid values.

    The imaginary residue of the complex sum must stay below ``imag_tol``
    (a health check; f is supposed to be real).
    """
    values = np.asarray(values)
    if not np.all(np.isfinite(values)):
        raise ValueError("observable values must be finite on the grid")
    acc = complex(np.vdot(wf.psi, values * wf.psi) * wf.measure)
    if abs(acc.imag) > imag_tol * max(1.0, abs(acc.real)):
        raise ValueError(f"imaginary residue {acc.imag:.2e} exceeds tolerance")
    return acc.real


def momentum_moments(wf: Wavefunction2D, axis: int, order: int) -> float:
    """<p> (order=1) or <p^2> (order=2) along axis 0 (q) or 1 (x)."""
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    grid = wf.qgrid if axis == 0 else wf.xgrid
    k = grid.wavenumbers()**order
    ft = sfft.fft(wf.psi, axis=axis)
    weights = np.abs(ft)**2
    total = weights.sum()
    if axis == 0:
        mom = float(np.sum(weights.sum(axis=1) * k))
    else:
        mom = float(np.sum(weights.sum(axis=0) * k))
    return mom / total


def apply_diagonal_phase(wf: Wavefunction2D, phase: np.ndarray, dt: float) -> Wavefunction2D:
    """psi <- exp(-1j * phase * dt) * psi, pointwise; norm preserved."""
    phase = np.asarray(phase)
    if not np.all(np.isfinite(phase)):
        raise ValueError("phase must be finite on the grid")
    wf.psi *= np.exp(-1j * dt * phase)
    return wf


def apply_kinetic_phase(wf: Wavefunction2D, dt: float,
                        masses: tuple[float, float]) -> Wavefunction2D:
    """Exact kinetic evolution exp(-1j*T*dt) through momentum space.

    T = p_q^2/(2*masses[0]) + p_x^2/(2*masses[1]). ``dt`` may be complex
    (imaginary-time relaxation uses dt = -1j*dtau).
    """
    kq2 = wf.qgrid.wavenumbers()**2 / (2.0 * masses[0])
    kx2 = wf.xgrid.wavenumbers()**2 / (2.0 * masses[1])
    ft = sfft.fft2(wf.psi)
    ft *= np.exp(-1j * dt * kq2)[:, None]
    ft *= np.exp(-1j * dt * kx2)[None, :]
    wf.psi = sfft.ifft2(ft)
    return wf


_MAGIC = b"WF2DSNAP"


def save_snapshot(wf: Wavefunction2D, path, t_au: float = 0.0):
    """Binary snapshot: header with grid specs, then row-major complex pairs.

    Layout (little-endian): 8-byte magic "WF2DSNAP", uint32 version=1,
    uint32 nq, uint32 nx, float64 q_lo, q_hi, x_lo, x_hi, t_au, then
    nq*nx complex128 values in row-major (q outer, x inner) order.
    """
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<III", 1, wf.qgrid.n, wf.xgrid.n))
        fh.write(struct.pack("<5d", wf.qgrid.lo, wf.qgrid.hi,
                             wf.xgrid.lo, wf.xgrid.hi, t_au))
        fh.write(np.ascontiguousarray(wf.psi, dtype="<c16").tobytes())


def load_snapshot(path) -> tuple[Wavefunction2D, float]:
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != _MAGIC:
            raise ValueError(f"not a wavefunction snapshot: bad magic {magic!r}")
        version, nq, nx = struct.unpack("<III", fh.read(12))
        if version != 1:
            raise ValueError(f"unsupported snapshot version {version}")
        q_lo, q_hi, x_lo, x_hi, t_au = struct.unpack("<5d", fh.read(40))
        data = np.frombuffer(fh.read(nq * nx * 16), dtype="<c16").reshape(nq, nx)
    wf = Wavefunction2D(data.astype(np.complex128),
                        Grid1D(q_lo, q_hi, nq), Grid1D(x_lo, x_hi, nx))
    return wf, t_au
