"""Quantum field statistics of the cavity mode from the 2D wavefunction.

Observables are defined through the ladder operators of a reference
oscillator of frequency omega_ref acting on the cavity coordinate x:
number operator n = a*a, quadratures xhat = a + a* (= sqrt(2 omega_ref) x)
and yhat = -i(a - a*) (= sqrt(2/omega_ref) p), both with vacuum variance 1.
omega_ref is either the undriven cavity frequency ("static" frame) or the
instantaneous one ("instantaneous" frame); the reported benchmarks follow
the static frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft

from .qgrid import Wavefunction2D, inner_product

__all__ = [
    "FockBasisSpec", "FieldStatistics",
    "hermite_functions", "photon_distribution", "number_moments", "mandel_q",
    "quadrature_covariance", "quadrature_variance", "squeezing_db",
    "autocorrelation", "moments_crosscheck", "field_statistics",
]

#: below this mean photon number the Mandel Q ratio is reported as nan
MEAN_N_FLOOR = 1e-12


@dataclass(frozen=True)
class FockBasisSpec:
    """Reference oscillator for the photon-number projection."""

    omega_ref: float          # hartree
    n_max: int = 60           # highest Fock state projected
    capture_threshold: float = 0.999

    def __post_init__(self):
        if self.omega_ref <= 0:
            raise ValueError("omega_ref must be positive")
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")


def hermite_functions(n_max: int, x: np.ndarray, omega: float) -> np.ndarray:
    """Oscillator eigenfunctions chi_n(x), rows n = 0..n_max.

    Normalized three-term recurrence in the scaled variable xi = sqrt(omega)*x
    with the Gaussian folded in, so values stay bounded up to large n.
    """
    xi = math.sqrt(omega) * np.asarray(x, dtype=float)
    chi = np.empty((n_max + 1, xi.size))
    chi[0] = omega**0.25 * np.pi**-0.25 * np.exp(-xi**2 / 2.0)
    if n_max >= 1:
        chi[1] = math.sqrt(2.0) * xi * chi[0]
    for n in range(2, n_max + 1):
        chi[n] = math.sqrt(2.0 / n) * xi * chi[n - 1] - math.sqrt((n - 1) / n) * chi[n - 2]
    return chi


def photon_distribution(wf: Wavefunction2D, spec: FockBasisSpec):
    """P(n) = sum_q dq |int dx chi_n(x) psi(q, x)|^2 and the captured weight.

    The captured weight sum_n P(n) falls below spec.capture_threshold when
    the state leaks past n_max; callers flag such records.
    """
    chi = hermite_functions(spec.n_max, wf.xgrid.points(), spec.omega_ref)
    amps = wf.psi @ chi.T * wf.xgrid.spacing      # (nq, n_max+1)
    p = np.sum(np.abs(amps)**2, axis=0) * wf.qgrid.spacing
    return p, float(p.sum())


def number_moments(p: np.ndarray) -> tuple[float, float]:
    """Mean and variance of the photon number from a P(n) vector."""
    n = np.arange(p.size)
    mean = float(np.dot(p, n))
    var = float(np.dot(p, n**2)) - mean**2
    return mean, var


def mandel_q(p: np.ndarray) -> float:
    """(<dn^2> - <n>)/<n> from the moments of P(n); nan when <n> ~ 0.

    The nan sentinel marks the vacuum limit where the ratio is undefined;
    it is not a failure and propagates through reports as "nan".
    """
    mean, var = number_moments(p)
    if mean < MEAN_N_FLOOR:
        return float("nan")
    return (var - mean) / mean


def _x_moments(wf: Wavefunction2D):
    """<x>, <x^2> of the cavity coordinate."""
    x = wf.xgrid.points()
    dens = np.sum(np.abs(wf.psi)**2, axis=0) * wf.measure
    return float(np.dot(dens, x)), float(np.dot(dens, x**2))


def _p_moments_and_xp(wf: Wavefunction2D):
    """<p>, <p^2> along x and the symmetrized <xp + px>."""
    kx = wf.xgrid.wavenumbers()
    ft = sfft.fft(wf.psi, axis=1)
    w = np.abs(ft)**2
    tot = w.sum()
    p1 = float(np.sum(w.sum(axis=0) * kx)) / tot
    p2 = float(np.sum(w.sum(axis=0) * kx**2)) / tot
    p_psi = sfft.ifft(ft * kx[None, :], axis=1)
    x = wf.xgrid.points()
    xp = complex(np.vdot(wf.psi, x[None, :] * p_psi) * wf.measure)
    return p1, p2, 2.0 * xp.real


def quadrature_covariance(wf: Wavefunction2D, spec: FockBasisSpec):
    """(var xhat, var yhat, symmetrized covariance) for the reference frame."""
    w = spec.omega_ref
    x1, x2 = _x_moments(wf)
    p1, p2, xppx = _p_moments_and_xp(wf)
    var_x = 2.0 * w * (x2 - x1**2)
    var_y = (2.0 / w) * (p2 - p1**2)
    # xhat*yhat + yhat*xhat = 2 (xp + px) for xhat = sqrt(2w) x, yhat = sqrt(2/w) p
    cov = xppx - 2.0 * x1 * p1
    return var_x, var_y, cov


def quadrature_variance(wf: Wavefunction2D, theta: float, spec: FockBasisSpec) -> float:
    """<Delta X_theta^2> for X_theta = cos(theta) xhat + sin(theta) yhat."""
    var_x, var_y, cov = quadrature_covariance(wf, spec)
    c, s = math.cos(theta), math.sin(theta)
    return c**2 * var_x + s**2 * var_y + 2.0 * c * s * cov


def squeezing_db(variance: float) -> float:
    """Squeezing factor -10*log10(variance); positive below vacuum noise."""
    if not variance > 0:
        raise ValueError(f"variance must be positive, got {variance}")
    return -10.0 * math.log10(variance)


def autocorrelation(wf_t: Wavefunction2D, wf_0: Wavefunction2D) -> float:
    """|<psi(t)|psi(0)>|^2."""
    return abs(inner_product(wf_t, wf_0))**2


@dataclass(frozen=True)
class CrosscheckReport:
    mean_from_p: float
    mean_from_operators: float

    @property
    def difference(self) -> float:
        return abs(self.mean_from_p - self.mean_from_operators)


def moments_crosscheck(wf: Wavefunction2D, spec: FockBasisSpec) -> CrosscheckReport:
    """Compare <n> from P(n) against (w<x^2> + <p^2>/w - 1)/2."""
    p, _ = photon_distribution(wf, spec)
    mean_p, _ = number_moments(p)
    w = spec.omega_ref
    _, x2 = _x_moments(wf)
    _, p2, _ = _p_moments_and_xp(wf)
    mean_ops = (w * x2 + p2 / w - 1.0) / 2.0
    return CrosscheckReport(mean_p, mean_ops)


@dataclass
class FieldStatistics:
    """One sampled record of the intracavity field statistics."""

    t_fs: float
    omega_c: float            # instantaneous cavity frequency, hartree
    omega_ref: float          # frame frequency used for the operators
    mean_n: float
    var_n: float
    mandel_q: float
    var_x: float              # <Delta xhat^2>, theta = 0
    var_y: float              # <Delta yhat^2>, theta = pi/2
    zeta_0: float             # dB
    zeta_half_pi: float       # dB
    autocorr: float
    capture: float
    crosscheck_diff: float
    p_of_n: np.ndarray = field(repr=False, default=None)

    @property
    def flagged(self) -> bool:
        return self.capture < 0.999


def field_statistics(wf: Wavefunction2D, wf_0: Wavefunction2D | None,
                     t_fs: float, omega_c: float, spec: FockBasisSpec,
                     keep_distribution: bool = False) -> FieldStatistics:
    """Assemble the full per-snapshot record."""
    p, capture = photon_distribution(wf, spec)
    mean_n, var_n = number_moments(p)
    q = mandel_q(p)
    var_x, var_y, _ = quadrature_covariance(wf, spec)
    w = spec.omega_ref
    _, x2 = _x_moments(wf)
    _, p2, _ = _p_moments_and_xp(wf)
    mean_ops = (w * x2 + p2 / w - 1.0) / 2.0
    ac = autocorrelation(wf, wf_0) if wf_0 is not None else 1.0
    return FieldStatistics(
        t_fs=t_fs, omega_c=omega_c, omega_ref=spec.omega_ref,
        mean_n=mean_n, var_n=var_n, mandel_q=q,
        var_x=var_x, var_y=var_y,
        zeta_0=squeezing_db(var_x), zeta_half_pi=squeezing_db(var_y),
        autocorr=ac, capture=capture,
        crosscheck_diff=abs(mean_n - mean_ops),
        p_of_n=p if keep_distribution else None,
    )
