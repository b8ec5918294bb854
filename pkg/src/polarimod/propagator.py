"""Split-operator propagation: real time through the pulse, imaginary time
for eigenstate preparation with deflation.

One step is the second-order Strang split
exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2) with the time-dependent potential
evaluated once at the interval midpoint. ``step_real`` composes the generic
qgrid kernels; ``Stepper`` is an algebraically identical fast path that
builds the diagonal phases by geometric recurrences along x instead of
pointwise complex exponentials (the potential is V(q) + a(t) x^2 +
c(t) d(q) x, so each q-row of the phase factor is a geometric progression
in x up to a chirp).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft

from . import units
from .cavity import CavityVibrationModel
from .field_stats import hermite_functions
from .molecule import vibrational_eigenstates
from .qgrid import (Grid1D, Wavefunction2D, apply_diagonal_phase,
                    apply_kinetic_phase, inner_product)

__all__ = [
    "PropagationSettings", "EigenstatePrep", "PropagationError",
    "RelaxationError", "step_real", "relax", "initial_guess", "propagate",
    "Stepper",
]

#: abort threshold for |psi| at the grid edge relative to max |psi|
EDGE_THRESHOLD = 1e-6


@dataclass(frozen=True)
class PropagationSettings:
    dt_au: float = 1.0
    t_final_fs: float = 800.0
    sample_stride: int = 20

    def __post_init__(self):
        if self.dt_au <= 0 or self.t_final_fs <= 0:
            raise ValueError("dt and t_final must be positive")
        if self.sample_stride < 1:
            raise ValueError("sample_stride must be at least 1")

    @property
    def n_steps(self) -> int:
        return int(round(units.to_au(self.t_final_fs, "fs") / self.dt_au))


@dataclass(frozen=True)
class EigenstatePrep:
    target: str = "ground"   # ground | lower_polariton | upper_polariton
    tolerance: float = 1e-10  # energy drift per atomic time unit
    max_steps: int = 200_000
    # (dtau, drift target) stages, coarse to fine; the last stage uses
    # ``tolerance`` regardless of the listed value
    schedule: tuple = ((10.0, 1e-6), (2.0, 1e-8), (0.5, 1e-10))

    def __post_init__(self):
        if self.target not in ("ground", "lower_polariton", "upper_polariton"):
            raise ValueError(f"unknown target {self.target!r}")


class PropagationError(RuntimeError):
    """Real-time propagation aborted; carries partial results if any."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class RelaxationError(RuntimeError):
    """Imaginary-time relaxation failed to converge to the target state."""


def step_real(wf: Wavefunction2D, t_au: float, dt_au: float,
              model: CavityVibrationModel, check_edges: bool = True) -> Wavefunction2D:
    """One Strang step from t to t + dt with midpoint potential."""
    omega_mid = model.omega_at(t_au + dt_au / 2.0)
    v = model.surface_on_grids(wf.qgrid, wf.xgrid, omega_c=omega_mid)
    apply_diagonal_phase(wf, v, dt_au / 2.0)
    apply_kinetic_phase(wf, dt_au, model.masses)
    apply_diagonal_phase(wf, v, dt_au / 2.0)
    if check_edges:
        frac = wf.edge_fraction()
        if frac > EDGE_THRESHOLD:
            raise PropagationError(
                f"edge amplitude fraction {frac:.2e} exceeds {EDGE_THRESHOLD:.0e}; "
                "grid too small for this state")
    return wf


class Stepper:
    """Fast split-operator kernel over a fixed grid pair and model.

    Matches step_real to machine precision; see module docstring.
    """

    def __init__(self, model: CavityVibrationModel, qgrid: Grid1D, xgrid: Grid1D,
                 dt_au: float):
        self.model = model
        self.qgrid = qgrid
        self.xgrid = xgrid
        self.dt = dt_au
        q = qgrid.points()
        self.vq = np.asarray(model.potential.energy(q))
        self.dvals = np.asarray(model.dipole.moment(q))
        self.x = xgrid.points()
        mq, mx = model.masses
        kq2 = qgrid.wavenumbers()**2 / (2.0 * mq)
        kx2 = xgrid.wavenumbers()**2 / (2.0 * mx)
        self.expt = np.exp(-1j * dt_au * kq2)[:, None] * np.exp(-1j * dt_au * kx2)[None, :]
        self._colq = np.exp(-0.5j * dt_au * self.vq)
        self._work = np.empty((qgrid.n, xgrid.n), dtype=np.complex128)

    def _half_potential_factor(self, omega_c: float) -> np.ndarray:
        """exp(-i dt/2 (V(q) + w^2 x^2/2 + c d(q) x)) built multiplicatively."""
        dt2 = 0.5 * self.dt
        c = self.model.coupling_coefficient(omega_c)
        colx = np.exp(-1j * dt2 * (0.5 * omega_c**2) * self.x**2)
        x0, dx = self.x[0], self.xgrid.spacing
        start = self._colq * np.exp(-1j * dt2 * c * self.dvals * x0)
        ratio = np.exp(-1j * dt2 * c * self.dvals * dx)
        w = self._work
        w[:, 0] = start
        w[:, 1:] = ratio[:, None]
        np.cumprod(w, axis=1, out=w)
        w *= colx[None, :]
        return w

    def step(self, wf: Wavefunction2D, t_au: float) -> Wavefunction2D:
        expv = self._half_potential_factor(self.model.omega_at(t_au + self.dt / 2.0))
        psi = wf.psi
        psi *= expv
        ft = sfft.fft2(psi)
        ft *= self.expt
        psi = sfft.ifft2(ft)
        psi *= expv
        wf.psi = psi
        return wf


def propagate(wf: Wavefunction2D, model: CavityVibrationModel,
              settings: PropagationSettings, observer=None,
              t_start_au: float = 0.0) -> Wavefunction2D:
    """Run the full schedule, calling observer(step, t_au, wf) at t=0 and
    then every ``sample_stride`` steps and at the final step.

    Aborts with PropagationError when amplitude reaches the grid edge.
    """
    stepper = Stepper(model, wf.qgrid, wf.xgrid, settings.dt_au)
    if observer is not None:
        observer(0, t_start_au, wf)
    n = settings.n_steps
    for s in range(1, n + 1):
        t_au = t_start_au + (s - 1) * settings.dt_au
        stepper.step(wf, t_au)
        if s % settings.sample_stride == 0 or s == n:
            frac = wf.edge_fraction()
            if frac > EDGE_THRESHOLD:
                raise PropagationError(
                    f"edge amplitude fraction {frac:.2e} exceeds "
                    f"{EDGE_THRESHOLD:.0e} at step {s}; grid too small")
            if observer is not None:
                observer(s, t_start_au + s * settings.dt_au, wf)
    return wf


def initial_guess(target: str, model: CavityVibrationModel,
                  qgrid: Grid1D, xgrid: Grid1D) -> Wavefunction2D:
    """Zeroth-order product-state guess for the requested eigenstate.

    Ground: |v=0>|0_ph>; lower/upper polariton: (|1>|0> -/+ |0>|1>)/sqrt(2),
    the correct zeroth-order characters at resonance for positive d10.
    """
    _, vib = vibrational_eigenstates(model.potential, qgrid, 2)
    chi = hermite_functions(1, xgrid.points(), model.modulation.omega_c0)
    if target == "ground":
        psi = np.outer(vib[:, 0], chi[0])
    elif target == "lower_polariton":
        psi = (np.outer(vib[:, 1], chi[0]) - np.outer(vib[:, 0], chi[1])) / math.sqrt(2.0)
    elif target == "upper_polariton":
        psi = (np.outer(vib[:, 1], chi[0]) + np.outer(vib[:, 0], chi[1])) / math.sqrt(2.0)
    else:
        raise ValueError(f"unknown target {target!r}")
    return Wavefunction2D(psi.astype(np.complex128), qgrid, xgrid).normalize()


def _energy(wf: Wavefunction2D, v: np.ndarray, masses) -> float:
    """<H> = <T> + <V> for the static surface v."""
    kq2 = wf.qgrid.wavenumbers()**2 / (2.0 * masses[0])
    kx2 = wf.xgrid.wavenumbers()**2 / (2.0 * masses[1])
    ft = sfft.fft2(wf.psi)
    w2 = np.abs(ft)**2
    tot = w2.sum()
    t_exp = (np.sum(w2.sum(axis=1) * kq2) + np.sum(w2.sum(axis=0) * kx2)) / tot
    v_exp = np.sum((np.abs(wf.psi)**2) * v) * wf.measure
    return float(t_exp + v_exp)


@dataclass
class RelaxationResult:
    energy: float
    wf: Wavefunction2D
    energy_trace: list = field(repr=False, default_factory=list)
    steps: int = 0


def relax(guess: Wavefunction2D, prep: EigenstatePrep,
          model: CavityVibrationModel,
          deflate: tuple[Wavefunction2D, ...] = ()) -> RelaxationResult:
    """Imaginary-time relaxation at the static (undriven) Hamiltonian.

    Each step applies the Strang factors with dt = -i dtau, projects out the
    deflation set, and renormalizes. Converged when the energy drift rate
    falls below prep.tolerance (hartree per atomic time unit) at the finest
    stage of the schedule.
    """
    for a in deflate:
        for b in deflate:
            if a is not b and abs(inner_product(a, b)) > 1e-10:
                raise ValueError("deflation states are not mutually orthogonal")
    wf = guess.copy().normalize()
    v0 = model.surface_on_grids(wf.qgrid, wf.xgrid, omega_c=model.modulation.omega_c0)
    masses = model.masses
    kq2 = wf.qgrid.wavenumbers()**2 / (2.0 * masses[0])
    kx2 = wf.xgrid.wavenumbers()**2 / (2.0 * masses[1])

    def project_out(w):
        for state in deflate:
            w.psi -= inner_product(state, w) * state.psi

    project_out(wf)
    if wf.norm() < 1e-6:
        raise RelaxationError("guess lies in the deflated subspace")
    wf.normalize()

    trace = [_energy(wf, v0, masses)]
    check_every = 10
    total_steps = 0
    stages = list(prep.schedule)
    stages[-1] = (stages[-1][0], prep.tolerance)
    for dtau, target_drift in stages:
        decay_v = np.exp(-0.5 * dtau * v0)
        decay_t = np.exp(-dtau * kq2)[:, None] * np.exp(-dtau * kx2)[None, :]
        last_e = trace[-1]
        while True:
            for _ in range(check_every):
                wf.psi *= decay_v
                wf.psi = sfft.ifft2(sfft.fft2(wf.psi) * decay_t)
                wf.psi *= decay_v
                if deflate:
                    project_out(wf)
                    if wf.norm() < 1e-12:
                        raise RelaxationError("state collapsed onto deflated subspace")
                wf.normalize()
            total_steps += check_every
            if total_steps > prep.max_steps:
                raise RelaxationError(
                    f"no convergence within {prep.max_steps} steps; "
                    f"last drift {drift:.2e}")
            e = _energy(wf, v0, masses)
            trace.append(e)
            drift = abs(e - last_e) / (dtau * check_every)
            last_e = e
            if drift < target_drift:
                break
    for state in deflate:
        if abs(inner_product(state, wf)) > 1e-8:
            raise RelaxationError("converged state overlaps a deflated state")
    return RelaxationResult(energy=trace[-1], wf=wf, energy_trace=trace,
                            steps=total_steps)


def prepare_eigenstate(target: str, model: CavityVibrationModel,
                       qgrid: Grid1D, xgrid: Grid1D,
                       prep: EigenstatePrep | None = None) -> dict:
    """Relax ground/LP/UP with the deflation chain the target requires.

    Returns {"ground": RelaxationResult, ...} up to and including target.
    """
    order = {"ground": 1, "lower_polariton": 2, "upper_polariton": 3}[target]
    results = {}
    deflate = []
    for name in ("ground", "lower_polariton", "upper_polariton")[:order]:
        p = prep if prep is not None and name == target else \
            (prep or EigenstatePrep(target=name))
        p = EigenstatePrep(target=name, tolerance=p.tolerance,
                           max_steps=p.max_steps, schedule=p.schedule)
        res = relax(initial_guess(name, model, qgrid, xgrid), p, model,
                    deflate=tuple(deflate))
        results[name] = res
        deflate.append(res.wf)
    return results
