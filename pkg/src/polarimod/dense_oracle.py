"""Independent truncated product-basis reference (bare vibrational states x
Fock states): exact diagonalization and direct matrix-exponential propagation.

This path deliberately represents the Hamiltonian in second-quantized form
in a fixed Fock ladder, a different discretization from the coordinate grid,
so agreement between the two is a genuine cross-check of conventions. Only
bound vibrational states are retained; the convergence check below guards
the truncation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg as sla

from . import units
from .cavity import CavityVibrationModel
from .field_stats import hermite_functions
from .molecule import MorseParams, transition_dipole, vibrational_eigenstates
from .qgrid import Grid1D, Wavefunction2D

__all__ = ["ProductBasis", "product_basis", "build_hamiltonian",
           "eigensolve", "propagate_dense", "to_grid", "convergence_check"]


@dataclass(frozen=True)
class ProductBasis:
    """Bare vibrational eigenstates times Fock states of a fixed ladder."""

    energies: np.ndarray      # (n_vib,) bare vibrational energies, hartree
    dipole: np.ndarray        # (n_vib, n_vib) d(q) matrix elements
    vib_states: np.ndarray    # (nq, n_vib) grid eigenvectors
    qgrid: Grid1D
    omega_ref: float          # ladder frequency of the Fock basis, hartree
    n_fock: int

    @property
    def n_vib(self) -> int:
        return self.energies.size

    @property
    def size(self) -> int:
        return self.n_vib * self.n_fock


def product_basis(model: CavityVibrationModel, qgrid: Grid1D,
                  n_vib: int = 10, n_fock: int = 20) -> ProductBasis:
    """Build the basis for a model; the Fock ladder sits at omega_c0."""
    if isinstance(model.potential, MorseParams):
        n_vib = min(n_vib, model.potential.bound_states)
    energies, vib = vibrational_eigenstates(model.potential, qgrid, n_vib)
    dip = np.empty((n_vib, n_vib))
    for i in range(n_vib):
        for j in range(i, n_vib):
            dip[i, j] = dip[j, i] = transition_dipole(vib[:, i], vib[:, j],
                                                      model.dipole, qgrid)
    return ProductBasis(energies=energies, dipole=dip, vib_states=vib,
                        qgrid=qgrid, omega_ref=model.modulation.omega_c0,
                        n_fock=n_fock)


def _ladder(n_fock: int):
    a = np.diag(np.sqrt(np.arange(1, n_fock)), 1)
    return a, a.T


def build_hamiltonian(basis: ProductBasis, model: CavityVibrationModel,
                      omega_c: float | None = None,
                      t_au: float | None = None) -> np.ndarray:
    """Hamiltonian matrix in the fixed product basis at one instant.

    The cavity part is p^2/2 + omega_c(t)^2 x^2/2 expressed through the
    fixed ladder (it reduces to omega_c (n + 1/2) when omega_c equals the
    ladder frequency); the coupling is the model's coupling coefficient
    times the d(q) x matrix.
    """
    if omega_c is None:
        if t_au is None:
            raise ValueError("need t_au or omega_c")
        omega_c = model.omega_at(t_au)
    w0 = basis.omega_ref
    nf, nv = basis.n_fock, basis.n_vib
    a, ad = _ladder(nf)
    eye_f = np.eye(nf)
    eye_v = np.eye(nv)
    num = ad @ a
    x2 = (a @ a + ad @ ad + 2.0 * num + eye_f) / (2.0 * w0)
    p2 = w0 * (2.0 * num + eye_f - a @ a - ad @ ad) / 2.0
    x1 = (a + ad) / np.sqrt(2.0 * w0)
    h = (np.kron(np.diag(basis.energies), eye_f)
         + np.kron(eye_v, p2 / 2.0 + 0.5 * omega_c**2 * x2)
         + model.coupling_coefficient(omega_c) * np.kron(basis.dipole, x1))
    return (h + h.T) / 2.0


def eigensolve(h: np.ndarray, k: int):
    """Lowest k eigenpairs, ascending, orthonormal columns."""
    w, v = sla.eigh(h, subset_by_index=(0, k - 1))
    if not np.all(np.isfinite(w)):
        raise RuntimeError("diagonalization produced non-finite eigenvalues")
    return w, v


def propagate_dense(vec: np.ndarray, model: CavityVibrationModel,
                    basis: ProductBasis, t_start_au: float, t_final_au: float,
                    dt_au: float = 5.0, observer=None) -> np.ndarray:
    """Stepwise exp(-i H(t_mid) dt) by full diagonalization per step."""
    n_steps = int(round((t_final_au - t_start_au) / dt_au))
    vec = vec.astype(np.complex128)
    if observer is not None:
        observer(t_start_au, vec)
    for s in range(n_steps):
        t_mid = t_start_au + (s + 0.5) * dt_au
        w, p = sla.eigh(build_hamiltonian(basis, model, t_au=t_mid))
        vec = p @ (np.exp(-1j * w * dt_au) * (p.conj().T @ vec))
        if observer is not None:
            observer(t_start_au + (s + 1) * dt_au, vec)
    return vec


def to_grid(vec: np.ndarray, basis: ProductBasis, xgrid: Grid1D) -> Wavefunction2D:
    """Map product-basis coefficients onto the (q, x) grid."""
    coef = vec.reshape(basis.n_vib, basis.n_fock)
    chi = hermite_functions(basis.n_fock - 1, xgrid.points(), basis.omega_ref)
    psi = basis.vib_states @ coef @ chi
    return Wavefunction2D(psi, basis.qgrid, xgrid)


@dataclass(frozen=True)
class ConvergenceReport:
    converged: bool
    max_shift_cm1: float
    basis: tuple[int, int]
    enlarged: tuple[int, int]


def convergence_check(model: CavityVibrationModel, basis: ProductBasis,
                      n_levels: int = 3, tol_cm1: float = 0.5,
                      omega_c: float | None = None) -> ConvergenceReport:
    """Enlarge (n_vib, n_fock) by 50% and compare the lowest levels.

    An unconverged report means oracle comparisons must be skipped, not that
    the production path failed.
    """
    if omega_c is None:
        omega_c = model.modulation.omega_c0
    w_small = eigensolve(build_hamiltonian(basis, model, omega_c=omega_c), n_levels)[0]
    big = product_basis(model, basis.qgrid,
                        n_vib=int(np.ceil(basis.n_vib * 1.5)),
                        n_fock=int(np.ceil(basis.n_fock * 1.5)))
    w_big = eigensolve(build_hamiltonian(big, model, omega_c=omega_c), n_levels)[0]
    shift = float(np.max(np.abs(w_small - w_big))) * units.HARTREE_CM1
    return ConvergenceReport(converged=shift < tol_cm1, max_shift_cm1=shift,
                             basis=(basis.n_vib, basis.n_fock),
                             enlarged=(big.n_vib, big.n_fock))
