"""
Gibbs states rho = exp(-H/kT) / Z, closed form and by spectral exponentiation.

All exponentials are taken relative to the ground energy, so both paths stay
finite down to kT ~ 1e-3 for O(1)-O(10) couplings. Temperatures are given in
the same units as ``ModelParams.k * T`` is an energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidState, ZeroTemperature
from .hamiltonian import ModelParams, build_hamiltonian
from .linalg import herm_eig, is_hermitian, norm_inf

GROUND_DEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class DensityMatrix:
    """A two-qubit state.

    ``matrix`` is the 4x4 operator. When the state was built from a spectral
    decomposition, ``weights`` and ``vectors`` (columns) keep it, so that
    downstream code can work with eigen-weights at full relative precision
    instead of re-diagonalising ``matrix``.
    """

    matrix: np.ndarray
    weights: np.ndarray | None = None
    vectors: np.ndarray | None = None

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    @classmethod
    def from_spectrum(cls, weights, vectors):
        weights = np.asarray(weights, dtype=float)
        vectors = np.asarray(vectors, dtype=complex)
        return cls((vectors * weights) @ vectors.conj().T, weights, vectors)

    @classmethod
    def from_pure(cls, psi):
        """Projector onto ``psi``, with an orthonormal completion for the factorisation."""
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        q, _ = np.linalg.qr(np.column_stack([psi, np.eye(4, dtype=complex)]))
        basis = q[:, :4].copy()
        basis[:, 0] = psi
        return cls(np.outer(psi, psi.conj()), np.array([1.0, 0.0, 0.0, 0.0]), basis)

    def validate(self, tol=1e-12):
        m = self.matrix
        if m.shape != (4, 4):
            raise InvalidState(f"expected a 4x4 matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidState("non-finite entries")
        if not is_hermitian(m, tol):
            raise InvalidState("density matrix is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1.0) > tol:
            raise InvalidState(f"trace is {tr.real:.15g}, expected 1")
        lowest = self.weights.min() if self.weights is not None else herm_eig(m).values[0]
        if lowest < -tol:
            raise InvalidState(f"negative eigenvalue {lowest:.3e}")
        return self


def _check_T(T):
    if T is None or T <= 0:
        raise ZeroTemperature("thermal quantities need T > 0; use ground_state_mixture for T = 0")


def _exp_sinhc(x):
    """exp(-x) * sinh(x) / x, finite for every x >= 0 and equal to 1 at x = 0."""
    if x == 0.0:
        return 1.0
    return -math.expm1(-2.0 * x) / (2.0 * x)


def _block_terms(p: ModelParams, kT):
    """Shifted weights of the two 2x2 blocks.

    Returns ``(e_min, w_out, w_in, ch_out, ch_in, sc_out, sc_in)`` where
    exp(-Jz/2kT) cosh(mu/kT) = exp(-e_min/kT) * w_out * ch_out and
    exp(-Jz/2kT) sinh(mu/kT)/mu = exp(-e_min/kT) * w_out * sc_out / kT,
    and likewise for the inner block with +Jz/2 and nu.
    """
    mu, nu = p.mu, p.nu
    e1 = p.jz / 2 - mu
    e3 = -p.jz / 2 - nu
    e_min = min(e1, e3)
    w_out = math.exp(-(e1 - e_min) / kT)
    w_in = math.exp(-(e3 - e_min) / kT)
    ch_out = 0.5 * (1.0 + math.exp(-2.0 * mu / kT))
    ch_in = 0.5 * (1.0 + math.exp(-2.0 * nu / kT))
    return e_min, w_out, w_in, ch_out, ch_in, _exp_sinhc(mu / kT), _exp_sinhc(nu / kT)


def log_partition_function(p: ModelParams, T):
    """ln Z, finite for any T > 0."""
    _check_T(T)
    kT = p.k * T
    e_min, w_out, w_in, ch_out, ch_in, _, _ = _block_terms(p, kT)
    return -e_min / kT + math.log(2.0 * (w_out * ch_out + w_in * ch_in))


def partition_function(p: ModelParams, T):
    """Z = 2 [exp(-Jz/2kT) cosh(mu/kT) + exp(Jz/2kT) cosh(nu/kT)].

    Evaluated as exp(-E_min/kT) times a shifted sum; returns ``inf`` when Z
    itself exceeds the float range (``log_partition_function`` stays finite).
    """
    try:
        return math.exp(log_partition_function(p, T))
    except OverflowError:
        return math.inf


def density_matrix_analytic(p: ModelParams, T):
    """Closed-form Gibbs state from the exponentiated block matrix elements.

    Nonzero entries (A_ij / Z):
    A11, A44 = e^{-Jz/2kT} [cosh(mu/kT) -/+ (B/mu) sinh(mu/kT)],
    A14 = A41 = -e^{-Jz/2kT} (J-/mu) sinh(mu/kT),
    A22, A33 = e^{Jz/2kT} [cosh(nu/kT) -/+ (b/nu) sinh(nu/kT)],
    A23 = -e^{Jz/2kT} (J+ + iD)/nu sinh(nu/kT), A32 = conj(A23).
    """
    _check_T(T)
    kT = p.k * T
    _, w_out, w_in, ch_out, ch_in, sc_out, sc_in = _block_terms(p, kT)
    z = 2.0 * (w_out * ch_out + w_in * ch_in)
    so = w_out * sc_out / kT
    si = w_in * sc_in / kT
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = w_out * ch_out - p.B * so
    rho[3, 3] = w_out * ch_out + p.B * so
    rho[0, 3] = rho[3, 0] = -p.j_minus * so
    rho[1, 1] = w_in * ch_in - p.b * si
    rho[2, 2] = w_in * ch_in + p.b * si
    rho[1, 2] = -complex(p.j_plus, p.D) * si
    rho[2, 1] = -complex(p.j_plus, -p.D) * si
    return DensityMatrix(rho / z)


def density_matrix_numeric(p: ModelParams, T):
    """Gibbs state by diagonalising H: V diag(exp(-(E - E_min)/kT)) V^H / trace."""
    _check_T(T)
    kT = p.k * T
    eig = herm_eig(build_hamiltonian(p))
    w = np.exp(-(eig.values - eig.values[0]) / kT)
    w /= w.sum()
    return DensityMatrix.from_spectrum(w, eig.vectors)


def ground_state_mixture(p: ModelParams, tol=GROUND_DEGENERACY_TOL):
    """Equal mixture over the (possibly degenerate) ground eigenspace: the T -> 0+ state."""
    eig = herm_eig(build_hamiltonian(p))
    scale = max(1.0, norm_inf(eig.values))
    g = int(np.sum(eig.values - eig.values[0] <= tol * scale))
    w = np.zeros(4)
    w[:g] = 1.0 / g
    return DensityMatrix.from_spectrum(w, eig.vectors)


def ground_degeneracy(p: ModelParams, tol=GROUND_DEGENERACY_TOL):
    eig = herm_eig(build_hamiltonian(p))
    scale = max(1.0, norm_inf(eig.values))
    return int(np.sum(eig.values - eig.values[0] <= tol * scale))
