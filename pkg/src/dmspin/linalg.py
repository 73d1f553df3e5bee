"""
Small dense complex linear algebra for two-qubit operators.

Basis order is |00>, |01>, |10>, |11> with qubit 1 as the left Kronecker
factor. The Hermitian eigensolver is a cyclic complex Jacobi iteration, kept
deliberately independent of any closed-form spectrum so it can serve as an
oracle for the analytic results elsewhere in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NonFiniteResult, NotHermitian

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

PAULI = {"I": I2, "X": SX, "Y": SY, "Z": SZ}

_ABS_FLOOR = 1e-14
_MAX_SWEEPS = 60


def kron(a, b):
    """Kronecker product with ``a`` acting on qubit 1 (the left factor)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    n, m = a.shape[0], b.shape[0]
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(n * m, n * m)


def pauli2(label):
    """Two-qubit Pauli product, e.g. ``pauli2("XY") == kron(SX, SY)``."""
    return kron(PAULI[label[0]], PAULI[label[1]])


def norm_inf(a):
    """Largest entry modulus."""
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def is_hermitian(a, rtol=1e-12):
    a = np.asarray(a)
    return norm_inf(a - a.conj().T) <= rtol * max(norm_inf(a), _ABS_FLOOR)


@dataclass(frozen=True)
class HermEig:
    """Eigenvalues (ascending) and orthonormal eigenvectors stored as columns."""

    values: np.ndarray
    vectors: np.ndarray

    def __iter__(self):
        yield self.values
        yield self.vectors

    def reconstruct(self, f=None):
        vals = self.values if f is None else f(self.values)
        return (self.vectors * vals) @ self.vectors.conj().T


def _jacobi(a):
    """Cyclic Jacobi diagonalisation of a complex Hermitian matrix.

    Works on nested lists of Python complex scalars; for n = 4 this is several
    times faster than numpy slicing.
    """
    n = a.shape[0]
    m = [[complex(x) for x in row] for row in a]
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    scale = max(norm_inf(a), _ABS_FLOOR)
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
    for _ in range(_MAX_SWEEPS):
        if max(abs(m[p][q]) for p, q in pairs) <= 1e-17 * scale:
            break
        for p, q in pairs:
            apq = m[p][q]
            r = abs(apq)
            if r <= 1e-19 * scale:
                continue
            ph = (apq / r).conjugate()
            tau = (m[q][q].real - m[p][p].real) / (2.0 * r)
            if tau >= 0:
                t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
            else:
                t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
            c = 1.0 / math.sqrt(1.0 + t * t)
            s = t * c
            # column update with R = [[c, s], [-s*ph, c*ph]]
            sph, cph = s * ph, c * ph
            for row in m:
                xp, xq = row[p], row[q]
                row[p] = c * xp - sph * xq
                row[q] = s * xp + cph * xq
            for row in v:
                xp, xq = row[p], row[q]
                row[p] = c * xp - sph * xq
                row[q] = s * xp + cph * xq
            # row update with R^H
            rp, rq = m[p], m[q]
            sphc, cphc = sph.conjugate(), cph.conjugate()
            for k in range(n):
                xp, xq = rp[k], rq[k]
                rp[k] = c * xp - sphc * xq
                rq[k] = s * xp + cphc * xq
            m[p][q] = m[q][p] = 0j
            m[p][p] = complex(m[p][p].real)
            m[q][q] = complex(m[q][q].real)
    vals = np.array([m[i][i].real for i in range(n)])
    return vals, np.array(v, dtype=complex)


def _canonical_basis(vecs):
    """Deterministic orthonormal basis of span(vecs).

    Projects the standard basis vectors onto the subspace and runs Gram-Schmidt
    in index order, always taking the first candidate whose residual is at
    least half the largest one. Each chosen vector is phased so its pivot
    component is real and positive.
    """
    g = vecs.shape[1]
    if g == 1:
        w = vecs[:, 0] / np.linalg.norm(vecs[:, 0])
        mag = np.abs(w)
        k = int(np.argmax(mag >= 0.5 * mag.max()))
        return (w * (mag[k] / w[k]))[:, None]
    proj = vecs @ vecs.conj().T
    n = proj.shape[0]
    chosen = []
    remaining = list(range(n))
    for _ in range(g):
        cands = []
        for k in remaining:
            w = proj[:, k].copy()
            for u in chosen:
                w -= u * (u.conj() @ w)
            cands.append((k, w, np.linalg.norm(w)))
        best = max(c[2] for c in cands)
        k, w, nw = next(c for c in cands if c[2] >= 0.5 * best)
        w = w / nw
        for u in chosen:  # second pass for orthogonality at machine precision
            w -= u * (u.conj() @ w)
        w /= np.linalg.norm(w)
        w *= abs(w[k]) / w[k]
        chosen.append(w)
        remaining.remove(k)
    return np.column_stack(chosen)


def herm_eig(a, tol=1e-12):
    """Eigendecomposition of a small Hermitian matrix.

    Parameters
    ----------
    a : array_like
        Square Hermitian matrix.
    tol : float
        Relative tolerance for both the Hermiticity check and the grouping of
        (numerically) degenerate eigenvalues.

    Returns
    -------
    HermEig
        Ascending eigenvalues and a deterministic orthonormal eigenbasis.
        Degenerate eigenspaces are spanned by Gram-Schmidt in index order.

    Raises
    ------
    NotHermitian
        If ``||a - a^H|| > tol * ||a||``.
    """
    a = np.asarray(a, dtype=complex)
    if not is_hermitian(a, tol):
        raise NotHermitian(f"matrix deviates from Hermitian by {norm_inf(a - a.conj().T):.3e}")
    a = 0.5 * (a + a.conj().T)
    vals, vecs = _jacobi(a)
    order = np.argsort(vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]

    gap_tol = tol * max(1.0, norm_inf(a))
    out = np.empty_like(vecs)
    i = 0
    n = len(vals)
    while i < n:
        j = i + 1
        while j < n and vals[j] - vals[j - 1] <= gap_tol:
            j += 1
        out[:, i:j] = _canonical_basis(vecs[:, i:j])
        i = j
    return HermEig(vals, out)


def spectral_fn(a, f: Callable, eig: HermEig | None = None):
    """Apply a scalar function through the spectral decomposition: ``V f(E) V^H``.

    ``f`` receives the eigenvalue array. Real-valued ``f`` gives a Hermitian
    result; complex-valued ``f`` (e.g. phase rotations) is allowed.
    """
    if eig is None:
        eig = herm_eig(a)
    with np.errstate(over="ignore", invalid="ignore"):
        fv = np.asarray(f(eig.values))
    if not np.all(np.isfinite(fv)):
        raise NonFiniteResult("spectral function overflowed; shift the argument first")
    out = eig.reconstruct(lambda _: fv)
    if not np.all(np.isfinite(out)):
        raise NonFiniteResult("spectral function produced non-finite entries")
    return out
