import numpy as np
import pytest
from hypothesis import given, strategies as st

from dmspin.errors import NonFiniteResult, NotHermitian
from dmspin.linalg import SX, SY, SZ, I2, herm_eig, is_hermitian, kron, pauli2, spectral_fn

from conftest import random_hermitian


def test_kron_matches_numpy():
    a = np.arange(4).reshape(2, 2) + 1j
    b = np.array([[0, 2], [3, 1j]])
    assert np.allclose(kron(a, b), np.kron(a, b))


def test_pauli_algebra():
    for s in (SX, SY, SZ):
        assert np.allclose(s @ s, I2)
    assert np.allclose(SX @ SY, 1j * SZ)
    # qubit 1 is the left factor: Z1 flips sign on |10>, |11>
    assert np.allclose(np.diag(pauli2("ZI")).real, [1, 1, -1, -1])
    assert np.allclose(np.diag(pauli2("IZ")).real, [1, -1, 1, -1])


def test_dm_operator_entry():
    m = pauli2("XY") - pauli2("YX")
    assert m[1, 2] == pytest.approx(2j)
    assert m[2, 1] == pytest.approx(-2j)
    assert np.count_nonzero(np.abs(m) > 0) == 2


def test_eig_against_numpy(rng):
    # numpy's LAPACK eigh is an independent oracle for the Jacobi solver
    for _ in range(300):
        a = random_hermitian(rng)
        vals, vecs = herm_eig(a)
        assert np.allclose(vals, np.linalg.eigvalsh(a), atol=1e-12)
        assert np.allclose(vecs.conj().T @ vecs, np.eye(4), atol=1e-12)
        assert np.allclose(a @ vecs, vecs * vals, atol=1e-11)


def test_eig_diagonal_gives_permuted_basis():
    vals, vecs = herm_eig(np.diag([3.0, 1.0, 2.0, 0.0]))
    assert np.allclose(vals, [0, 1, 2, 3])
    assert np.allclose(np.abs(vecs), np.eye(4)[:, [3, 1, 2, 0]])


def test_eig_degenerate_is_deterministic(rng):
    # fourfold degenerate: canonical basis is the standard basis
    vals, vecs = herm_eig(2.5 * np.eye(4))
    assert np.allclose(vals, 2.5)
    assert np.allclose(vecs, np.eye(4))
    # random rotation of a degenerate pair gives the same spanning basis each time
    u, _ = np.linalg.qr(random_hermitian(rng) + 1j * np.eye(4))
    a = u @ np.diag([1.0, 1.0, 2.0, 3.0]) @ u.conj().T
    v1 = herm_eig(a).vectors
    v2 = herm_eig(a.copy()).vectors
    assert np.array_equal(v1, v2)
    assert np.allclose(v1.conj().T @ v1, np.eye(4), atol=1e-12)


def test_not_hermitian():
    with pytest.raises(NotHermitian):
        herm_eig(np.array([[0, 1], [0, 0]], dtype=complex))
    assert not is_hermitian(np.array([[1, 1j], [1j, 1]]))


def test_spectral_fn_exp_against_expm(rng):
    from scipy.linalg import expm

    for _ in range(50):
        a = random_hermitian(rng, scale=2.0)
        assert np.allclose(spectral_fn(a, np.exp), expm(a), rtol=1e-11, atol=1e-12)
        t = rng.uniform(-3, 3)
        assert np.allclose(spectral_fn(a, lambda e: np.exp(-1j * e * t)), expm(-1j * a * t), atol=1e-11)


def test_spectral_fn_overflow():
    with pytest.raises(NonFiniteResult):
        spectral_fn(np.diag([1000.0, 0, 0, 0]), np.exp)


@given(st.lists(st.floats(-50, 50), min_size=16, max_size=16))
def test_reconstruction_property(xs):
    a = np.array(xs).reshape(4, 4)
    a = a + 1j * a.T
    a = 0.5 * (a + a.conj().T)
    eig = herm_eig(a)
    scale = max(1.0, np.max(np.abs(a)))
    assert np.max(np.abs(eig.reconstruct() - a)) <= 1e-12 * scale * 10
    assert np.all(np.diff(eig.values) >= 0)
