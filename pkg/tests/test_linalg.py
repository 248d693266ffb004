import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from entkit.linalg import (
    hermitian_eig,
    is_hermitian,
    kron,
    matrix_power,
    psd_spectrum,
    random_unitary,
    sqrtm_psd,
    svd,
    trace_norm,
)


def _random_hermitian(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return a + a.conj().T


def test_eig_diagonal_descending():
    vals, _ = hermitian_eig(np.diag([1.0, 2.0]))
    assert np.allclose(vals, [2.0, 1.0])


def test_eig_pauli_x():
    vals, _ = hermitian_eig(np.array([[0, 1], [1, 0]]))
    assert np.allclose(vals, [1.0, -1.0])


def test_eig_reconstruction_and_unitarity(rng):
    m = _random_hermitian(rng, 8)
    vals, vecs = hermitian_eig(m)
    assert np.max(np.abs(vecs @ np.diag(vals) @ vecs.conj().T - m)) <= 1e-9 * np.linalg.norm(m)
    assert np.max(np.abs(vecs.conj().T @ vecs - np.eye(8))) <= 1e-10


def test_eig_rejects_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_eig(np.array([[0, 1], [0, 0]]))


def test_svd_identity_and_rank_one(rng):
    _, s, _ = svd(np.eye(3))
    assert np.allclose(s, 1.0)
    a = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    b = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    a, b = a / np.linalg.norm(a), b / np.linalg.norm(b)
    _, s, _ = svd(np.outer(a, b.conj()))
    assert s[0] == pytest.approx(1.0, abs=1e-12)
    assert np.all(s[1:] < 1e-12)


def test_svd_reconstruction(rng):
    m = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
    u, s, v = svd(m)
    assert np.all(np.diff(s) <= 0)
    recon = u @ np.diag(s) @ v.conj().T
    assert np.max(np.abs(recon - m)) < 1e-9


def test_trace_norm_values():
    assert trace_norm(np.diag([1.0, -2.0])) == pytest.approx(3.0)
    bell_pt = 0.5 * np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    assert trace_norm(bell_pt) == pytest.approx(2.0, abs=1e-12)


def test_matrix_power_examples():
    assert np.allclose(matrix_power(np.eye(2) / 2, 2), np.eye(2) / 4)
    assert np.allclose(sqrtm_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))
    assert np.trace(matrix_power(np.diag([0.5, 0.3, 0.2]), 3)).real == pytest.approx(0.160, abs=1e-12)


def test_kron_examples(rng):
    assert np.allclose(kron([np.eye(2), np.eye(2)]), np.eye(4))
    assert np.allclose(kron([np.diag([1, 0]), np.diag([0, 1])]), np.diag([0, 1, 0, 0]))
    a, b = rng.standard_normal((2, 2)), rng.standard_normal((3, 3))
    assert np.trace(kron([a, b])) == pytest.approx(np.trace(a) * np.trace(b), abs=1e-12)


def test_psd_spectrum_clips_noise():
    spec = psd_spectrum(np.diag([0.5, 0.5, -1e-14]))
    assert np.all(spec >= 0)
    assert spec[0] == pytest.approx(0.5)


@given(st.integers(2, 6), st.integers(0, 2**31 - 1))
def test_random_unitary_is_unitary(d, seed):
    u = random_unitary(d, np.random.default_rng(seed))
    assert np.max(np.abs(u.conj().T @ u - np.eye(d))) < 1e-10


@given(st.integers(2, 6), st.integers(0, 2**31 - 1))
def test_hermitian_flag_and_trace_norm_of_density(d, seed):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    assert is_hermitian(rho)
    assert trace_norm(rho) == pytest.approx(1.0, abs=1e-10)
