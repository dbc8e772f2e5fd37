import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_hermitian
from hhl_lab.errors import EmbeddingRequiredError, NormBoundError, SingularMatrixError
from hhl_lab.linalg import (
    SparseHermitianMatrix,
    condition_number,
    eig_hermitian,
    hermitian_embed,
    mat_exp_unitary,
    scale_to_unit_norm,
)


def test_identity_eigenvalues():
    e = eig_hermitian(np.eye(4))
    assert np.allclose(e.eigenvalues, 1.0)


def test_diagonal_eigenvalues_sorted():
    e = eig_hermitian(np.diag([1.0, 0.5]))
    assert np.allclose(e.eigenvalues, [0.5, 1.0])


def test_reconstruction_and_orthonormality(rng):
    a = random_hermitian(8, rng, signs=True)
    e = eig_hermitian(a)
    assert np.max(np.abs(e.reconstruct() - a)) < 1e-9
    gram = e.eigenvectors.conj().T @ e.eigenvectors
    assert np.max(np.abs(gram - np.eye(8))) < 1e-10


def test_phase_convention_is_deterministic(rng):
    a = random_hermitian(5, rng)
    v = eig_hermitian(a).eigenvectors
    piv = v[np.argmax(np.abs(v), axis=0), np.arange(5)]
    assert np.allclose(piv.imag, 0.0) and np.all(piv.real > 0)


def test_non_hermitian_rejected():
    with pytest.raises(EmbeddingRequiredError):
        eig_hermitian(np.array([[0, 1], [0, 0]]))
    with pytest.raises(EmbeddingRequiredError):
        SparseHermitianMatrix.from_dense(np.ones((2, 3)))


def test_norm_bound():
    with pytest.raises(NormBoundError):
        SparseHermitianMatrix.from_dense(np.diag([1.1, 0.2]))
    m = SparseHermitianMatrix.from_dense(np.diag([1 + 5e-10, 0.2]))
    assert m.norm == 1.0


def test_sparse_roundtrip_and_sparsity(rng):
    a = random_hermitian(6, rng)
    a[np.abs(a) < 0.1] = 0
    a = 0.5 * (a + a.conj().T)
    a /= max(1.0, np.abs(np.linalg.eigvalsh(a)).max())
    m = SparseHermitianMatrix.from_dense(a)
    assert np.array_equal(m.to_dense(), 0.5 * (a + a.conj().T))
    assert m.sparsity == max(np.count_nonzero(r) for r in a)


def test_from_entries_upper_triangle():
    m = SparseHermitianMatrix.from_entries(2, [(0, 0, 0.5), (0, 1, 0.25j), (1, 1, -0.5)])
    assert m.to_dense()[1, 0] == -0.25j
    with pytest.raises(ValueError):
        SparseHermitianMatrix.from_entries(2, [(1, 0, 0.1)])


def test_condition_number():
    assert condition_number(np.eye(3)) == pytest.approx(1.0)
    assert condition_number(np.diag([1.0, 0.25])) == pytest.approx(4.0)
    with pytest.raises(SingularMatrixError) as exc:
        condition_number(np.diag([1.0, 0.0]))
    assert exc.value.sigma_min == 0.0


def test_mat_exp_examples():
    assert np.allclose(mat_exp_unitary(np.diag([1.0, 0.5]), 0.0), np.eye(2))
    u = mat_exp_unitary(np.diag([1.0, 0.5]), np.pi)
    assert np.allclose(u, np.diag([np.exp(1j * np.pi), np.exp(1j * np.pi / 2)]), atol=1e-12)


def test_mat_exp_unitary_and_group_law(rng):
    a = random_hermitian(6, rng, signs=True)
    u = mat_exp_unitary(a, 1.7)
    assert np.max(np.abs(u.conj().T @ u - np.eye(6))) < 1e-10
    assert np.max(np.abs(mat_exp_unitary(a, 0.4) @ mat_exp_unitary(a, 1.3) - mat_exp_unitary(a, 1.7))) < 1e-9


def test_embedding_scalar():
    e = eig_hermitian(hermitian_embed(np.array([[0.5]])))
    assert np.allclose(e.eigenvalues, [-0.5, 0.5])


def test_embedding_singular_values(rng):
    u, _ = np.linalg.qr(rng.normal(size=(2, 2)))
    v, _ = np.linalg.qr(rng.normal(size=(2, 2)))
    a = u @ np.diag([1.0, 1 / 3]) @ v.T
    e = eig_hermitian(hermitian_embed(a))
    assert np.allclose(e.eigenvalues, [-1, -1 / 3, 1 / 3, 1], atol=1e-12)


def test_embedding_rectangular_zero_mode(rng):
    a = rng.normal(size=(2, 3))
    a /= np.linalg.norm(a, 2)
    lam = eig_hermitian(hermitian_embed(a)).eigenvalues
    assert np.sum(np.abs(lam) < 1e-12) == 1


def test_scale_to_unit_norm(rng):
    a = rng.normal(size=(3, 4))
    b, s = scale_to_unit_norm(a)
    assert np.linalg.norm(b, 2) == pytest.approx(1.0)
    assert np.allclose(b * s, a)


@settings(max_examples=25, deadline=None)
@given(n=st.integers(1, 5), m=st.integers(1, 5), seed=st.integers(0, 10_000))
def test_embedding_spectrum_pairs(n, m, seed):
    r = np.random.default_rng(seed)
    a = r.normal(size=(m, n)) + 1j * r.normal(size=(m, n))
    a /= np.linalg.norm(a, 2)
    lam = eig_hermitian(hermitian_embed(a)).eigenvalues
    assert np.allclose(np.sort(lam), np.sort(-lam), atol=1e-9)
    sv = np.linalg.svd(a, compute_uv=False)
    assert np.allclose(np.sort(lam[lam > 1e-9]), np.sort(sv[sv > 1e-9]), atol=1e-9)
