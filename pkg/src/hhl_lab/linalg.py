"""Dense complex linear algebra behind the simulator.

Sparse matrices are stored row-wise with their sparsity as metadata, but
every numerical routine works on the dense form: the point of the
laboratory is exactness at small dimension, not speed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmbeddingRequiredError, NormBoundError, SingularMatrixError

NORM_TOL = 1e-9
HERMITIAN_TOL = 1e-12


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude entry of each column real and positive."""
    vecs = np.array(vecs, dtype=complex)
    idx = np.argmax(np.abs(vecs), axis=0)
    pivots = vecs[idx, np.arange(vecs.shape[1])]
    return vecs * (np.abs(pivots) / pivots)[None, :]


@dataclass(frozen=True, eq=False)
class SparseHermitianMatrix:
    """Hermitian matrix with at most ``sparsity`` nonzeros per row and norm <= 1.

    ``rows[i]`` is a tuple of ``(column, value)`` pairs sorted by column.
    Build instances with :meth:`from_dense` or :meth:`from_entries`.
    """

    dim: int
    rows: tuple
    sparsity: int
    norm: float = field(default=0.0)

    @classmethod
    def from_dense(cls, a, *, atol: float = HERMITIAN_TOL) -> "SparseHermitianMatrix":
        a = np.asarray(a, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise EmbeddingRequiredError(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix has non-finite entries")
        scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
        if not np.allclose(a, a.conj().T, rtol=0.0, atol=atol * scale):
            raise EmbeddingRequiredError("matrix is not Hermitian; use hermitian_embed")
        a = 0.5 * (a + a.conj().T)
        rows = tuple(
            tuple((int(j), complex(a[i, j])) for j in np.flatnonzero(a[i]))
            for i in range(a.shape[0])
        )
        sparsity = max((len(r) for r in rows), default=0)
        norm = float(np.max(np.abs(np.linalg.eigvalsh(a)))) if a.size else 0.0
        if norm > 1.0 + NORM_TOL:
            raise NormBoundError(norm)
        return cls(dim=a.shape[0], rows=rows, sparsity=sparsity, norm=min(norm, 1.0))

    @classmethod
    def from_entries(cls, dim: int, entries) -> "SparseHermitianMatrix":
        """Build from upper-triangle ``(i, j, value)`` triples; the lower triangle is implied."""
        a = np.zeros((dim, dim), dtype=complex)
        for i, j, v in entries:
            if j < i:
                raise ValueError(f"entry ({i}, {j}) is below the diagonal")
            a[i, j] = v
            if i != j:
                a[j, i] = np.conj(v)
            elif abs(np.imag(v)) > HERMITIAN_TOL:
                raise EmbeddingRequiredError(f"diagonal entry ({i}, {i}) is not real")
        return cls.from_dense(a)

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.dim, self.dim), dtype=complex)
        for i, row in enumerate(self.rows):
            for j, v in row:
                a[i, j] = v
        return a

    def upper_entries(self):
        for i, row in enumerate(self.rows):
            for j, v in row:
                if j >= i:
                    yield i, j, v

    def __array__(self, dtype=None, copy=None):
        a = self.to_dense()
        return a if dtype is None else a.astype(dtype)


def as_hermitian(a) -> SparseHermitianMatrix:
    if isinstance(a, SparseHermitianMatrix):
        return a
    return SparseHermitianMatrix.from_dense(a)


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Ascending eigenvalues and orthonormal eigenvectors (as columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def coefficients(self, b) -> np.ndarray:
        """Expansion coefficients beta_j = <u_j|b>."""
        return self.eigenvectors.conj().T @ np.asarray(b, dtype=complex)

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def apply_function(self, func, b) -> np.ndarray:
        """Return sum_j func(lambda_j) beta_j |u_j>."""
        vals = np.asarray(func(self.eigenvalues))
        return self.eigenvectors @ (vals * self.coefficients(b))


def eig_hermitian(a) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Accepts a :class:`SparseHermitianMatrix` or any Hermitian array (norm is
    not checked for plain arrays).
    """
    if isinstance(a, SparseHermitianMatrix):
        dense = a.to_dense()
    else:
        dense = np.asarray(a, dtype=complex)
        if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
            raise EmbeddingRequiredError(f"expected a square matrix, got shape {dense.shape}")
        scale = max(1.0, float(np.max(np.abs(dense))))
        if not np.allclose(dense, dense.conj().T, rtol=0.0, atol=HERMITIAN_TOL * scale):
            raise EmbeddingRequiredError("matrix is not Hermitian; use hermitian_embed")
    w, v = np.linalg.eigh(dense)
    return EigenDecomposition(eigenvalues=w, eigenvectors=_fix_phases(v))


def singular_values(a) -> np.ndarray:
    if isinstance(a, SparseHermitianMatrix):
        return np.sort(np.abs(np.linalg.eigvalsh(a.to_dense())))[::-1]
    return np.linalg.svd(np.asarray(a, dtype=complex), compute_uv=False)


def condition_number(a) -> float:
    """sigma_max / sigma_min; raises :class:`SingularMatrixError` if sigma_min is ~0."""
    s = singular_values(a)
    smax, smin = float(s[0]), float(s[-1])
    if smin <= smax * np.finfo(float).eps * len(s):
        raise SingularMatrixError(smin)
    return smax / smin


def mat_exp_unitary(a, t: float, eig: EigenDecomposition | None = None) -> np.ndarray:
    """exp(i A t) built from the eigendecomposition."""
    eig = eig or eig_hermitian(a)
    v = eig.eigenvectors
    return (v * np.exp(1j * eig.eigenvalues * t)) @ v.conj().T


def hermitian_embed(a) -> SparseHermitianMatrix:
    """[[0, A], [A^dagger, 0]] for an M x N matrix A."""
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    m, n = a.shape
    h = np.zeros((m + n, m + n), dtype=complex)
    h[:m, m:] = a
    h[m:, :m] = a.conj().T
    return SparseHermitianMatrix.from_dense(h)


def scale_to_unit_norm(a) -> tuple[np.ndarray, float]:
    """Return (A / ||A||, ||A||)."""
    a = np.asarray(a, dtype=complex)
    norm = float(np.linalg.norm(a, 2))
    return a / norm, norm
