"""Dense complex linear algebra used by every other module.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.  All
functions are pure and never modify their arguments.
"""

from functools import reduce
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionError, NumericError, PositivityError, SizeLimitError, ValidationError

MAX_DIM = 4096
HERMITICITY_TOL = 1e-9
POSITIVITY_TOL = 1e-10
TRACE_TOL = 1e-8
EIGENVALUE_CUTOFF = 1e-12


class Spectrum(NamedTuple):
    """Eigenvalues in descending order and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m, name="matrix") -> np.ndarray:
    """Return ``m`` as a finite 2-D complex array, raising on anything else."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def _check_size(rows, cols, max_dim):
    if rows > max_dim or cols > max_dim:
        raise SizeLimitError(f"result of shape ({rows}, {cols}) exceeds the size cap {max_dim}")


def kron(a, b, max_dim: int = MAX_DIM) -> np.ndarray:
    """Kronecker product ``a ⊗ b`` with a guard on the result size."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or b.ndim != 2:
        raise DimensionError("kron expects two matrices")
    _check_size(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1], max_dim)
    return np.kron(a, b)


def kron_all(mats: Sequence, max_dim: int = MAX_DIM) -> np.ndarray:
    if not mats:
        raise ValueError("kron_all needs at least one factor")
    return reduce(lambda x, y: kron(x, y, max_dim), mats)


def kron_power(m, n: int, max_dim: int = MAX_DIM) -> np.ndarray:
    """``m ⊗ m ⊗ ... ⊗ m`` with ``n`` factors."""
    if n < 1:
        raise ValueError(f"block length must be >= 1, got {n}")
    return kron_all([m] * n, max_dim)


def partial_trace(m, dims, keep) -> np.ndarray:
    """Trace out one factor of a bipartite operator.

    Args:
        m: square matrix acting on ``A ⊗ B`` with ``dims == (dA, dB)``.
        dims: the two factor dimensions.
        keep: ``"A"``/``0`` keeps the first factor, ``"B"``/``1`` the second.

    Returns:
        The reduced matrix on the kept factor.
    """
    m = as_matrix(m)
    d_a, d_b = (int(d) for d in dims)
    if m.shape != (d_a * d_b, d_a * d_b):
        raise DimensionError(f"matrix of shape {m.shape} does not act on a {d_a}x{d_b} system")
    t = m.reshape(d_a, d_b, d_a, d_b)
    if keep in ("A", 0):
        return np.einsum("ijkj->ik", t)
    if keep in ("B", 1):
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def hermiticity_residual(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def hermitian_eig(m, tol: float = HERMITICITY_TOL) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    The input is symmetrized as ``(m + m†)/2`` first; asymmetry beyond ``tol``
    (max-norm) is rejected rather than silently discarded.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    resid = hermiticity_residual(m)
    if resid > tol:
        raise ValidationError(f"matrix is not Hermitian (max |m - m†| = {resid:.3e})")
    h = 0.5 * (m + m.conj().T)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigendecomposition did not converge: {exc}") from exc
    return Spectrum(w[::-1].copy(), v[:, ::-1].copy())


def spectral_log2_weighted(m) -> float:
    """``-Σ λ log2 λ`` over the spectrum of a density-like matrix.

    Eigenvalues down to ``-1e-10`` are clamped to zero and anything below
    ``1e-12`` counts as an exact zero, so ``0 log 0 = 0``.
    """
    m = as_matrix(m)
    tr = np.trace(m).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValidationError(f"trace is {tr!r}, expected 1")
    lam = hermitian_eig(m).eigenvalues
    if lam[-1] < -POSITIVITY_TOL:
        raise PositivityError(f"negative eigenvalue {lam[-1]:.3e}")
    lam = lam[lam > EIGENVALUE_CUTOFF]
    s = float(-np.sum(lam * np.log2(lam)))
    return s if s > 0.0 else 0.0


def is_isometry(v, tol: float = 1e-9) -> bool:
    v = np.asarray(v)
    return bool(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1]))) <= tol)
