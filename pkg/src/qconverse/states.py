"""Pure-state ensembles, density matrices and purifications.

A density matrix is an ordinary complex ndarray; :func:`check_density`
certifies the Hermitian / positive / unit-trace invariants when needed.
Purifications put the reference factor first, so vectors live on
``H_R ⊗ H`` and reference index ``i`` is the slow index.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np

from . import linalg
from .errors import DimensionError, PositivityError, ValidationError

NORM_TOL = 1e-10
PROB_TOL = 1e-10


def check_density(rho, name="density matrix") -> np.ndarray:
    """Validate ``rho`` as a density matrix and return it as a complex array."""
    rho = linalg.as_matrix(rho, name)
    if rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {rho.shape}")
    resid = linalg.hermiticity_residual(rho)
    if resid > linalg.HERMITICITY_TOL:
        raise ValidationError(f"{name} is not Hermitian (residual {resid:.3e})")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > linalg.TRACE_TOL:
        raise ValidationError(f"{name} has trace {tr!r}, expected 1")
    lam_min = linalg.hermitian_eig(rho).eigenvalues[-1]
    if lam_min < -linalg.POSITIVITY_TOL:
        raise PositivityError(f"{name} has negative eigenvalue {lam_min:.3e}")
    return rho


@dataclass(frozen=True, eq=False)
class Source:
    """Ensemble of pure states ``|psi_i>`` used with probabilities ``p_i``.

    ``states`` has shape ``(N, d)``, one unit vector per row.  States need not
    be orthogonal.
    """

    states: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        states = np.atleast_2d(np.asarray(self.states, dtype=complex))
        probs = np.atleast_1d(np.asarray(self.probs, dtype=float))
        if states.ndim != 2 or states.shape[0] < 1 or states.shape[1] < 1:
            raise ValidationError(f"states must be a non-empty (N, d) array, got shape {states.shape}")
        if probs.shape != (states.shape[0],):
            raise ValidationError(
                f"{probs.size} probabilities given for {states.shape[0]} states"
            )
        if not (np.all(np.isfinite(states)) and np.all(np.isfinite(probs))):
            raise ValidationError("source contains non-finite entries")
        norms = np.linalg.norm(states, axis=1)
        bad = np.flatnonzero(np.abs(norms**2 - 1.0) > NORM_TOL)
        if bad.size:
            raise ValidationError(
                f"state {bad[0]} is not normalized (norm squared {norms[bad[0]] ** 2:.12g})"
            )
        if np.any(probs < 0):
            raise ValidationError(f"probabilities must be non-negative, got {probs.min():.12g}")
        total = probs.sum()
        if abs(total - 1.0) > PROB_TOL:
            raise ValidationError(f"probabilities sum to {total:.12g}")
        states.setflags(write=False)
        probs.setflags(write=False)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "probs", probs)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    @property
    def size(self) -> int:
        return self.states.shape[0]

    def with_probs(self, probs) -> "Source":
        return Source(self.states, probs)


@dataclass(frozen=True, eq=False)
class Purification:
    vector: np.ndarray
    ref_dim: int
    sys_dim: int

    def projector(self) -> np.ndarray:
        return np.outer(self.vector, self.vector.conj())

    def amplitudes(self) -> np.ndarray:
        """The vector as an ``(ref_dim, sys_dim)`` matrix of amplitudes."""
        return self.vector.reshape(self.ref_dim, self.sys_dim)


def density_of_source(s: Source) -> np.ndarray:
    """``ρ = Σ p_i |psi_i><psi_i|``."""
    rho = np.einsum("i,ia,ib->ab", s.probs, s.states, s.states.conj())
    return check_density(rho, "source density")


def purify(s: Source) -> Purification:
    """``|psi_R> = Σ sqrt(p_i) |i> ⊗ |psi_i>`` with ``|i>`` the computational basis of ``H_R``."""
    amps = np.sqrt(s.probs)[:, None] * s.states
    vec = amps.reshape(-1)
    return Purification(vec, s.size, s.dim)


def reference_state(s: Source) -> np.ndarray:
    """Reduced state of the purification on the reference factor.

    Entry ``(i, j)`` is ``sqrt(p_i p_j) <psi_j|psi_i>``, the exact partial
    trace over the system.  Its spectrum equals that of ``density_of_source``.
    """
    gram = s.states.conj() @ s.states.T  # gram[j, i] = <psi_j|psi_i>
    sq = np.sqrt(s.probs)
    ref = sq[:, None] * gram.T * sq[None, :]
    return check_density(ref, "reference state")


def block_source(s: Source, n: int) -> Source:
    """The n-fold product ensemble ``{Π p_i, ⊗ |psi_i>}`` realizing ``ρ^{⊗n}``."""
    if n < 1:
        raise ValueError(f"block length must be >= 1, got {n}")
    if n == 1:
        return s
    idx = list(product(range(s.size), repeat=n))
    dim = s.dim**n
    if dim > linalg.MAX_DIM or len(idx) * dim > linalg.MAX_DIM**2:
        raise linalg.SizeLimitError(f"block source with n={n} exceeds the size cap")
    states = np.empty((len(idx), dim), dtype=complex)
    probs = np.empty(len(idx))
    for k, word in enumerate(idx):
        vec = s.states[word[0]]
        for i in word[1:]:
            vec = np.kron(vec, s.states[i])
        states[k] = vec
        probs[k] = np.prod(s.probs[list(word)])
    # products of unit vectors drift slightly off the unit sphere
    states /= np.linalg.norm(states, axis=1)[:, None]
    return Source(states, probs / probs.sum())


def random_density(d: int, rng: np.random.Generator) -> np.ndarray:
    """Normalized ``G G†`` for a ``d x d`` complex Gaussian ``G``."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_state_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_source(d: int, n_states: int, rng: np.random.Generator) -> Source:
    """Gaussian unit vectors with probabilities uniform on the simplex."""
    if d < 1 or n_states < 1:
        raise ValueError("need d >= 1 and n_states >= 1")
    states = rng.standard_normal((n_states, d)) + 1j * rng.standard_normal((n_states, d))
    states /= np.linalg.norm(states, axis=1)[:, None]
    e = rng.standard_exponential(n_states)
    return Source(states, e / e.sum())


def basis_source(d: int, probs=None) -> Source:
    """Computational basis states ``|0>, ..., |d-1>``, uniform unless ``probs`` given."""
    probs = np.full(d, 1.0 / d) if probs is None else probs
    return Source(np.eye(d, dtype=complex), probs)
