"""Quantum channels in Kraus form.

The action convention is ``S(ρ) = Σ_μ A_μ ρ A_μ†`` with trace preservation
``Σ_μ A_μ† A_μ = I``.  Unitality (``Σ_μ A_μ A_μ† = I``) is never assumed; it
is certified from the operators and exposed as :attr:`KrausChannel.unital`.
"""

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import linalg
from .errors import DimensionError, DomainError, InvalidChannelError, SizeLimitError, ValidationError
from .states import check_density

TP_TOL = 1e-9
MAX_KRAUS = 4096


@dataclass(frozen=True)
class ChannelValidation:
    trace_residual: float
    unital_residual: float | None
    unital: bool


def _stack(kraus_ops) -> np.ndarray:
    ops = np.asarray(kraus_ops, dtype=complex)
    if ops.ndim == 2:
        ops = ops[None]
    if ops.ndim != 3 or ops.shape[0] == 0:
        raise DimensionError("Kraus operators must be a non-empty list of equal-shape matrices")
    if not np.all(np.isfinite(ops)):
        raise ValidationError("Kraus operators contain non-finite entries")
    return ops


def validate(channel_or_ops, tol: float = TP_TOL) -> ChannelValidation:
    """Check trace preservation and certify unitality.

    Raises:
        InvalidChannelError: if ``max|Σ A†A - I| > tol``.
    """
    ops = channel_or_ops.kraus_ops if isinstance(channel_or_ops, KrausChannel) else _stack(channel_or_ops)
    _, d_out, d_in = ops.shape
    tp = np.einsum("kji,kjl->il", ops.conj(), ops)
    tp_resid = float(np.max(np.abs(tp - np.eye(d_in))))
    if tp_resid > tol:
        raise InvalidChannelError(
            f"Kraus operators are not trace preserving (residual {tp_resid:.3g})", tp_resid
        )
    if d_in != d_out:
        return ChannelValidation(tp_resid, None, False)
    un = np.einsum("kij,klj->il", ops, ops.conj())
    un_resid = float(np.max(np.abs(un - np.eye(d_out))))
    return ChannelValidation(tp_resid, un_resid, un_resid <= tol)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A trace-preserving completely positive map ``d_in -> d_out``.

    Construction validates the operators; an invalid set raises
    :class:`InvalidChannelError`.
    """

    kraus_ops: np.ndarray
    report: ChannelValidation = field(init=False, repr=False)

    def __post_init__(self):
        ops = _stack(self.kraus_ops)
        if ops.shape[0] > MAX_KRAUS:
            raise SizeLimitError(f"{ops.shape[0]} Kraus operators exceed the cap {MAX_KRAUS}")
        report = validate(ops)
        ops.setflags(write=False)
        object.__setattr__(self, "kraus_ops", ops)
        object.__setattr__(self, "report", report)

    @property
    def in_dim(self) -> int:
        return self.kraus_ops.shape[2]

    @property
    def out_dim(self) -> int:
        return self.kraus_ops.shape[1]

    @property
    def unital(self) -> bool:
        return self.report.unital

    def __len__(self):
        return self.kraus_ops.shape[0]

    def __call__(self, rho):
        return apply(self, rho)


def apply_operator(c: KrausChannel, x) -> np.ndarray:
    """Kraus sum on an arbitrary (not necessarily positive) operator ``x``."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (c.in_dim, c.in_dim):
        raise DimensionError(f"channel expects {c.in_dim}x{c.in_dim} input, got {x.shape}")
    a = c.kraus_ops
    return np.einsum("kij,jl,kml->im", a, x, a.conj(), optimize=True)


def apply(c: KrausChannel, rho) -> np.ndarray:
    """``Σ A ρ A†``; output re-symmetrized to absorb rounding asymmetry."""
    out = apply_operator(c, linalg.as_matrix(rho))
    return 0.5 * (out + out.conj().T)


def compose(second: KrausChannel, first: KrausChannel) -> KrausChannel:
    """The channel ``second ∘ first`` with Kraus set ``{B_ν A_μ}``."""
    if first.out_dim != second.in_dim:
        raise DimensionError(
            f"cannot compose: first outputs dim {first.out_dim}, second expects {second.in_dim}"
        )
    count = len(first) * len(second)
    if count > MAX_KRAUS:
        raise SizeLimitError(f"composition would have {count} Kraus operators (cap {MAX_KRAUS})")
    ops = np.einsum("nij,mjk->nmik", second.kraus_ops, first.kraus_ops)
    return KrausChannel(ops.reshape(count, second.out_dim, first.in_dim))


def compose_all(*channels: KrausChannel) -> KrausChannel:
    """Compose right-to-left: ``compose_all(c, b, a)`` applies ``a`` first."""
    out = channels[-1]
    for c in reversed(channels[:-1]):
        out = compose(c, out)
    return out


def tensor(a: KrausChannel, b: KrausChannel, max_dim: int = linalg.MAX_DIM) -> KrausChannel:
    count = len(a) * len(b)
    if count > MAX_KRAUS:
        raise SizeLimitError(f"tensor product would have {count} Kraus operators (cap {MAX_KRAUS})")
    ops = [linalg.kron(x, y, max_dim) for x, y in product(a.kraus_ops, b.kraus_ops)]
    return KrausChannel(np.array(ops))


def tensor_power(c: KrausChannel, n: int) -> KrausChannel:
    """Memoryless block channel ``c ⊗ ... ⊗ c`` (``n`` factors)."""
    if n < 1:
        raise ValueError(f"block length must be >= 1, got {n}")
    if len(c) ** n > MAX_KRAUS:
        raise SizeLimitError(f"{len(c)}**{n} Kraus operators exceed the cap {MAX_KRAUS}")
    if max(c.in_dim, c.out_dim) ** n > linalg.MAX_DIM:
        raise SizeLimitError(f"block dimension {max(c.in_dim, c.out_dim)}**{n} exceeds the size cap")
    out = c
    for _ in range(n - 1):
        out = tensor(out, c)
    return out


def extend_with_identity(c: KrausChannel, ref_dim: int) -> KrausChannel:
    """``1_R ⊗ c`` with the reference factor first."""
    if ref_dim < 1:
        raise ValueError(f"ref_dim must be >= 1, got {ref_dim}")
    eye = np.eye(ref_dim)
    return KrausChannel(np.array([linalg.kron(eye, a) for a in c.kraus_ops]))


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel(np.eye(d, dtype=complex)[None])


def unitary_channel(u) -> KrausChannel:
    return KrausChannel(np.asarray(u, dtype=complex)[None])


def dephasing_channel(d: int) -> KrausChannel:
    """Complete dephasing: Kraus projectors ``|μ><μ|`` onto the computational basis."""
    if d < 2:
        raise ValueError(f"dephasing needs d >= 2, got {d}")
    ops = np.zeros((d, d, d), dtype=complex)
    ops[np.arange(d), np.arange(d), np.arange(d)] = 1.0
    return KrausChannel(ops)


def weyl_operators(d: int) -> np.ndarray:
    """The ``d**2`` operators ``X^a Z^b``; ``(a, b) = (0, 0)`` comes first."""
    shift = np.roll(np.eye(d), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    ops = [
        np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)
        for a in range(d)
        for b in range(d)
    ]
    return np.array(ops, dtype=complex)


def depolarizing_channel(d: int, noise: float) -> KrausChannel:
    """``ρ -> (1 - noise) ρ + noise I/d`` realized with Weyl-operator Kraus terms."""
    if not 0.0 <= noise <= 1.0:
        raise DomainError(f"noise weight must lie in [0, 1], got {noise}")
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    w = weyl_operators(d)
    weights = np.full(d * d, noise / d**2)
    weights[0] = 1.0 - noise + noise / d**2
    return KrausChannel(np.sqrt(weights)[:, None, None] * w)


def random_channel(d_in: int, d_out: int, kraus_count: int, rng: np.random.Generator) -> KrausChannel:
    """Slice a random isometry ``C^{d_in} -> C^{k d_out}`` into Kraus blocks."""
    rows = kraus_count * d_out
    if kraus_count < 1 or rows < d_in:
        raise ValueError(f"need kraus_count * d_out >= d_in, got {kraus_count}*{d_out} < {d_in}")
    g = rng.standard_normal((rows, d_in)) + 1j * rng.standard_normal((rows, d_in))
    q, r = np.linalg.qr(g)
    # fix the phase freedom of QR so the sample depends only on g
    q = q * (np.diag(r) / np.abs(np.diag(r)))[None, :]
    return KrausChannel(q.reshape(kraus_count, d_out, d_in))


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))[None, :]


def random_unital_channel(d: int, n_unitaries: int, rng: np.random.Generator) -> KrausChannel:
    """Random mixture of unitaries, which is always unital."""
    weights = rng.standard_exponential(n_unitaries)
    weights /= weights.sum()
    ops = np.array([np.sqrt(w) * random_unitary(d, rng) for w in weights])
    return KrausChannel(ops)


def typical_subspace_encoder(rho, n: int, rate: float | None = None, code_dim: int | None = None):
    """Compression code keeping the dominant eigenvectors of ``ρ^{⊗n}``.

    Exactly one of ``rate`` (bits per symbol) or ``code_dim`` selects the code
    size ``k = floor(2**(n*rate))``.  The encoder maps ``d**n -> k`` with Kraus
    set ``{V†} ∪ {|0><f_j|}`` where ``V`` holds the top ``k`` eigenvectors and
    ``f_j`` span their complement; discarded weight lands on code word ``|0>``.
    The decoder is the isometric embedding ``V``.

    Returns:
        ``(encoder, decoder, code_dim)``
    """
    rho = check_density(rho)
    d = rho.shape[0]
    if n < 1:
        raise ValueError(f"block length must be >= 1, got {n}")
    big = d**n
    if big > linalg.MAX_DIM:
        raise SizeLimitError(f"block dimension {big} exceeds the size cap")
    if (rate is None) == (code_dim is None):
        raise ValueError("give exactly one of rate and code_dim")
    if code_dim is None:
        if rate < 0:
            raise ValueError(f"rate must be non-negative, got {rate}")
        code_dim = int(np.floor(2.0 ** (n * rate) + 1e-9))
    if not 1 <= code_dim <= big:
        raise ValueError(f"code dimension {code_dim} not in [1, {big}]: rate too large for block")

    spec = linalg.hermitian_eig(linalg.kron_power(rho, n))
    v = spec.eigenvectors[:, :code_dim]
    comp = spec.eigenvectors[:, code_dim:]
    enc_ops = [v.conj().T]
    for j in range(comp.shape[1]):
        op = np.zeros((code_dim, big), dtype=complex)
        op[0] = comp[:, j].conj()
        enc_ops.append(op)
    encoder = KrausChannel(np.array(enc_ops))
    decoder = KrausChannel(v[None])
    return encoder, decoder, code_dim
