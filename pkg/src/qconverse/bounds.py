"""Capacity-type maximizations and weak converse bound reports.

The maximizations run Nelder-Mead on a softmax parameterization of the
probability simplex from several deterministic starting points.  Results are
the best value found, i.e. lower estimates of the true maxima.  With two
states a dense one-dimensional grid is evaluated as an independent check.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import channels as ch
from . import linalg
from .errors import DimensionError
from .quantities import binary_entropy, coherent_information, entanglement_fidelity, von_neumann_entropy
from .states import Source, block_source, density_of_source

N_STARTS = 8
MAX_ITER = 400
XATOL = 1e-7
GRID_STEP = 1e-3
REPORT_TOL = 1e-8

BEST_FOUND = "best found (lower estimate of the max)"


@dataclass(frozen=True)
class SimplexPoint:
    probs: tuple

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-10:
            raise ValueError(f"not a probability vector: {p}")
        object.__setattr__(self, "probs", tuple(float(x) for x in p))

    @classmethod
    def from_logits(cls, z):
        full = np.concatenate([np.asarray(z, dtype=float), [0.0]])
        w = np.exp(full - full.max())
        return cls.normalized(w)

    @classmethod
    def normalized(cls, w):
        w = np.clip(np.asarray(w, dtype=float), 0.0, None)
        return cls(tuple(w / w.sum()))

    def as_array(self) -> np.ndarray:
        return np.array(self.probs)


@dataclass(frozen=True)
class SimplexMaximum:
    """Outcome of a simplex maximization.

    ``value`` is the best of the optimizer and (for two states) the grid.
    """

    point: SimplexPoint
    value: float
    optimizer_point: SimplexPoint
    optimizer_value: float
    grid_point: SimplexPoint | None = None
    grid_value: float | None = None
    n_starts: int = N_STARTS
    label: str = BEST_FOUND


def start_logits(n_points: int, n_starts: int, seed: int) -> list[np.ndarray]:
    """The uniform point first, then seeded random points; prefixes are stable in ``n_starts``."""
    starts = [np.zeros(n_points - 1)]
    for k in range(1, n_starts):
        rng = np.random.default_rng([seed, k])
        w = rng.standard_exponential(n_points)
        starts.append(np.log(w[:-1] / w[-1]))
    return starts


def maximize_on_simplex(objective, n_points: int, n_starts: int = N_STARTS, seed: int = 0,
                        grid_step: float | None = GRID_STEP) -> SimplexMaximum:
    """Maximize ``objective(p)`` over probability vectors of length ``n_points``."""
    if n_points < 1:
        raise ValueError("need at least one point")
    if n_points == 1:
        only = SimplexPoint((1.0,))
        v = float(objective(only.as_array()))
        return SimplexMaximum(only, v, only, v, n_starts=n_starts)

    def negated(z):
        return -objective(SimplexPoint.from_logits(z).as_array())

    best_z, best_v = None, -math.inf
    for z0 in start_logits(n_points, n_starts, seed):
        res = minimize(
            negated, z0, method="Nelder-Mead",
            options={"xatol": XATOL, "fatol": math.inf, "maxiter": MAX_ITER},
        )
        # the start itself counts, so the best-so-far never drops below it
        for z, v in ((z0, -negated(z0)), (res.x, -res.fun)):
            if v > best_v:
                best_z, best_v = np.array(z), float(v)
    opt_point = SimplexPoint.from_logits(best_z)

    grid_point = grid_value = None
    if n_points == 2 and grid_step:
        count = int(round(1.0 / grid_step))
        for k in range(count + 1):
            p = k / count
            v = float(objective(np.array([p, 1.0 - p])))
            if grid_value is None or v > grid_value:
                grid_point, grid_value = SimplexPoint((p, 1.0 - p)), v

    if grid_value is not None and grid_value > best_v:
        point, value = grid_point, grid_value
    else:
        point, value = opt_point, best_v
    return SimplexMaximum(point, value, opt_point, best_v, grid_point, grid_value, n_starts)


def _as_states(states) -> np.ndarray:
    if isinstance(states, Source):
        return states.states
    arr = np.atleast_2d(np.asarray(states, dtype=complex))
    Source(arr, np.full(arr.shape[0], 1.0 / arr.shape[0]))  # validates the vectors
    return arr


def maximize_input_entropy(states, n_starts: int = N_STARTS, seed: int = 0) -> SimplexMaximum:
    """``R_c = max_p S(Σ p_i |psi_i><psi_i|)``."""
    states = _as_states(states)

    def entropy_at(p):
        return von_neumann_entropy(density_of_source(Source(states, p)))

    return maximize_on_simplex(entropy_at, states.shape[0], n_starts, seed)


def maximize_coherent_info(states, channel: ch.KrausChannel, n: int = 1,
                           block_channel: ch.KrausChannel | None = None,
                           n_starts: int = N_STARTS, seed: int = 0) -> SimplexMaximum:
    """``C~ = max_p I(ρ^{⊗n}; S^{(n)}) / n``.

    ``block_channel`` overrides the memoryless ``channel^{⊗n}``, which lets a
    channel with memory act on the block.
    """
    states = _as_states(states)
    if channel.in_dim != states.shape[1]:
        raise DimensionError(f"channel expects dim {channel.in_dim}, states have dim {states.shape[1]}")
    joint = block_channel if block_channel is not None else ch.tensor_power(channel, n)
    if joint.in_dim != states.shape[1] ** n:
        raise DimensionError(f"block channel expects dim {joint.in_dim}, block has dim {states.shape[1] ** n}")

    def info_at(p):
        src = block_source(Source(states, p), n)
        return coherent_information(src, joint).coherent_information / n

    return maximize_on_simplex(info_at, states.shape[0], n_starts, seed)


@dataclass
class BoundReport:
    """Numerical check of one weak converse inequality ``bound_lhs <= bound_rhs``.

    For source reports ``bound_lhs`` is the rate gap ``S(ρ) - R`` and
    ``entropy_rate`` is ``S(ρ)``; for channel reports ``bound_lhs`` is
    ``(R_c - C~) n`` and ``entropy_rate`` is ``R_c``.
    """

    kind: str
    block_length: int
    rate: float
    entropy_rate: float
    capacity_bound: float | None
    entanglement_fidelity: float
    dimension: int
    bound_lhs: float
    bound_rhs: float
    slack: float
    satisfied: bool
    extras: dict = field(default_factory=dict)
    annotations: list = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {k: getattr(self, k) for k in (
            "kind", "block_length", "rate", "entropy_rate", "capacity_bound",
            "entanglement_fidelity", "dimension", "bound_lhs", "bound_rhs", "slack", "satisfied",
        )}
        out["extras"] = dict(self.extras)
        out["annotations"] = list(self.annotations)
        return out


def fano_block_rhs(fe: float, d: int, n: int) -> float:
    """``(1 - F_e) log2(d^{2n} - 1) + h(F_e)``, the Fano bound for an n-block."""
    return (1.0 - fe) * math.log2(float(d) ** (2 * n) - 1.0) + binary_entropy(fe)


def source_converse_report(s: Source, encoder: ch.KrausChannel, decoder: ch.KrausChannel,
                           n: int, tol: float = REPORT_TOL) -> BoundReport:
    """Check ``S(ρ) - R <= ((1 - F_e) log2(d^{2n} - 1) + h(F_e)) / n`` for one code.

    ``R = log2(code dimension) / n`` where the code dimension is the
    encoder's output dimension, and ``F_e`` is the entanglement fidelity of
    ``decoder ∘ encoder`` on the n-fold product source.
    """
    d = s.dim
    big = d**n
    if encoder.in_dim != big or decoder.out_dim != big:
        raise DimensionError(f"code must act on the {big}-dimensional block")
    code_dim = encoder.out_dim
    rate = math.log2(code_dim) / n
    entropy = von_neumann_entropy(density_of_source(s))
    composite = ch.compose(decoder, encoder)
    fe = entanglement_fidelity(block_source(s, n), composite)
    gap = entropy - rate
    rhs = fano_block_rhs(fe, d, n) / n
    slack = rhs - gap
    asymptotic_cap = 1.0 - gap / (2.0 * math.log2(d))
    return BoundReport(
        kind="source",
        block_length=n,
        rate=rate,
        entropy_rate=entropy,
        capacity_bound=None,
        entanglement_fidelity=fe,
        dimension=d,
        bound_lhs=gap,
        bound_rhs=rhs,
        slack=slack,
        satisfied=slack >= -tol,
        extras={
            "code_dim": code_dim,
            "delta": gap,
            "asymptotic_fidelity_cap": asymptotic_cap,
            "asymptotic_satisfied": fe <= asymptotic_cap + tol,
        },
        annotations=["C_s >= S(rho) (one-sided bound only)"],
    )


def source_converse_sweep(s: Source, block_lengths=(1, 2, 3), tol: float = REPORT_TOL) -> list[BoundReport]:
    """Reports for every typical-subspace code size at each block length."""
    rho = density_of_source(s)
    reports = []
    for n in block_lengths:
        for k in range(1, s.dim**n + 1):
            enc, dec, _ = ch.typical_subspace_encoder(rho, n, code_dim=k)
            reports.append(source_converse_report(s, enc, dec, n, tol))
    return reports


def channel_converse_report(states, p, channel: ch.KrausChannel,
                            encoder: ch.KrausChannel | None = None,
                            decoder: ch.KrausChannel | None = None, n: int = 1,
                            ctilde: float | None = None, rc: float | None = None,
                            seed: int = 0, tol: float = REPORT_TOL) -> BoundReport:
    """Check ``(R_c - C~) n <= (1 - F_e) log2(d^{2n} - 1) + h(F_e)``.

    ``encoder`` and ``decoder`` default to identity coding on the block.  The
    printed variant with an extra ``/n`` on the right is recorded in
    ``extras`` alongside the data-processing chain
    ``I(ρ^n; S^n) >= I(ρ^n; D S^n E)``.
    """
    states = _as_states(states)
    p = p.as_array() if isinstance(p, SimplexPoint) else np.asarray(p, dtype=float)
    d = states.shape[1]
    big = d**n
    block_ch = ch.tensor_power(channel, n)
    encoder = encoder if encoder is not None else ch.identity_channel(big)
    decoder = decoder if decoder is not None else ch.identity_channel(big)
    if encoder.in_dim != big or decoder.out_dim != big:
        raise DimensionError(f"coding must map the {big}-dimensional block to itself")

    ct_result = rc_result = None
    if ctilde is None:
        ct_result = maximize_coherent_info(states, channel, n, block_channel=block_ch, seed=seed)
        ctilde = ct_result.value
    if rc is None:
        rc_result = maximize_input_entropy(states, seed=seed)
        rc = rc_result.value

    src = block_source(Source(states, p), n)
    overall = ch.compose_all(decoder, block_ch, encoder)
    fe = entanglement_fidelity(src, overall)
    lhs = (rc - ctilde) * n
    rhs = fano_block_rhs(fe, d, n)
    slack = rhs - lhs
    chain_lhs = coherent_information(src, block_ch).coherent_information
    chain_rhs = coherent_information(src, overall).coherent_information
    encoder_isometry = len(encoder) == 1 and linalg.is_isometry(encoder.kraus_ops[0])

    extras = {
        "probs": [float(x) for x in p],
        "rhs_printed": rhs / n,
        "slack_printed": rhs / n - lhs,
        "satisfied_printed": rhs / n - lhs >= -tol,
        "chain_coherent_info_channel": chain_lhs,
        "chain_coherent_info_coded": chain_rhs,
        "chain_satisfied": chain_lhs >= chain_rhs - tol,
        "encoder_is_isometry": encoder_isometry,
    }
    if ct_result is not None:
        extras["ctilde_optimizer"] = ct_result.optimizer_value
        extras["ctilde_grid"] = ct_result.grid_value
        extras["ctilde_point"] = list(ct_result.point.probs)
    if rc_result is not None:
        extras["rc_point"] = list(rc_result.point.probs)
    return BoundReport(
        kind="channel",
        block_length=n,
        rate=rc,
        entropy_rate=rc,
        capacity_bound=ctilde,
        entanglement_fidelity=fe,
        dimension=d,
        bound_lhs=lhs,
        bound_rhs=rhs,
        slack=slack,
        satisfied=slack >= -tol,
        extras=extras,
        annotations=[
            "C_c <= C~ (one-sided bound only)",
            f"C~ is the {BEST_FOUND}",
            "printed variant divides the right side by n; derivation variant does not",
        ],
    )

