"""Scalar information quantities for sources and channels, all in bits."""

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .channels import KrausChannel, apply, apply_operator, extend_with_identity
from .errors import ConsistencyError, DimensionError, DomainError
from .states import Source, check_density, density_of_source, purify

FIDELITY_FORM_TOL = 1e-9
CLAMP_SLACK = 1e-10
SUPPORT_WEIGHT_TOL = 1e-10


class _Divergent:
    """Value of a relative entropy whose first argument escapes the support of the second.

    Compares greater than every real number and refuses arithmetic, so an
    infinite relative entropy can never leak into a sum or a mean.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "DIVERGENT"

    __str__ = __repr__

    def __float__(self):
        return math.inf

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("DIVERGENT")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


DIVERGENT = _Divergent()


def is_divergent(x) -> bool:
    return x is DIVERGENT


@dataclass(frozen=True)
class FidelityPair:
    entanglement_fidelity: float
    average_fidelity: float


@dataclass(frozen=True)
class CoherentInfoBreakdown:
    output_entropy: float
    entropy_exchange: float
    coherent_information: float


def von_neumann_entropy(rho) -> float:
    """``S(ρ) = -tr ρ log2 ρ``."""
    return linalg.spectral_log2_weighted(check_density(rho))


def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"binary entropy needs x in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def relative_entropy(rho1, rho2):
    """``S(ρ1||ρ2) = tr ρ1 log2 ρ1 - tr ρ1 log2 ρ2``.

    Returns :data:`DIVERGENT` when ``ρ1`` has weight outside the support of
    ``ρ2`` (eigenvalues of ``ρ2`` below ``1e-12`` span its kernel).
    """
    rho1 = check_density(rho1, "first argument")
    rho2 = check_density(rho2, "second argument")
    if rho1.shape != rho2.shape:
        raise DimensionError(f"relative entropy of {rho1.shape} and {rho2.shape} matrices")
    s1 = linalg.hermitian_eig(rho1)
    s2 = linalg.hermitian_eig(rho2)
    lam1 = np.clip(s1.eigenvalues, 0.0, None)
    lam2 = np.clip(s2.eigenvalues, 0.0, None)

    # weights[i, j] = |<e1_i|e2_j>|^2 lam1_i  -> tr(ρ1 P_j) = Σ_i weights[i, j]
    overlaps = np.abs(s1.eigenvectors.conj().T @ s2.eigenvectors) ** 2
    mass_on_2 = lam1 @ overlaps
    kernel = lam2 <= linalg.EIGENVALUE_CUTOFF
    if np.sum(mass_on_2[kernel]) > SUPPORT_WEIGHT_TOL:
        return DIVERGENT
    keep1 = lam1 > linalg.EIGENVALUE_CUTOFF
    first = float(np.sum(lam1[keep1] * np.log2(lam1[keep1])))
    second = float(np.sum(mass_on_2[~kernel] * np.log2(lam2[~kernel])))
    value = first - second
    # non-negative by Klein's inequality; absorb rounding below zero
    return max(value, 0.0) if value > -1e-9 else value


def extended_output(s: Source, c: KrausChannel) -> np.ndarray:
    """``(1_R ⊗ S)(|psi_R><psi_R|)`` on reference ⊗ output."""
    if c.in_dim != s.dim:
        raise DimensionError(f"channel expects dim {c.in_dim}, source states have dim {s.dim}")
    psi = purify(s)
    return apply(extend_with_identity(c, psi.ref_dim), psi.projector())


def entropy_exchange(s: Source, c: KrausChannel) -> float:
    """Entropy of the purification after the channel acts on the system factor."""
    return von_neumann_entropy(extended_output(s, c))


def coherent_information(s: Source, c: KrausChannel) -> CoherentInfoBreakdown:
    """``I(ρ; S) = S(S ρ) - S_exchange``.  May be negative."""
    out = von_neumann_entropy(apply(c, density_of_source(s)))
    exch = entropy_exchange(s, c)
    return CoherentInfoBreakdown(out, exch, out - exch)


def _check_square_channel(s: Source, c: KrausChannel):
    if c.in_dim != s.dim or c.out_dim != s.dim:
        raise DimensionError(
            f"fidelity needs a {s.dim} -> {s.dim} channel, got {c.in_dim} -> {c.out_dim}"
        )


def _clamp_unit(x: float, what: str) -> float:
    if x < -CLAMP_SLACK or x > 1.0 + CLAMP_SLACK:
        raise ConsistencyError(f"{what} {x!r} outside [0, 1]")
    return float(min(max(x, 0.0), 1.0))


def entanglement_fidelity_forms(s: Source, c: KrausChannel) -> tuple[float, float]:
    """Entanglement fidelity evaluated two ways: ``(purification, ensemble)``.

    The purification form is ``<psi_R|(1 ⊗ S)(|psi_R><psi_R|)|psi_R>``.  The
    ensemble form is ``Σ_ij p_i p_j <psi_i| S(|psi_i><psi_j|) |psi_j>``.
    """
    _check_square_channel(s, c)
    psi = purify(s)
    omega = apply(extend_with_identity(c, psi.ref_dim), psi.projector())
    purif = float(np.real(np.vdot(psi.vector, omega @ psi.vector)))

    ens = 0.0 + 0.0j
    for i in range(s.size):
        for j in range(s.size):
            img = apply_operator(c, np.outer(s.states[i], s.states[j].conj()))
            ens += s.probs[i] * s.probs[j] * np.vdot(s.states[i], img @ s.states[j])
    return purif, float(ens.real)


def entanglement_fidelity(s: Source, c: KrausChannel) -> float:
    """Entanglement fidelity of ``c`` on the source.

    Both the purification and ensemble forms are computed; disagreement
    beyond 1e-9 raises :class:`ConsistencyError`.
    """
    purif, ens = entanglement_fidelity_forms(s, c)
    if abs(purif - ens) > FIDELITY_FORM_TOL:
        raise ConsistencyError(f"entanglement fidelity forms disagree: {purif!r} vs {ens!r}")
    return _clamp_unit(purif, "entanglement fidelity")


def average_fidelity(s: Source, c: KrausChannel) -> float:
    """``Σ p_i <psi_i| S(|psi_i><psi_i|) |psi_i>``."""
    _check_square_channel(s, c)
    total = 0.0
    for p, psi in zip(s.probs, s.states):
        out = apply_operator(c, np.outer(psi, psi.conj()))
        total += p * float(np.real(np.vdot(psi, out @ psi)))
    return _clamp_unit(total, "average fidelity")


def fidelities(s: Source, c: KrausChannel) -> FidelityPair:
    return FidelityPair(entanglement_fidelity(s, c), average_fidelity(s, c))


def fano_bound(fe: float, d: int) -> float:
    """Upper bound ``(1 - F_e) log2(d^2 - 1) + h(F_e)`` on the entropy exchange."""
    if d < 2:
        raise DomainError(f"Fano bound needs output dimension >= 2, got {d}")
    if not 0.0 <= fe <= 1.0:
        raise DomainError(f"entanglement fidelity must lie in [0, 1], got {fe}")
    return (1.0 - fe) * math.log2(d * d - 1) + binary_entropy(fe)
