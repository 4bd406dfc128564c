"""Randomized checks of the entropic inequalities behind the converse theorems.

Each family draws fresh instances from a generator seeded by
``(seed, family index, trial index)``, so every trial is reproducible on its
own and results do not depend on evaluation order.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import channels as ch
from . import linalg
from .quantities import (
    average_fidelity,
    coherent_information,
    entanglement_fidelity,
    entropy_exchange,
    extended_output,
    fano_bound,
    is_divergent,
    relative_entropy,
    von_neumann_entropy,
)
from .states import density_of_source, random_density, random_source, reference_state

FAMILIES = (
    "fidelity_order",
    "lindblad_monotonicity",
    "coherent_info_monotonicity",
    "h_theorem",
    "quantum_fano",
    "relative_entropy_identity",
)
MAX_LOGGED_FAILURES = 20


@dataclass
class SuiteConfig:
    trials: int = 1000
    seed: int = 0
    dim_min: int = 2
    dim_max: int = 4
    max_states: int = 4
    max_kraus: int = 4
    tolerance: float = 1e-9
    identity_tolerance: float = 1e-8
    families: tuple = FAMILIES

    def __post_init__(self):
        if self.trials < 0:
            raise ValueError("trials must be non-negative")
        if not 1 <= self.dim_min <= self.dim_max:
            raise ValueError(f"bad dimension range [{self.dim_min}, {self.dim_max}]")
        unknown = set(self.families) - set(FAMILIES)
        if unknown:
            raise ValueError(f"unknown families: {sorted(unknown)}")


@dataclass
class FamilyResult:
    name: str
    trials: int = 0
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    worst_slack: float | None = None
    worst_trial: int | None = None
    failing_trials: list = field(default_factory=list)
    worst_failure: dict | None = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "passed": self.passed,
            "failed": self.failed,
            "skipped": self.skipped,
            "worst_slack": self.worst_slack,
            "worst_trial": self.worst_trial,
            "failing_trials": list(self.failing_trials),
            "worst_failure": self.worst_failure,
        }


@dataclass
class SuiteReport:
    config: SuiteConfig
    families: list

    @property
    def ok(self) -> bool:
        return all(f.failed == 0 for f in self.families)

    def to_dict(self) -> dict:
        return {
            "config": {
                "trials": self.config.trials,
                "seed": self.config.seed,
                "dim_min": self.config.dim_min,
                "dim_max": self.config.dim_max,
                "max_states": self.config.max_states,
                "max_kraus": self.config.max_kraus,
                "tolerance": self.config.tolerance,
                "identity_tolerance": self.config.identity_tolerance,
            },
            "ok": self.ok,
            "families": [f.to_dict() for f in self.families],
        }

    def rows(self) -> list[dict]:
        """Flat per-family summary, suitable for CSV."""
        return [
            {k: v for k, v in f.to_dict().items() if k not in ("failing_trials", "worst_failure")}
            for f in self.families
        ]


def _dims(rng, cfg):
    return int(rng.integers(cfg.dim_min, cfg.dim_max + 1))


def _channel(rng, cfg, d_in, d_out):
    k_min = math.ceil(d_in / d_out)
    k = int(rng.integers(k_min, max(k_min, cfg.max_kraus) + 1))
    return ch.random_channel(d_in, d_out, k, rng)


def _source(rng, cfg, d):
    return random_source(d, int(rng.integers(1, cfg.max_states + 1)), rng)


# Each check returns (slack, instance); the trial passes iff its violation
# max(0, -slack) is at most tol.  A slack of None marks a vacuous trial.

def _fidelity_order(rng, cfg):
    d = _dims(rng, cfg)
    s = _source(rng, cfg, d)
    c = _channel(rng, cfg, d, d)
    fe = entanglement_fidelity(s, c)
    fbar = average_fidelity(s, c)
    return fbar - fe, {"source": s, "channel": c, "entanglement_fidelity": fe, "average_fidelity": fbar}


def _lindblad(rng, cfg):
    d = _dims(rng, cfg)
    d_out = _dims(rng, cfg)
    r1, r2 = random_density(d, rng), random_density(d, rng)
    c = _channel(rng, cfg, d, d_out)
    before = relative_entropy(r1, r2)
    after = relative_entropy(c(r1), c(r2))
    inst = {"rho1": r1, "rho2": r2, "channel": c, "before": before, "after": after}
    if is_divergent(before):
        return None, inst
    if is_divergent(after):
        return -math.inf, inst
    return before - after, inst


def _coherent_monotonicity(rng, cfg):
    d = _dims(rng, cfg)
    d1 = _dims(rng, cfg)
    d2 = _dims(rng, cfg)
    s = _source(rng, cfg, d)
    c1 = _channel(rng, cfg, d, d1)
    c2 = _channel(rng, cfg, d1, d2)
    i1 = coherent_information(s, c1).coherent_information
    i21 = coherent_information(s, ch.compose(c2, c1)).coherent_information
    return i1 - i21, {"source": s, "first": c1, "second": c2, "info_first": i1, "info_composed": i21}


def _h_theorem(rng, cfg):
    d = _dims(rng, cfg)
    rho = random_density(d, rng)
    c = ch.random_unital_channel(d, int(rng.integers(1, cfg.max_kraus + 1)), rng)
    assert c.unital
    s_in = von_neumann_entropy(rho)
    s_out = von_neumann_entropy(c(rho))
    return s_out - s_in, {"rho": rho, "channel": c, "entropy_in": s_in, "entropy_out": s_out}


def _fano(rng, cfg):
    d = _dims(rng, cfg)
    s = _source(rng, cfg, d)
    c = _channel(rng, cfg, d, d)
    fe = entanglement_fidelity(s, c)
    exch = entropy_exchange(s, c)
    bound = fano_bound(fe, d)
    return bound - exch, {"source": s, "channel": c, "entanglement_fidelity": fe,
                          "entropy_exchange": exch, "fano_bound": bound}


def _relative_entropy_identity(rng, cfg):
    d = _dims(rng, cfg)
    d_out = _dims(rng, cfg)
    s = _source(rng, cfg, d)
    c = _channel(rng, cfg, d, d_out)
    omega = extended_output(s, c)
    ref = reference_state(s)
    out = c(density_of_source(s))
    lhs = relative_entropy(omega, linalg.kron(ref, out))
    inst = {"source": s, "channel": c, "lhs": lhs}
    if is_divergent(lhs):
        return None, inst
    rhs = -von_neumann_entropy(omega) + von_neumann_entropy(ref) + von_neumann_entropy(out)
    inst["rhs"] = rhs
    return -abs(lhs - rhs), inst


CHECKS = {
    "fidelity_order": _fidelity_order,
    "lindblad_monotonicity": _lindblad,
    "coherent_info_monotonicity": _coherent_monotonicity,
    "h_theorem": _h_theorem,
    "quantum_fano": _fano,
    "relative_entropy_identity": _relative_entropy_identity,
}


def trial_rng(seed: int, family: str, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, FAMILIES.index(family), trial])


def run_family(name: str, cfg: SuiteConfig) -> FamilyResult:
    check = CHECKS[name]
    tol = cfg.identity_tolerance if name == "relative_entropy_identity" else cfg.tolerance
    res = FamilyResult(name)
    for t in range(cfg.trials):
        res.trials += 1
        slack, inst = check(trial_rng(cfg.seed, name, t), cfg)
        if slack is None:
            res.skipped += 1
            continue
        if res.worst_slack is None or slack < res.worst_slack:
            res.worst_slack, res.worst_trial = slack, t
        if max(0.0, -slack) <= tol:
            res.passed += 1
            continue
        res.failed += 1
        if len(res.failing_trials) < MAX_LOGGED_FAILURES:
            res.failing_trials.append(t)
        if res.worst_trial == t:
            res.worst_failure = {"trial": t, "slack": slack, "instance": inst}
    return res


def inequality_suite(cfg: SuiteConfig | None = None) -> SuiteReport:
    cfg = cfg or SuiteConfig()
    return SuiteReport(cfg, [run_family(name, cfg) for name in cfg.families])
