import pytest

from qconverse.suite import CHECKS, FAMILIES, SuiteConfig, inequality_suite, run_family, trial_rng


def test_small_suite_passes():
    rep = inequality_suite(SuiteConfig(trials=60, seed=3))
    assert rep.ok
    assert [f.name for f in rep.families] == list(FAMILIES)
    for f in rep.families:
        assert f.passed + f.skipped == 60


def test_zero_trials_is_empty_and_passing():
    rep = inequality_suite(SuiteConfig(trials=0))
    assert rep.ok
    assert all(f.trials == 0 and f.worst_slack is None for f in rep.families)


def test_impossible_tolerance_fails_everything():
    cfg = SuiteConfig(trials=15, seed=1, tolerance=-1.0, identity_tolerance=-1.0)
    rep = inequality_suite(cfg)
    assert not rep.ok
    for f in rep.families:
        assert f.failed == f.trials - f.skipped
        assert f.worst_failure is not None and f.worst_failure["trial"] == f.worst_trial


@pytest.mark.parametrize("family", FAMILIES)
def test_trials_are_order_independent(family):
    """A trial re-run on its own reproduces the slack it had inside the batch."""
    cfg = SuiteConfig(trials=30, seed=9)
    batch = run_family(family, cfg)
    slack, _ = CHECKS[family](trial_rng(9, family, batch.worst_trial), cfg)
    assert slack == batch.worst_slack


def test_family_subset_and_validation():
    rep = inequality_suite(SuiteConfig(trials=5, families=("h_theorem",)))
    assert [f.name for f in rep.families] == ["h_theorem"]
    with pytest.raises(ValueError):
        SuiteConfig(families=("nope",))
    with pytest.raises(ValueError):
        SuiteConfig(dim_min=3, dim_max=2)
