import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qconverse import linalg
from qconverse.errors import ValidationError
from qconverse.quantities import coherent_information, entanglement_fidelity, von_neumann_entropy
from qconverse.channels import random_channel
from qconverse.states import (
    Source,
    block_source,
    check_density,
    density_of_source,
    purify,
    random_density,
    random_source,
    reference_state,
)

from conftest import KET0, KET1

SKEW_RHO = np.array([[0.75, 0.25], [0.25, 0.25]])


def test_density_single_pure_state():
    np.testing.assert_allclose(density_of_source(Source([KET0], [1.0])), np.diag([1, 0]))


def test_density_orthogonal_uniform(uniform_qubit_source):
    np.testing.assert_allclose(density_of_source(uniform_qubit_source), np.eye(2) / 2)


def test_density_nonorthogonal(skew_source):
    # 1/2 |0><0| + 1/2 |+><+| = 1/2 diag(1,0) + 1/4 ones
    np.testing.assert_allclose(density_of_source(skew_source), SKEW_RHO, atol=1e-15)


@pytest.mark.parametrize(
    "states, probs, message",
    [
        ([KET0, KET1], [0.5, 0.6], "probabilities sum to 1.1"),
        ([KET0, KET1], [1.5, -0.5], "non-negative"),
        ([KET0, 2 * KET1], [0.5, 0.5], "state 1 is not normalized"),
        ([KET0, KET1], [1.0], "1 probabilities given for 2 states"),
    ],
)
def test_source_invariants(states, probs, message):
    with pytest.raises(ValidationError, match=message):
        Source(np.array(states), probs)


def test_purify_single_state():
    psi = purify(Source([KET1], [1.0]))
    np.testing.assert_allclose(psi.vector, [0, 1])
    assert (psi.ref_dim, psi.sys_dim) == (1, 2)


def test_purify_uniform_is_bell(uniform_qubit_source):
    psi = purify(uniform_qubit_source)
    np.testing.assert_allclose(psi.vector, np.array([1, 0, 0, 1]) / np.sqrt(2))
    red = linalg.partial_trace(psi.projector(), (2, 2), "B")
    np.testing.assert_allclose(red, np.eye(2) / 2)


def test_purify_nonorthogonal_reduces_to_rho(skew_source):
    psi = purify(skew_source)
    assert np.linalg.norm(psi.vector) == pytest.approx(1.0, abs=1e-10)
    red = linalg.partial_trace(psi.projector(), (2, 2), "B")
    np.testing.assert_allclose(red, SKEW_RHO, atol=1e-10)


def test_reference_state_examples(uniform_qubit_source, skew_source):
    np.testing.assert_allclose(reference_state(uniform_qubit_source), np.eye(2) / 2)
    np.testing.assert_allclose(reference_state(Source([KET0], [1.0])), [[1.0]])
    s_ref = von_neumann_entropy(reference_state(skew_source))
    assert s_ref == pytest.approx(von_neumann_entropy(SKEW_RHO), abs=1e-8)


def test_reference_state_is_partial_trace_over_system(rng):
    s = random_source(3, 4, rng)
    psi = purify(s)
    red = linalg.partial_trace(psi.projector(), (4, 3), "A")
    np.testing.assert_allclose(reference_state(s), red, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 5))
def test_reductions_of_purification_agree(seed, d, n):
    s = random_source(d, n, np.random.default_rng(seed))
    rho = density_of_source(s)
    psi = purify(s)
    np.testing.assert_allclose(linalg.partial_trace(psi.projector(), (n, d), "B"), rho, atol=1e-9)
    assert von_neumann_entropy(reference_state(s)) == pytest.approx(von_neumann_entropy(rho), abs=1e-8)


def test_permuting_ensemble_leaves_scalars_unchanged(rng):
    for _ in range(20):
        s = random_source(3, 4, rng)
        c = random_channel(3, 3, 2, rng)
        perm = rng.permutation(4)
        t = Source(s.states[perm], s.probs[perm])
        assert entanglement_fidelity(s, c) == pytest.approx(entanglement_fidelity(t, c), abs=1e-9)
        a, b = coherent_information(s, c), coherent_information(t, c)
        assert a.coherent_information == pytest.approx(b.coherent_information, abs=1e-9)
        assert von_neumann_entropy(density_of_source(s)) == pytest.approx(
            von_neumann_entropy(density_of_source(t)), abs=1e-9
        )


def test_random_density_properties():
    np.testing.assert_allclose(random_density(1, np.random.default_rng(0)), [[1.0]])
    rng = np.random.default_rng(5)
    for d in range(1, 7):
        rho = random_density(d, rng)
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.eigvalsh(rho).min() >= 0
        check_density(rho)


def test_random_density_deterministic():
    a = random_density(2, np.random.default_rng(42))
    b = random_density(2, np.random.default_rng(42))
    np.testing.assert_array_equal(a, b)


def test_random_source_properties():
    s = random_source(3, 1, np.random.default_rng(0))
    np.testing.assert_array_equal(s.probs, [1.0])
    s = random_source(4, 6, np.random.default_rng(1))
    np.testing.assert_allclose(np.linalg.norm(s.states, axis=1), 1.0, atol=1e-12)
    t = random_source(4, 6, np.random.default_rng(1))
    np.testing.assert_array_equal(s.states, t.states)
    np.testing.assert_array_equal(s.probs, t.probs)


def test_block_source_realizes_tensor_power(skew_source):
    b = block_source(skew_source, 3)
    assert b.size == 8 and b.dim == 8
    np.testing.assert_allclose(density_of_source(b), linalg.kron_power(SKEW_RHO, 3), atol=1e-12)
