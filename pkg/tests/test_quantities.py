import math

import numpy as np
import pytest
from scipy.linalg import logm

from qconverse import channels as ch
from qconverse import quantities as q
from qconverse.errors import DimensionError, DomainError
from qconverse.linalg import kron
from qconverse.states import Source, basis_source, random_density, random_source

from conftest import KETPLUS

# frozen from mpmath at 30 digits
H_011 = 0.49991595816452799564049959413
S_09_01 = 0.468995593589281221253589330383
LOG2_3 = 1.58496250072115618145373894395
FANO_09_D2 = 0.627491843661396839398963224778


def test_von_neumann_entropy_examples():
    assert q.von_neumann_entropy(np.diag([1, 0])) == 0.0
    assert q.von_neumann_entropy(np.eye(2) / 2) == pytest.approx(1.0, abs=1e-12)
    assert q.von_neumann_entropy(np.diag([0.9, 0.1])) == pytest.approx(S_09_01, abs=1e-12)


def test_entropy_bounds(rng):
    for d in range(1, 6):
        s = q.von_neumann_entropy(random_density(d, rng))
        assert -1e-12 <= s <= math.log2(d) + 1e-12


def test_entropy_additivity(rng):
    for _ in range(20):
        a, b = random_density(2, rng), random_density(3, rng)
        assert q.von_neumann_entropy(kron(a, b)) == pytest.approx(
            q.von_neumann_entropy(a) + q.von_neumann_entropy(b), abs=1e-9
        )


@pytest.mark.parametrize("x, expected", [(0.0, 0.0), (1.0, 0.0), (0.5, 1.0), (0.11, H_011)])
def test_binary_entropy(x, expected):
    assert q.binary_entropy(x) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("x", [-0.1, 1.0001])
def test_binary_entropy_domain(x):
    with pytest.raises(DomainError):
        q.binary_entropy(x)


def test_relative_entropy_examples(rng):
    rho = random_density(3, rng)
    assert q.relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-12)
    # 1 * log2(1) - 1 * log2(1/2)
    assert q.relative_entropy(np.diag([1, 0]), np.eye(2) / 2) == pytest.approx(1.0, abs=1e-12)
    assert q.relative_entropy(np.eye(2) / 2, np.diag([1, 0])) is q.DIVERGENT


def test_relative_entropy_matches_matrix_log(rng):
    for _ in range(20):
        a, b = random_density(3, rng), random_density(3, rng)
        direct = np.trace(a @ (logm(a) - logm(b))).real / np.log(2)
        assert q.relative_entropy(a, b) == pytest.approx(direct, abs=1e-9)


def test_relative_entropy_nonnegative(rng):
    for _ in range(50):
        a, b = random_density(4, rng), random_density(4, rng)
        assert q.relative_entropy(a, b) >= -1e-9


def test_relative_entropy_dimension_mismatch():
    with pytest.raises(DimensionError):
        q.relative_entropy(np.eye(2) / 2, np.eye(3) / 3)


def test_divergent_sentinel_orders_above_reals():
    d = q.DIVERGENT
    assert d > 1e308 and d >= 0.0 and not d < 5.0
    assert float(d) == math.inf
    with pytest.raises(TypeError):
        d + 1.0


def test_entropy_exchange_examples(uniform_qubit_source, rng):
    u = ch.random_channel(2, 2, 1, rng)
    assert q.entropy_exchange(uniform_qubit_source, u) == pytest.approx(0.0, abs=1e-9)
    assert q.entropy_exchange(random_source(3, 3, rng), ch.identity_channel(3)) == pytest.approx(0.0, abs=1e-9)
    deph = ch.dephasing_channel(2)
    assert q.entropy_exchange(uniform_qubit_source, deph) == pytest.approx(1.0, abs=1e-12)


def test_coherent_information_examples(uniform_qubit_source):
    b = q.coherent_information(uniform_qubit_source, ch.identity_channel(2))
    assert (b.output_entropy, b.entropy_exchange) == pytest.approx((1.0, 0.0), abs=1e-12)
    assert b.coherent_information == pytest.approx(1.0, abs=1e-12)

    b = q.coherent_information(uniform_qubit_source, ch.dephasing_channel(2))
    assert (b.output_entropy, b.entropy_exchange, b.coherent_information) == pytest.approx((1, 1, 0), abs=1e-12)

    # extended output is I/2 ⊗ I/2, entropy 2
    b = q.coherent_information(uniform_qubit_source, ch.depolarizing_channel(2, 1.0))
    assert b.entropy_exchange == pytest.approx(2.0, abs=1e-12)
    assert b.coherent_information == pytest.approx(-1.0, abs=1e-12)


def test_coherent_information_breakdown_consistent(rng):
    for _ in range(20):
        s = random_source(3, 3, rng)
        b = q.coherent_information(s, ch.random_channel(3, 2, 3, rng))
        assert b.coherent_information == pytest.approx(b.output_entropy - b.entropy_exchange, abs=1e-10)
        assert b.entropy_exchange >= -1e-9


def test_fidelity_examples(uniform_qubit_source, rng):
    s = random_source(3, 3, rng)
    assert q.entanglement_fidelity(s, ch.identity_channel(3)) == pytest.approx(1.0, abs=1e-12)
    assert q.average_fidelity(s, ch.identity_channel(3)) == pytest.approx(1.0, abs=1e-12)

    deph = ch.dephasing_channel(2)
    # ensemble of basis states with weights c: F_e = Σ c^2, F̄ = 1
    assert q.entanglement_fidelity(uniform_qubit_source, deph) == pytest.approx(0.5, abs=1e-12)
    assert q.average_fidelity(uniform_qubit_source, deph) == pytest.approx(1.0, abs=1e-12)
    skew = Source(np.eye(2), [0.7, 0.3])
    assert q.entanglement_fidelity(skew, deph) == pytest.approx(0.7**2 + 0.3**2, abs=1e-12)

    plus = Source([KETPLUS], [1.0])
    # <+| diag(1/2, 1/2) |+>
    assert q.entanglement_fidelity(plus, deph) == pytest.approx(0.5, abs=1e-12)
    assert q.average_fidelity(plus, deph) == pytest.approx(0.5, abs=1e-12)


def test_fidelity_forms_agree(rng):
    for _ in range(50):
        d = int(rng.integers(2, 5))
        s = random_source(d, int(rng.integers(1, 5)), rng)
        purif, ens = q.entanglement_fidelity_forms(s, ch.random_channel(d, d, 3, rng))
        assert purif == pytest.approx(ens, abs=1e-9)


def test_fidelity_needs_square_channel(uniform_qubit_source, rng):
    with pytest.raises(DimensionError):
        q.entanglement_fidelity(uniform_qubit_source, ch.random_channel(2, 3, 1, rng))


@pytest.mark.parametrize(
    "fe, d, expected",
    [(1.0, 2, 0.0), (1.0, 5, 0.0), (0.0, 2, LOG2_3), (0.9, 2, FANO_09_D2)],
)
def test_fano_bound(fe, d, expected):
    assert q.fano_bound(fe, d) == pytest.approx(expected, abs=1e-12)


def test_fano_bound_domain():
    with pytest.raises(DomainError):
        q.fano_bound(0.5, 1)
    with pytest.raises(DomainError):
        q.fano_bound(1.2, 2)


def test_h_theorem_gated_on_unitality(rng):
    # amplitude damping is not unital and can lower entropy
    amp = ch.KrausChannel([np.array([[1, 0], [0, np.sqrt(0.2)]]), np.array([[0, np.sqrt(0.8)], [0, 0]])])
    assert not amp.unital
    rho = np.eye(2) / 2
    assert q.von_neumann_entropy(ch.apply(amp, rho)) < q.von_neumann_entropy(rho)


@pytest.mark.parametrize("c", [[0.5, 0.5], [0.7, 0.3], [0.2, 0.3, 0.5], [1.0, 0.0]])
def test_dephasing_on_basis_ensemble_keeps_average_fidelity(c):
    s = basis_source(len(c), np.array(c))
    deph = ch.dephasing_channel(len(c))
    assert q.average_fidelity(s, deph) == pytest.approx(1.0, abs=1e-12)
    assert q.entanglement_fidelity(s, deph) == pytest.approx(sum(x * x for x in c), abs=1e-12)
