import numpy as np
import pytest
from hypothesis import given, strategies as st

from coherence_witness.gellmann import build_basis, pairs
from coherence_witness.states import example_qutrit, l1_coherence, random_state
from coherence_witness.witness import (
    NoWitnessError,
    NormalizedWitness,
    NotStringentError,
    Witness,
    coherence_lower_bound,
    construct_for_state,
    example_witness,
    from_matrix,
    mean_value,
    optimal_witness,
)

from conftest import pauli, qubit


def random_normalized(dim, rng):
    return NormalizedWitness(dim, rng.uniform(0, 2 * np.pi, len(pairs(dim))))


def test_from_matrix_pauli_x():
    w = from_matrix(pauli()[0])
    np.testing.assert_array_equal(w.coeffs, [[1.0, 0.0]])


def test_from_matrix_rejects_diagonal():
    with pytest.raises(NotStringentError) as info:
        from_matrix(pauli()[2])
    assert info.value.diagonal_weight == 1.0


def test_from_matrix_example_witness():
    b = build_basis(3)
    op = b.sym[0] + b.sym[2] - b.anti[1]
    w = from_matrix(op)
    np.testing.assert_allclose(w.coeffs, [[1, 0], [0, -1], [1, 0]], atol=1e-15)
    np.testing.assert_allclose(example_witness().matrix(), op, atol=1e-15)


def test_from_matrix_rejects_non_hermitian():
    with pytest.raises(ValueError):
        from_matrix([[0, 1], [0, 0]])


def test_matrix_round_trip():
    rng = np.random.default_rng(3)
    for dim in range(2, 6):
        w = random_normalized(dim, rng)
        back = from_matrix(w.matrix()).normalized()
        np.testing.assert_allclose(np.cos(back.theta - w.theta), 1, atol=1e-12)


def test_construct_for_plus_state():
    w = construct_for_state(qubit(bx=1))
    np.testing.assert_array_equal(w.matrix(), pauli()[0])
    assert mean_value(w, qubit(bx=1)) == pytest.approx(1.0)


def test_construct_rejects_incoherent():
    with pytest.raises(NoWitnessError):
        construct_for_state(np.eye(2) / 2)


def test_construct_tie_break_example_qutrit():
    # |b_02| = |b_12| = sqrt2/2 tie; lexicographic order picks (0, 2)
    w = construct_for_state(example_qutrit(np.pi / 4))
    np.testing.assert_array_equal(w.coeffs, [[0, 0], [1, 0], [0, 0]])


def test_construct_picks_antisymmetric_component():
    w = construct_for_state(qubit(by=0.4, bz=0.3))
    np.testing.assert_array_equal(w.coeffs, [[0, 1]])


def test_mean_value_examples():
    assert mean_value(Witness(2, np.array([[1.0, 0.0]])), qubit(bx=1)) == pytest.approx(1.0)
    assert mean_value(example_witness(), example_qutrit(0.0)) == pytest.approx(1.0, abs=1e-12)


def test_mean_value_dimension_mismatch():
    with pytest.raises(ValueError):
        mean_value(example_witness(), qubit(bx=1))


def test_lower_bound_examples():
    x = NormalizedWitness(2, [0.0])
    y = NormalizedWitness(2, [np.pi / 2])
    plus = qubit(bx=1)
    bound, slack = coherence_lower_bound(x, plus)
    assert (bound, slack) == (pytest.approx(1.0), pytest.approx(0.0, abs=1e-12))
    bound, slack = coherence_lower_bound(y, plus)
    assert bound == pytest.approx(0.0, abs=1e-15) and slack == pytest.approx(1.0)


def test_optimal_witness_by_grid_search():
    rho = qubit(bx=0.6, bz=0.8)
    grid = np.linspace(0, 2 * np.pi, 7201)
    values = [mean_value(NormalizedWitness(2, [t]), rho) for t in grid]
    assert grid[int(np.argmax(values))] == pytest.approx(0.0)
    assert max(values) == pytest.approx(0.6, abs=1e-12)
    w = optimal_witness(rho)
    assert w.theta[0] == 0.0
    assert mean_value(w, rho) == pytest.approx(0.6, abs=1e-12)


@pytest.mark.parametrize("theta", [0.1, np.pi / 4, 1.2, np.pi / 2 - 1e-3])
def test_optimal_witness_example_qutrit(theta):
    rho = example_qutrit(theta)
    w = optimal_witness(rho)
    np.testing.assert_allclose(np.cos(w.theta), 1, atol=1e-12)
    expected = np.cos(theta) ** 2 + np.sqrt(2) * np.sin(2 * theta)
    assert mean_value(w, rho) == pytest.approx(expected, abs=1e-12)


def test_optimal_witness_maximal_coherent():
    for dim in range(2, 7):
        rho = random_state(dim, 11, "maximal-coherent")
        w = optimal_witness(rho)
        assert mean_value(w, rho) == pytest.approx(dim - 1, abs=1e-12)
        assert w.is_phase_consistent()


def test_zero_pairs_get_orientation_zero():
    rho = np.diag([0.5, 0.25, 0.25]).astype(complex)
    rho[0, 1], rho[1, 0] = 0.1j, -0.1j
    w = optimal_witness(rho)
    assert w.theta[1] == 0.0 and w.theta[2] == 0.0
    assert w.theta[0] == pytest.approx(1.5 * np.pi)


def test_example_witness_is_not_phase_consistent():
    assert not example_witness().is_phase_consistent()
    assert NormalizedWitness(2, [1.3]).is_phase_consistent()


def test_orientation_reversal():
    w = example_witness()
    assert w.orientation(2, 0) == pytest.approx(np.pi / 2)
    assert w.orientation(0, 2) == pytest.approx(1.5 * np.pi)


@given(dim=st.integers(2, 5), seed=st.integers(0, 2**32 - 1))
def test_zero_on_incoherent_states(dim, seed):
    rng = np.random.default_rng(seed)
    w = Witness(dim, rng.normal(size=(len(pairs(dim)), 2)))
    for _ in range(5):
        assert abs(mean_value(w, random_state(dim, rng, "incoherent"))) < 1e-12


@given(dim=st.integers(2, 5), seed=st.integers(0, 2**32 - 1))
def test_bound_and_dominance(dim, seed):
    rng = np.random.default_rng(seed)
    rho = random_state(dim, rng, ("pure", "mixed")[seed % 2])
    c = l1_coherence(rho)
    best = mean_value(optimal_witness(rho), rho)
    assert best == pytest.approx(c, abs=1e-12)
    for _ in range(20):
        w = random_normalized(dim, rng)
        m = mean_value(w, rho)
        assert abs(m) <= c + 1e-12
        assert m <= best + 1e-12
        assert mean_value(w, rho) <= dim - 1 + 1e-12


@given(dim=st.integers(2, 5), seed=st.integers(0, 2**32 - 1), n=st.integers(2, 5))
def test_linearity_and_convexity_on_mixtures(dim, seed, n):
    rng = np.random.default_rng(seed)
    states = [random_state(dim, rng) for _ in range(n)]
    p = rng.dirichlet(np.ones(n))
    mix = sum(pk * s.matrix for pk, s in zip(p, states))
    w = random_normalized(dim, rng)
    assert mean_value(w, mix) == pytest.approx(sum(pk * mean_value(w, s) for pk, s in zip(p, states)), abs=1e-12)
    cw_mix = mean_value(optimal_witness(mix), mix)
    cw_each = sum(pk * mean_value(optimal_witness(s), s) for pk, s in zip(p, states))
    assert cw_mix <= cw_each + 1e-12
