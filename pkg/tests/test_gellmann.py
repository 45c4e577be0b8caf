import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from coherence_witness.gellmann import (
    BlochDecomposition,
    InvalidDimensionError,
    build_basis,
    decompose,
    pairs,
    reconstruct,
)
from coherence_witness.states import example_qutrit, random_state, validate, NegativeEigenvalueError

from conftest import pauli


def test_qubit_generators_are_paulis():
    basis = build_basis(2)
    x, y, z = pauli()
    np.testing.assert_array_equal(basis.sym[0], x)
    np.testing.assert_array_equal(basis.anti[0], y)
    np.testing.assert_array_equal(basis.diag[0], z)


def test_qutrit_second_diagonal_generator():
    expected = np.sqrt(1 / 3) * np.diag([1, 1, -2])
    np.testing.assert_allclose(build_basis(3).diag[1], expected, atol=1e-15)


@pytest.mark.parametrize("dim", [0, 1, -3, 2.5])
def test_invalid_dimension(dim):
    with pytest.raises(InvalidDimensionError):
        build_basis(dim)


def test_pairs_are_lexicographic():
    assert pairs(4) == ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


@pytest.mark.parametrize("dim", range(2, 7))
def test_generators_hermitian_traceless_orthogonal(dim):
    gens = build_basis(dim).generators()
    assert len(gens) == dim**2 - 1
    for g in gens:
        np.testing.assert_allclose(g, g.conj().T, atol=0)
        assert abs(np.trace(g)) < 1e-12
    gram = np.einsum("mab,nba->mn", gens, gens)
    np.testing.assert_allclose(gram, 2 * np.eye(len(gens)), atol=1e-12)


def test_basis_is_cached_and_read_only():
    assert build_basis(3) is build_basis(3)
    with pytest.raises(ValueError):
        build_basis(3).sym[0, 0, 1] = 5


@pytest.mark.parametrize("dim", range(2, 7))
def test_maximally_mixed_has_zero_coefficients(dim):
    b = decompose(np.eye(dim) / dim)
    assert np.all(np.abs(b.offdiag) < 1e-15) and np.all(np.abs(b.diag) < 1e-15)


def test_plus_state():
    b = decompose(0.5 * np.ones((2, 2)))
    np.testing.assert_allclose(b.offdiag, [[1.0, 0.0]], atol=1e-15)
    np.testing.assert_allclose(b.diag, [0.0], atol=1e-15)


def test_example_qutrit_at_quarter_pi():
    # explicit outer product and generator traces, independent of decompose
    v = np.array([0.5, 0.5, np.sqrt(0.5)])
    rho = np.outer(v, v)
    basis = build_basis(3)
    b_s = [np.trace(rho @ g).real for g in basis.sym]
    b_a = [np.trace(rho @ g).real for g in basis.anti]
    np.testing.assert_allclose(b_s, [0.5, np.sqrt(2) / 2, np.sqrt(2) / 2], atol=1e-15)
    np.testing.assert_allclose(b_a, 0, atol=1e-15)
    got = decompose(example_qutrit(np.pi / 4))
    np.testing.assert_allclose(got.offdiag[:, 0], b_s, atol=1e-12)
    np.testing.assert_allclose(got.offdiag[:, 1], b_a, atol=1e-12)


def test_zero_coefficients_reconstruct_to_identity():
    for dim in range(2, 6):
        np.testing.assert_allclose(reconstruct(BlochDecomposition.zeros(dim)), np.eye(dim) / dim)


def test_reconstruct_need_not_be_positive():
    m = reconstruct(BlochDecomposition(2, np.array([[2.0, 0.0]]), np.array([0.0])))
    np.testing.assert_allclose(m, [[0.5, 1.0], [1.0, 0.5]])
    np.testing.assert_allclose(np.linalg.eigvalsh(m), [-0.5, 1.5])
    with pytest.raises(NegativeEigenvalueError):
        validate(m)


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        BlochDecomposition(3, np.zeros((2, 2)), np.zeros(2))
    with pytest.raises(ValueError):
        decompose(np.zeros((2, 3)))


@pytest.mark.parametrize("dim", range(2, 7))
def test_round_trip_many_states(dim):
    for seed in range(100):
        rho = random_state(dim, seed, "mixed" if seed % 2 else "pure").matrix
        assert np.max(np.abs(reconstruct(decompose(rho)) - rho)) < 1e-12


@given(dim=st.integers(2, 6), seed=st.integers(0, 2**32 - 1))
def test_offdiagonal_link(dim, seed):
    rho = random_state(dim, seed).matrix
    b = decompose(rho)
    for (j, k), (bs, ba) in zip(b.pairs, b.offdiag):
        assert abs(rho[j, k] - (bs - 1j * ba) / 2) < 1e-12
    np.testing.assert_allclose(b.pair_norms(), [2 * abs(rho[j, k]) for j, k in b.pairs], atol=1e-12)
    for n, (j, k) in enumerate(b.pairs):
        assert n == list(itertools.combinations(range(dim), 2)).index((j, k))
