"""Generalized Gell-Mann generators and Bloch coefficients.

Off-diagonal pairs are always indexed in lexicographic order ``(j, k)`` with
``j < k``; every other module relies on :func:`pairs` for that order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

ATOL = 1e-12


class InvalidDimensionError(ValueError):
    pass


class DimensionMismatchError(ValueError):
    pass


def check_dim(dim: int) -> int:
    if int(dim) != dim or dim < 2:
        raise InvalidDimensionError(f"dimension must be an integer >= 2, got {dim!r}")
    return int(dim)


@lru_cache(maxsize=None)
def pairs(dim: int) -> tuple[tuple[int, int], ...]:
    """Ordered pairs ``(j, k)``, ``j < k``, in lexicographic order."""
    check_dim(dim)
    return tuple((j, k) for j in range(dim - 1) for k in range(j + 1, dim))


def pair_index(dim: int) -> dict[tuple[int, int], int]:
    return {p: n for n, p in enumerate(pairs(dim))}


@dataclass(frozen=True, eq=False)
class GellMannBasis:
    """Dense generators of SU(d).

    ``sym[n]`` and ``anti[n]`` belong to ``pairs(dim)[n]``; ``diag[l - 1]``
    is the diagonal generator with index ``l``.
    """

    dim: int
    sym: np.ndarray
    anti: np.ndarray
    diag: np.ndarray

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return pairs(self.dim)

    def generators(self) -> np.ndarray:
        """All ``d**2 - 1`` generators stacked: symmetric, antisymmetric, diagonal."""
        return np.concatenate([self.sym, self.anti, self.diag])


def _symmetric(dim, j, k):
    m = np.zeros((dim, dim), dtype=complex)
    m[j, k] = m[k, j] = 1.0
    return m


def _antisymmetric(dim, j, k):
    m = np.zeros((dim, dim), dtype=complex)
    m[j, k] = -1j
    m[k, j] = 1j
    return m


def _diagonal(dim, l):
    entries = np.zeros(dim)
    entries[:l] = 1.0
    entries[l] = -l
    return np.sqrt(2.0 / (l * (l + 1))) * np.diag(entries).astype(complex)


@lru_cache(maxsize=32)
def build_basis(dim: int) -> GellMannBasis:
    dim = check_dim(dim)
    ps = pairs(dim)
    sym = np.array([_symmetric(dim, j, k) for j, k in ps])
    anti = np.array([_antisymmetric(dim, j, k) for j, k in ps])
    diag = np.array([_diagonal(dim, l) for l in range(1, dim)])
    for arr in (sym, anti, diag):
        arr.setflags(write=False)
    return GellMannBasis(dim, sym, anti, diag)


@dataclass(frozen=True, eq=False)
class BlochDecomposition:
    """Bloch coefficients of a d-level operator.

    ``offdiag[n] = (b_s, b_a)`` for ``pairs(dim)[n]``; ``diag[l - 1] = b^l``.
    """

    dim: int
    offdiag: np.ndarray
    diag: np.ndarray

    def __post_init__(self):
        npairs = self.dim * (self.dim - 1) // 2
        if np.shape(self.offdiag) != (npairs, 2) or np.shape(self.diag) != (self.dim - 1,):
            raise DimensionMismatchError(
                f"coefficient shapes {np.shape(self.offdiag)}, {np.shape(self.diag)} "
                f"do not fit dim={self.dim}"
            )

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return pairs(self.dim)

    def pair_norms(self) -> np.ndarray:
        """``|b_jk|`` for every pair; equals ``2 |rho_jk|``."""
        return np.hypot(self.offdiag[:, 0], self.offdiag[:, 1])

    def pair_angles(self) -> np.ndarray:
        """Direction of each ``b_jk`` in ``[0, 2pi)``; 0 where the pair vanishes."""
        ang = np.mod(np.arctan2(self.offdiag[:, 1], self.offdiag[:, 0]), 2 * np.pi)
        ang[self.pair_norms() == 0.0] = 0.0
        return ang

    @classmethod
    def zeros(cls, dim: int) -> "BlochDecomposition":
        dim = check_dim(dim)
        return cls(dim, np.zeros((dim * (dim - 1) // 2, 2)), np.zeros(dim - 1))


def _as_matrix(state) -> np.ndarray:
    return np.asarray(getattr(state, "matrix", state), dtype=complex)


def decompose(state) -> BlochDecomposition:
    """Trace inner products of ``state`` with every generator.

    Accepts a :class:`~coherence_witness.states.DensityMatrix` or any square
    array.
    """
    m = _as_matrix(state)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {m.shape}")
    basis = build_basis(m.shape[0])
    # tr(m G) = sum_ab m_ab G_ba
    tr = lambda gens: np.real(np.einsum("ab,nba->n", m, gens))
    offdiag = np.stack([tr(basis.sym), tr(basis.anti)], axis=1)
    return BlochDecomposition(basis.dim, offdiag, tr(basis.diag))


def reconstruct(coeffs: BlochDecomposition) -> np.ndarray:
    """``I/d + 1/2 sum b G``.  Hermitian, but not necessarily positive."""
    basis = build_basis(coeffs.dim)
    m = np.eye(coeffs.dim, dtype=complex) / coeffs.dim
    m += 0.5 * np.einsum("n,nab->ab", coeffs.offdiag[:, 0], basis.sym)
    m += 0.5 * np.einsum("n,nab->ab", coeffs.offdiag[:, 1], basis.anti)
    m += 0.5 * np.einsum("n,nab->ab", coeffs.diag, basis.diag)
    return m
