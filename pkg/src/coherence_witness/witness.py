"""Stringent coherence witnesses.

A stringent witness has no identity or diagonal component, so its mean value
vanishes on every incoherent state. A normalized witness has a unit
coefficient pair ``(cos t, sin t)`` for every off-diagonal pair; the angles
``t`` are its orientations.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .gellmann import (
    ATOL,
    DimensionMismatchError,
    build_basis,
    check_dim,
    decompose,
    pair_index,
    pairs,
)
from .states import is_incoherent, l1_coherence

TWO_PI = 2 * np.pi


class NotStringentError(ValueError):
    """Operator has a diagonal part, so it is not zero on incoherent states."""

    def __init__(self, diagonal_weight: float):
        self.diagonal_weight = float(diagonal_weight)
        super().__init__(
            f"operator has diagonal weight {self.diagonal_weight:.3e}; "
            "a stringent witness must have zero diagonal"
        )


class NoWitnessError(ValueError):
    """Raised for incoherent input, for which no witness can give a nonzero mean."""


def _pairs_matrix(dim: int, coeffs: np.ndarray) -> np.ndarray:
    basis = build_basis(dim)
    return (np.einsum("n,nab->ab", coeffs[:, 0], basis.sym)
            + np.einsum("n,nab->ab", coeffs[:, 1], basis.anti))


@dataclass(frozen=True, eq=False)
class Witness:
    """``W = sum_jk (w_s sigma_s^jk + w_a sigma_a^jk)``; ``coeffs[n] = (w_s, w_a)``."""

    dim: int
    coeffs: np.ndarray

    def __post_init__(self):
        check_dim(self.dim)
        if np.shape(self.coeffs) != (len(pairs(self.dim)), 2):
            raise DimensionMismatchError(
                f"witness coefficients have shape {np.shape(self.coeffs)} for dim={self.dim}"
            )

    @property
    def pairs(self):
        return pairs(self.dim)

    def matrix(self) -> np.ndarray:
        return _pairs_matrix(self.dim, np.asarray(self.coeffs, dtype=float))

    def is_normalized(self, tol: float = 1e-9) -> bool:
        return bool(np.all(np.abs(np.hypot(*self.coeffs.T) - 1.0) <= tol))

    def normalized(self, tol: float = 1e-9) -> "NormalizedWitness":
        """View as a :class:`NormalizedWitness`; every pair must already be a unit vector."""
        if not self.is_normalized(tol):
            norms = np.hypot(*self.coeffs.T)
            raise ValueError(f"witness pairs are not unit vectors (norms {np.round(norms, 6)})")
        return NormalizedWitness(self.dim, np.arctan2(self.coeffs[:, 1], self.coeffs[:, 0]))


@dataclass(frozen=True, eq=False)
class NormalizedWitness:
    """Normalized witness given by its orientations ``theta[n]`` for ``pairs(dim)[n]``."""

    dim: int
    theta: np.ndarray

    def __post_init__(self):
        check_dim(self.dim)
        theta = np.mod(np.asarray(self.theta, dtype=float), TWO_PI)
        if theta.shape != (len(pairs(self.dim)),):
            raise DimensionMismatchError(
                f"{theta.shape[0] if theta.ndim else 0} orientations for dim={self.dim}"
            )
        object.__setattr__(self, "theta", theta)

    @property
    def pairs(self):
        return pairs(self.dim)

    @property
    def coeffs(self) -> np.ndarray:
        return np.stack([np.cos(self.theta), np.sin(self.theta)], axis=1)

    def matrix(self) -> np.ndarray:
        return _pairs_matrix(self.dim, self.coeffs)

    def orientation(self, j: int, k: int) -> float:
        """Orientation of pair ``(j, k)`` for either index order; ``theta_kj = -theta_jk``."""
        if j == k:
            raise ValueError("orientation is only defined for j != k")
        if j < k:
            return float(self.theta[pair_index(self.dim)[(j, k)]])
        return float(np.mod(-self.theta[pair_index(self.dim)[(k, j)]], TWO_PI))

    def as_witness(self) -> Witness:
        return Witness(self.dim, self.coeffs)

    def is_phase_consistent(self, tol: float = 1e-9) -> bool:
        """True iff ``theta_ij + theta_jk - theta_ik = 0 (mod 2pi)`` for every triple.

        Only phase-consistent witnesses reach the value ``d - 1``; for
        ``d = 2`` there are no triples and the answer is always True.
        """
        for i, j, k in itertools.combinations(range(self.dim), 3):
            s = self.orientation(i, j) + self.orientation(j, k) - self.orientation(i, k)
            if circular_distance(s, 0.0) > tol:
                return False
        return True


def circular_distance(a, b):
    """Minimal distance between angles on the circle."""
    d = np.mod(np.asarray(a) - np.asarray(b), TWO_PI)
    return np.minimum(d, TWO_PI - d)


def from_matrix(matrix, tol: float = ATOL) -> Witness:
    """Read off the coefficient pairs of a Hermitian operator with zero diagonal."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {m.shape}")
    dim = check_dim(m.shape[0])
    herm_dev = np.max(np.abs(m - m.conj().T))
    if herm_dev > tol:
        raise ValueError(f"witness matrix is not Hermitian (deviation {herm_dev:.3e})")
    diag_weight = np.max(np.abs(np.diag(m)))
    if diag_weight > tol:
        raise NotStringentError(diag_weight)
    # W_jk = w_s - i w_a
    upper = np.array([m[j, k] for j, k in pairs(dim)])
    return Witness(dim, np.stack([upper.real, -upper.imag], axis=1))


def construct_for_state(state, tol: float = 1e-10) -> Witness:
    """Single-generator witness on the largest Bloch component of ``state``.

    Ties go to the first pair in lexicographic order, symmetric before
    antisymmetric. The result has a nonzero mean value on ``state``.
    """
    if is_incoherent(state, tol):
        raise NoWitnessError("state is incoherent; no stringent witness detects it")
    b = decompose(state)
    flat = np.abs(b.offdiag).ravel()  # row-major: (pair0 s, pair0 a, pair1 s, ...)
    top = flat.max()
    n = int(np.flatnonzero(flat >= top - ATOL)[0])
    coeffs = np.zeros_like(b.offdiag)
    coeffs.flat[n] = 1.0
    return Witness(b.dim, coeffs)


def _check_dims(witness, state):
    d = np.shape(getattr(state, "matrix", state))[0]
    if witness.dim != d:
        raise DimensionMismatchError(f"witness dim {witness.dim} != state dim {d}")


def mean_value(witness, state) -> float:
    """``tr(W rho)``.

    Evaluated both as a matrix trace and as ``sum_jk w_jk . b_jk``; the two
    routes must agree to 1e-12 (scaled by the witness size).
    """
    _check_dims(witness, state)
    m = np.asarray(getattr(state, "matrix", state))
    by_trace = float(np.real(np.einsum("ab,ba->", witness.matrix(), m)))
    by_bloch = float(np.sum(np.asarray(witness.coeffs) * decompose(m).offdiag))
    scale = max(1.0, float(np.sum(np.abs(witness.coeffs))))
    if abs(by_trace - by_bloch) > ATOL * scale:
        raise ArithmeticError(f"trace {by_trace!r} and Bloch {by_bloch!r} mean values disagree")
    return by_trace


def coherence_lower_bound(witness: NormalizedWitness, state) -> tuple[float, float]:
    """Lower bound ``|<W>|`` on the l1 coherence and its slack ``C_l1 - |<W>|``."""
    bound = abs(mean_value(witness, state))
    return bound, l1_coherence(state) - bound


def optimal_witness(state) -> NormalizedWitness:
    """Normalized witness aligned with every Bloch pair of ``state``.

    Pairs with ``b_jk = 0`` get orientation 0. The mean value equals the l1
    coherence of ``state``.
    """
    b = decompose(state)
    return NormalizedWitness(b.dim, b.pair_angles())


def witnessed_coherence(state) -> float:
    return mean_value(optimal_witness(state), state)


def example_witness() -> NormalizedWitness:
    """Qutrit witness ``sigma_s^01 + sigma_s^12 - sigma_a^02``."""
    return NormalizedWitness(3, np.array([0.0, 1.5 * np.pi, 0.0]))
