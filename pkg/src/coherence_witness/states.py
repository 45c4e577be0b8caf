"""Density matrices, validation, l1-norm of coherence and test ensembles."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gellmann import DimensionMismatchError, check_dim

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

STATE_KINDS = ("pure", "mixed", "incoherent", "maximal-coherent")


class StateValidationError(ValueError):
    """A matrix failed one of the density-matrix invariants.

    ``deviation`` is the size of the violation, ``tolerance`` the bound that
    was exceeded.
    """

    invariant = "state"

    def __init__(self, deviation: float, tolerance: float):
        self.deviation = float(deviation)
        self.tolerance = float(tolerance)
        super().__init__(
            f"{self.invariant} check failed: deviation {self.deviation:.3e} "
            f"exceeds tolerance {self.tolerance:.1e}"
        )


class NotHermitianError(StateValidationError):
    invariant = "hermiticity"


class TraceError(StateValidationError):
    invariant = "unit trace"


class NegativeEigenvalueError(StateValidationError):
    invariant = "positivity"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def validate(matrix, *, hermitian_tol=HERMITIAN_TOL, trace_tol=TRACE_TOL,
             psd_tol=PSD_TOL) -> DensityMatrix:
    """Check that ``matrix`` is a density matrix and wrap it.

    Raises a :class:`StateValidationError` subclass naming the violated
    invariant and its size.
    """
    m = np.array(getattr(matrix, "matrix", matrix), dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {m.shape}")
    check_dim(m.shape[0])
    herm_dev = np.max(np.abs(m - m.conj().T))
    if herm_dev > hermitian_tol:
        raise NotHermitianError(herm_dev, hermitian_tol)
    trace_dev = abs(np.trace(m) - 1.0)
    if trace_dev > trace_tol:
        raise TraceError(trace_dev, trace_tol)
    min_eig = np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0]
    if min_eig < -psd_tol:
        raise NegativeEigenvalueError(-min_eig, psd_tol)
    m.setflags(write=False)
    return DensityMatrix(m)


def l1_coherence(state) -> float:
    """Sum of the moduli of all off-diagonal entries."""
    m = np.asarray(getattr(state, "matrix", state))
    off = ~np.eye(m.shape[0], dtype=bool)
    return float(np.sum(np.abs(m[off])))


def is_incoherent(state, tol: float = 1e-12) -> bool:
    m = np.asarray(getattr(state, "matrix", state))
    off = m - np.diag(np.diag(m))
    return bool(np.all(np.abs(off) <= tol))


def pure_state(vector) -> DensityMatrix:
    v = np.asarray(vector, dtype=complex)
    v = v / np.linalg.norm(v)
    return validate(np.outer(v, v.conj()))


def random_state(dim: int, seed: int | np.random.Generator | None = None,
                 kind: str = "mixed") -> DensityMatrix:
    """Random state of the given ``kind`` (one of :data:`STATE_KINDS`).

    Deterministic for a fixed integer seed. The ensembles only need full
    support, they are not meant to be exactly Haar or Hilbert-Schmidt.
    """
    dim = check_dim(dim)
    rng = np.random.default_rng(seed)
    if kind == "pure":
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        return pure_state(v)
    if kind == "mixed":
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        m = g @ g.conj().T
        return validate(m / np.trace(m).real)
    if kind == "incoherent":
        return validate(np.diag(rng.dirichlet(np.ones(dim))).astype(complex))
    if kind == "maximal-coherent":
        phases = rng.uniform(0, 2 * np.pi, size=dim)
        return pure_state(np.exp(1j * phases) / np.sqrt(dim))
    raise ValueError(f"unknown state kind {kind!r}; expected one of {STATE_KINDS}")


def example_qutrit(theta: float) -> DensityMatrix:
    """Pure qutrit ``cos(t)/sqrt2 (|0> + |1>) + sin(t) |2>``, t in [0, pi/2]."""
    c, s = np.cos(theta), np.sin(theta)
    return pure_state([c / np.sqrt(2), c / np.sqrt(2), s])
