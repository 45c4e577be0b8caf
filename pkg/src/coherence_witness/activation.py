"""Activating coherence for a fixed witness with incoherent unitaries.

For a permutation ``f`` and phases ``lam`` (``lam[0] = 0``) the mean value of
a witness after ``U = sum_j exp(i lam_j) |f(j)><j|`` is the phase
synchronization objective

    g(lam) = sum_{j<k} |w_{f(j)f(k)}| |b_jk| cos(alpha_jk + lam_j - lam_k),
    alpha_jk = phi_{f(j)f(k)} - theta'_jk,

where ``phi`` are the witness orientations (``phi_kj = -phi_jk``) and
``theta'`` the directions of the state's Bloch pairs. It is maximized by
multi-start coordinate ascent; every coordinate step is solved exactly.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .gellmann import ATOL, DimensionMismatchError, check_dim, decompose, pair_index, pairs
from .states import DensityMatrix, validate
from .witness import NormalizedWitness, Witness, circular_distance, mean_value, optimal_witness

MAX_PERMUTATION_DIM = 8
MAX_GRID_DIM = 3
ANGLE_TOL = 1e-9


class PermutationLimitError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class IncoherentUnitary:
    """``U = sum_j exp(i phases[j]) |perm[j]><j|`` with ``phases[0] = 0``."""

    perm: tuple[int, ...]
    phases: np.ndarray

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        if sorted(perm) != list(range(len(perm))):
            raise ValueError(f"{self.perm!r} is not a permutation of 0..{len(perm) - 1}")
        check_dim(len(perm))
        phases = np.asarray(self.phases, dtype=float)
        if phases.shape != (len(perm),):
            raise DimensionMismatchError(f"{phases.shape} phases for dim={len(perm)}")
        # global phase is unobservable; fix the gauge lam_0 = 0
        phases = np.mod(phases - phases[0], 2 * np.pi)
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "phases", phases)

    @property
    def dim(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, dim: int) -> "IncoherentUnitary":
        return cls(tuple(range(dim)), np.zeros(dim))

    @classmethod
    def random(cls, dim: int, seed=None) -> "IncoherentUnitary":
        rng = np.random.default_rng(seed)
        return cls(tuple(rng.permutation(dim)), rng.uniform(0, 2 * np.pi, dim))

    def matrix(self) -> np.ndarray:
        u = np.zeros((self.dim, self.dim), dtype=complex)
        u[list(self.perm), np.arange(self.dim)] = np.exp(1j * self.phases)
        return u


def apply(unitary: IncoherentUnitary, state) -> DensityMatrix:
    m = np.asarray(getattr(state, "matrix", state))
    if m.shape[0] != unitary.dim:
        raise DimensionMismatchError(f"unitary dim {unitary.dim} != state dim {m.shape[0]}")
    u = unitary.matrix()
    out = u @ m @ u.conj().T
    return validate(0.5 * (out + out.conj().T))


def conjugate_witness(unitary: IncoherentUnitary, witness) -> Witness:
    """``U W U^dagger`` as a witness (still stringent, same pair norms)."""
    from .witness import from_matrix

    u = unitary.matrix()
    return from_matrix(u @ witness.matrix() @ u.conj().T)


def _witness_polar(witness):
    w = np.asarray(witness.coeffs, dtype=float)
    return np.hypot(w[:, 0], w[:, 1]), np.arctan2(w[:, 1], w[:, 0])


def edge_terms(witness, state, perm) -> tuple[np.ndarray, np.ndarray]:
    """Weights ``|w_{f(j)f(k)}| |b_jk|`` and offsets ``alpha_jk`` for each pair."""
    dim = witness.dim
    b = decompose(state)
    if b.dim != dim or len(perm) != dim:
        raise DimensionMismatchError("witness, state and permutation dimensions differ")
    wnorm, wang = _witness_polar(witness)
    index = pair_index(dim)
    weights = np.empty(len(b.pairs))
    alpha = np.empty(len(b.pairs))
    for n, (j, k) in enumerate(b.pairs):
        a, c = perm[j], perm[k]
        m = index[(min(a, c), max(a, c))]
        weights[n] = wnorm[m] * b.pair_norms()[n]
        alpha[n] = (wang[m] if a < c else -wang[m]) - b.pair_angles()[n]
    return weights, alpha


def objective_closed_form(witness, state, perm, phases) -> float:
    """Witness mean value after ``IncoherentUnitary(perm, phases)``, as a sum of cosines."""
    phases = np.asarray(phases, dtype=float)
    if phases.shape == (witness.dim - 1,):
        phases = np.concatenate([[0.0], phases])
    weights, alpha = edge_terms(witness, state, tuple(perm))
    j, k = np.array(pairs(witness.dim)).T
    return float(np.sum(weights * np.cos(alpha + phases[j] - phases[k])))


def example_objective(theta, lam1, lam2):
    """Mean value of the qutrit example witness on the example state after diagonal phases.

    ``cos^2 t cos l1 - sqrt2 cos t sin t sin l2 + sqrt2 cos t sin t cos(l2 - l1)``.
    Broadcasts over its arguments.
    """
    c, s = np.cos(theta), np.sin(theta)
    r = math.sqrt(2) * c * s
    return c**2 * np.cos(lam1) - r * np.sin(lam2) + r * np.cos(lam2 - lam1)


def game_payoff(witness, state, strategy: IncoherentUnitary) -> float:
    """Average payoff when the player applies ``strategy`` before the referee measures ``witness``."""
    return mean_value(witness, apply(strategy, state))


# ---------------------------------------------------------------------------
# optimizer

@dataclass(frozen=True)
class OptimizerConfig:
    grid: int = 4096
    starts: int = 16
    max_iter: int = 5000
    tol: float = 1e-12
    seed: int = 0

    def __post_init__(self):
        for name in ("grid", "starts", "max_iter"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be a positive integer")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


@dataclass(frozen=True, eq=False)
class ActivationResult:
    best_mean: float
    best_unitary: IncoherentUnitary
    witnessed_coherence: float
    matching: bool
    certifying_perm: tuple[int, ...] | None
    converged: bool
    residual: float
    tolerance: float
    scope: str = field(default="incoherent unitaries")

    @property
    def gap(self) -> float:
        return self.witnessed_coherence - self.best_mean

    def to_dict(self) -> dict:
        return {
            "best_mean": self.best_mean,
            "witnessed_coherence": self.witnessed_coherence,
            "gap": self.gap,
            "matching": self.matching,
            "certifying_permutation": (list(self.certifying_perm)
                                       if self.certifying_perm is not None else None),
            "permutation": list(self.best_unitary.perm),
            "phases": self.best_unitary.phases.tolist(),
            "converged": self.converged,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "scope": self.scope,
        }


def _coupling(weights, alpha, dim):
    """Hermitian couplings ``C`` with ``g = 1/2 Re z^T C conj(z)``; leading axis batches."""
    j, k = np.array(pairs(dim)).T
    c = weights * np.exp(1j * alpha)
    out = np.zeros(c.shape[:-1] + (dim, dim), dtype=complex)
    out[..., j, k] = c
    out[..., k, j] = c.conj()
    return out


def coordinate_ascent(weights, alpha, dim, starts, max_iter=5000, tol=1e-12):
    """Maximize the cosine sum from each row of ``starts`` (phases, ``[..., 0] = 0``).

    ``weights`` and ``alpha`` may carry leading batch axes matching
    ``starts.shape[:-2]``. Returns ``(values, phases, residual, iterations)``
    per start; ``residual`` is the largest partial derivative at the end.
    """
    C = _coupling(np.asarray(weights), np.asarray(alpha), dim)
    z = np.exp(1j * np.asarray(starts, dtype=float))

    def value(z):
        return 0.5 * np.real(np.einsum("...a,...ab,...b->...", z, C[..., None, :, :], z.conj()))

    prev = value(z)
    for it in range(1, max_iter + 1):
        for m in range(1, dim):
            h = np.einsum("...b,...b->...", C[..., None, m, :], z.conj())
            mag = np.abs(h)
            safe = mag > 0
            z[..., m] = np.where(safe, h.conj() / np.where(safe, mag, 1.0), z[..., m])
        cur = value(z)
        if np.all(np.abs(cur - prev) <= tol * 1e-3):
            prev = cur
            break
        prev = cur
    h = np.einsum("...ab,...b->...a", C[..., None, :, :], z.conj())
    residual = np.max(np.abs(np.imag(z * h))[..., 1:], axis=-1) if dim > 1 else 0.0
    return prev, np.angle(z), residual, it


def _permutations(dim):
    if dim > MAX_PERMUTATION_DIM:
        raise PermutationLimitError(
            f"exhaustive permutation search refused for dim={dim} > {MAX_PERMUTATION_DIM}"
        )
    return list(itertools.permutations(range(dim)))


def maximize_mean(witness, state, config: OptimizerConfig | None = None) -> ActivationResult:
    """Best witness mean value reachable with an incoherent unitary.

    Searches every permutation (dim <= 8) and ``config.starts`` phase starts
    per permutation, the all-zero start included. ``converged`` is False if
    any winning coordinate still has a gradient above ``sqrt(config.tol)``.
    """
    config = config or OptimizerConfig()
    if isinstance(witness, Witness) and witness.is_normalized():
        witness = witness.normalized()
    dim = witness.dim
    state_dim = np.shape(getattr(state, "matrix", state))[0]
    if state_dim != dim:
        raise DimensionMismatchError(f"witness dim {dim} != state dim {state_dim}")
    perms = _permutations(dim)
    terms = [edge_terms(witness, state, p) for p in perms]
    weights = np.array([t[0] for t in terms])
    alpha = np.array([t[1] for t in terms])

    rng = np.random.default_rng(config.seed)
    starts = rng.uniform(0, 2 * np.pi, size=(config.starts, dim))
    starts[0] = 0.0
    starts[:, 0] = 0.0
    starts = np.broadcast_to(starts, (len(perms),) + starts.shape)

    values, phases, residual, _ = coordinate_ascent(
        weights, alpha, dim, starts, config.max_iter, config.tol)
    p, s = np.unravel_index(np.argmax(values), values.shape)
    best = IncoherentUnitary(perms[p], phases[p, s])
    best_mean = game_payoff(witness, state, best)
    res = float(residual[p, s]) if dim > 1 else 0.0

    if isinstance(witness, NormalizedWitness):
        cw = mean_value(optimal_witness(state), state)
        holds, cert = matching_condition(witness, state)
    else:
        cw, holds, cert = float("nan"), False, None
    return ActivationResult(
        best_mean=best_mean,
        best_unitary=best,
        witnessed_coherence=cw,
        matching=holds,
        certifying_perm=cert,
        converged=res <= math.sqrt(config.tol),
        residual=res,
        tolerance=config.tol,
    )


def matching_condition(witness: NormalizedWitness, state, tol: float = ANGLE_TOL,
                       zero_tol: float = ATOL):
    """Search for a relabeling ``f`` matching the triple phase sums of witness and state.

    Compares ``phi_{f(i)f(j)} + phi_{f(j)f(k)} - phi_{f(i)f(k)}`` with the same
    combination of the optimal witness orientations of ``state`` for every
    triple ``i < j < k`` whose three Bloch pairs are all nonzero. Returns
    ``(holds, f)``; ``f`` is the first matching permutation in lexicographic
    order, or None.
    """
    dim = witness.dim
    b = decompose(state)
    if b.dim != dim:
        raise DimensionMismatchError(f"witness dim {dim} != state dim {b.dim}")
    opt = optimal_witness(state)
    nonzero = dict(zip(b.pairs, b.pair_norms() > zero_tol))
    triples = [t for t in itertools.combinations(range(dim), 3)
               if nonzero[t[:2]] and nonzero[t[1:]] and nonzero[(t[0], t[2])]]
    target = np.array([opt.orientation(i, j) + opt.orientation(j, k) - opt.orientation(i, k)
                       for i, j, k in triples])
    for f in _permutations(dim):
        lhs = np.array([
            witness.orientation(f[i], f[j]) + witness.orientation(f[j], f[k])
            - witness.orientation(f[i], f[k])
            for i, j, k in triples
        ])
        if np.all(circular_distance(lhs, target) <= tol):
            return True, f
    return False, None


# ---------------------------------------------------------------------------
# brute-force oracle

def grid_maximize(witness, state, resolution: int = 4096, refine: bool = True):
    """Dense-grid maximum of ``tr(W U rho U^dagger)`` over all permutations.

    Works directly on matrix entries (no Bloch decomposition), on a grid of
    step ``2 pi / resolution`` per free phase, optionally polished with
    Nelder-Mead on the exact trace. Only for dim <= 3. Returns
    ``(value, perm, phases)``.
    """
    w = witness.matrix()
    rho = np.asarray(getattr(state, "matrix", state))
    dim = rho.shape[0]
    if dim > MAX_GRID_DIM:
        raise PermutationLimitError(f"grid oracle is limited to dim <= {MAX_GRID_DIM}")
    if w.shape[0] != dim:
        raise DimensionMismatchError(f"witness dim {w.shape[0]} != state dim {dim}")
    grid = np.arange(resolution) * (2 * np.pi / resolution)
    phase = [np.ones((1,) * (dim - 1), dtype=complex)]
    for n in range(dim - 1):
        shape = [1] * (dim - 1)
        shape[n] = resolution
        phase.append(np.exp(1j * grid).reshape(shape))

    def exact(perm, lam):
        u = IncoherentUnitary(perm, np.concatenate([[0.0], lam])).matrix()
        return float(np.real(np.trace(w @ u @ rho @ u.conj().T)))

    best = (-np.inf, None, None)
    for perm in itertools.permutations(range(dim)):
        # (U rho U^dag)_{f(j) f(k)} = e^{i(lam_j - lam_k)} rho_jk, paired with W_{f(k) f(j)}
        # float32 only locates the cell; the value is recomputed exactly below
        factors = []
        for j, k in itertools.combinations(range(dim), 2):
            x = 2 * w[perm[k], perm[j]] * rho[j, k] * phase[j]
            # Re(x conj(y)) = Re x Re y + Im x Im y
            factors += [(x.real, phase[k].real), (x.imag, phase[k].imag)]
        shape = (resolution,) * (dim - 1)
        full = [np.broadcast_shapes(a.shape, b.shape) == shape for a, b in factors]
        # lower-rank terms are summed per broadcast shape before touching the full grid
        low = {}
        for (a, b), f in zip(factors, full):
            if not f:
                key = np.broadcast_shapes(a.shape, b.shape)
                low[key] = low.get(key, 0.0) + a * b
        total = np.zeros(shape, dtype=np.float32)
        for term in low.values():
            total += term.astype(np.float32)
        buf = np.empty_like(total)
        for (a, b), f in zip(factors, full):
            if f:
                np.multiply(a.astype(np.float32), b.astype(np.float32), out=buf)
                total += buf
        idx = np.unravel_index(np.argmax(total), total.shape)
        lam = grid[list(idx)]
        value = exact(perm, lam)
        if refine:
            opt = minimize(lambda x: -exact(perm, x), lam, method="Nelder-Mead",
                           options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 20000})
            if -opt.fun > value:
                value, lam = float(-opt.fun), opt.x
        if value > best[0]:
            best = (value, perm, np.concatenate([[0.0], lam]))
    return best


# ---------------------------------------------------------------------------
# qutrit example sweep

class OracleMismatchError(ArithmeticError):
    pass


def example_sweep(samples: int = 101, config: OptimizerConfig | None = None,
                  verify: bool = False, oracle_tol: float = 1e-6):
    """Witnessed coherence and best activated mean value of the qutrit example.

    ``theta`` runs uniformly over ``[0, pi/2]``. Returns a list of
    ``(theta, witnessed_coherence, max_mean_value)`` rows. With ``verify``
    each row is checked against :func:`grid_maximize` at ``config.grid``
    and :class:`OracleMismatchError` is raised if the ascent falls short by
    more than ``oracle_tol``.
    """
    from .states import example_qutrit
    from .witness import example_witness

    if samples < 2:
        raise ValueError("samples must be >= 2")
    config = config or OptimizerConfig()
    w = example_witness()
    rows = []
    for theta in np.linspace(0.0, np.pi / 2, samples):
        rho = example_qutrit(theta)
        res = maximize_mean(w, rho, config)
        if verify:
            oracle, _, _ = grid_maximize(w, rho, config.grid)
            if res.best_mean < oracle - oracle_tol:
                raise OracleMismatchError(
                    f"theta={theta!r}: ascent {res.best_mean!r} < grid oracle {oracle!r}")
        rows.append((float(theta), res.witnessed_coherence, res.best_mean))
    return rows
