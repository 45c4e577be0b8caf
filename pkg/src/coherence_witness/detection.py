"""Sequential coherence detection with single-generator witnesses.

Witnesses are measured in the order ``sigma_s^jk`` for all pairs, then
``sigma_a^jk`` for all pairs, pairs in lexicographic order and 0-based. The
first witness whose mean value exceeds ``tol`` in modulus certifies
coherence. Mean values are exact traces; there is no shot noise.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .gellmann import build_basis
from .states import random_state

COHERENT = "coherent"
INCOHERENT = "incoherent"
UNDETERMINED = "undetermined-at-tolerance"


@dataclass(frozen=True)
class Measurement:
    label: str
    kind: str
    j: int
    k: int
    mean: float


@dataclass(frozen=True)
class DetectionTranscript:
    measurements: tuple[Measurement, ...]
    verdict: str
    tol: float = field(default=1e-10)

    @property
    def count(self) -> int:
        return len(self.measurements)

    def records(self) -> list[dict]:
        """One JSON-ready record per measured witness."""
        out = []
        for n, m in enumerate(self.measurements, start=1):
            out.append({"step": n, "witness": m.label, "j": m.j, "k": m.k,
                        "mean": m.mean, "verdict": self.verdict if n == self.count else None})
        return out


def witness_sequence(dim: int):
    """Yield ``(label, kind, j, k, generator)`` in measurement order."""
    basis = build_basis(dim)
    for kind, gens in (("s", basis.sym), ("a", basis.anti)):
        for (j, k), g in zip(basis.pairs, gens):
            yield f"W_{kind}^{{{j}{k}}}", kind, j, k, g


def detect(state, tol: float = 1e-10) -> DetectionTranscript:
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = np.asarray(getattr(state, "matrix", state))
    taken = []
    for label, kind, j, k, g in witness_sequence(m.shape[0]):
        mean = float(np.real(np.einsum("ab,ba->", g, m)))
        taken.append(Measurement(label, kind, j, k, mean))
        if abs(mean) > tol:
            return DetectionTranscript(tuple(taken), COHERENT, tol)
    return DetectionTranscript(tuple(taken), INCOHERENT, tol)


def detection_statistics(dim: int, trials: int, seed: int = 0, kind: str = "pure",
                         tol: float = 1e-10) -> dict[int, int]:
    """Histogram ``{count: occurrences}`` of stopping counts over random states.

    Each trial uses its own seed spawned from ``seed``, so the result does
    not depend on evaluation order.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    seeds = np.random.SeedSequence(seed).spawn(trials)
    counts = Counter(
        detect(random_state(dim, np.random.default_rng(s), kind), tol).count for s in seeds
    )
    return dict(sorted(counts.items()))
