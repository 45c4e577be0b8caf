"""JSON interchange for states and witnesses.

Matrices are row-major lists of ``[re, im]`` pairs::

    {"dim": 2, "matrix": [[[0.5, 0.0], [0.5, 0.0]], [[0.5, 0.0], [0.5, 0.0]]]}

Witnesses use the same matrix form or the orientation form::

    {"dim": 3, "orientations": [{"j": 0, "k": 1, "theta": 0.0}, ...]}
"""
from __future__ import annotations

import json
import warnings
from pathlib import Path

import numpy as np

from .gellmann import check_dim, pair_index, pairs
from .states import DensityMatrix, validate
from .witness import NormalizedWitness, Witness, from_matrix


class ParseError(ValueError):
    pass


class MissingOrientationWarning(UserWarning):
    pass


def matrix_to_json(matrix) -> list:
    m = np.asarray(matrix, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(data, dim: int | None = None) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"matrix entries must be [re, im] number pairs: {exc}") from None
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise ParseError(f"matrix must be d x d x 2 ([re, im] entries), got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise ParseError(f"declared dim {dim} but matrix is {arr.shape[0]} x {arr.shape[1]}")
    return arr[..., 0] + 1j * arr[..., 1]


def _load(source):
    if isinstance(source, dict):
        return source
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {source}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ParseError(f"{source}: top-level JSON value must be an object")
    return data


def _dim(data):
    if "dim" not in data:
        raise ParseError("missing required field 'dim'")
    d = data["dim"]
    if not isinstance(d, int) or isinstance(d, bool):
        raise ParseError(f"'dim' must be an integer, got {d!r}")
    return d


def state_to_json(state) -> dict:
    m = np.asarray(getattr(state, "matrix", state))
    return {"dim": int(m.shape[0]), "matrix": matrix_to_json(m)}


def load_state(source) -> DensityMatrix:
    """Parse a state file (path or already-decoded dict) and validate it."""
    data = _load(source)
    dim = _dim(data)
    if "matrix" not in data:
        raise ParseError("missing required field 'matrix'")
    return validate(matrix_from_json(data["matrix"], dim))


def witness_to_json(witness, include_matrix: bool = True) -> dict:
    out: dict = {"dim": witness.dim}
    if isinstance(witness, NormalizedWitness):
        out["orientations"] = [{"j": j, "k": k, "theta": float(t)}
                               for (j, k), t in zip(pairs(witness.dim), witness.theta)]
    else:
        out["coefficients"] = [{"j": j, "k": k, "w_s": float(ws), "w_a": float(wa)}
                               for (j, k), (ws, wa) in zip(pairs(witness.dim), witness.coeffs)]
    if include_matrix:
        out["matrix"] = matrix_to_json(witness.matrix())
    return out


def load_witness(source) -> Witness | NormalizedWitness:
    """Parse a witness file.

    The orientation form wins when both forms are present. Pairs missing
    from the orientation list default to ``theta = 0`` with a
    :class:`MissingOrientationWarning`. A matrix whose pairs are all unit
    vectors is returned as a :class:`NormalizedWitness`.
    """
    data = _load(source)
    dim = _dim(data)
    try:
        check_dim(dim)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    if "orientations" in data:
        index = pair_index(dim)
        theta = np.zeros(len(index))
        seen = set()
        for entry in data["orientations"]:
            try:
                j, k, t = int(entry["j"]), int(entry["k"]), float(entry["theta"])
            except (KeyError, TypeError, ValueError):
                raise ParseError(f"bad orientation entry {entry!r}") from None
            if (j, k) not in index:
                raise ParseError(f"pair ({j}, {k}) is not an ordered pair j < k for dim={dim}")
            if (j, k) in seen:
                raise ParseError(f"pair ({j}, {k}) listed twice")
            seen.add((j, k))
            theta[index[(j, k)]] = t
        missing = [p for p in index if p not in seen]
        if missing:
            warnings.warn(f"orientations missing for pairs {missing}; using theta = 0",
                          MissingOrientationWarning, stacklevel=2)
        return NormalizedWitness(dim, theta)
    if "matrix" in data:
        w = from_matrix(matrix_from_json(data["matrix"], dim))
        return w.normalized() if w.is_normalized() else w
    raise ParseError("witness file needs 'orientations' or 'matrix'")


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=False)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
