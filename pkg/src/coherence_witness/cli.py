"""Command line interface.

Exit codes: 0 success, 1 output error, 2 parse error, 3 validation error,
4 dimension or feasibility error.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys
import warnings
from pathlib import Path

from . import io
from .activation import (
    IncoherentUnitary,
    OptimizerConfig,
    OracleMismatchError,
    PermutationLimitError,
    example_sweep,
    game_payoff,
    maximize_mean,
)
from .detection import detect
from .gellmann import DimensionMismatchError, InvalidDimensionError
from .states import StateValidationError, l1_coherence
from .witness import (
    NoWitnessError,
    NotStringentError,
    construct_for_state,
    mean_value,
    optimal_witness,
)

EXIT_OK, EXIT_OUTPUT, EXIT_PARSE, EXIT_VALIDATION, EXIT_FEASIBILITY = 0, 1, 2, 3, 4


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _optimizer_args(p):
    p.add_argument("--grid", type=_positive_int, default=4096,
                   help="grid points per phase for the brute-force oracle")
    p.add_argument("--starts", type=_positive_int, default=16,
                   help="coordinate-ascent starts per permutation")
    p.add_argument("--max-iter", type=_positive_int, default=5000)
    p.add_argument("--tol", type=_positive_float, default=1e-12,
                   help="convergence tolerance")
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--config", type=Path,
                   help="JSON file with grid/starts/max_iter/tol/seed (flags override)")


def _config(args) -> OptimizerConfig:
    values = {}
    if args.config is not None:
        data = io._load(args.config)
        unknown = set(data) - {"grid", "starts", "max_iter", "tol", "seed"}
        if unknown:
            raise io.ParseError(f"unknown optimizer settings {sorted(unknown)}")
        values.update(data)
    defaults = OptimizerConfig()
    for name in ("grid", "starts", "max_iter", "tol", "seed"):
        given = getattr(args, name)
        if given != getattr(defaults, name) or name not in values:
            values[name] = given
    try:
        return OptimizerConfig(**values)
    except (TypeError, ValueError) as exc:
        raise io.ParseError(f"bad optimizer settings: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coherence-witness",
        description="Stringent coherence witnesses and the l1-norm of coherence.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coherence", help="l1-norm of coherence of a state")
    p.add_argument("--state", type=Path, required=True)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("witness", help="construct or optimize a witness for a state")
    p.add_argument("--state", type=Path, required=True)
    p.add_argument("--mode", choices=("construct", "optimal"), default="optimal")
    p.add_argument("--out", type=Path)

    p = sub.add_parser("activate", help="best mean value of a fixed witness under incoherent unitaries")
    p.add_argument("--witness", type=Path, required=True)
    p.add_argument("--state", type=Path, required=True)
    p.add_argument("--out", type=Path)
    _optimizer_args(p)

    p = sub.add_parser("game", help="coherence game payoff")
    p.add_argument("--witness", type=Path, required=True)
    p.add_argument("--state", type=Path, required=True)
    p.add_argument("--strategy", type=Path,
                   help='JSON {"perm": [...], "phases": [...]}; default: optimized strategy')
    p.add_argument("--out", type=Path)
    _optimizer_args(p)

    p = sub.add_parser("detect", help="sequential witness detection, JSON lines")
    p.add_argument("--state", type=Path, required=True)
    p.add_argument("--tol", type=_positive_float, default=1e-10)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("figure1", help="qutrit example sweep: witnessed coherence vs activated mean")
    p.add_argument("--samples", type=_positive_int, default=101)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--verify", action="store_true",
                   help="check every row against the dense-grid oracle at --grid")
    p.add_argument("--out", type=Path)
    _optimizer_args(p)
    return parser


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_coherence(args) -> str:
    return _json({"c_l1": l1_coherence(io.load_state(args.state))})


def cmd_witness(args) -> str:
    state = io.load_state(args.state)
    if args.mode == "construct":
        return _json(io.witness_to_json(construct_for_state(state)))
    w = optimal_witness(state)
    out = io.witness_to_json(w)
    out["c_w"] = mean_value(w, state)
    return _json(out)


def _load_pair(args):
    witness = io.load_witness(args.witness)
    state = io.load_state(args.state)
    if witness.dim != state.dim:
        raise DimensionMismatchError(f"witness dim {witness.dim} != state dim {state.dim}")
    return witness, state


def cmd_activate(args) -> str:
    witness, state = _load_pair(args)
    return _json(maximize_mean(witness, state, _config(args)).to_dict())


def cmd_game(args) -> str:
    witness, state = _load_pair(args)
    if args.strategy is not None:
        data = io._load(args.strategy)
        try:
            strategy = IncoherentUnitary(tuple(data["perm"]), data["phases"])
        except (KeyError, TypeError) as exc:
            raise io.ParseError(f"bad strategy file: {exc}") from None
    else:
        strategy = maximize_mean(witness, state, _config(args)).best_unitary
    return _json({
        "payoff": game_payoff(witness, state, strategy),
        "c_l1": l1_coherence(state),
        "permutation": list(strategy.perm),
        "phases": strategy.phases.tolist(),
    })


def cmd_detect(args) -> str:
    transcript = detect(io.load_state(args.state), args.tol)
    return "".join(json.dumps(r) + "\n" for r in transcript.records())


def cmd_figure1(args) -> str:
    rows = example_sweep(args.samples, _config(args), verify=args.verify)
    if args.format == "json":
        return _json([{"theta": t, "witnessed_coherence": c, "max_mean_value": m}
                      for t, c, m in rows])
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["theta", "witnessed_coherence", "max_mean_value"])
    for row in rows:
        writer.writerow([format(x, ".17g") for x in row])
    return buf.getvalue()


COMMANDS = {
    "coherence": cmd_coherence,
    "witness": cmd_witness,
    "activate": cmd_activate,
    "game": cmd_game,
    "detect": cmd_detect,
    "figure1": cmd_figure1,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = lambda msg, *a, **k: print(f"warning: {msg}", file=sys.stderr)
            text = COMMANDS[args.command](args)
    except io.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (StateValidationError, NotStringentError, InvalidDimensionError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (DimensionMismatchError, PermutationLimitError, NoWitnessError,
            OracleMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FEASIBILITY
    except ValueError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        _emit(text, args.out)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_OUTPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
