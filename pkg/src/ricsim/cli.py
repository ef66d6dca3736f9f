"""Command-line front end.

Usage:
    ricsim run --resource smolin --alpha 0.6 --p 0.7 --shots 64000 --seed 42
    ricsim branches --resource ghz --alpha 0.6 --p 0.7 --format csv
    ricsim leak --resource ghz --prior prior.json
    ricsim verify [--grid dense] [--negative-control]

Exit codes: 0 success, 1 protocol or invariant failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from contextlib import contextmanager

from . import __version__
from .analysis import (DEFAULT_SEED, DEFAULT_SHOTS, default_grid, dense_grid, mutual_information,
                       verify_all)
from .pauli import SIGMA_X, correction_for
from .protocol import ResourceKind, enumerate_branches, sample_runs
from .states import TelecloningParams

FIDELITY_FLOOR = 1 - 1e-9
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def corrupted_correction(outcome) -> int:
    """Negative-control table: wrong Pauli whenever Alice reports Phi^3."""
    label = correction_for(outcome)
    return label ^ SIGMA_X if outcome[0] == 3 else label


def _default_seed() -> int:
    raw = os.environ.get("RICSIM_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"RICSIM_SEED must be an integer, got {raw!r}")


def _params(args) -> TelecloningParams:
    try:
        return TelecloningParams(args.alpha, args.beta, args.p)
    except ValueError as exc:
        raise UsageError(str(exc))


def _envelope(command: str, args, params: dict, results: dict, seed=None) -> dict:
    meta = {"tool": "ricsim", "version": __version__, "command": command,
            "resource": getattr(args, "resource", None), "seed": seed}
    return {"meta": meta, "params": params, "results": results}


def _write_json(doc: dict, out) -> None:
    out.write(json.dumps(doc, indent=2, allow_nan=False))
    out.write("\n")


def _write_csv(header, rows, out) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    out.write(buf.getvalue())


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def cmd_run(args) -> int:
    params = _params(args)
    seed = args.seed if args.seed is not None else _default_seed()
    if args.shots < 1:
        raise UsageError("--shots must be at least 1")
    outcomes, fidelities = sample_runs(args.resource, params, args.shots, seed)
    counts = {}
    for row in outcomes:
        key = tuple(int(x) for x in row)
        counts[key] = counts.get(key, 0) + 1
    table = [{"outcome": [l, j, k], "count": counts.get((l, j, k), 0)}
             for l in range(4) for j in range(4) for k in range(4)]
    mean_fid = float(fidelities.mean())
    min_fid = float(fidelities.min())
    with _output(args.output) as out:
        if args.format == "csv":
            _write_csv(["l", "j", "k", "count"],
                       [(*row["outcome"], row["count"]) for row in table], out)
        else:
            results = {"shots": args.shots, "mean_fidelity": mean_fid, "min_fidelity": min_fid,
                       "counts": table}
            _write_json(_envelope("run", args, params.as_dict(), results, seed), out)
    if min_fid < FIDELITY_FLOOR:
        print(f"protocol violation: minimum fidelity {min_fid!r}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_branches(args) -> int:
    params = _params(args)
    rows = enumerate_branches(args.resource, params)
    with _output(args.output) as out:
        if args.format == "csv":
            _write_csv(["l", "j", "k", "probability", "correction", "fidelity", "reachable"],
                       [(*b.outcome, repr(b.probability), b.correction, repr(b.fidelity),
                         str(b.reachable).lower()) for b in rows], out)
        else:
            results = {"branches": [
                {"outcome": list(b.outcome), "probability": b.probability, "correction": b.correction,
                 "fidelity": b.fidelity, "reachable": b.reachable} for b in rows]}
            _write_json(_envelope("branches", args, params.as_dict(), results), out)
    if any(b.reachable and b.fidelity < FIDELITY_FLOOR for b in rows):
        print("protocol violation: a reachable branch failed to recover the input", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def load_prior(path) -> list[tuple[float, TelecloningParams]]:
    """Read a JSON array of ``{"weight", "alpha", "p"}`` objects (``beta`` optional)."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read prior file {path}: {exc}")
    if not isinstance(raw, list) or not raw:
        raise UsageError("prior file must hold a non-empty JSON array")
    prior = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict) or not {"weight", "alpha", "p"} <= set(entry):
            raise UsageError(f"prior entry {i} must be an object with weight, alpha and p")
        try:
            weight = float(entry["weight"])
            params = TelecloningParams(float(entry["alpha"]), entry.get("beta"), float(entry["p"]))
        except (TypeError, ValueError) as exc:
            raise UsageError(f"prior entry {i}: {exc}")
        if not (weight > 0 and math.isfinite(weight)):
            raise UsageError(f"prior entry {i}: weight must be positive")
        prior.append((weight, params))
    if abs(sum(w for w, _ in prior) - 1.0) > 1e-9:
        raise UsageError("prior weights must sum to 1")
    return prior


def cmd_leak(args) -> int:
    prior = load_prior(args.prior)
    report = mutual_information(args.resource, prior)
    hypotheses = [{"weight": w, **pr.as_dict()} for w, pr in prior]
    with _output(args.output) as out:
        if args.format == "csv":
            _write_csv(["resource", "hypotheses", "mutual_information_bits"],
                       [(args.resource, len(prior), repr(report.mutual_information_bits))], out)
        else:
            results = {"mutual_information_bits": report.mutual_information_bits,
                       "conditional_tables": [
                           [{"outcome": list(o), "probability": p} for o, p in t.entries]
                           for t in report.conditional_tables]}
            _write_json(_envelope("leak", args, {"prior": hypotheses}, results), out)
    return EXIT_OK


def cmd_verify(args) -> int:
    grid = dense_grid() if args.grid == "dense" else default_grid()
    correction = corrupted_correction if args.negative_control else correction_for
    seed = args.seed if args.seed is not None else DEFAULT_SEED
    report = verify_all(grid, correction=correction, shots=args.shots, seed=seed)
    with _output(args.output) as out:
        if args.format == "json":
            params = {"grid": args.grid, "grid_size": len(grid), "shots": args.shots,
                      "negative_control": args.negative_control}
            _write_json(_envelope("verify", args, params, report.as_dict(), seed), out)
        else:
            out.write(report.format_text() + "\n")
    return EXIT_OK if report.passed else EXIT_FAIL


def _add_state_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--resource", choices=[r.value for r in ResourceKind], default="smolin")
    p.add_argument("--alpha", type=float, default=0.6, help="input amplitude on |0>")
    p.add_argument("--beta", type=float, default=None, help="input amplitude on |1> (default sqrt(1-alpha^2))")
    p.add_argument("--p", type=float, default=0.7, help="clone asymmetry p, with q = 1 - p")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ricsim", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ricsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="Monte Carlo runs of the protocol")
    _add_state_args(p)
    p.add_argument("--shots", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None, help="root seed (default: $RICSIM_SEED or 0)")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("branches", help="exact 64-branch table")
    _add_state_args(p)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_branches)

    p = sub.add_parser("leak", help="mutual information between outcomes and input hypotheses")
    p.add_argument("--resource", choices=[r.value for r in ResourceKind], default="smolin")
    p.add_argument("--prior", required=True, help="JSON array of {weight, alpha, p}")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_leak)

    p = sub.add_parser("verify", help="run the full invariant and bound-entanglement suite")
    p.add_argument("--grid", choices=["default", "dense"], default="default")
    p.add_argument("--negative-control", action="store_true",
                   help="use a deliberately corrupted correction table; must fail")
    p.add_argument("--shots", type=int, default=DEFAULT_SHOTS)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ricsim {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
