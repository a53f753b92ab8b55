"""Command-line entry point: ``tourney <subcommand> ...``.

Every subcommand prints one JSON document. Everything except the
``metadata`` block is a pure function of the arguments (``--threads`` only
changes speed and is recorded under ``metadata``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

from . import analysis, census, constructions, diagnostics, search, verify
from .core import PatternId, TournamentError, UnsupportedSizeError, read_tour, write_tour
from .parallel import resolve_threads

log = logging.getLogger("tourney")


class DomainError(Exception):
    pass


def _parse_alpha(text: str):
    if text == "auto":
        return "auto"
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"alpha must be 'auto' or a float, got {text!r}") from None


def _parse_range(text: str) -> list[int]:
    try:
        if ".." in text:
            a, b = text.split("..")
            return list(range(int(a), int(b) + 1))
        return [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or a range a..b, got {text!r}") from None


def _load(path: str):
    try:
        ts = read_tour(path)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None
    if not ts:
        raise DomainError(f"{path}: no tournaments found")
    return ts


# -- subcommands --------------------------------------------------------------


def cmd_construct(args) -> dict:
    kind = args.kind
    extra = {}
    if kind == "transitive":
        ts = [constructions.transitive(args.n)]
    elif kind == "carousel":
        ts = [constructions.carousel(args.n)]
    elif kind == "carousel-class":
        ts = constructions.carousel_class(args.n)
    elif kind == "random":
        ts = [constructions.random_tournament(args.n, args.seed)]
    else:
        spec = constructions.BlowupSpec(args.n, args.alpha, args.seed, args.base_cutoff, args.max_depth)
        b = constructions.build_blowup(spec)
        ts = [b.tournament]
        extra = {
            "alpha": spec.resolved_alpha,
            "level_sizes": [list(s) for s in b.sizes],
            "predicted_c3plus_density": analysis.construction_density_prediction(spec),
        }
        if args.output:
            sidecar = Path(str(args.output) + ".levels.json")
            sidecar.write_text(json.dumps({"n": args.n, "levels": b.levels.tolist(), "level_sizes": extra["level_sizes"]}) + "\n")
            extra["levels_file"] = str(sidecar)
    doc = {"kind": kind, "count": len(ts), "n": ts[0].n, **extra}
    if args.output:
        write_tour(args.output, ts, comments=[f"construct {kind} n={args.n} seed={args.seed}"])
        doc["output"] = str(args.output)
    else:
        doc["tournaments"] = [t.to_bits() for t in ts]
    return doc


def cmd_count(args) -> dict:
    out = []
    for T in _load(args.input):
        if T.n < 3:
            raise DomainError(f"count needs n >= 3, got {T.n}")
        c = census.census(T) if not args.bruteforce else census.census_bruteforce(T)
        item = census.census_to_json(c)
        if args.pattern:
            p = PatternId.parse(args.pattern)
            item["pattern"] = {"id": str(p), "count": census.count_pattern(p, T)}
        out.append(item)
    return {"input": str(args.input), "results": out}


def cmd_maximize(args) -> dict:
    p = PatternId.parse(args.pattern)
    rows = []
    for n in args.n:
        if args.local:
            res = search.local_search(
                p, n, seed=args.seed, restarts=args.restarts, moves=args.moves.split(","),
                first_improvement=args.first_improvement, threads=args.threads,
            )
        else:
            res = search.exhaustive_max(p, n, threads=args.threads)
        rows.append(res.as_json())
        if args.emit_witnesses:
            d = Path(args.emit_witnesses)
            d.mkdir(parents=True, exist_ok=True)
            ts = [cf.tournament() for cf in res.maximizers] if res.maximizers else [res.witness]
            write_tour(d / f"{p.tag.lower()}_n{n}.tour", ts, comments=[f"maximizers of {p} at n={n}"])
    if args.format == "csv":
        return {"_csv": [{"n": r["n"], "best_count": r["best_count"], "density": r["density"]["exact"], "approx": r["density"]["approx"]} for r in rows]}
    return {"pattern": str(p), "mode": "local" if args.local else "exhaustive", "results": rows}


def cmd_diagnose(args) -> dict:
    out = [diagnostics.diagnose(T, args.tol) for T in _load(args.input)]
    if args.format == "csv":
        h = out[0]["degrees"]["histogram"]
        return {"_csv": [{"bin": int(k), "bin_low": int(k) / 100, "count": v} for k, v in h.items()]}
    return {"input": str(args.input), "results": out}


def cmd_verify(args) -> dict:
    names = verify.SUITES if args.suite == "all" else [args.suite]
    reports = [verify.run_suite(s, args.n_max, args.seed, args.threads) for s in names]
    return {"suites": reports, "pass": all(r["pass"] for r in reports)}


def cmd_optimize_alpha(args) -> dict:
    r = analysis.optimize_alpha(args.tol)
    return {**r.as_json(), "tol": args.tol, "alpha_error": abs(r.alpha_star - r.closed_alpha), "L_constant": analysis.CLOSED_L}


def cmd_enumerate(args) -> dict:
    masks = search.class_masks(args.n, args.threads)
    ts = list(search.enumerate_tournaments(args.n, args.threads))
    doc = {"n": args.n, "classes": len(masks)}
    if args.output:
        write_tour(args.output, ts, comments=[f"one tournament per isomorphism class, n={args.n}"])
        doc["output"] = str(args.output)
    else:
        doc["tournaments"] = [t.to_bits() for t in ts]
    return doc


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None, help="worker processes (default: $TOURNEY_THREADS or all cores)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--no-metadata", action="store_true", help="omit the timestamp/runtime block")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="tourney", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build a tournament and write it in tour/1 format")
    p.add_argument("kind", choices=("transitive", "carousel", "carousel-class", "random", "iterated"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", type=_parse_alpha, default="auto")
    p.add_argument("--base-cutoff", type=int, default=4)
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("count", parents=[common], help="exact 3- and 4-vertex census of each tournament in a file")
    p.add_argument("--input", required=True)
    p.add_argument("--pattern", help="also count a named or custom:<n>:<bits> pattern")
    p.add_argument("--bruteforce", action="store_true", help="use the subset-classification oracle")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("maximize", parents=[common], help="maximise a pattern count exhaustively or by local search")
    p.add_argument("--pattern", required=True)
    p.add_argument("--n", type=_parse_range, required=True, help="k or a..b")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", default=True)
    mode.add_argument("--local", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--moves", default="arc_flip")
    p.add_argument("--first-improvement", action="store_true")
    p.add_argument("--emit-witnesses")
    p.set_defaults(func=cmd_maximize)

    p = sub.add_parser("diagnose", parents=[common], help="degree bands, cut, quasi-randomness and inequality audits")
    p.add_argument("--input", required=True)
    p.add_argument("--tol", type=float, default=None, help="audit slack (default 4/sqrt(n))")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", choices=verify.SUITES + ("all",), required=True)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("optimize-alpha", parents=[common], help="maximise the construction's limit density over alpha")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_optimize_alpha)

    p = sub.add_parser("enumerate", parents=[common], help="one tournament per isomorphism class")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_enumerate)
    return ap


def _config(args) -> dict:
    skip = {"func", "threads", "no_metadata", "verbose", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Parse and dispatch; returns ``(exit_code, stdout_text)``. Usage errors exit via argparse (code 2)."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    args.threads = resolve_threads(args.threads)
    t0 = time.perf_counter()
    try:
        result = args.func(args)
    except (DomainError, TournamentError, UnsupportedSizeError, ValueError) as exc:
        print(f"tourney {args.command}: error: {exc}", file=sys.stderr)
        return 1, ""
    if "_csv" in result:
        return 0, _emit_csv(result["_csv"])
    doc = {"command": args.command, "config": _config(args), "result": result}
    if not args.no_metadata:
        doc["metadata"] = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "elapsed_s": round(time.perf_counter() - t0, 3),
            "threads": args.threads,
        }
    code = 1 if result.get("pass") is False else 0
    return code, json.dumps(doc, indent=2, sort_keys=False) + "\n"


def main(argv: list[str] | None = None) -> int:
    code, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
