"""Command-line front end.

Data goes to stdout (one value, or one CSV/JSON document); diagnostics go
to stderr.  Exit codes: 0 success, 1 failed verification, 2 usage or input
errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from grundygp import formula as F
from grundygp import verify
from grundygp.evolve import Dataset, EvolutionConfig, Metric, fitness, generate_dataset, run
from grundygp.games import Ruleset, options, parse_position
from grundygp.solver import Limits, ResourceLimitError, grundy, grundy_sequence


class UsageError(Exception):
    pass


def _ruleset(text: str) -> Ruleset:
    try:
        return Ruleset.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _limits(args) -> Limits:
    return Limits(max_bits=args.max_bits, max_graph_edges=args.max_edges)


def cmd_grundy(args) -> int:
    p = parse_position(args.position, args.ruleset)
    print(grundy(p, args.ruleset, limits=_limits(args)))
    return 0


def cmd_options(args) -> int:
    p = parse_position(args.position, args.ruleset)
    for q in sorted(str(o) for o in options(p, args.ruleset)):
        print(q)
    return 0


def cmd_sequence(args) -> int:
    family = args.family or ("extreme-cm" if args.ruleset is Ruleset.CM else "single-heap")
    seq = grundy_sequence(args.ruleset, family, args.max, limits=_limits(args))
    print("n,grundy")
    for n, g in enumerate(seq, start=1):
        print(f"{n},{g}")
    return 0


def cmd_dataset(args) -> int:
    d = generate_dataset(args.ruleset, args.heaps, args.max_size, args.count_primed)
    d.to_csv(args.out)
    print(f"wrote {len(d)} rows to {args.out}", file=sys.stderr)
    return 0


def load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise UsageError(f"{path}: config must be a JSON object")
    return cfg


def cmd_evolve(args) -> int:
    d = Dataset.from_csv(args.dataset)
    cfg = load_config(args.config)
    for key in ("seed", "population_size", "generations", "metric"):
        value = getattr(args, key)
        if value is not None:
            cfg[key] = value
    config = EvolutionConfig.from_dict(cfg)
    report = run(config, d, threads=args.threads)
    with open(args.report, "w") as fh:
        fh.write(report.to_json() + "\n")
    print(report.best_expression)
    print(
        f"{report.termination} after {len(report.generations)} generation(s), "
        f"best fitness {report.best_fitness}; report in {args.report}",
        file=sys.stderr,
    )
    return 0


def cmd_eval(args) -> int:
    d = Dataset.from_csv(args.dataset)
    e = F.parse(args.formula, d.names)
    out = {m.value: fitness(e, d, m) for m in (Metric.ABS_DIFF, Metric.NIM_DIST)}
    print(json.dumps(out, sort_keys=True))
    return 0


def _bounds(items: Sequence[str]) -> dict[str, dict]:
    """Parse ``check.key=value`` items into per-check keyword arguments."""
    out: dict[str, dict] = {}
    for item in items:
        try:
            lhs, value = item.split("=", 1)
            check, key = lhs.split(".", 1)
            out.setdefault(check, {})[key] = int(value)
        except ValueError as exc:
            raise UsageError(f"bad bound {item!r}; expected check.key=INT") from exc
    return out


def cmd_verify(args) -> int:
    bounds = _bounds(args.bounds)
    names = args.check or None
    for n in list(names or []) + list(bounds):
        if n not in verify.CHECKS:
            raise UsageError(f"unknown check {n!r}; choose from {', '.join(verify.CHECKS)}")
    try:
        results = verify.run_checks(names, bounds, threads=args.threads)
    except TypeError as exc:
        raise UsageError(f"bad bounds: {exc}") from exc
    doc = verify.results_json(results)
    print(doc)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(doc + "\n")
    print(verify.summary_text(results), file=sys.stderr)
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grundygp", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def solver_flags(p):
        p.add_argument("--ruleset", type=_ruleset, required=True)
        p.add_argument("--max-bits", type=int, default=Limits.max_bits)
        p.add_argument("--max-edges", type=int, default=Limits.max_graph_edges)

    p = sub.add_parser("grundy", help="print the Grundy value of a position")
    solver_flags(p)
    p.add_argument("--position", required=True)
    p.set_defaults(func=cmd_grundy)

    p = sub.add_parser("options", help="print the successor positions, one per line")
    solver_flags(p)
    p.add_argument("--position", required=True)
    p.set_defaults(func=cmd_options)

    p = sub.add_parser("sequence", help="CSV of values over a one-parameter family")
    solver_flags(p)
    p.add_argument("--family", choices=["single-heap", "extreme-cm"])
    p.add_argument("--max", type=int, required=True)
    p.set_defaults(func=cmd_sequence)

    p = sub.add_parser("dataset", help="write a heap-position dataset as CSV")
    p.add_argument("--ruleset", type=_ruleset, required=True)
    p.add_argument("--heaps", type=int, required=True)
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--count-primed", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_dataset)

    p = sub.add_parser("evolve", help="run genetic programming on a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--config", help="JSON file with EvolutionConfig fields")
    p.add_argument("--seed", type=int)
    p.add_argument("--population", dest="population_size", type=int)
    p.add_argument("--generations", type=int)
    p.add_argument("--metric", choices=[m.value for m in Metric])
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--report", default="run_report.json")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("eval", help="fitness of a formula under both metrics")
    p.add_argument("--formula", required=True)
    p.add_argument("--dataset", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="run the theorem checks")
    p.add_argument("--check", action="append", choices=list(verify.CHECKS))
    p.add_argument("--bounds", nargs="*", default=[], metavar="CHECK.KEY=INT")
    p.add_argument("--json", help="also write the JSON results here")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError, ResourceLimitError, KeyError, NotImplementedError) as exc:
        print(f"grundygp {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
