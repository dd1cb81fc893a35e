"""Command-line interface.

Subcommands:
  analyze FILE                     geometric conditions and verdict
  sample FILE --n N --seed S       draw a graph, write it as JSON
  decompose FILE --n N --seed S    run the constructive pipeline on a sample
  montecarlo FILE --n N --trials T --seed S
                                   estimate the decomposition probability
  refine FILE --block I --at T     insert a breakpoint, write the refined file

Exit codes: 0 success, 1 a pipeline Failure outcome, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import io
from ._seeds import derive
from .construct import ConstructionError, build_balanced_matrix, build_decomposition
from .driver import Verdict, analyze, montecarlo
from .model import DisconnectedSkeletonError, skeleton
from .polytope import Membership
from .realize import realize
from .refine import ensure_loopless_odd_cycle, refine_once
from .sampling import (
    SampledGraph,
    assign_blocks,
    empirical_concentration,
    sample_graph,
    saturate_graph,
)

_VERDICT_TEXT = {
    Verdict.PREDICTS_H: "H-property predicted",
    Verdict.PREDICTS_NOT_H: "H-property ruled out",
    Verdict.INCONCLUSIVE: "inconclusive",
}


def _cmd_analyze(args) -> int:
    w = io.load_graphon(args.file)
    report = analyze(w)
    s = skeleton(w)
    print(
        f"skeleton: q={s.node_count}, loops={len(s.loops)}, pair edges={len(s.edges)},"
        f" {'connected' if report.connected else 'disconnected'}"
    )
    print(f"condition A (odd cycle): {'yes' if report.condition_a else 'no'}")
    if report.condition_b_status is None:
        print("condition B (interior membership): skipped (disconnected skeleton)")
        for k, sub in enumerate(report.components):
            print(
                f"  component {k}: condition A {'yes' if sub.condition_a else 'no'},"
                f" membership {sub.condition_b_status.value}, {_VERDICT_TEXT[sub.verdict]}"
            )
    else:
        extra = ""
        if report.certificate and report.certificate.margin is not None:
            extra = f" (margin {report.certificate.margin})"
        print(f"condition B (interior membership): {report.condition_b_status.value}{extra}")
        if report.condition_b_status is Membership.BOUNDARY and report.condition_a:
            print(
                "note: boundary case; the decomposition probability need not"
                " converge to 0 or 1"
            )
    print(f"verdict: {_VERDICT_TEXT[report.verdict]}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2)
            fh.write("\n")
    return 0


def _cmd_sample(args) -> int:
    w = io.load_graphon(args.file)
    g = sample_graph(w, args.n, args.seed)
    io.dump_graph(g, args.out)
    print(f"sampled n={g.n} graph with {g.edge_count} edges -> {args.out}")
    return 0


def _print_decomposition(tally, decomposition) -> None:
    print(f"tally matrix (counts over n={tally.scale}):")
    for row in tally.counts:
        print("  " + " ".join(f"{v:4d}" for v in row))
    mp = tally.min_positive()
    print(f"min positive tally entry: {mp}")
    two = [c for c in decomposition.cycles if len(c) == 2]
    longer = [c for c in decomposition.cycles if len(c) > 2]
    print(f"cycles: {len(two)} two-cycles, {len(longer)} longer")
    for c in two:
        print(f"  2-cycle: {c[0]} <-> {c[1]}")
    for c in longer:
        print(f"  {len(c)}-cycle: " + " -> ".join(str(v) for v in c) + f" -> {c[0]}")


def _cmd_decompose(args) -> int:
    w = io.load_graphon(args.file)
    g = sample_graph(w, args.n, args.seed)
    seed = derive(args.seed, "decompose")
    try:
        wn = ensure_loopless_odd_cycle(w)
    except (ValueError, DisconnectedSkeletonError) as exc:
        print(f"cannot decompose: {exc}", file=sys.stderr)
        return 1
    sn = skeleton(wn)
    blocks = assign_blocks(wn, g.coords)
    gn = SampledGraph(g.n, g.coords, blocks, g.edges)
    if args.saturated:
        gn = saturate_graph(gn, sn)
    x = empirical_concentration(gn, sn.node_count)
    try:
        tally = build_balanced_matrix(x, gn.n, sn)
    except ConstructionError as exc:
        print(f"tally construction failed: {exc}", file=sys.stderr)
        return 1
    pattern = build_decomposition(tally, tally.row_sums(), sn)
    outcome = realize(tally, pattern, gn, sn, seed, args.attempts)
    if not outcome.ok:
        print(f"realization failed: {outcome.diagnostics}", file=sys.stderr)
        return 1
    _print_decomposition(tally, outcome.decomposition)
    return 0


def _cmd_montecarlo(args) -> int:
    w = io.load_graphon(args.file)
    report = montecarlo(w, args.n, args.trials, args.seed, attempts=args.attempts, jobs=args.jobs)
    print(f"n={report.n} trials={report.trials} master_seed={report.master_seed}")
    print(
        f"oracle: {report.successes_oracle}/{report.trials}"
        f" estimate={report.estimate:.4f}"
        f" wilson95=[{report.ci_low:.4f}, {report.ci_high:.4f}]"
    )
    print(f"constructive: {report.successes_constructive}/{report.trials}")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(report.to_csv())
        print(f"per-trial rows -> {args.csv}")
    return 0


def _cmd_refine(args) -> int:
    w = io.load_graphon(args.file)
    try:
        rec = refine_once(w, args.block, Fraction(args.at))
    except ValueError as exc:
        print(f"refine: {exc}", file=sys.stderr)
        return 2
    io.dump_graphon(rec.refined, args.out)
    print(f"split block {rec.split_block} at {rec.split_point} -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hamdec",
        description="Decide geometric decomposition conditions for step-graphons "
        "and construct Hamiltonian decompositions in sampled graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="conditions and verdict for a graphon file")
    p.add_argument("file")
    p.add_argument("--json", help="also write a machine-readable report")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("sample", help="sample a graph and write it as JSON")
    p.add_argument("file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("decompose", help="sample and run the constructive pipeline")
    p.add_argument("file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--saturated", action="store_true", help="decompose the saturated graph")
    p.add_argument("--attempts", type=int, default=32)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("montecarlo", help="estimate the decomposition probability")
    p.add_argument("file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--csv", help="write per-trial rows")
    p.add_argument("--attempts", type=int, default=32)
    p.add_argument("--jobs", type=int, default=None, help="worker processes")
    p.set_defaults(func=_cmd_montecarlo)

    p = sub.add_parser("refine", help="insert a breakpoint into a graphon file")
    p.add_argument("file")
    p.add_argument("--block", type=int, required=True)
    p.add_argument("--at", required=True, help="split point, e.g. 0.5 or 1/3")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_refine)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (io.FormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, DisconnectedSkeletonError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
