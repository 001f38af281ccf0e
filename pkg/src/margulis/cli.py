"""Command-line front end.

Exit codes: 0 all verdicts verified / no violations, 1 a refuted verdict or
a reported violation, 2 input or budget errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import growth, gtree, hyp3, tester
from .certnum import Verdict, as_interval, verify_constants
from .errors import MargulisError
from .tester import ChainVerdict, GroupFile


def _dump_json(path: Optional[str], payload: dict) -> None:
    if path:
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")


def _cmd_verify_constants(args) -> int:
    report = verify_constants()
    print(report.to_text())
    _dump_json(args.json, report.to_json_dict())
    return 0 if report.ok else 1


def _cmd_phi(args) -> int:
    ival = hyp3.phi(as_interval(args.t))
    print(f"phi({args.t})")
    print(f"  double precision   {hyp3.phi(float(args.t)):.15f}")
    print(f"  certified interval {ival}")
    _dump_json(args.json, {"t": args.t, "phi_lo": ival.lo, "phi_hi": ival.hi})
    return 0


def _cmd_growth(args) -> int:
    group = GroupFile.load(args.group)
    ball = growth.ball_sizes(group.generators, args.depth,
                             include_inverses=args.inverses,
                             dedup_eps=group.dedup_eps)
    est = growth.omega_estimate(ball) if args.depth >= 2 else None
    kind = "inverse-closed" if args.inverses else "positive words"
    print(f"group {group.name!r}: {kind}, depth {args.depth}")
    print(f"{'m':>4} {'b_m':>12} {'b_m^(1/m)':>12} {'b_m/b_(m-1)':>12}")
    for k, count in enumerate(ball.counts):
        root = f"{est.roots[k - 1]:.6f}" if est and k >= 1 else "-"
        ratio = f"{est.ratios[k - 1]:.6f}" if est and k >= 1 else "-"
        print(f"{k:>4} {count:>12} {root:>12} {ratio:>12}")
    if est:
        print(f"growth-rate estimate: {est.estimate:.6f}")
    _dump_json(args.json, {
        "group": group.name,
        "inverses": args.inverses,
        "counts": ball.counts,
        "roots": list(est.roots) if est else [],
        "ratios": list(est.ratios) if est else [],
        "estimate": est.estimate if est else None,
    })
    return 0


def _cmd_margulis_test(args) -> int:
    group = GroupFile.load(args.group)
    report = tester.margulis_test(group, args.mu, args.depth,
                                  points=args.points, radius=args.radius,
                                  seed=args.seed, budget=args.budget)
    print(report.to_text())
    _dump_json(args.json, report.to_json_dict())
    return 0 if report.ok else 1


def _cmd_tree_coset(args) -> int:
    window = gtree.coset_tree(args.depth, args.order_x, args.order_y)
    fx = "Z" if args.order_x == 0 else f"Z_{args.order_x}"
    fy = "Z" if args.order_y == 0 else f"Z_{args.order_y}"
    print(f"coset tree window of {fx} * {fy} at radius {args.depth}")
    print(f"  vertices  {window.tree.n_vertices}")
    print(f"  edges     {len(window.tree.edges)}")
    u, v = window.base_edge
    print(f"  base edge {window.labels[u]} -- {window.labels[v]}")
    if args.out:
        window.tree.save(args.out)
        print(f"  saved edge list to {args.out}")
    return 0


def _cmd_tree_pingpong(args) -> int:
    window = gtree.coset_tree(args.depth, args.order_x, args.order_y)
    witness = gtree.ping_pong_witness(window.action, args.g0, args.g1,
                                      args.max_power)
    print(f"ping-pong witness for g0 = {gtree.format_word(args.g0)}, "
          f"g1 = {gtree.format_word(args.g1)} (radius {args.depth})")
    print(f"  contact vertices {witness.s}")
    print(f"  boundary edges   {witness.boundary_edges}")
    print(f"  |Omega_0| = {len(witness.omega0)}, |Omega_1| = {len(witness.omega1)}")
    print(f"  {'element':>8} {'power':>6} {'checked':>8} {'skipped':>8} {'violations':>11}")
    for row in witness.rows:
        print(f"  {'g' + str(row.element):>8} {row.power:>6} {row.checked:>8} "
              f"{row.skipped:>8} {row.violations:>11}")
    offenders = gtree.identity_alternating_words(window.action, args.g0,
                                                 args.g1, args.word_check)
    if offenders:
        print(f"  words acting trivially: {offenders}")
    else:
        print(f"  no alternating word of length <= {args.word_check} acts trivially")
    ok = witness.ok and not offenders
    _dump_json(args.json, {
        "ok": ok,
        "omega0": len(witness.omega0),
        "omega1": len(witness.omega1),
        "rows": [row.__dict__ for row in witness.rows],
        "trivial_words": offenders,
    })
    return 0 if ok else 1


def _all_reduced_words(max_len: int) -> list[str]:
    inverse = {"x": "X", "X": "x", "y": "Y", "Y": "y"}
    out = [""]
    frontier = [""]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for letter in "xXyY":
                if w and inverse[w[-1]] == letter:
                    continue
                nxt.append(w + letter)
        out.extend(nxt)
        frontier = nxt
    return out


def _cmd_tree_xydecomp(args) -> int:
    window = gtree.coset_tree(args.depth, args.order_x, args.order_y)
    elements = _all_reduced_words(args.max_word_len)
    report = gtree.xy_decomposition(window.action, args.x, args.y,
                                    window.base_edge, args.n, elements)
    counts = report.counts()
    print(f"edge decomposition for x = {report.x_word}, y = {report.y_word}, "
          f"n = {args.n} (radius {args.depth})")
    print(f"  elements tagged: X = {counts['X']}, Y = {counts['Y']}, "
          f"Stab = {counts['Stab']}")
    if report.violations:
        for v in report.violations:
            print(f"  violation: {v}")
    else:
        print("  all shuffle and disjointness conclusions hold")
    _dump_json(args.json, {
        "ok": report.ok,
        "counts": counts,
        "violations": list(report.violations),
    })
    return 0 if report.ok else 1


def _cmd_pipeline(args) -> int:
    if args.variant == "286":
        trace = tester.pipeline_286(args.nu)
        good = trace.verdict is ChainVerdict.CONTRADICTION
    else:
        trace = tester.pipeline_292(args.nu)
        good = trace.verdict is ChainVerdict.VERIFIED
    print(trace.to_text())
    _dump_json(args.json, trace.to_json_dict())
    return 0 if good else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="margulis",
        description="Certified scalar chains, tree ping-pong and "
                    "depth-bounded Margulis-number testing.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-constants",
                       help="run the certified constants suite")
    p.add_argument("--json", help="write the report as JSON to this path")
    p.set_defaults(fn=_cmd_verify_constants)

    p = sub.add_parser("phi", help="evaluate the displacement gap function")
    p.add_argument("t", help="argument, parsed as an exact decimal")
    p.add_argument("--json")
    p.set_defaults(fn=_cmd_phi)

    p = sub.add_parser("growth", help="word-ball counts and growth estimates")
    p.add_argument("--group", required=True, help="group file (JSON)")
    p.add_argument("--depth", required=True, type=int)
    p.add_argument("--inverses", action="store_true",
                   help="count inverse-closed words instead of positive words")
    p.add_argument("--json")
    p.set_defaults(fn=_cmd_growth)

    p = sub.add_parser("margulis-test",
                       help="depth-bounded search for Margulis violations")
    p.add_argument("--group", required=True)
    p.add_argument("--mu", required=True, type=float)
    p.add_argument("--depth", required=True, type=int)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--radius", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10_000_000)
    p.add_argument("--json")
    p.set_defaults(fn=_cmd_margulis_test)

    tree = sub.add_parser("tree", help="coset-tree constructions and checks")
    tree_sub = tree.add_subparsers(dest="tree_command", required=True)

    p = tree_sub.add_parser("coset", help="build a coset-tree window")
    p.add_argument("--depth", required=True, type=int, help="window radius")
    p.add_argument("--order-x", type=int, default=0)
    p.add_argument("--order-y", type=int, default=0)
    p.add_argument("--out", help="save the edge list to this path")
    p.set_defaults(fn=_cmd_tree_coset)

    p = tree_sub.add_parser("pingpong", help="run a ping-pong witness")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--order-x", type=int, default=0)
    p.add_argument("--order-y", type=int, default=0)
    p.add_argument("--g0", default="x")
    p.add_argument("--g1", default="y")
    p.add_argument("--max-power", type=int, default=3)
    p.add_argument("--word-check", type=int, default=6,
                   help="max letters for the trivial-word check")
    p.add_argument("--json")
    p.set_defaults(fn=_cmd_tree_pingpong)

    p = tree_sub.add_parser("xydecomp", help="run the edge decomposition")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--order-x", type=int, default=0)
    p.add_argument("--order-y", type=int, default=0)
    p.add_argument("--x", default="x")
    p.add_argument("--y", default="y")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--max-word-len", type=int, default=5)
    p.add_argument("--json")
    p.set_defaults(fn=_cmd_tree_xydecomp)

    p = sub.add_parser("pipeline", help="run a certified proof chain")
    p.add_argument("--nu", required=True,
                   help="displacement bound, parsed as an exact decimal")
    p.add_argument("--variant", choices=("286", "292"), default="286")
    p.add_argument("--json")
    p.set_defaults(fn=_cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except MargulisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
