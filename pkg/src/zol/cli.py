"""Command-line interface.

One entry point, `zol`, with the tool subcommands:

    zol interval --k 4 --frac 2/3 [--strong]
    zol refute-alpha --m 2 --k 15
    zol construct m-cycle --m 3 --d 4 [-o out.el]
    zol construct m-chain --m 3 --d 2 [-o out.el]
    zol construct figure-eight --m 2 --l1 8 --l2 8 [-o out.el]
    zol construct balanced --density 3/2 --vmax 8 [-o out.el]
    zol ehr --left g1.el --right g2.el -k 4 [--transcript out.json]
    zol mc-run --manifest suite.json [--out results/] [--threads N]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import constructions, game, mc, thresholds
from ._version import __version__
from .errors import ZolError
from .graphs import format_graph, parse_graph
from .rational import format_rational, parse_rational


def _print_interval(label: str, interval) -> None:
    left, right = interval
    print(f"{label}: ({format_rational(left)}, {format_rational(right)})")
    print(f"  decimal: ({float(left):.12f}, {float(right):.12f})")
    print(f"  width: {format_rational(right - left)} = {float(right - left):.3e}")


def _cmd_interval(args: argparse.Namespace) -> int:
    frac = parse_rational(args.frac)
    t, s = frac.numerator, frac.denominator
    basic = thresholds.interval_basic(args.k, t, s)
    _print_interval(f"basic interval (k={args.k}, t/s={t}/{s})", basic)
    if args.strong:
        strong = thresholds.interval_strong(args.k, t, s)
        _print_interval("strong interval", strong)
        improves = thresholds.strong_improves(args.k, t, s)
        print(f"  strong improves on basic: {improves}")
    return 0


def _cmd_refute_alpha(args: argparse.Namespace) -> int:
    alpha = thresholds.refutation_alpha(args.m, args.k)
    k1 = thresholds.refutation_k1(args.m, args.k)
    print(f"alpha = {format_rational(alpha)} = {float(alpha):.12f}")
    print(f"k1 = {k1}, clique-cycle length 2^k1 = {2 ** k1}")
    report = thresholds.refutation_position(args.m, args.k)
    if "basic_interval" in report:
        print(f"inside basic law interval: {report['inside_basic']}")
        print(f"inside strong law interval: {report['inside_strong']}")
    return 0


def _write_graph(graph, output: str | None) -> None:
    text = format_graph(graph)
    if output:
        Path(output).write_text(text)
        print(f"wrote {output} ({graph.vertex_count} vertices, "
              f"{graph.edge_count} edges)")
    else:
        sys.stdout.write(text)


def _cmd_construct(args: argparse.Namespace) -> int:
    if args.shape == "m-cycle":
        graph = constructions.make_m_cycle(args.m, args.d)
    elif args.shape == "m-chain":
        chain = constructions.make_m_chain(args.m, args.d)
        graph = chain.graph
        print(f"# ends: {chain.ends[0]} {chain.ends[1]}")
    elif args.shape == "figure-eight":
        graph = constructions.make_figure_eight(args.m, args.l1, args.l2)
    else:  # balanced
        target = parse_rational(args.density)
        found = constructions.find_strictly_balanced_with_density(
            target, vmax=args.vmax)
        if found is None:
            print(f"no strictly balanced graph with density "
                  f"{format_rational(target)} within vmax={args.vmax}")
            return 1
        graph = found
    _write_graph(graph, args.output)
    return 0


def _cmd_ehr(args: argparse.Namespace) -> int:
    left = parse_graph(Path(args.left).read_text())
    right = parse_graph(Path(args.right).read_text())
    result = game.solve_ehr(left, right, args.k,
                            extract_strategy=bool(args.strategy or args.transcript))
    print(f"winner: {result.winner} (k={args.k})")
    if args.strategy:
        Path(args.strategy).write_text(result.to_json() + "\n")
        print(f"wrote strategy tree to {args.strategy}")
    if args.transcript:
        moves = [game.parse_move(m) for m in args.moves or []]
        if len(moves) != args.k:
            print(f"--transcript needs exactly {args.k} --moves entries",
                  file=sys.stderr)
            return 2
        transcript = game.replay_strategy(left, right, result, moves)
        Path(args.transcript).write_text(transcript.to_json() + "\n")
        print(f"wrote transcript to {args.transcript}")
    return 0


def _cmd_mc_run(args: argparse.Namespace) -> int:
    result = mc.run_suite(args.manifest, out_dir=args.out,
                          threads=args.threads)
    for record in result.records:
        cfg = record.config
        print(f"{cfg['name']}: n={cfg['n']} event={cfg['event']} "
              f"frequency={record.frequency:.6f} "
              f"ci=({record.ci_low:.4f}, {record.ci_high:.4f}) "
              f"[{record.wall_time_s:.2f}s]")
    for breach in result.breaches:
        print(f"BREACH: {breach}", file=sys.stderr)
    return 0 if result.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zol", description="zero-one k-law toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("interval", help="exact k-law interval endpoints")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--frac", required=True, help="right endpoint t/s, e.g. 2/3")
    p.add_argument("--strong", action="store_true",
                   help="also print the strengthened interval")
    p.set_defaults(func=_cmd_interval)

    p = sub.add_parser("refute-alpha", help="exact refutation point of the k-law")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_refute_alpha)

    p = sub.add_parser("construct", help="clique-chain graph generators")
    shape = p.add_subparsers(dest="shape", required=True)
    for name in ("m-cycle", "m-chain"):
        q = shape.add_parser(name)
        q.add_argument("--m", type=int, required=True)
        q.add_argument("--d", type=int, required=True)
        q.add_argument("-o", "--output")
        q.set_defaults(func=_cmd_construct)
    q = shape.add_parser("figure-eight")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--l1", type=int, required=True)
    q.add_argument("--l2", type=int, required=True)
    q.add_argument("-o", "--output")
    q.set_defaults(func=_cmd_construct)
    q = shape.add_parser("balanced")
    q.add_argument("--density", required=True, help="target density, e.g. 3/2")
    q.add_argument("--vmax", type=int, default=12)
    q.add_argument("-o", "--output")
    q.set_defaults(func=_cmd_construct)

    p = sub.add_parser("ehr", help="solve an Ehrenfeucht game")
    p.add_argument("--left", required=True, help="edge-list file")
    p.add_argument("--right", required=True, help="edge-list file")
    p.add_argument("-k", type=int, required=True, help="number of rounds")
    p.add_argument("--strategy", help="write the winner's strategy tree (JSON)")
    p.add_argument("--transcript", help="replay --moves and write a transcript")
    p.add_argument("--moves", nargs="*",
                   help="adversary moves like left:0 right:2")
    p.set_defaults(func=_cmd_ehr)

    p = sub.add_parser("mc-run", help="run a Monte Carlo manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", help="directory for results.csv / results.json")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_mc_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ZolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
