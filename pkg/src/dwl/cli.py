"""Command-line entry point: ``dwl <subcommand> ...``.

Exit codes: 0 success, 1 validation failure, 2 usage or input error,
3 an exact routine was asked to go beyond its size cap.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import io
from .decomposition import (
    KINDS,
    DirectedPathDecomposition,
    KellyDecomposition,
    dpd_to_kelly_path,
    kelly_path_to_dpd,
    kind_of,
    normalize_dpd,
    validate,
    width,
)
from .digraph import Digraph
from .errors import CapabilityError, InvalidInputError
from .families import FAMILIES, biorient, gen_family
from .oracles import (
    dagwidth_by_game,
    dpw_by_ordering,
    dtw_exact_small,
    exact_caps,
    kellywidth_by_elimination,
    kellywidth_by_game,
)
from .pathwidth import DpwRunConfig, approx_dagwidth, approx_kellywidth, make_dpdec
from .separators import EXACT_SEPARATOR_CAP, SeparatorStrategy, find_sep, validate_separator
from .treewidth import ARB_ALPHA, make_arbdec

PARAMS = ("dpw", "dagw", "kw", "dtw")


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _read_graph(path: str) -> Digraph:
    if path == "-":
        return io.parse_digraph(sys.stdin.read())
    return io.read_digraph(path)


def run_approx(g: Digraph, param: str, strategy: SeparatorStrategy, alpha: Fraction | None,
               threshold: int | None, check: bool = False):
    if param == "dtw":
        return make_arbdec(g, strategy=strategy, check=check, alpha=ARB_ALPHA if alpha is None else alpha)
    cfg = DpwRunConfig(strategy=strategy, termination_threshold=threshold,
                       alpha_prime=Fraction(7, 8) if alpha is None else alpha, check=check)
    if param == "dpw":
        return make_dpdec(g, None, cfg)
    if param == "dagw":
        return approx_dagwidth(g, cfg)
    return approx_kellywidth(g, cfg)


def run_oracle(g: Digraph, param: str):
    """(width, certificate or None) from the exact oracle for ``param``."""
    if param == "dpw":
        return dpw_by_ordering(g)
    if param == "dtw":
        return dtw_exact_small(g)
    if param == "dagw":
        return dagwidth_by_game(g), None
    return kellywidth_by_game(g), None


def cmd_compute(args) -> int:
    g = _read_graph(args.input)
    strategy = SeparatorStrategy(mode=args.strategy, seed=args.seed)
    if args.algo == "approx":
        d, tele = run_approx(g, args.param, strategy, args.alpha, args.threshold)
        telemetry = tele.to_dict()
    else:
        w, d = run_oracle(g, args.param)
        telemetry = None
        if d is None and args.output:
            raise UsageError(f"the {args.param} oracle produces no decomposition to write")
    out = {"param": args.param, "algo": args.algo, "n": g.n,
           "width": width(d) if d is not None else w, "telemetry": telemetry}
    if d is not None:
        out["kind"] = kind_of(d)
        if args.output:
            io.write_decomposition(d, args.output)
            out["decomposition"] = args.output
    _emit(_dump(out), None)
    return 0


def cmd_validate(args) -> int:
    g = _read_graph(args.graph)
    d = io.read_decomposition(args.decomposition)
    if kind_of(d) != args.kind:
        raise UsageError(f"file holds a {kind_of(d)} decomposition, not {args.kind}")
    report = validate(g, d)
    out = report.to_dict()
    out["width"] = width(d)
    _emit(_dump(out), None)
    return 0 if report.passed else 1


def cmd_oracle(args) -> int:
    g = _read_graph(args.input)
    if args.param == "kw-elim":
        w, ordering = kellywidth_by_elimination(g)
        print(w)
        print(_dump({"order": list(ordering.order), "supports": list(ordering.supports)}), end="")
        return 0
    w, cert = run_oracle(g, args.param)
    print(w)
    if cert is not None and args.output:
        io.write_decomposition(cert, args.output)
        print(f"certificate: {args.output}")
    return 0


def _read_subset(path: str) -> list[int]:
    with open(path) as fh:
        tokens = [t for line in fh for t in line.split("#", 1)[0].split()]
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise InvalidInputError(f"subset file {path} must hold whitespace-separated integers") from None


def cmd_sep(args) -> int:
    g = _read_graph(args.input)
    u = _read_subset(args.subset) if args.subset else sorted(g.vertices)
    if not set(u) <= g.vertices:
        raise InvalidInputError("subset mentions vertices outside the graph")
    strategy = SeparatorStrategy(mode=args.strategy, alpha=args.alpha, seed=args.seed)
    r = find_sep(g, u, strategy)
    out = r.to_dict()
    out["valid"] = validate_separator(g, u, args.alpha, r)
    _emit(_dump(out), None)
    return 0


def cmd_convert(args) -> int:
    d = io.read_decomposition(args.decomposition)
    g = _read_graph(args.graph) if args.graph else None
    if kind_of(d) != args.source:
        raise UsageError(f"file holds a {kind_of(d)} decomposition, not {args.source}")
    if (args.source, args.target) == ("dpd", "kelly"):
        assert isinstance(d, DirectedPathDecomposition)
        out = dpd_to_kelly_path(normalize_dpd(d, g) if args.normalize else d, g)
    elif (args.source, args.target) == ("kelly", "dpd"):
        assert isinstance(d, KellyDecomposition)
        out = kelly_path_to_dpd(d, g)
    else:
        raise UsageError("convert supports --from dpd --to kelly and --from kelly --to dpd")
    _emit(io.dumps_decomposition(out), args.output)
    return 0


def cmd_gen(args) -> int:
    if args.family == "biorient":
        if not args.input:
            raise UsageError("gen --family biorient needs -i with an undirected edge list")
        h = _read_graph(args.input)
        g = biorient({tuple(sorted(a)) for a in h.arcs}, h.n)
    else:
        g = gen_family(args.family, args.params, args.seed)
    _emit(io.serialize_digraph(g), args.output)
    return 0


def cmd_compare(args) -> int:
    g = _read_graph(args.input)
    caps = exact_caps()
    oracle_caps = {"dpw": caps["orderings"], "dagw": caps["games"], "kw": caps["games"], "dtw": caps["dtw"]}
    mode = args.strategy or ("exact" if g.n <= EXACT_SEPARATOR_CAP else "heuristic")
    strategy = SeparatorStrategy(mode=mode, seed=args.seed)
    rows = []
    for param in PARAMS:
        d, _ = run_approx(g, param, strategy, None, args.threshold)
        approx = width(d)
        exact = run_oracle(g, param)[0] if g.n <= oracle_caps[param] else None
        if exact is None:
            ratio = "-"
        elif exact > 0:
            ratio = f"{approx / exact:.3f}"
        else:
            ratio = "1.000" if approx == exact else "inf"
        rows.append((param, str(approx), "-" if exact is None else str(exact), ratio))
    header = ("param", "approx", "oracle", "ratio")
    widths = [max(len(r[i]) for r in rows + [header]) for i in range(4)]
    for row in [header] + rows:
        print("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dwl", description="Directed width decompositions and exact oracles")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="build a decomposition and report its width")
    p.add_argument("--param", choices=PARAMS, required=True)
    p.add_argument("--algo", choices=("approx", "oracle"), default="approx")
    p.add_argument("--strategy", choices=("exact", "heuristic", "trivial"), default="exact")
    p.add_argument("--alpha", type=_fraction, default=None,
                   help="balance for the separator calls (default 7/8)")
    p.add_argument("--threshold", type=int, default=None, help="leaf size for the path construction")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("validate", help="check a decomposition file against a graph")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("-g", "--graph", required=True)
    p.add_argument("-d", "--decomposition", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("oracle", help="exact width of a small graph")
    p.add_argument("--param", choices=PARAMS + ("kw-elim",), required=True)
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", help="where to write the certificate, when there is one")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("sep", help="find a balanced directed separator")
    p.add_argument("--alpha", type=_fraction, default=Fraction(3, 4))
    p.add_argument("--subset", help="file with the balance set (default: all vertices)")
    p.add_argument("--strategy", choices=("exact", "heuristic", "trivial"), default="exact")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-i", "--input", required=True)
    p.set_defaults(func=cmd_sep)

    p = sub.add_parser("convert", help="switch between path and Kelly path decompositions")
    p.add_argument("--from", dest="source", choices=("dpd", "kelly"), required=True)
    p.add_argument("--to", dest="target", choices=("dpd", "kelly"), required=True)
    p.add_argument("-d", "--decomposition", required=True)
    p.add_argument("-g", "--graph", help="optional graph to check the input against")
    p.add_argument("--normalize", action="store_true", help="drop redundant bags before converting")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("gen", help="write a graph from a named family")
    p.add_argument("--family", choices=FAMILIES + ("biorient",), required=True)
    p.add_argument("--params", type=float, nargs="*", default=[])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-i", "--input", help="undirected edge list for --family biorient")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("compare", help="approximate vs exact widths for one graph")
    p.add_argument("--strategy", choices=("exact", "heuristic", "trivial"), default=None)
    p.add_argument("--threshold", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-i", "--input", required=True)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CapabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (UsageError, InvalidInputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
