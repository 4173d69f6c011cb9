"""Command-line entry point: ``seqlrc <subcommand> ...``.

Exit codes: 0 success, 1 verification failed, 2 usage error, 3 could not certify.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import bounds
from .construct import (
    CertificationError,
    ConstructionParams,
    LayeredCode,
    UnsupportedParameters,
    construct,
)
from .gf2 import BitMatrix, BudgetExceeded
from .graph import Multigraph, from_dot, from_edge_list, girth, read_edge_list, to_dot, to_edge_list
from .verify import (
    BUDGET_ENV,
    code_supports,
    enumeration_budget,
    graph_from_matrix,
    staircase_check,
    verification_report,
)

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_USAGE, EXIT_UNCERTIFIED = 0, 1, 2, 3
MATRIX_COLUMN_LIMIT = 20000  # dense text beyond this runs to gigabytes


class UsageError(Exception):
    pass


def _dump(obj: object) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _fraction(x) -> str:
    return f"{x} ({bounds.decimal(x)})"


def cmd_bounds(args: argparse.Namespace) -> int:
    r, t = args.r, args.t
    lines = [
        f"r = {r}, t = {t}",
        f"rate_bound         {_fraction(bounds.rate_bound(r, t))}",
        f"moore_bound        {bounds.moore_bound(r, t)}",
        f"moore_rate         {_fraction(bounds.moore_rate(r, t))}",
        f"availability_bound {_fraction(bounds.availability_bound(r, t))}",
    ]
    if args.n is not None:
        lines.append(f"dim_bound          k <= {bounds.dim_bound(args.n, r, t)} at n = {args.n}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def _params(args: argparse.Namespace) -> ConstructionParams:
    aux = read_edge_list(args.aux) if getattr(args, "aux", None) else None
    return ConstructionParams(
        args.r, args.t, args.a0, args.seed, aux_override=aux, force_expansion=getattr(args, "expand", False)
    )


def _code_dot(code: LayeredCode) -> str:
    return to_dot(code.graph, code.layers)


def cmd_construct(args: argparse.Namespace) -> int:
    code = construct(_params(args))
    cert = code.certificate()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "graph.edges").write_text(to_edge_list(code.graph))
    (out / "graph.dot").write_text(_code_dot(code))
    (out / "certificate.json").write_text(_dump(cert))
    if code.n <= MATRIX_COLUMN_LIMIT:
        (out / "H.txt").write_text(code.parity_check.to_text())
    else:
        sys.stderr.write(f"n = {code.n} columns: parity-check matrix not written, use graph.edges\n")
    sys.stdout.write(_dump(cert))
    return EXIT_OK if cert["optimal"] else EXIT_UNCERTIFIED


def _load_code_graph(path: Path, apex: int) -> tuple[Multigraph, tuple[int, list[tuple[int, ...]]]]:
    """The code graph (apex at vertex 0) and the staircase-form column supports."""
    text = path.read_text()
    head = text.lstrip()
    if head.startswith("graph"):
        graph = from_dot(text)[0]
    else:
        lines = [ln.strip() for ln in text.strip().splitlines()]
        is_matrix = len(lines) > 1 and " " not in lines[1]
        if is_matrix:
            matrix = BitMatrix.from_text(text)
            graph, added = graph_from_matrix(matrix)
            if added:
                cols = [tuple(x - 1 for x in e if x != 0) for e in graph.edges]
                return graph, (matrix.rows, cols)
        else:
            graph = from_edge_list(text)
    if not 0 <= apex < graph.vertex_count:
        raise UsageError(f"apex vertex {apex} is out of range")
    if apex != 0:
        order = [apex] + [x for x in range(graph.vertex_count) if x != apex]
        index = {x: i for i, x in enumerate(order)}
        graph = Multigraph(graph.vertex_count, [(index[u], index[v]) for u, v in graph.edges])
    return graph, code_supports(graph, 0)


def cmd_verify(args: argparse.Namespace) -> int:
    graph, supports = _load_code_graph(Path(args.path), args.apex)
    stair = staircase_check(supports, args.r, args.t)
    report = verification_report(graph, args.r, args.t, stair, args.budget)
    sys.stdout.write(_dump(report))
    exhaustive = report["verify_all"]["passed"]
    ok = report["girth_certifies"] and exhaustive is not False and stair.ok
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_girth(args: argparse.Namespace) -> int:
    text = Path(args.path).read_text()
    graph = from_dot(text)[0] if text.lstrip().startswith("graph") else from_edge_list(text)
    result = girth(graph)
    value = None if result.is_infinite else int(result.girth)
    sys.stdout.write(_dump({"girth": value, "witness_cycle": list(result.witness_cycle)}))
    return EXIT_OK


def cmd_table1(args: argparse.Namespace) -> int:
    if args.t % 2:
        raise UsageError("table1 is defined for even t")
    if args.n_from > args.n_to:
        raise UsageError("--from must not exceed --to")
    sys.stdout.write(bounds.table1_csv(args.r, args.t, args.n_from, args.n_to))
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    sys.stdout.write(bounds.compare_csv(range(args.r_from, args.r_to + 1), args.t))
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    code = construct(_params(args))
    if args.format == "matrix":
        sys.stdout.write(code.parity_check.to_text())
    elif args.format == "edges":
        sys.stdout.write(to_edge_list(code.graph))
    elif args.format == "dot":
        sys.stdout.write(_code_dot(code))
    else:
        sys.stdout.write(_dump(code.certificate()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqlrc", description="Sequential-recovery locally recoverable codes."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def rt(p: argparse.ArgumentParser) -> None:
        p.add_argument("-r", type=int, required=True, help="locality")
        p.add_argument("-t", type=int, required=True, help="erasures recovered in sequence")

    def build_opts(p: argparse.ArgumentParser) -> None:
        rt(p)
        p.add_argument("--a0", type=int, default=None, help="apex fan-out of one base copy")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--aux", default=None, help="edge list of an auxiliary bipartite graph")
        p.add_argument("--expand", action="store_true", help="expand even when one copy has the girth")

    p = sub.add_parser("bounds", help="rate, Moore and availability bounds")
    rt(p)
    p.add_argument("-n", type=int, default=None, help="block length for the dimension bound")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("construct", help="build and certify a code, writing its files")
    build_opts(p)
    p.add_argument("--out", default="out", help="output directory")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="verify a parity-check matrix, edge list or DOT file")
    p.add_argument("path")
    rt(p)
    p.add_argument("--apex", type=int, default=0, help="vertex (row) of the apex check, default 0")
    p.add_argument(
        "--budget", type=int, default=None, help=f"erasure patterns to enumerate (env {BUDGET_ENV})"
    )
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("girth", help="girth and a shortest cycle of an edge-list graph")
    p.add_argument("path")
    p.set_defaults(func=cmd_girth)

    p = sub.add_parser("table1", help="integer dimension search over a range of lengths (CSV)")
    rt(p)
    p.add_argument("--from", dest="n_from", type=int, required=True)
    p.add_argument("--to", dest="n_to", type=int, required=True)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("compare", help="sequential vs availability rate bounds (CSV)")
    p.add_argument("-t", type=int, default=10)
    p.add_argument("--r-from", type=int, default=3)
    p.add_argument("--r-to", type=int, default=50)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("export", help="print one artifact of a construction to stdout")
    build_opts(p)
    p.add_argument("--format", choices=["matrix", "edges", "dot", "json"], default="json")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "budget", None) is None and hasattr(args, "budget"):
        args.budget = enumeration_budget()
    try:
        return args.func(args)
    except (UsageError, UnsupportedParameters, ValueError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (CertificationError, BudgetExceeded) as exc:
        sys.stderr.write(f"could not certify: {exc}\n")
        return EXIT_UNCERTIFIED


if __name__ == "__main__":
    sys.exit(main())
