"""
Command-line front end.

    python -m src.cli analyze graph.dyer --json
    python -m src.cli oracle order graph.dyer --max-cosets 100000
    python -m src.cli corpus-check --max-vertices 3 --progress

Reports go to stdout, diagnostics to stderr. Exit status: 0 success, 1 usage,
file or syntax error, 2 validation error, 3 cap exceeded, 4 corpus-check
disagreement.
"""

import argparse
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Optional

from pydantic import BaseModel

from .config import configure_logging, settings
from .models.schemas import (
    AbelianisationDescription,
    CentreDescription,
    DecomposeResponse,
    DyerGraph,
    HyperbolicityResult,
    LiftResponse,
    is_infinite,
)
from .services import classify, corpus, oracle
from .services.dyer_graph import irreducible_components, parse_graph, partition_vertices, serialize_graph
from .services.errors import CapExceededError, GraphSyntaxError, GraphValidationError
from .services.lift import index_factor, lift_graph

logger = logging.getLogger("dyer")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_CAP = 3
EXIT_CORPUS_FAILURE = 4


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; 2 is reserved for invalid graphs."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump(value: Any) -> str:
    if isinstance(value, BaseModel):
        value = value.model_dump(mode="json", exclude_none=True)
    return json.dumps(value, indent=2)


def _group_name(order) -> str:
    return "Z" if is_infinite(order) else f"Z{order}"


def _braced(names: List[str]) -> str:
    return "{" + ", ".join(names) + "}"


def _centre_text(centre: CentreDescription) -> str:
    parts = []
    for factor in centre.factors:
        if factor.kind == "cyclic":
            parts.append(f"{_group_name(factor.order)} on {_braced(factor.component)}")
        elif factor.kind == "longest_element":
            parts.append(f"<w0> of {factor.diagram} on {_braced(factor.component)}")
    detail = "; ".join(parts) if parts else "trivial"
    return f"{centre.total_order} ({detail})"


def _abelian_text(ab: AbelianisationDescription) -> str:
    return " x ".join(_group_name(factor.order) for factor in ab.factors) or "1"


def _hyperbolic_text(result: HyperbolicityResult) -> str:
    witness = result.witness
    if witness is None:
        return str(result.value).lower()
    if witness.kind == "affine_subdiagram":
        return f"false (affine subdiagram {witness.diagram} on {_braced(witness.vertices)})"
    factors = " x ".join(_braced(f) for f in witness.factors)
    return f"false (infinite product {factors})"


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return number


def _non_negative_int(value: str) -> int:
    number = int(value)
    if number < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return number


def _read_graph(path: str) -> DyerGraph:
    if path == "-":
        return parse_graph(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def _subset_cap(args: argparse.Namespace) -> int:
    return settings.max_subset_vertices if args.max_subset_vertices is None else args.max_subset_vertices


def _coset_cap(args: argparse.Namespace) -> int:
    return settings.max_cosets if args.max_cosets is None else args.max_cosets


# Subcommands: each returns (json payload, text) for one graph
def cmd_validate(g: DyerGraph, args) -> tuple:
    payload = {"valid": True, "vertices": len(g.vertices), "edges": len(g.edges)}
    return payload, f"ok: {len(g.vertices)} vertices, {len(g.edges)} edges"


def cmd_analyze(g: DyerGraph, args) -> tuple:
    report = classify.analyze(g, _subset_cap(args))
    if args.json:
        # the canonical document; identical bytes across runs
        return None, classify.report_json(report)
    lines = [
        f"family: {report.family}",
        f"components: {' '.join(_braced(c) for c in report.components)}",
        f"finite: {str(report.finite).lower()}",
        f"order: {report.order}",
        f"centre: {_centre_text(report.centre)}",
        f"abelianisation: {_abelian_text(report.abelianisation)}",
        f"hyperbolic: {_hyperbolic_text(report.hyperbolic)}",
        f"acylindrically hyperbolic: {str(report.acylindrically_hyperbolic).lower()}",
    ]
    return None, "\n".join(lines)


def cmd_decompose(g: DyerGraph, args) -> tuple:
    response = DecomposeResponse(components=irreducible_components(g), partition=partition_vertices(g))
    p = response.partition
    lines = [_braced(c) for c in response.components]
    lines.append(f"V2: {_braced(p.v2)}  Vp: {_braced(p.vp)}  Vinf: {_braced(p.vinf)}")
    return response, "\n".join(lines)


def cmd_lift(g: DyerGraph, args) -> tuple:
    result = lift_graph(g)
    text = serialize_graph(result.lifted)
    response = LiftResponse(text=text, k=result.k, index=index_factor(g), prime_of=result.prime_of)
    return response, text


def cmd_finite(g: DyerGraph, args) -> tuple:
    finite = classify.dyer_is_finite(g)
    return {"finite": finite}, str(finite).lower()


def cmd_order(g: DyerGraph, args) -> tuple:
    order = classify.dyer_order(g)
    return {"order": order}, str(order)


def cmd_centre(g: DyerGraph, args) -> tuple:
    centre = classify.dyer_centre(g)
    return centre, _centre_text(centre)


def cmd_hyperbolic(g: DyerGraph, args) -> tuple:
    result = classify.dyer_is_hyperbolic(g, _subset_cap(args))
    return result, _hyperbolic_text(result)


def cmd_ah(g: DyerGraph, args) -> tuple:
    value = classify.dyer_is_acyl_hyperbolic(g)
    return {"acylindrically_hyperbolic": value}, str(value).lower()


def cmd_abelian(g: DyerGraph, args) -> tuple:
    ab = classify.abelianisation(g)
    return ab, _abelian_text(ab)


def cmd_oracle(g: DyerGraph, args) -> tuple:
    cap = _coset_cap(args)
    if args.question == "order":
        value = oracle.brute_order(g, cap)
    elif args.question == "centre":
        table = oracle.todd_coxeter(oracle.presentation_of(g, cap), cap)
        if not table.complete:
            raise CapExceededError(f"coset enumeration exceeded {cap} cosets; the group may be infinite", cap)
        value = oracle.brute_centre_order(table)
    else:
        value = oracle.brute_abelianisation_order(g, cap)
    return {"status": "complete", "value": value, "max_cosets": cap}, str(value)


GRAPH_COMMANDS: Dict[str, Callable] = {
    "validate": cmd_validate,
    "analyze": cmd_analyze,
    "decompose": cmd_decompose,
    "lift": cmd_lift,
    "finite": cmd_finite,
    "order": cmd_order,
    "centre": cmd_centre,
    "hyperbolic": cmd_hyperbolic,
    "ah": cmd_ah,
    "abelian": cmd_abelian,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--log-level", default=None, help="diagnostic verbosity (default from DYER_LOG_LEVEL)")

    graph_file = _Parser(add_help=False)
    graph_file.add_argument("file", help="graph in .dyer line format, '-' for stdin")

    subsets = _Parser(add_help=False)
    subsets.add_argument("--max-subset-vertices", type=_positive_int, default=None, metavar="N")

    cosets = _Parser(add_help=False)
    cosets.add_argument("--max-cosets", type=_positive_int, default=None, metavar="N")

    parser = _Parser(prog="dyer", description="Decide algebraic properties of Dyer groups from their graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", parents=[common, graph_file], help="parse and check a graph")
    sub.add_parser("analyze", parents=[common, graph_file, subsets], help="full report")
    sub.add_parser("decompose", parents=[common, graph_file], help="irreducible components and vertex partition")
    sub.add_parser("lift", parents=[common, graph_file], help="Coxeter lift of the graph")
    sub.add_parser("finite", parents=[common, graph_file])
    sub.add_parser("order", parents=[common, graph_file])
    sub.add_parser("centre", parents=[common, graph_file])
    sub.add_parser("hyperbolic", parents=[common, graph_file, subsets])
    sub.add_parser("ah", parents=[common, graph_file], help="acylindrical hyperbolicity")
    sub.add_parser("abelian", parents=[common, graph_file], help="abelianisation")

    oracle_parser = sub.add_parser("oracle", parents=[common, cosets], help="brute-force coset enumeration")
    oracle_parser.add_argument("question", choices=["order", "centre", "abelian"])
    oracle_parser.add_argument("file", help="graph in .dyer line format, '-' for stdin")

    corpus_parser = sub.add_parser("corpus-check", parents=[common, subsets], help="classifier against the oracle")
    corpus_parser.add_argument("--max-vertices", type=_non_negative_int, default=None, metavar="N")
    corpus_parser.add_argument("--order-cap", type=_positive_int, default=None, metavar="N")
    corpus_parser.add_argument("--max-cosets", type=_positive_int, default=None, metavar="N")
    corpus_parser.add_argument("--progress", action="store_true", help="progress bar on stderr")
    return parser


def _corpus_check(args: argparse.Namespace) -> int:
    bounds = corpus.default_bounds(args.max_vertices, args.order_cap)
    if args.max_cosets is not None:
        bounds.max_cosets = args.max_cosets
    if args.max_subset_vertices is not None:
        bounds.max_subset_vertices = args.max_subset_vertices

    summary = corpus.corpus_check(bounds, progress=args.progress)
    if args.json:
        print(_dump(summary))
    else:
        status = "PASS" if summary.passed else "FAIL"
        print(
            f"{status}: {summary.cases} cases, {summary.oracle_cases} checked against the oracle, "
            f"{summary.checks} checks, {len(summary.failures)} failures"
        )
        if summary.failures:
            first = summary.failures[0]
            print(f"first counterexample ({first.check}): {first.detail}")
            print(first.graph)
    return EXIT_OK if summary.passed else EXIT_CORPUS_FAILURE


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or settings.log_level)

    if args.command == "corpus-check":
        try:
            return _corpus_check(args)
        except CapExceededError as e:
            logger.error("%s", e)
            return EXIT_CAP

    try:
        g = _read_graph(args.file)
        payload, text = GRAPH_COMMANDS[args.command](g, args)
    except OSError as e:
        logger.error("%s: %s", args.file, e.strerror or e)
        return EXIT_USAGE
    except UnicodeDecodeError:
        logger.error("%s: not UTF-8 text", args.file)
        return EXIT_USAGE
    except GraphSyntaxError as e:
        logger.error("%s: %s", args.file, e)
        return EXIT_USAGE
    except GraphValidationError as e:
        logger.error("%s: %s", args.file, e)
        return EXIT_VALIDATION
    except CapExceededError as e:
        logger.error("%s: %s", args.file, e)
        return EXIT_CAP

    if args.json and payload is not None:
        print(_dump(payload))
    else:
        print(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
