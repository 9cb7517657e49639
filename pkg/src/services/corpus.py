"""
Exhaustive small-graph corpus: every Dyer graph within the bounds, up to
label-preserving isomorphism, run through the classifier and the brute-force
oracle side by side.
"""

import json
import logging
from itertools import combinations, combinations_with_replacement, product
from math import prod
from typing import Dict, Iterator, List, Optional

import networkx as nx
from networkx.algorithms.isomorphism import categorical_edge_match, categorical_node_match
from tqdm import tqdm

from ..config import settings
from ..models.schemas import (
    INFINITY,
    AffineType,
    CorpusBounds,
    CorpusFailure,
    CorpusSummary,
    DyerGraph,
    Edge,
    Vertex,
    dyer_condition_holds,
    is_infinite,
)
from .classify import (
    abelianisation,
    analyze,
    dyer_centre,
    dyer_is_acyl_hyperbolic,
    dyer_is_finite,
    dyer_is_hyperbolic,
    dyer_order,
    infinite_components,
    lifted_agreement,
    report_json,
)
from .coxeter_catalog import recognize_irreducible
from .dyer_graph import graph_from_json, irreducible_components, is_irreducible, parse_graph, serialize_graph
from .lift import index_factor, lift_graph, lift_subset
from .oracle import (
    brute_abelianisation_order,
    brute_centre_order,
    brute_order,
    coset_table_is_valid,
    presentation_of,
    todd_coxeter,
)

logger = logging.getLogger(__name__)

_NODE_MATCH = categorical_node_match("f", None)
_EDGE_MATCH = categorical_edge_match("m", None)


def default_bounds(max_vertices: Optional[int] = None, order_cap: Optional[int] = None) -> CorpusBounds:
    return CorpusBounds(
        max_vertices=settings.corpus_max_vertices if max_vertices is None else max_vertices,
        order_cap=settings.corpus_order_cap if order_cap is None else order_cap,
        max_cosets=settings.corpus_max_cosets,
        sample_cosets=settings.corpus_sample_cosets,
        max_subset_vertices=settings.max_subset_vertices,
    )


def _labelled(g: DyerGraph) -> nx.Graph:
    graph = nx.Graph()
    for vertex in g.vertices:
        graph.add_node(vertex.name, f=str(vertex.f))
    for edge in g.edges:
        graph.add_edge(edge.u, edge.v, m=str(edge.m))
    return graph


def _candidates(n: int, bounds: CorpusBounds) -> Iterator[DyerGraph]:
    names = [f"v{i + 1}" for i in range(n)]
    pairs = list(combinations(range(n), 2))
    for orders in combinations_with_replacement(bounds.f_values, n):
        vertices = tuple(Vertex(name=name, f=f) for name, f in zip(names, orders))
        options = [
            [None] + [m for m in bounds.m_values if dyer_condition_holds(orders[i], orders[j], m)]
            for i, j in pairs
        ]
        for labels in product(*options):
            edges = tuple(
                Edge(u=names[i], v=names[j], m=m) for (i, j), m in zip(pairs, labels) if m is not None
            )
            yield DyerGraph(vertices=vertices, edges=edges)


def generate_corpus(bounds: CorpusBounds) -> List[DyerGraph]:
    """All Dyer graphs within the bounds, one per label-preserving isomorphism class."""
    corpus: List[DyerGraph] = []
    for n in range(bounds.max_vertices + 1):
        buckets: Dict[str, List[nx.Graph]] = {}
        for g in _candidates(n, bounds):
            graph = _labelled(g)
            key = nx.weisfeiler_lehman_graph_hash(graph, node_attr="f", edge_attr="m")
            bucket = buckets.setdefault(key, [])
            if any(nx.is_isomorphic(graph, seen, node_match=_NODE_MATCH, edge_match=_EDGE_MATCH) for seen in bucket):
                continue
            bucket.append(graph)
            corpus.append(g)
        logger.debug("Generated %d graphs with up to %d vertices", len(corpus), n)
    return corpus


def with_central_z(g: DyerGraph) -> DyerGraph:
    """g with one more vertex of infinite order commuting with everything."""
    name = "z"
    while name in g.position:
        name += "_"
    vertices = g.vertices + (Vertex(name=name, f=INFINITY),)
    edges = g.edges + tuple(Edge(u=v, v=name, m=2) for v in g.names)
    return DyerGraph(vertices=vertices, edges=edges)


class _Checker:
    """Runs the checks on one graph and records failures into the summary."""

    def __init__(self, summary: CorpusSummary):
        self.summary = summary
        self.bounds = summary.bounds
        self.g: Optional[DyerGraph] = None

    def expect(self, check: str, ok: bool, detail: str = "") -> None:
        self.summary.checks += 1
        if not ok:
            failure = CorpusFailure(check=check, graph=serialize_graph(self.g), detail=detail)
            logger.warning("Check %s failed on graph:\n%s\n%s", check, failure.graph, detail)
            self.summary.failures.append(failure)

    def run(self, g: DyerGraph) -> None:
        self.g = g
        self.summary.cases += 1
        self.check_component_lifting()
        self.check_classifier_consistency()
        self.check_irreducible_lift()
        self.check_central_z()
        self.check_report()
        if dyer_is_finite(g):
            self.check_against_oracle()
        else:
            self.check_infinite_hits_cap()

    def check_component_lifting(self) -> None:
        g = self.g
        lifted = lift_graph(g).lifted
        expected = {frozenset(lift_subset(g, c)) for c in irreducible_components(g)}
        actual = {frozenset(c) for c in irreducible_components(lifted)}
        self.expect("component_lifting", expected == actual, f"{sorted(map(sorted, actual))}")

    def check_classifier_consistency(self) -> None:
        g = self.g
        cap = self.bounds.max_subset_vertices
        agreement = lifted_agreement(g, cap)
        self.expect("lift_agreement", agreement.agrees, agreement.model_dump_json())

        centre = dyer_centre(g)
        for factor in centre.factors:
            component = factor.component
            if len(component) > 1 and any(g.order_of(v) != 2 for v in component):
                self.expect("mixed_component_centre_trivial", factor.kind == "trivial", str(component))

        hyperbolic = dyer_is_hyperbolic(g, cap).value
        infinite = infinite_components(g)
        if hyperbolic and len(infinite) == 1:
            component = infinite[0]
            excluded = (len(component) == 1 and is_infinite(g.order_of(component[0]))) or (
                len(component) == 2 and all(g.order_of(v) == 2 for v in component) and g.label(*component) is None
            )
            if not excluded:
                self.expect("hyperbolic_implies_acylindrical", dyer_is_acyl_hyperbolic(g))

    def check_irreducible_lift(self) -> None:
        g = self.g
        if not g.vertices or not is_irreducible(g):
            return
        lifted = lift_graph(g).lifted
        lifted_type = recognize_irreducible(lifted)
        coxeter_affine = all(v.f == 2 for v in g.vertices) and len(g.vertices) >= 3 and isinstance(
            recognize_irreducible(g), AffineType
        )
        lifted_affine = isinstance(lifted_type, AffineType) and lifted_type.rank >= 3
        self.expect("lifted_affine_rank", coxeter_affine == lifted_affine, repr(lifted_type))

        lifted_i1 = isinstance(lifted_type, AffineType) and lifted_type.family == "I1"
        single_z = len(g.vertices) == 1 and is_infinite(g.vertices[0].f)
        dihedral = len(g.vertices) == 2 and all(v.f == 2 for v in g.vertices) and not g.edges
        self.expect("lifted_infinite_dihedral", lifted_i1 == (single_z or dihedral), repr(lifted_type))

    def check_central_z(self) -> None:
        extended = with_central_z(self.g)
        self.expect("central_z_infinite", not dyer_is_finite(extended))
        self.expect("central_z_not_acylindrical", not dyer_is_acyl_hyperbolic(extended))

    def check_report(self) -> None:
        g = self.g
        cap = self.bounds.max_subset_vertices
        first = report_json(analyze(g, cap))
        second = report_json(analyze(g, cap))
        self.expect("report_deterministic", first == second)
        self.expect("report_graph_echo", graph_from_json(json.loads(first)["graph"]) == g)
        self.expect("text_roundtrip", parse_graph(serialize_graph(g)) == g)

    def check_against_oracle(self) -> None:
        g = self.g
        order = dyer_order(g)
        if order > self.bounds.order_cap:
            return
        self.summary.oracle_cases += 1
        table = todd_coxeter(presentation_of(g), self.bounds.max_cosets)
        if not table.complete:
            self.expect("oracle_completes", False, f"cap {self.bounds.max_cosets} hit, classifier order {order}")
            return
        self.expect("table_valid", coset_table_is_valid(table))
        self.expect("order", table.size == order, f"oracle {table.size}, classifier {order}")

        centre = dyer_centre(g).total_order
        brute_centre = brute_centre_order(table)
        self.expect("centre", brute_centre == centre, f"oracle {brute_centre}, classifier {centre}")

        factors = abelianisation(g).factors
        structural = prod(factor.order for factor in factors)
        brute_abelian = brute_abelianisation_order(g, self.bounds.max_cosets)
        self.expect("abelianisation", brute_abelian == structural, f"oracle {brute_abelian}, classifier {structural}")

        lifted_order = brute_order(lift_graph(g).lifted, self.bounds.max_cosets)
        expected = table.size * index_factor(g)
        self.expect("lift_index", lifted_order == expected, f"|W(lifted)| {lifted_order}, expected {expected}")

    def check_infinite_hits_cap(self) -> None:
        table = todd_coxeter(presentation_of(self.g), self.bounds.sample_cosets)
        self.expect("infinite_never_completes", not table.complete, f"completed with {table.size} cosets")


def corpus_check(bounds: Optional[CorpusBounds] = None, progress: bool = False) -> CorpusSummary:
    bounds = bounds or default_bounds()
    corpus = generate_corpus(bounds)
    logger.info("Checking %d graphs with up to %d vertices", len(corpus), bounds.max_vertices)

    summary = CorpusSummary(bounds=bounds)
    checker = _Checker(summary)
    for g in tqdm(corpus, desc="corpus", unit="graph", disable=not progress):
        checker.run(g)

    logger.info(
        "Corpus check: %d cases, %d against the oracle, %d checks, %d failures",
        summary.cases,
        summary.oracle_cases,
        summary.checks,
        len(summary.failures),
    )
    return summary
