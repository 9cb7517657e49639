"""
Recognition of irreducible Coxeter diagrams against the finite and affine
classification, and finite-type metadata.

A Coxeter diagram here is a DyerGraph with f = 2 everywhere, read through the
diagram convention: a Dyer edge with m = 2 is no diagram edge, a Dyer edge with
m >= 3 is a diagram edge labelled m, and a non-adjacent pair is a diagram edge
labelled infinity.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Iterator, List, Optional, Tuple, Union

import networkx as nx
from networkx.algorithms.isomorphism import categorical_edge_match

from ..models.schemas import (
    INFINITY,
    AffineType,
    DyerGraph,
    FiniteType,
    FiniteTypeFacts,
    OtherInfinite,
)
from .dyer_graph import induced_subgraph, irreducible_components
from .errors import NotCoxeterError, NotFiniteTypeError, NotIrreducibleError

logger = logging.getLogger(__name__)

DiagramTypeValue = Union[FiniteType, AffineType, OtherInfinite]
EdgeList = List[Tuple[int, int, Union[int, str]]]

_EXCEPTIONAL_ORDERS = {
    "E6": 51840,
    "E7": 2903040,
    "E8": 696729600,
    "F4": 1152,
    "H3": 120,
    "H4": 14400,
}


@dataclass(frozen=True)
class Template:
    diagram_type: DiagramTypeValue
    rank: int
    edges: Tuple[Tuple[int, int, Union[int, str]], ...]

    def graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.rank))
        for u, v, label in self.edges:
            graph.add_edge(u, v, label=label)
        return graph


def _path(n: int, labels: Optional[List[int]] = None) -> EdgeList:
    labels = labels or [3] * (n - 1)
    return [(i, i + 1, labels[i]) for i in range(n - 1)]


def _star(arms: List[int]) -> EdgeList:
    """Vertex 0 with arms of the given lengths, all edges labelled 3."""
    edges: EdgeList = []
    nxt = 1
    for length in arms:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt, 3))
            prev = nxt
            nxt += 1
    return edges


def _finite_templates(rank: int) -> Iterator[Template]:
    n = rank
    yield Template(FiniteType(family="A", rank=n), n, tuple(_path(n)))
    if n == 2:
        # B2 covers m = 4; every other dihedral label is I2(m), G2 included as I2(6)
        yield Template(FiniteType(family="B", rank=2), 2, ((0, 1, 4),))
    if n >= 3:
        yield Template(FiniteType(family="B", rank=n), n, tuple(_path(n, [4] + [3] * (n - 2))))
    if n >= 4:
        # path 0..n-2 with the extra vertex n-1 forking off vertex n-3
        yield Template(FiniteType(family="D", rank=n), n, tuple(_path(n - 1) + [(n - 3, n - 1, 3)]))
    if n in (6, 7, 8):
        yield Template(FiniteType(family=f"E{n}", rank=n), n, tuple(_star([1, 2, n - 4])))
    if n == 4:
        yield Template(FiniteType(family="F4", rank=4), 4, tuple(_path(4, [3, 4, 3])))
        yield Template(FiniteType(family="H4", rank=4), 4, tuple(_path(4, [5, 3, 3])))
    if n == 3:
        yield Template(FiniteType(family="H3", rank=3), 3, tuple(_path(3, [5, 3])))


def _affine_templates(rank: int) -> Iterator[Template]:
    """Tilde-X_n families have n + 1 vertices; rank here counts vertices."""
    n = rank - 1
    if rank == 2:
        yield Template(AffineType(family="I1", rank=2), 2, ((0, 1, INFINITY),))
    if n >= 2:
        yield Template(AffineType(family="A", rank=rank), rank, tuple(_path(rank) + [(rank - 1, 0, 3)]))
        yield Template(
            AffineType(family="C", rank=rank), rank, tuple(_path(rank, [4] + [3] * (rank - 3) + [4]))
        )
    if n >= 3:
        # D-type fork at one end, label 4 at the other
        edges = _path(rank - 1, [3] * (rank - 3) + [4]) + [(1, rank - 1, 3)]
        yield Template(AffineType(family="B", rank=rank), rank, tuple(edges))
    if n >= 4:
        # forks at both ends of the path 1..rank-2
        edges = _path(rank - 2) + [(1, rank - 2, 3), (rank - 4, rank - 1, 3)]
        yield Template(AffineType(family="D", rank=rank), rank, tuple(edges))
    if rank == 3:
        yield Template(AffineType(family="G2", rank=3), 3, tuple(_path(3, [3, 6])))
    if rank == 5:
        yield Template(AffineType(family="F4", rank=5), 5, tuple(_path(5, [3, 3, 4, 3])))
    if rank == 7:
        yield Template(AffineType(family="E6", rank=7), 7, tuple(_star([2, 2, 2])))
    if rank == 8:
        yield Template(AffineType(family="E7", rank=8), 8, tuple(_star([1, 3, 3])))
    if rank == 9:
        yield Template(AffineType(family="E8", rank=9), 9, tuple(_star([1, 2, 5])))


def _signature(graph: nx.Graph) -> Tuple:
    """Cheap isomorphism invariant used to shortlist templates."""
    labels = sorted(str(label) for _, _, label in graph.edges(data="label"))
    degrees = sorted(d for _, d in graph.degree())
    branches = sum(1 for d in degrees if d >= 3)
    has_cycle = graph.number_of_edges() >= graph.number_of_nodes() and graph.number_of_nodes() > 0
    return graph.number_of_nodes(), tuple(labels), tuple(degrees), branches, has_cycle


@lru_cache(maxsize=None)
def catalog(rank: int) -> Tuple[Tuple[Tuple, Template, nx.Graph], ...]:
    """Finite then affine templates of a given rank, with their signatures."""
    entries = []
    for template in list(_finite_templates(rank)) + list(_affine_templates(rank)):
        graph = template.graph()
        entries.append((_signature(graph), template, graph))
    return tuple(entries)


def diagram_graph(d: DyerGraph) -> nx.Graph:
    """Coxeter diagram view: vertices of d, edges labelled m >= 3 or infinity."""
    graph = nx.Graph()
    graph.add_nodes_from(d.names)
    names = d.names
    for i, u in enumerate(names):
        for v in names[i + 1:]:
            label = d.label(u, v)
            if label is None:
                graph.add_edge(u, v, label=INFINITY)
            elif label != 2:
                graph.add_edge(u, v, label=label)
    return graph


def _require_coxeter(d: DyerGraph) -> None:
    for vertex in d.vertices:
        if vertex.f != 2:
            raise NotCoxeterError(f"not a Coxeter diagram: vertex '{vertex.name}' has order {vertex.f}")


@lru_cache(maxsize=8192)
def recognize_irreducible(d: DyerGraph) -> DiagramTypeValue:
    _require_coxeter(d)
    if len(irreducible_components(d)) != 1:
        raise NotIrreducibleError("diagram recognition needs an irreducible diagram")

    graph = diagram_graph(d)
    rank = graph.number_of_nodes()
    if rank == 2:
        (label,) = [lbl for _, _, lbl in graph.edges(data="label")]
        if label not in (3, 4, INFINITY):
            return FiniteType(family="I2", rank=2, m=label)

    signature = _signature(graph)
    match = categorical_edge_match("label", None)
    for template_signature, template, template_graph in catalog(rank):
        if template_signature != signature:
            continue
        if nx.is_isomorphic(graph, template_graph, edge_match=match):
            return template.diagram_type
    return OtherInfinite()


def _component_types(d: DyerGraph) -> List[DiagramTypeValue]:
    _require_coxeter(d)
    types = []
    for component in irreducible_components(d):
        types.append(recognize_irreducible(induced_subgraph(d, component)))
    return types


def is_finite_coxeter(d: DyerGraph) -> bool:
    return all(isinstance(t, FiniteType) for t in _component_types(d))


def is_affine_coxeter(d: DyerGraph) -> bool:
    types = _component_types(d)
    return all(isinstance(t, (FiniteType, AffineType)) for t in types) and any(
        isinstance(t, AffineType) for t in types
    )


def finite_order(t: DiagramTypeValue) -> int:
    if not isinstance(t, FiniteType):
        raise NotFiniteTypeError(f"{diagram_label(t)} is not a finite type")
    n = t.rank
    if t.family == "A":
        return factorial(n + 1)
    if t.family == "B":
        return 2**n * factorial(n)
    if t.family == "D":
        return 2 ** (n - 1) * factorial(n)
    if t.family == "I2":
        return 2 * t.m
    return _EXCEPTIONAL_ORDERS[t.family]


def centre_facts(t: DiagramTypeValue) -> FiniteTypeFacts:
    order = finite_order(t)
    if t.family == "A":
        central = t.rank == 1
    elif t.family == "D":
        central = t.rank % 2 == 0
    elif t.family == "I2":
        central = t.m % 2 == 0
    else:
        central = t.family != "E6"
    return FiniteTypeFacts(order=order, has_central_longest_element=central)


def diagram_label(t: DiagramTypeValue) -> str:
    """Short stable name: "B3", "I2(5)", "~A2", "~I1", "other"."""
    if isinstance(t, FiniteType):
        if t.family == "I2":
            return f"I2({t.m})"
        if t.family in ("A", "B", "D"):
            return f"{t.family}{t.rank}"
        return t.family
    if isinstance(t, AffineType):
        if t.family in ("A", "B", "C", "D"):
            return f"~{t.family}{t.rank - 1}"
        return f"~{t.family}"
    return "other"
