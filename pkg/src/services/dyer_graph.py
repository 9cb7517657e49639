"""
Dyer graph data model services: the line format, vertex partition, standard
parabolic (induced) subgraphs and the irreducible decomposition.
"""

import logging
import re
from functools import lru_cache
from typing import Any, Iterable, List, Set

import networkx as nx
from pydantic import ValidationError

from ..models.schemas import (
    INFINITY,
    NAME_PATTERN,
    DyerGraph,
    Edge,
    Vertex,
    VertexPartition,
    dyer_condition_holds,
    is_infinite,
)
from .errors import GraphSyntaxError, GraphValidationError, UnknownVertexError

logger = logging.getLogger(__name__)

_NAME = re.compile(NAME_PATTERN)
_INTEGER = re.compile(r"^[0-9]+$")
_TOKEN = re.compile(r"\S+")
INFINITY_TOKEN = "inf"


def _order_token(token: str, line: int, column: int):
    if token == INFINITY_TOKEN:
        return INFINITY
    if not _INTEGER.match(token):
        raise GraphSyntaxError(f"expected an integer or 'inf', got '{token}'", line, column)
    value = int(token)
    if value < 2:
        raise GraphValidationError(f"vertex order {value} out of range (must be >= 2 or inf)", line)
    return value


def _label_token(token: str, line: int, column: int) -> int:
    if not _INTEGER.match(token):
        raise GraphSyntaxError(f"expected an integer edge label, got '{token}'", line, column)
    value = int(token)
    if value < 2:
        raise GraphValidationError(f"edge label {value} out of range (must be >= 2)", line)
    return value


def _name_token(token: str, line: int, column: int) -> str:
    if not _NAME.match(token):
        raise GraphSyntaxError(f"invalid vertex name '{token}'", line, column)
    return token


def parse_graph(text: str) -> DyerGraph:
    """
    Parse the line format:
        vertex <name> <f>        f an integer >= 2 or 'inf'
        edge <name> <name> <m>   m an integer >= 2
    '#' starts a comment. Vertices must be declared before edges use them.
    """
    vertices: List[Vertex] = []
    orders = {}
    edges: List[Edge] = []
    seen_pairs: Set[frozenset] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        tokens = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(content)]
        if not tokens:
            continue

        keyword, column = tokens[0]
        if keyword == "vertex":
            if len(tokens) != 3:
                raise GraphSyntaxError("expected 'vertex <name> <f>'", lineno, column)
            name = _name_token(tokens[1][0], lineno, tokens[1][1])
            f = _order_token(tokens[2][0], lineno, tokens[2][1])
            if name in orders:
                raise GraphValidationError(f"duplicate vertex '{name}'", lineno)
            orders[name] = f
            vertices.append(Vertex(name=name, f=f))

        elif keyword == "edge":
            if len(tokens) != 4:
                raise GraphSyntaxError("expected 'edge <name> <name> <m>'", lineno, column)
            u = _name_token(tokens[1][0], lineno, tokens[1][1])
            v = _name_token(tokens[2][0], lineno, tokens[2][1])
            m = _label_token(tokens[3][0], lineno, tokens[3][1])
            for end in (u, v):
                if end not in orders:
                    raise GraphValidationError(f"edge references unknown vertex '{end}'", lineno)
            if u == v:
                raise GraphValidationError(f"self-loop at '{u}'", lineno)
            pair = frozenset((u, v))
            if pair in seen_pairs:
                raise GraphValidationError(f"repeated edge {u} {v}", lineno)
            if not dyer_condition_holds(orders[u], orders[v], m):
                raise GraphValidationError(
                    f"Dyer condition violated: edge {u} {v} has m={m} but an endpoint has order >= 3",
                    lineno,
                )
            seen_pairs.add(pair)
            edges.append(Edge(u=u, v=v, m=m))

        else:
            raise GraphSyntaxError(f"unknown declaration '{keyword}'", lineno, column)

    graph = DyerGraph(vertices=tuple(vertices), edges=tuple(edges))
    logger.debug("Parsed graph with %d vertices and %d edges", len(graph.vertices), len(graph.edges))
    return graph


def serialize_graph(g: DyerGraph) -> str:
    """Canonical text: vertices, then edges, both in declaration order."""
    lines = []
    for vertex in g.vertices:
        f = INFINITY_TOKEN if is_infinite(vertex.f) else str(vertex.f)
        lines.append(f"vertex {vertex.name} {f}")
    for edge in g.edges:
        lines.append(f"edge {edge.u} {edge.v} {edge.m}")
    return "\n".join(lines)


def graph_from_json(data: Any) -> DyerGraph:
    """Build a graph from its JSON object form, the shape echoed in reports."""
    try:
        return DyerGraph.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise GraphValidationError(first["msg"]) from e


def partition_vertices(g: DyerGraph) -> VertexPartition:
    v2, vp, vinf = [], [], []
    for vertex in g.vertices:
        if vertex.f == 2:
            v2.append(vertex.name)
        elif is_infinite(vertex.f):
            vinf.append(vertex.name)
        else:
            vp.append(vertex.name)
    return VertexPartition(v2=v2, vp=vp, vinf=vinf)


def known_subset(g: DyerGraph, t: Iterable[str]) -> Set[str]:
    subset = set(t)
    for name in subset:
        if name not in g.position:
            raise UnknownVertexError(name)
    return subset


def induced_subgraph(g: DyerGraph, t: Iterable[str]) -> DyerGraph:
    """Graph of the standard parabolic subgroup D_T."""
    subset = known_subset(g, t)
    if len(subset) == len(g.vertices):
        return g
    vertices = tuple(v for v in g.vertices if v.name in subset)
    edges = tuple(e for e in g.edges if e.u in subset and e.v in subset)
    # Restrictions of a valid canonical graph stay valid and canonical
    return DyerGraph.model_construct(vertices=vertices, edges=edges)


@lru_cache(maxsize=512)
def noncommutation_graph(g: DyerGraph) -> nx.Graph:
    """u ~ v unless u, v are joined by an edge labelled 2. Treat as read-only."""
    graph = nx.Graph()
    graph.add_nodes_from(g.names)
    names = g.names
    for i, u in enumerate(names):
        for v in names[i + 1:]:
            if g.label(u, v) != 2:
                graph.add_edge(u, v)
    return graph


def components_within(g: DyerGraph, t: Iterable[str]) -> List[List[str]]:
    """Irreducible components of the subgraph induced on t, without building it."""
    subset = known_subset(g, t)
    view = noncommutation_graph(g).subgraph(subset)
    components = [g.in_order(c) for c in nx.connected_components(view)]
    components.sort(key=lambda c: g.position[c[0]])
    return components


def irreducible_components(g: DyerGraph) -> List[List[str]]:
    """
    Partition of V(g) whose induced subgraphs are the irreducible factors
    D(g) = D(g_1) x ... x D(g_n). Ordered by first vertex in declaration order.
    """
    return components_within(g, g.names)


def is_irreducible(g: DyerGraph) -> bool:
    return len(irreducible_components(g)) == 1
