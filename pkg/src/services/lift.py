"""
The Coxeter lift of a Dyer graph: every vertex of order p >= 3 or infinity gets
a primed twin v'. W(lifted) contains D(g) with index 2^k, k = |Vp u Vinf|.
"""

import logging
from typing import Iterable, List

from ..models.schemas import PRIME_MARKER, DyerGraph, Edge, LiftResult, Vertex, is_infinite
from .dyer_graph import known_subset

logger = logging.getLogger(__name__)


def primed(name: str) -> str:
    # The marker is outside the input name alphabet, so twins never collide
    return name + PRIME_MARKER


def _lifted_vertices(g: DyerGraph) -> List[str]:
    return [v.name for v in g.vertices if v.f != 2]


def lift_graph(g: DyerGraph) -> LiftResult:
    twins = _lifted_vertices(g)
    prime_of = {name: primed(name) for name in twins}

    vertices = [Vertex(name=v.name, f=2) for v in g.vertices]
    vertices += [Vertex(name=prime_of[name], f=2) for name in twins]

    edges = list(g.edges)
    for name in twins:
        twin = prime_of[name]
        order = g.order_of(name)
        if not is_infinite(order):
            edges.append(Edge(u=name, v=twin, m=order))
        # the twin commutes with everything except its own vertex
        for other in vertices:
            if other.name not in (name, twin):
                edges.append(Edge(u=twin, v=other.name, m=2))

    # twin-twin pairs were added from both sides
    unique = {frozenset((e.u, e.v)): e for e in edges}
    lifted = DyerGraph(vertices=tuple(vertices), edges=tuple(unique.values()))
    logger.debug("Lifted %d vertices to %d (k=%d)", len(g.vertices), len(lifted.vertices), len(twins))
    return LiftResult(lifted=lifted, prime_of=prime_of, k=len(twins))


def lift_subset(g: DyerGraph, t: Iterable[str]) -> List[str]:
    """T-hat = T together with the twins of its vertices of order != 2."""
    subset = known_subset(g, t)
    ordered = g.in_order(subset)
    return ordered + [primed(name) for name in ordered if g.order_of(name) != 2]


def index_factor(g: DyerGraph) -> int:
    """[W(lifted) : D(g)] = 2^|Vp u Vinf|."""
    return 2 ** len(_lifted_vertices(g))
