from itertools import combinations
from typing import Dict, Tuple

from src.models.schemas import DyerGraph
from src.services.dyer_graph import parse_graph

A2 = """
vertex a 2
vertex b 2
edge a b 3
"""

AFFINE_A2 = """
vertex a 2
vertex b 2
vertex c 2
edge a b 3
edge b c 3
edge a c 3
"""

FREE_GROUP = """
vertex a inf
vertex b inf
"""

FREE_ABELIAN = """
vertex a inf
vertex b inf
edge a b 2
"""

INFINITE_DIHEDRAL = """
vertex a 2
vertex b 2
"""

AFFINE_C2 = """
vertex a 2
vertex b 2
vertex c 2
edge a b 4
edge b c 4
edge a c 2
"""


def coxeter(n: int, labels: Dict[Tuple[int, int], object] = None) -> DyerGraph:
    """
    Coxeter graph on s1..sn. labels maps (i, j) (1-based) to m, or to "inf" for
    no relation; every other pair commutes.
    """
    labels = labels or {}
    lines = [f"vertex s{i} 2" for i in range(1, n + 1)]
    for i, j in combinations(range(1, n + 1), 2):
        m = labels.get((i, j), labels.get((j, i), 2))
        if m != "inf":
            lines.append(f"edge s{i} s{j} {m}")
    return parse_graph("\n".join(lines))


def path(*ms) -> DyerGraph:
    """Linear Coxeter diagram with the given consecutive labels."""
    return coxeter(len(ms) + 1, {(i + 1, i + 2): m for i, m in enumerate(ms)})


def dihedral(m) -> DyerGraph:
    return coxeter(2, {(1, 2): m})


def star(*arms) -> DyerGraph:
    """Star-shaped diagram, all labels 3: centre s1 and arms of the given lengths."""
    labels = {}
    nxt = 2
    for length in arms:
        prev = 1
        for _ in range(length):
            labels[(prev, nxt)] = 3
            prev, nxt = nxt, nxt + 1
    return coxeter(nxt - 1, labels)
