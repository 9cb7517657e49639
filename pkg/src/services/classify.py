"""
Decision procedures for Dyer groups: finiteness and order through the Coxeter
lift, centres, abelianisation, family, hyperbolicity and acylindrical
hyperbolicity. Everything is read off the labelled graph.
"""

import json
import logging
from itertools import combinations
from math import prod
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

from networkx.utils import UnionFind

from ..config import settings
from ..models.schemas import (
    INFINITY,
    AbelianFactor,
    AbelianisationDescription,
    AffineType,
    AnalysisReport,
    CentreDescription,
    CentreFactor,
    DyerGraph,
    Family,
    FiniteType,
    HyperbolicityResult,
    HyperbolicityWitness,
    LiftAgreement,
    is_infinite,
)
from .coxeter_catalog import (
    centre_facts,
    diagram_label,
    finite_order,
    is_finite_coxeter,
    recognize_irreducible,
)
from .dyer_graph import induced_subgraph, irreducible_components
from .errors import CapExceededError, InvariantViolation
from .lift import index_factor, lift_graph

logger = logging.getLogger(__name__)


def dyer_is_finite(g: DyerGraph) -> bool:
    """D(g) has finite index in W(lifted), so one is finite iff the other is."""
    return is_finite_coxeter(lift_graph(g).lifted)


def _finiteness(g: DyerGraph) -> Callable[[Iterable[str]], bool]:
    """Memoized finiteness of standard parabolics D_T, keyed by vertex set."""
    memo: Dict[FrozenSet[str], bool] = {}

    def is_finite(t: Iterable[str]) -> bool:
        key = frozenset(t)
        if key not in memo:
            memo[key] = dyer_is_finite(induced_subgraph(g, key))
        return memo[key]

    return is_finite


def infinite_components(g: DyerGraph) -> List[List[str]]:
    is_finite = _finiteness(g)
    return [c for c in irreducible_components(g) if not is_finite(c)]


def dyer_order(g: DyerGraph):
    if not dyer_is_finite(g):
        return INFINITY
    lifted = lift_graph(g).lifted
    lifted_order = prod(
        finite_order(recognize_irreducible(induced_subgraph(lifted, c))) for c in irreducible_components(lifted)
    )
    order, remainder = divmod(lifted_order, index_factor(g))
    if remainder:
        raise InvariantViolation(
            f"|W(lifted)| = {lifted_order} is not divisible by the index {index_factor(g)}"
        )
    return order


def _centre_factor(g: DyerGraph, component: List[str]) -> CentreFactor:
    if len(component) == 1:
        f = g.order_of(component[0])
        return CentreFactor(component=component, kind="cyclic", order=f)
    if any(g.order_of(v) != 2 for v in component):
        # irreducible, more than one vertex, not a Coxeter group
        return CentreFactor(component=component, kind="trivial", order=1)

    diagram_type = recognize_irreducible(induced_subgraph(g, component))
    if isinstance(diagram_type, FiniteType) and centre_facts(diagram_type).has_central_longest_element:
        return CentreFactor(
            component=component, kind="longest_element", order=2, diagram=diagram_label(diagram_type)
        )
    return CentreFactor(component=component, kind="trivial", order=1)


def dyer_centre(g: DyerGraph) -> CentreDescription:
    """Z(D(g)) is the product of the centres of the irreducible factors."""
    factors = [_centre_factor(g, c) for c in irreducible_components(g)]
    if any(is_infinite(factor.order) for factor in factors):
        total = INFINITY
    else:
        total = prod(factor.order for factor in factors)
    return CentreDescription(total_order=total, factors=factors)


def abelianisation(g: DyerGraph) -> AbelianisationDescription:
    """
    An odd braid relation identifies its two generators in the abelianisation;
    even ones only make them commute. One cyclic factor per resulting class.
    """
    classes = UnionFind(g.names)
    for edge in g.edges:
        if edge.m % 2 == 1:
            classes.union(edge.u, edge.v)

    factors = []
    for members in classes.to_sets():
        ordered = g.in_order(members)
        orders = {g.order_of(v) for v in ordered}
        if len(orders) != 1:
            raise InvariantViolation(f"odd-labelled class {ordered} mixes vertex orders {orders}")
        factors.append(AbelianFactor(order=orders.pop(), vertices=ordered))
    factors.sort(key=lambda factor: g.position[factor.vertices[0]])
    return AbelianisationDescription(factors=factors)


def classify_family(g: DyerGraph) -> Family:
    orders = [v.f for v in g.vertices]
    if all(f == 2 for f in orders):
        return "coxeter_group"
    if all(is_infinite(f) for f in orders):
        return "right_angled_artin_group"
    if all(e.m == 2 for e in g.edges):
        return "graph_product_of_cyclics"
    return "general_dyer"


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _ParabolicSearch:
    """
    Standard parabolics of one irreducible component, as bitmasks over its
    vertices in declaration order. Connected subsets are grown one
    non-commuting neighbour at a time from finite ones, so every finite
    connected subset and every minimal infinite one is visited exactly once.
    """

    def __init__(self, g: DyerGraph, component: List[str]):
        self.g = g
        self.vertices = component
        n = len(component)
        # bit i of noncommuting[i] is set, so overlapping masks never commute
        self.noncommuting = [1 << i for i in range(n)]
        for i, j in combinations(range(n), 2):
            if g.label(component[i], component[j]) != 2:
                self.noncommuting[i] |= 1 << j
                self.noncommuting[j] |= 1 << i
        self.involutions = sum(1 << i for i, v in enumerate(component) if g.order_of(v) == 2)
        self.finite: Dict[int, bool] = {}
        self.infinite: List[int] = []
        self._grow()

    def names(self, mask: int) -> List[str]:
        return [self.vertices[i] for i in _bits(mask)]

    def reach(self, mask: int) -> int:
        reach = 0
        for i in _bits(mask):
            reach |= self.noncommuting[i]
        return reach

    def order_key(self, mask: int) -> Tuple[int, Tuple[int, ...]]:
        """Size first, then lexicographic on vertex positions."""
        return mask.bit_count(), tuple(_bits(mask))

    def _connected_is_finite(self, mask: int) -> bool:
        if mask & (mask - 1) == 0:
            return not is_infinite(self.g.order_of(self.vertices[mask.bit_length() - 1]))
        if mask & ~self.involutions:
            # a vertex of order >= 3 commutes or generates a free product
            return False
        if any(self.finite.get(mask & ~(1 << i)) is False for i in _bits(mask)):
            return False
        edges = sum((self.noncommuting[i] & mask).bit_count() - 1 for i in _bits(mask)) // 2
        if edges >= mask.bit_count():
            return False  # finite irreducible diagrams are trees
        return isinstance(recognize_irreducible(induced_subgraph(self.g, self.names(mask))), FiniteType)

    def _grow(self) -> None:
        frontier = [1 << i for i in range(len(self.vertices))]
        seen = set(frontier)
        while frontier:
            grown: List[int] = []
            for mask in frontier:
                finite = self.finite[mask] = self._connected_is_finite(mask)
                if not finite:
                    self.infinite.append(mask)
                    continue
                for i in _bits(self.reach(mask) & ~mask):
                    bigger = mask | (1 << i)
                    if bigger not in seen:
                        seen.add(bigger)
                        grown.append(bigger)
            frontier = grown

    def affine_witness(self) -> Optional[HyperbolicityWitness]:
        """A subset of order-2 vertices spanning an irreducible affine diagram of rank >= 3."""
        candidates = [m for m in self.infinite if not m & ~self.involutions and m.bit_count() >= 3]
        for mask in sorted(candidates, key=self.order_key):
            diagram_type = recognize_irreducible(induced_subgraph(self.g, self.names(mask)))
            if isinstance(diagram_type, AffineType):
                return HyperbolicityWitness(
                    kind="affine_subdiagram", vertices=self.names(mask), diagram=diagram_label(diagram_type)
                )
        return None

    def product_witness(self) -> Optional[HyperbolicityWitness]:
        """Two commuting infinite connected subsets; the smallest union wins."""
        infinite = sorted(self.infinite, key=self.order_key)
        reach = {mask: self.reach(mask) for mask in infinite}
        best = None
        for x, first in enumerate(infinite):
            for second in infinite[x + 1 :]:
                if best is not None and first.bit_count() + second.bit_count() > best[0][0]:
                    break
                if second & reach[first]:
                    continue
                key = self.order_key(first | second)
                if best is None or key < best[0]:
                    best = (key, first, second)
        if best is None:
            return None
        _, first, second = best
        factors = sorted([first, second], key=lambda mask: mask & -mask)
        return HyperbolicityWitness(
            kind="infinite_product",
            vertices=self.names(first | second),
            factors=[self.names(mask) for mask in factors],
        )


def dyer_is_hyperbolic(g: DyerGraph, max_subset_vertices: Optional[int] = None) -> HyperbolicityResult:
    cap = settings.max_subset_vertices if max_subset_vertices is None else max_subset_vertices
    is_finite = _finiteness(g)
    infinite = [c for c in irreducible_components(g) if not is_finite(c)]

    if len(infinite) >= 2:
        first, second = infinite[:2]
        witness = HyperbolicityWitness(
            kind="infinite_product", vertices=g.in_order(first + second), factors=[first, second]
        )
        return HyperbolicityResult(value=False, witness=witness)
    if not infinite:
        return HyperbolicityResult(value=True)

    component = infinite[0]
    if len(component) > cap:
        raise CapExceededError(
            f"infinite component has {len(component)} vertices; exhaustive certification "
            f"is limited to {cap}",
            cap,
        )
    search = _ParabolicSearch(g, component)
    logger.debug(
        "Searched %d connected parabolics of a %d-vertex component, %d infinite",
        len(search.finite),
        len(component),
        len(search.infinite),
    )
    witness = search.affine_witness() or search.product_witness()
    return HyperbolicityResult(value=witness is None, witness=witness)


def dyer_is_acyl_hyperbolic(g: DyerGraph) -> bool:
    infinite = infinite_components(g)
    if len(infinite) != 1:
        return False
    component = infinite[0]
    if len(component) == 1 and is_infinite(g.order_of(component[0])):
        return False  # Z
    if all(g.order_of(v) == 2 for v in component):
        if isinstance(recognize_irreducible(induced_subgraph(g, component)), AffineType):
            return False
    return True


def lifted_agreement(g: DyerGraph, max_subset_vertices: Optional[int] = None) -> LiftAgreement:
    """Evaluate both criteria on D(g) and on its Coxeter lift W(lifted)."""
    cap = settings.max_subset_vertices if max_subset_vertices is None else max_subset_vertices
    lifted = lift_graph(g).lifted
    return LiftAgreement(
        hyperbolic=dyer_is_hyperbolic(g, cap).value,
        lifted_hyperbolic=dyer_is_hyperbolic(lifted, 2 * cap).value,
        acylindrically_hyperbolic=dyer_is_acyl_hyperbolic(g),
        lifted_acylindrically_hyperbolic=dyer_is_acyl_hyperbolic(lifted),
    )


def analyze(g: DyerGraph, max_subset_vertices: Optional[int] = None) -> AnalysisReport:
    finite = dyer_is_finite(g)
    report = AnalysisReport(
        graph=g,
        family=classify_family(g),
        components=irreducible_components(g),
        finite=finite,
        order=dyer_order(g),
        centre=dyer_centre(g),
        abelianisation=abelianisation(g),
        hyperbolic=dyer_is_hyperbolic(g, max_subset_vertices),
        acylindrically_hyperbolic=dyer_is_acyl_hyperbolic(g),
    )
    logger.info("Analyzed graph with %d vertices: finite=%s order=%s", len(g.vertices), finite, report.order)
    return report


def report_json(report: AnalysisReport) -> str:
    return json.dumps(report.model_dump(mode="json", exclude_none=True), indent=2)
