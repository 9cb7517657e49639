from functools import cached_property
from typing import Annotated, Any, Dict, FrozenSet, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, model_validator

INFINITY = "infinity"
PRIME_MARKER = "'"
NAME_PATTERN = r"^[A-Za-z0-9_]+$"
# Lifted graphs may carry one trailing prime marker, never accepted from text input
VERTEX_NAME_PATTERN = r"^[A-Za-z0-9_]+'?$"


def _coerce_order(value: Any) -> Any:
    if isinstance(value, str) and value.strip().lower() in ("inf", INFINITY):
        return INFINITY
    return value


# Vertex order f(v) or a derived group order: a finite integer or "infinity"
Order = Annotated[Union[int, Literal["infinity"]], BeforeValidator(_coerce_order)]


def is_infinite(order: Any) -> bool:
    return order == INFINITY


def forces_commuting_edges(order: Any) -> bool:
    """f(v) >= 3 (infinity included) forces every edge at v to carry m = 2."""
    return is_infinite(order) or order >= 3


def dyer_condition_holds(f_u: Any, f_v: Any, m: int) -> bool:
    if m == 2:
        return True
    return not (forces_commuting_edges(f_u) or forces_commuting_edges(f_v))


# Graph Models
class Vertex(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str = Field(pattern=VERTEX_NAME_PATTERN)
    f: Order


class Edge(BaseModel):
    model_config = ConfigDict(frozen=True)

    u: str
    v: str
    m: int = Field(ge=2)


class DyerGraph(BaseModel):
    """
    Finite simplicial graph with vertex orders f and edge labels m.
    Absent edges mean "no relation"; edges are stored canonically, endpoints and
    edge list both in vertex declaration order.
    """

    model_config = ConfigDict(frozen=True)

    vertices: Tuple[Vertex, ...] = ()
    edges: Tuple[Edge, ...] = ()

    @model_validator(mode="before")
    @classmethod
    def _canonical_edges(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        vertices = list(data.get("vertices") or ())
        raw_edges = list(data.get("edges") or ())
        if not all(isinstance(e, (Edge, dict)) for e in raw_edges):
            return data
        names = [v.name if isinstance(v, Vertex) else v.get("name") if isinstance(v, dict) else None for v in vertices]
        position = {name: i for i, name in enumerate(names) if isinstance(name, str)}
        last = len(position)

        edges = []
        for edge in raw_edges:
            raw = edge.model_dump() if isinstance(edge, Edge) else dict(edge)
            u, v = raw.get("u"), raw.get("v")
            if u in position and v in position and position[v] < position[u]:
                raw["u"], raw["v"] = v, u
            edges.append(raw)
        edges.sort(key=lambda e: (position.get(e.get("u"), last), position.get(e.get("v"), last)))
        return {**data, "vertices": vertices, "edges": edges}

    @model_validator(mode="after")
    def _check_invariants(self) -> "DyerGraph":
        seen = set()
        for vertex in self.vertices:
            if vertex.name in seen:
                raise ValueError(f"duplicate vertex '{vertex.name}'")
            seen.add(vertex.name)
            if not is_infinite(vertex.f) and vertex.f < 2:
                raise ValueError(f"vertex '{vertex.name}' has order {vertex.f} < 2")
        pairs = set()
        for edge in self.edges:
            for end in (edge.u, edge.v):
                if end not in seen:
                    raise ValueError(f"edge references unknown vertex '{end}'")
            if edge.u == edge.v:
                raise ValueError(f"self-loop at '{edge.u}'")
            key = frozenset((edge.u, edge.v))
            if key in pairs:
                raise ValueError(f"repeated edge {edge.u} {edge.v}")
            pairs.add(key)
            if not dyer_condition_holds(self.order_of(edge.u), self.order_of(edge.v), edge.m):
                raise ValueError(
                    f"Dyer condition violated on edge {edge.u} {edge.v}: m={edge.m} "
                    f"but an endpoint has order >= 3"
                )
        return self

    @cached_property
    def names(self) -> Tuple[str, ...]:
        return tuple(v.name for v in self.vertices)

    @cached_property
    def f(self) -> Dict[str, Any]:
        return {v.name: v.f for v in self.vertices}

    @cached_property
    def m(self) -> Dict[FrozenSet[str], int]:
        return {frozenset((e.u, e.v)): e.m for e in self.edges}

    @cached_property
    def position(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def order_of(self, name: str) -> Any:
        return self.f[name]

    def label(self, u: str, v: str) -> Optional[int]:
        """Edge label m(u, v), or None when u and v are not adjacent."""
        return self.m.get(frozenset((u, v)))

    def in_order(self, names) -> List[str]:
        return sorted(names, key=self.position.__getitem__)


class VertexPartition(BaseModel):
    v2: List[str]
    vp: List[str]
    vinf: List[str]


class LiftResult(BaseModel):
    lifted: DyerGraph
    prime_of: Dict[str, str]
    k: int


# Coxeter Diagram Models
FiniteFamily = Literal["A", "B", "D", "E6", "E7", "E8", "F4", "H3", "H4", "I2"]
AffineFamily = Literal["A", "B", "C", "D", "E6", "E7", "E8", "F4", "G2", "I1"]


class FiniteType(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["finite"] = "finite"
    family: FiniteFamily
    rank: int = Field(ge=1)
    m: Optional[int] = None  # dihedral parameter, I2 only


class AffineType(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["affine"] = "affine"
    family: AffineFamily
    rank: int = Field(ge=2)  # number of diagram vertices, n + 1 for the tilde-X_n families


class OtherInfinite(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["other"] = "other"


DiagramType = Annotated[Union[FiniteType, AffineType, OtherInfinite], Field(discriminator="kind")]


class FiniteTypeFacts(BaseModel):
    order: int = Field(ge=1)
    has_central_longest_element: bool


# Classification Models
Family = Literal["coxeter_group", "right_angled_artin_group", "graph_product_of_cyclics", "general_dyer"]
CentreKind = Literal["trivial", "cyclic", "longest_element"]


class CentreFactor(BaseModel):
    component: List[str]
    kind: CentreKind
    order: Order
    diagram: Optional[str] = None  # finite type label when the factor is <w0>


class CentreDescription(BaseModel):
    total_order: Order
    factors: List[CentreFactor]


class AbelianFactor(BaseModel):
    order: Order
    vertices: List[str]


class AbelianisationDescription(BaseModel):
    factors: List[AbelianFactor]


class HyperbolicityWitness(BaseModel):
    kind: Literal["affine_subdiagram", "infinite_product"]
    vertices: List[str]
    factors: Optional[List[List[str]]] = None
    diagram: Optional[str] = None


class HyperbolicityResult(BaseModel):
    value: bool
    witness: Optional[HyperbolicityWitness] = None


class AnalysisReport(BaseModel):
    """Aggregate answer record; its JSON dump is the CLI/API report document."""

    schema_version: int = 1
    graph: DyerGraph
    family: Family
    components: List[List[str]]
    finite: bool
    order: Order
    centre: CentreDescription
    abelianisation: AbelianisationDescription
    hyperbolic: HyperbolicityResult
    acylindrically_hyperbolic: bool


class LiftAgreement(BaseModel):
    hyperbolic: bool
    lifted_hyperbolic: bool
    acylindrically_hyperbolic: bool
    lifted_acylindrically_hyperbolic: bool

    @property
    def agrees(self) -> bool:
        return (
            self.hyperbolic == self.lifted_hyperbolic
            and self.acylindrically_hyperbolic == self.lifted_acylindrically_hyperbolic
        )


# Request Models
class GraphTextRequest(BaseModel):
    text: str
    max_subset_vertices: Optional[int] = Field(None, ge=0)


class OracleRequest(BaseModel):
    text: str
    max_cosets: Optional[int] = Field(None, ge=1)


# Response Models
class LiftResponse(BaseModel):
    text: str
    k: int
    index: int
    prime_of: Dict[str, str]


class DecomposeResponse(BaseModel):
    components: List[List[str]]
    partition: VertexPartition


class OracleResponse(BaseModel):
    status: Literal["complete", "cap_exceeded"]
    value: Optional[Order] = None
    max_cosets: int


# Corpus Models
class CorpusBounds(BaseModel):
    max_vertices: int = Field(ge=0)
    f_values: Tuple[Order, ...] = (2, 3, 4, 5, INFINITY)
    m_values: Tuple[int, ...] = (2, 3, 4)
    order_cap: int = Field(5000, ge=1)
    max_cosets: int = Field(200_000, ge=1)
    sample_cosets: int = Field(2000, ge=1)
    max_subset_vertices: int = Field(20, ge=0)


class CorpusFailure(BaseModel):
    check: str
    graph: str  # serialized counterexample
    detail: str = ""


class CorpusSummary(BaseModel):
    bounds: CorpusBounds
    cases: int = 0
    oracle_cases: int = 0
    checks: int = 0
    failures: List[CorpusFailure] = []

    @property
    def passed(self) -> bool:
        return not self.failures
