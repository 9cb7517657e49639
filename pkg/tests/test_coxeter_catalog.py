import random

import pytest

from helpers import AFFINE_A2, coxeter, dihedral, path, star
from src.models.schemas import AffineType, DyerGraph, Edge, FiniteType, OtherInfinite, Vertex
from src.services.coxeter_catalog import (
    centre_facts,
    diagram_label,
    finite_order,
    is_affine_coxeter,
    is_finite_coxeter,
    recognize_irreducible,
)
from src.services.dyer_graph import parse_graph
from src.services.errors import NotCoxeterError, NotFiniteTypeError, NotIrreducibleError


FINITE_CASES = [
    (coxeter(1), "A1"),
    (path(3), "A2"),
    (path(3, 3), "A3"),
    (path(3, 3, 3, 3), "A5"),
    (path(*[3] * 9), "A10"),
    (path(4), "B2"),
    (path(4, 3), "B3"),
    (path(3, 4), "B3"),
    (path(4, 3, 3), "B4"),
    (star(1, 1, 1), "D4"),
    (star(1, 1, 2), "D5"),
    (star(1, 2, 2), "E6"),
    (star(1, 2, 3), "E7"),
    (star(1, 2, 4), "E8"),
    (path(3, 4, 3), "F4"),
    (path(5, 3), "H3"),
    (path(3, 3, 5), "H4"),
    (dihedral(5), "I2(5)"),
    (dihedral(6), "I2(6)"),
    (dihedral(12), "I2(12)"),
]

AFFINE_CASES = [
    (dihedral("inf"), "~I1"),
    (parse_graph(AFFINE_A2), "~A2"),
    (coxeter(4, {(1, 2): 3, (2, 3): 3, (3, 4): 3, (1, 4): 3}), "~A3"),
    (path(4, 4), "~C2"),
    (path(4, 3, 4), "~C3"),
    (coxeter(4, {(1, 2): 3, (1, 3): 3, (1, 4): 4}), "~B3"),
    (star(1, 1, 1, 1), "~D4"),
    (path(3, 6), "~G2"),
    (path(3, 3, 4, 3), "~F4"),
    (star(2, 2, 2), "~E6"),
    (star(1, 3, 3), "~E7"),
    (star(1, 2, 5), "~E8"),
]


@pytest.mark.parametrize("diagram, label", FINITE_CASES, ids=[c[1] for c in FINITE_CASES])
def test_recognizes_finite_types(diagram, label):
    t = recognize_irreducible(diagram)
    assert isinstance(t, FiniteType)
    assert diagram_label(t) == label


@pytest.mark.parametrize("diagram, label", AFFINE_CASES, ids=[c[1] for c in AFFINE_CASES])
def test_recognizes_affine_types(diagram, label):
    t = recognize_irreducible(diagram)
    assert isinstance(t, AffineType)
    assert diagram_label(t) == label
    assert t.rank == len(diagram.vertices)


@pytest.mark.parametrize(
    "diagram",
    [
        path(5, 5),
        coxeter(3, {(1, 2): 3, (2, 3): 3, (1, 3): 4}),
        coxeter(3, {(1, 2): 3, (2, 3): "inf"}),
        star(2, 2, 3),
        star(1, 1, 1, 1, 1),
    ],
    ids=["55", "334-triangle", "3-inf", "T334", "star5"],
)
def test_everything_else_is_other(diagram):
    assert isinstance(recognize_irreducible(diagram), OtherInfinite)


def test_rank_two_labels():
    assert recognize_irreducible(dihedral(3)) == FiniteType(family="A", rank=2)
    assert recognize_irreducible(dihedral(4)) == FiniteType(family="B", rank=2)
    assert recognize_irreducible(dihedral(6)) == FiniteType(family="I2", rank=2, m=6)
    assert recognize_irreducible(dihedral("inf")) == AffineType(family="I1", rank=2)


def test_recognition_needs_an_irreducible_coxeter_diagram():
    with pytest.raises(NotIrreducibleError):
        recognize_irreducible(coxeter(2))
    with pytest.raises(NotCoxeterError):
        recognize_irreducible(parse_graph("vertex a 3"))


@pytest.mark.parametrize(
    "diagram, order",
    [
        (coxeter(1), 2),
        (path(3, 3), 24),
        (path(4, 3), 48),
        (path(4, 3, 3), 384),
        (star(1, 1, 1), 192),
        (star(1, 2, 2), 51840),
        (star(1, 2, 3), 2903040),
        (star(1, 2, 4), 696729600),
        (path(3, 4, 3), 1152),
        (path(5, 3), 120),
        (path(5, 3, 3), 14400),
        (dihedral(5), 10),
        (dihedral(8), 16),
    ],
)
def test_finite_order(diagram, order):
    assert finite_order(recognize_irreducible(diagram)) == order


def test_finite_order_rejects_infinite_types():
    with pytest.raises(NotFiniteTypeError):
        finite_order(recognize_irreducible(parse_graph(AFFINE_A2)))
    with pytest.raises(NotFiniteTypeError):
        finite_order(OtherInfinite())


@pytest.mark.parametrize(
    "diagram, central",
    [
        (coxeter(1), True),
        (path(3), False),
        (path(3, 3), False),
        (path(4), True),
        (path(4, 3), True),
        (star(1, 1, 1), True),
        (star(1, 1, 2), False),
        (star(1, 2, 2), False),
        (star(1, 2, 3), True),
        (star(1, 2, 4), True),
        (path(3, 4, 3), True),
        (path(5, 3), True),
        (path(5, 3, 3), True),
        (dihedral(5), False),
        (dihedral(6), True),
        (dihedral(7), False),
        (dihedral(8), True),
    ],
)
def test_longest_element_centrality(diagram, central):
    facts = centre_facts(recognize_irreducible(diagram))
    assert facts.has_central_longest_element is central


def test_reducible_finite_and_affine_diagrams():
    # A1 x A1
    assert is_finite_coxeter(coxeter(2))
    assert not is_finite_coxeter(dihedral("inf"))
    # ~A2 x A1
    mixed = coxeter(4, {(1, 2): 3, (2, 3): 3, (1, 3): 3})
    assert is_affine_coxeter(mixed)
    assert not is_finite_coxeter(mixed)
    assert not is_affine_coxeter(path(3, 3))
    assert not is_affine_coxeter(path(5, 5))
    assert is_finite_coxeter(parse_graph(""))


def test_join_must_be_complete_to_stay_affine():
    # ~A2 on s1..s3, ~I1 on s4 s5, every cross pair commuting
    join = coxeter(5, {(1, 2): 3, (2, 3): 3, (1, 3): 3, (4, 5): "inf"})
    assert is_affine_coxeter(join)
    # dropping one commuting edge of the join fuses everything into one component
    partial = coxeter(5, {(1, 2): 3, (2, 3): 3, (1, 3): 3, (4, 5): "inf", (1, 4): "inf"})
    assert not is_affine_coxeter(partial)
    assert isinstance(recognize_irreducible(partial), OtherInfinite)


def relabelled(d: DyerGraph, seed: int) -> DyerGraph:
    """Same diagram with shuffled declaration order and fresh names."""
    order = list(d.names)
    random.Random(seed).shuffle(order)
    rename = {old: f"x{i}" for i, old in enumerate(order)}
    return DyerGraph(
        vertices=tuple(Vertex(name=rename[v], f=2) for v in order),
        edges=tuple(Edge(u=rename[e.u], v=rename[e.v], m=e.m) for e in d.edges),
    )


@pytest.mark.parametrize("seed", [0, 1, 2])
@pytest.mark.parametrize(
    "diagram, label", FINITE_CASES + AFFINE_CASES, ids=[c[1] for c in FINITE_CASES + AFFINE_CASES]
)
def test_recognition_ignores_vertex_names_and_order(diagram, label, seed):
    assert recognize_irreducible(relabelled(diagram, seed)) == recognize_irreducible(diagram)
