import logging
import random

import numpy as np
import pytest
from sympy.combinatorics.fp_groups import FpGroup
from sympy.combinatorics.free_groups import free_group

from helpers import A2, FREE_GROUP, coxeter, dihedral, path, star
from src.models.schemas import INFINITY
from src.services.coxeter_catalog import finite_order, recognize_irreducible
from src.services.dyer_graph import parse_graph
from src.services.errors import CapExceededError
from src.services.lift import index_factor, lift_graph
from src.services.oracle import (
    EnumerationStatus,
    Presentation,
    brute_abelianisation_order,
    brute_centre_order,
    brute_order,
    coset_table_is_valid,
    presentation_of,
    todd_coxeter,
)


def table_of(g, max_cosets=None):
    table = todd_coxeter(presentation_of(g), max_cosets)
    assert table.complete
    return table


def test_presentation_of_a_cyclic_vertex():
    p = presentation_of(parse_graph("vertex a 3"))
    assert p.generators == ("a",)
    assert p.relators == ((("a", 1), ("a", 1), ("a", 1)),)


def test_presentation_of_a_braid_edge():
    p = presentation_of(parse_graph(A2))
    assert p.relators == (
        (("a", 1), ("a", 1)),
        (("b", 1), ("b", 1)),
        (("a", 1), ("b", 1), ("a", 1), ("b", -1), ("a", -1), ("b", -1)),
    )
    assert p.involutions == frozenset({"a", "b"})


def test_infinite_order_vertices_have_no_power_relator():
    p = presentation_of(parse_graph("vertex a inf"))
    assert p.generators == ("a",)
    assert p.relators == ()


def test_enumerates_a_cyclic_group():
    table = table_of(parse_graph("vertex a 3"))
    assert table.size == 3
    assert table.status is EnumerationStatus.COMPLETE


def test_enumerates_a_dihedral_group():
    assert table_of(dihedral(4)).size == 8


def test_free_group_exceeds_any_cap():
    table = todd_coxeter(presentation_of(parse_graph(FREE_GROUP)), max_cosets=1000)
    assert table.status is EnumerationStatus.CAP_EXCEEDED
    assert table.action is None
    assert not coset_table_is_valid(table)


def test_cap_counts_live_cosets():
    assert todd_coxeter(presentation_of(parse_graph("vertex a 5")), max_cosets=5).size == 5
    assert not todd_coxeter(presentation_of(parse_graph("vertex a 5")), max_cosets=4).complete


def test_trivial_group():
    table = table_of(parse_graph(""))
    assert table.size == 1
    assert brute_centre_order(table) == 1


@pytest.mark.parametrize(
    "text, order",
    [
        ("vertex a 5", 5),
        ("vertex a 3\nvertex b 2\nedge a b 2", 6),
        ("vertex a 4\nvertex b 6\nedge a b 2", 24),
    ],
)
def test_brute_order(text, order):
    assert brute_order(parse_graph(text)) == order


def test_brute_order_raises_at_the_cap():
    with pytest.raises(CapExceededError) as exc:
        brute_order(parse_graph("vertex a inf"), max_cosets=50)
    assert exc.value.limit == 50


CATALOG = [
    coxeter(1),
    path(3),
    path(3, 3),
    path(3, 3, 3),
    path(4),
    path(4, 3),
    path(4, 3, 3),
    star(1, 1, 1),
    path(3, 4, 3),
    path(5, 3),
    path(5, 3, 3),
] + [dihedral(m) for m in range(3, 9)]


@pytest.mark.parametrize("diagram", CATALOG)
def test_catalog_orders_match_enumeration(diagram):
    assert brute_order(diagram) == finite_order(recognize_irreducible(diagram))


@pytest.mark.parametrize(
    "diagram, centre",
    [
        (path(4), 2),
        (path(4, 3), 2),
        (dihedral(4), 2),
        (dihedral(6), 2),
        (dihedral(8), 2),
        (path(5, 3), 2),
        (star(1, 1, 1), 2),
        (path(3), 1),
        (path(3, 3), 1),
        (path(3, 3, 3), 1),
        (dihedral(3), 1),
        (dihedral(5), 1),
        (dihedral(7), 1),
    ],
)
def test_brute_centre_order(diagram, centre):
    assert brute_centre_order(table_of(diagram)) == centre


def test_centre_of_an_abelian_group_is_everything():
    assert brute_centre_order(table_of(parse_graph("vertex a 5"))) == 5
    assert brute_centre_order(table_of(parse_graph("vertex a 3\nvertex b 4\nedge a b 2"))) == 12


def test_centre_needs_a_complete_table():
    table = todd_coxeter(presentation_of(parse_graph(FREE_GROUP)), max_cosets=10)
    with pytest.raises(ValueError):
        brute_centre_order(table)


@pytest.mark.parametrize(
    "text, order",
    [
        (A2, 2),
        ("vertex a 2\nvertex b 2\nedge a b 4", 4),
        ("vertex a 3\nvertex b 2", 6),
        ("vertex a inf", INFINITY),
    ],
)
def test_brute_abelianisation_order(text, order):
    assert brute_abelianisation_order(parse_graph(text)) == order


def test_complete_tables_are_valid_permutation_representations():
    for diagram in (path(4, 3), dihedral(5), parse_graph("vertex a 3\nvertex b 2\nedge a b 2")):
        table = table_of(diagram)
        assert coset_table_is_valid(table)
        assert table.action.shape == (table.size, len(table.columns))


def test_cosets_are_numbered_breadth_first():
    table = table_of(dihedral(5))
    first_seen = []
    for row in table.action:
        for beta in row:
            if beta not in first_seen:
                first_seen.append(int(beta))
    assert [0] + [b for b in first_seen if b != 0] == list(range(table.size))


def test_enumeration_is_deterministic():
    p = presentation_of(path(4, 3))
    assert np.array_equal(todd_coxeter(p).action, todd_coxeter(p).action)


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_count_is_independent_of_relator_order(seed):
    p = presentation_of(path(5, 3))
    relators = list(p.relators)
    random.Random(seed).shuffle(relators)
    shuffled = Presentation(p.generators, tuple(relators))
    assert todd_coxeter(shuffled).size == 120


def test_count_is_independent_of_generator_order():
    p = presentation_of(path(4, 3))
    reordered = Presentation(tuple(reversed(p.generators)), p.relators)
    assert todd_coxeter(reordered).size == 48


def test_lift_index_identity():
    for text in ("vertex a 5", "vertex a 3\nvertex b 2\nedge a b 2", "vertex a 3\nvertex b 4\nedge a b 2"):
        g = parse_graph(text)
        assert brute_order(lift_graph(g).lifted) == brute_order(g) * index_factor(g)


def _sympy_group(p: Presentation):
    free, *gens = free_group(", ".join(p.generators))
    by_name = dict(zip(p.generators, gens))
    relators = []
    for word in p.relators:
        element = free.identity
        for gen, sign in word:
            element = element * by_name[gen] ** sign
        relators.append(element)
    return FpGroup(free, relators)


@pytest.mark.parametrize(
    "g",
    [
        path(3, 3),
        path(4, 3),
        parse_graph("vertex a 3\nvertex b 2\nedge a b 2"),
        parse_graph("vertex a 3\nvertex b 5\nvertex c 2\nedge a b 2\nedge a c 2\nedge b c 2"),
    ],
)
def test_orders_agree_with_sympy(g):
    assert brute_order(g) == _sympy_group(presentation_of(g)).order()


@pytest.mark.parametrize(
    "text",
    ["vertex a 100000000", "vertex a 2\nvertex b 2\nedge a b 100000000"],
)
def test_relators_longer_than_the_cap_are_refused(text):
    g = parse_graph(text)
    with pytest.raises(CapExceededError) as exc:
        presentation_of(g, max_cosets=1000)
    assert exc.value.limit == 1000
    with pytest.raises(CapExceededError):
        brute_order(g, max_cosets=1000)


def test_relators_within_the_cap_are_built():
    p = presentation_of(parse_graph("vertex a 2\nvertex b 2\nedge a b 5"), max_cosets=10)
    assert len(p.relators) == 3


def test_cap_hits_are_not_reported_at_info(caplog):
    caplog.set_level(logging.INFO, logger="src.services.oracle")
    todd_coxeter(presentation_of(parse_graph(FREE_GROUP)), max_cosets=50)
    assert not [r for r in caplog.records if r.levelno >= logging.INFO]
