"""
Brute-force verification of the classifier on small finite instances.

Coset enumeration over the trivial subgroup (HLT relator scanning with
coincidence processing), giving the regular permutation representation of the
group. Orders, centres and abelianisations are then read off the table.
"""

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from ..config import settings
from ..models.schemas import INFINITY, DyerGraph, is_infinite
from .errors import CapExceededError

logger = logging.getLogger(__name__)

Letter = Tuple[str, int]  # (generator, +1 or -1)
Word = Tuple[Letter, ...]


def invert(word: Sequence[Letter]) -> Word:
    return tuple((gen, -sign) for gen, sign in reversed(word))


def free_reduce(word: Sequence[Letter]) -> Word:
    reduced: List[Letter] = []
    for letter in word:
        if reduced and reduced[-1] == (letter[0], -letter[1]):
            reduced.pop()
        else:
            reduced.append(letter)
    return tuple(reduced)


def alternating(u: str, v: str, m: int) -> Word:
    """pi(u, v, m) = uvu... with m letters."""
    return tuple(((u, v)[i % 2], 1) for i in range(m))


@dataclass(frozen=True)
class Presentation:
    generators: Tuple[str, ...]
    relators: Tuple[Word, ...]

    @property
    def involutions(self) -> frozenset:
        return frozenset(gen for gen in self.generators if ((gen, 1), (gen, 1)) in self.relators)

    def with_relators(self, extra: Sequence[Word]) -> "Presentation":
        relators = list(self.relators)
        for word in extra:
            word = free_reduce(word)
            if word and word not in relators:
                relators.append(word)
        return Presentation(self.generators, tuple(relators))


def _refuse_long_relators(g: DyerGraph, max_cosets: int) -> None:
    """
    A vertex of order f generates a subgroup of order f, an edge labelled m a
    dihedral subgroup of order 2m. Either beyond the cap cannot enumerate.
    """
    for vertex in g.vertices:
        if not is_infinite(vertex.f) and vertex.f > max_cosets:
            raise CapExceededError(
                f"vertex '{vertex.name}' has order {vertex.f}, more than the cap of {max_cosets} cosets",
                max_cosets,
            )
    for edge in g.edges:
        if 2 * edge.m > max_cosets:
            raise CapExceededError(
                f"edge {edge.u} {edge.v} spans a dihedral subgroup of order {2 * edge.m}, "
                f"more than the cap of {max_cosets} cosets",
                max_cosets,
            )


def presentation_of(g: DyerGraph, max_cosets: Optional[int] = None) -> Presentation:
    """With a cap, relators longer than the cap are refused before any word is built."""
    if max_cosets is not None:
        _refuse_long_relators(g, max_cosets)
    relators: List[Word] = []
    for vertex in g.vertices:
        if not is_infinite(vertex.f):
            relators.append(((vertex.name, 1),) * vertex.f)
    for edge in g.edges:
        word = free_reduce(alternating(edge.u, edge.v, edge.m) + invert(alternating(edge.v, edge.u, edge.m)))
        relators.append(word)
    return Presentation(generators=g.names, relators=tuple(relators))


def commutators(p: Presentation) -> List[Word]:
    return [((u, 1), (v, 1), (u, -1), (v, -1)) for u, v in combinations(p.generators, 2)]


class EnumerationStatus(str, Enum):
    COMPLETE = "complete"
    CAP_EXCEEDED = "cap_exceeded"


@dataclass
class CosetTable:
    """
    Row i is coset i (row 0 the subgroup itself); action[i, c] is the image of
    coset i under column c. Cosets are numbered in breadth-first order.
    Involutions get a single column that is its own inverse.
    """

    generators: Tuple[str, ...]
    columns: Tuple[Letter, ...]
    inverse_column: Tuple[int, ...]
    status: EnumerationStatus
    action: Optional[np.ndarray] = None
    max_cosets: int = 0

    @property
    def complete(self) -> bool:
        return self.status is EnumerationStatus.COMPLETE

    @property
    def size(self) -> Optional[int]:
        return None if self.action is None else self.action.shape[0]

    def column_of(self, generator: str) -> int:
        return self.columns.index((generator, 1))

    def generator_columns(self) -> List[int]:
        return [self.column_of(gen) for gen in self.generators]


class _CapReached(Exception):
    pass


class _Enumerator:
    """Mutable state of one enumeration; see CosetTable for the finished form."""

    def __init__(self, p: Presentation, max_cosets: int):
        involutions = p.involutions
        columns: List[Letter] = []
        for gen in p.generators:
            columns.append((gen, 1))
            if gen not in involutions:
                columns.append((gen, -1))
        self.columns = tuple(columns)
        index = {letter: i for i, letter in enumerate(columns)}
        for gen in involutions:
            index[(gen, -1)] = index[(gen, 1)]
        self.inverse_column = tuple(index[(gen, -sign)] for gen, sign in columns)
        self.relators = [tuple(index[letter] for letter in word) for word in p.relators]

        self.max_cosets = max_cosets
        self.table: List[List[Optional[int]]] = [[None] * len(columns)]
        self.p = [0]
        self.live = 1

    def define(self, alpha: int, c: int) -> None:
        if self.live >= self.max_cosets:
            raise _CapReached
        beta = len(self.table)
        self.table.append([None] * len(self.columns))
        self.p.append(beta)
        self.live += 1
        self.table[alpha][c] = beta
        self.table[beta][self.inverse_column[c]] = alpha

    def rep(self, k: int) -> int:
        p = self.p
        root = k
        while p[root] != root:
            root = p[root]
        while p[k] != root:
            p[k], k = root, p[k]
        return root

    def merge(self, k: int, lamda: int, queue: deque) -> None:
        phi, psi = self.rep(k), self.rep(lamda)
        if phi != psi:
            mu, v = min(phi, psi), max(phi, psi)
            self.p[v] = mu
            self.live -= 1
            queue.append(v)

    def coincidence(self, alpha: int, beta: int) -> None:
        table, inv = self.table, self.inverse_column
        queue: deque = deque()
        self.merge(alpha, beta, queue)
        while queue:
            gamma = queue.popleft()
            for c in range(len(self.columns)):
                delta = table[gamma][c]
                if delta is None:
                    continue
                table[delta][inv[c]] = None
                mu, nu = self.rep(gamma), self.rep(delta)
                if table[mu][c] is not None:
                    self.merge(nu, table[mu][c], queue)
                elif table[nu][inv[c]] is not None:
                    self.merge(mu, table[nu][inv[c]], queue)
                else:
                    table[mu][c] = nu
                    table[nu][inv[c]] = mu

    def scan_and_fill(self, alpha: int, word: Tuple[int, ...]) -> None:
        table, inv = self.table, self.inverse_column
        f, b = alpha, alpha
        i, j = 0, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] is not None:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][inv[word[j]]] is not None:
                b = table[b][inv[word[j]]]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if j == i:
                # deduction
                table[f][word[i]] = b
                table[b][inv[word[i]]] = f
                return
            self.define(f, word[i])

    def run(self) -> None:
        alpha = 0
        while alpha < len(self.table):
            if self.p[alpha] == alpha:
                for word in self.relators:
                    self.scan_and_fill(alpha, word)
                    if self.p[alpha] < alpha:
                        break
                if self.p[alpha] == alpha:
                    for c in range(len(self.columns)):
                        if self.table[alpha][c] is None:
                            self.define(alpha, c)
            alpha += 1

    def standardized(self) -> np.ndarray:
        """Live cosets renumbered in breadth-first order from the subgroup coset."""
        number: Dict[int, int] = {0: 0}
        order = [0]
        queue = deque([0])
        while queue:
            alpha = queue.popleft()
            for c in range(len(self.columns)):
                beta = self.rep(self.table[alpha][c])
                if beta not in number:
                    number[beta] = len(order)
                    order.append(beta)
                    queue.append(beta)
        action = np.empty((len(order), len(self.columns)), dtype=np.int64)
        for row, alpha in enumerate(order):
            action[row] = [number[self.rep(beta)] for beta in self.table[alpha]]
        return action


def todd_coxeter(p: Presentation, max_cosets: Optional[int] = None) -> CosetTable:
    cap = settings.max_cosets if max_cosets is None else max_cosets
    if cap < 1:
        raise ValueError("max_cosets must be at least 1")

    enumerator = _Enumerator(p, cap)
    table = CosetTable(
        generators=p.generators,
        columns=enumerator.columns,
        inverse_column=enumerator.inverse_column,
        status=EnumerationStatus.CAP_EXCEEDED,
        max_cosets=cap,
    )
    try:
        enumerator.run()
    except _CapReached:
        logger.debug("Coset enumeration stopped at the cap of %d live cosets", cap)
        return table

    table.action = enumerator.standardized()
    table.status = EnumerationStatus.COMPLETE
    logger.debug("Enumerated %d cosets (%d defined in total)", table.size, len(enumerator.table))
    return table


def _complete_table(p: Presentation, max_cosets: Optional[int]) -> CosetTable:
    table = todd_coxeter(p, max_cosets)
    if not table.complete:
        raise CapExceededError(
            f"coset enumeration exceeded {table.max_cosets} cosets; the group may be infinite",
            table.max_cosets,
        )
    return table


def brute_order(g: DyerGraph, max_cosets: Optional[int] = None) -> int:
    cap = settings.max_cosets if max_cosets is None else max_cosets
    return _complete_table(presentation_of(g, cap), cap).size


def brute_centre_order(t: CosetTable) -> int:
    """
    Coset c stands for the element w_c with 1.w_c = c. w_c is central iff
    s.w_c = w_c.s for every generator s, i.e. (1.s).w_c = c.s. The left side is
    computed along the breadth-first spanning tree, one generator at a time.
    """
    if not t.complete:
        raise ValueError("centre needs a complete coset table")
    action = t.action
    n = action.shape[0]

    parent = np.full(n, -1, dtype=np.int64)
    via = np.full(n, -1, dtype=np.int64)
    order = [0]
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    for alpha in order:
        for c in range(action.shape[1]):
            beta = action[alpha, c]
            if not seen[beta]:
                seen[beta] = True
                parent[beta], via[beta] = alpha, c
                order.append(beta)

    central = np.ones(n, dtype=bool)
    for s in t.generator_columns():
        shifted = np.empty(n, dtype=np.int64)
        shifted[0] = action[0, s]
        for beta in order[1:]:
            shifted[beta] = action[shifted[parent[beta]], via[beta]]
        central &= shifted == action[:, s]
    return int(central.sum())


def brute_abelianisation_order(g: DyerGraph, max_cosets: Optional[int] = None):
    if any(is_infinite(v.f) for v in g.vertices):
        return INFINITY
    cap = settings.max_cosets if max_cosets is None else max_cosets
    p = presentation_of(g, cap)
    return _complete_table(p.with_relators(commutators(p)), cap).size


def coset_table_is_valid(t: CosetTable) -> bool:
    """Columns are permutations, paired columns are mutually inverse, action is transitive."""
    if not t.complete:
        return False
    action = t.action
    n = action.shape[0]
    identity = np.arange(n)
    for c, inverse in enumerate(t.inverse_column):
        column = action[:, c]
        if not np.array_equal(np.sort(column), identity):
            return False
        if not np.array_equal(action[column, inverse], identity):
            return False

    graph = nx.DiGraph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from((alpha, int(beta)) for alpha in range(n) for beta in action[alpha])
    return nx.is_strongly_connected(graph)
