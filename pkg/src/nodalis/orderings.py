"""Orderings on Delta(n) that organise the correction recursion.

* ``succ``  cone inclusion, G1 > G2 when cone(G1) is inside cone(G2);
* ``gg``    persistence: the negative classes of G survive unchanged in G'
            and G' acquires a new negative class;
* ``sq``    breaking: the difference of the negative-class sums is
            semi-effective over the common degenerations;
* ``models`` the linear order obtained by peeling off succ-minimal elements;
* ``vdash`` the accumulation order on a reduced index set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .cones import (
    ExcCone,
    MultiplicityVector,
    cone_contains,
    cone_of,
    decompose_in_cone,
    enumerate_delta,
    negative_indices,
    pairing_with_target,
)
from .graphs import AdmissibleGraph, ExcClass, degenerates, enumerate_adm, graph_from_classes, type_I_classes


def _neg_sum(g: AdmissibleGraph, m: MultiplicityVector) -> ExcClass:
    classes = type_I_classes(g)
    total = ExcClass.zero(g.n)
    for i in negative_indices(g, m):
        total = total + classes[i - 1]
    return total


def succ(g1: AdmissibleGraph, g2: AdmissibleGraph, m: MultiplicityVector) -> bool:
    return cone_contains(cone_of(g1, m), cone_of(g2, m))


def gg(g: AdmissibleGraph, g2: AdmissibleGraph, m: MultiplicityVector) -> bool:
    c1, c2 = type_I_classes(g), type_I_classes(g2)
    neg1 = negative_indices(g, m)
    if any(c1[i - 1] != c2[i - 1] for i in neg1):
        return False
    return any(pairing_with_target(c1[j - 1], m) >= 0 for j in negative_indices(g2, m))


@lru_cache(maxsize=None)
def _degeneration_pool(n: int) -> tuple[AdmissibleGraph, ...]:
    return tuple(enumerate_adm(n))


def common_degenerations(g1: AdmissibleGraph, g2: AdmissibleGraph) -> list[AdmissibleGraph]:
    """The maximal graphs that degenerate from both g1 and g2.

    These label the generic points of Y(g1) n Y(g2); an empty list means
    the two closures are disjoint.
    """
    if degenerates(g2, g1):
        return [g2]
    if degenerates(g1, g2):
        return [g1]
    pool = [w for w in _degeneration_pool(g1.n) if degenerates(w, g1) and degenerates(w, g2)]
    return [w for w in pool if not any(v != w and degenerates(w, v) for v in pool)]


def has_common_degeneration(g1: AdmissibleGraph, g2: AdmissibleGraph) -> bool:
    return bool(common_degenerations(g1, g2))


def sq(g: AdmissibleGraph, g2: AdmissibleGraph, m: MultiplicityVector) -> bool:
    witnesses = common_degenerations(g, g2)
    if not witnesses:
        return False
    diff = _neg_sum(g, m) - _neg_sum(g2, m)
    return all(decompose_in_cone(diff, cone_of(w)) is not None for w in witnesses)


def build_models_order(delta: list[AdmissibleGraph], m: MultiplicityVector, reverse_tie: bool = False) -> list[AdmissibleGraph]:
    """Linearise succ by repeatedly removing succ-minimal elements.

    All elements that are minimal in the current residual set are listed
    and emitted before the elements that only become minimal once they are
    gone.  Within one such layer the canonical encoding decides, least
    first (greatest first when ``reverse_tie``).
    """
    cones = {g: cone_of(g, m) for g in delta}
    rest = list(delta)
    out = []
    while rest:
        layer = [g for g in rest if not any(h != g and cone_contains(cones[g], cones[h]) for h in rest)]
        if not layer:
            raise AssertionError("succ has a cycle on Delta(n)")
        out.extend(sorted(layer, reverse=reverse_tie))
        rest = [g for g in rest if g not in layer]
    return out


def intermediate_graph(g: AdmissibleGraph, g2: AdmissibleGraph, m: MultiplicityVector) -> Optional[AdmissibleGraph]:
    """The graph inserted between g and g2 when some negative class of g breaks.

    P collects the negative classes of g that are not generators of
    cone(g2); each is decomposed in cone(g2), and the generators used (P'')
    are kept while every other vertex becomes a -1 class.  Returns None
    when nothing breaks.
    """
    classes = type_I_classes(g)
    cone2 = cone_of(g2)
    gens = set(cone2.generators)
    broken = [i for i in negative_indices(g, m) if classes[i - 1] not in gens]
    if not broken:
        return None
    used = set()
    for i in broken:
        coeffs = decompose_in_cone(classes[i - 1], cone2)
        if coeffs is None:
            return None
        used.update(j for j, c in enumerate(coeffs, 1) if c)
    new = [cone2.generators[i - 1] if i in used else ExcClass.basis(g.n, i) for i in range(1, g.n + 1)]
    return graph_from_classes(new)


@dataclass
class IndexSets:
    below: list[AdmissibleGraph]
    reduced: list[AdmissibleGraph]
    persistent: list[AdmissibleGraph]


@dataclass
class OrderingContext:
    """Delta(n) with its orderings, built once and then read-only."""

    n: int
    m: MultiplicityVector
    reverse_tie: bool = False
    delta: list[AdmissibleGraph] = field(init=False)
    order: list[AdmissibleGraph] = field(init=False)
    position: dict = field(init=False)

    def __post_init__(self):
        if self.m.n != self.n:
            raise ValueError("len(m) must equal n")
        self.delta = enumerate_delta(self.n, self.m)
        self.order = build_models_order(self.delta, self.m, self.reverse_tie)
        self.position = {g: i for i, g in enumerate(self.order)}
        self._gg = {}
        self._sq = {}
        self._common = {}
        self._index = {}

    @property
    def top(self) -> AdmissibleGraph:
        return self.order[-1]

    def succ(self, a, b) -> bool:
        return succ(a, b, self.m)

    def gg(self, a, b) -> bool:
        key = (a, b)
        if key not in self._gg:
            self._gg[key] = gg(a, b, self.m)
        return self._gg[key]

    def sq(self, a, b) -> bool:
        key = (a, b)
        if key not in self._sq:
            self._sq[key] = sq(a, b, self.m)
        return self._sq[key]

    def common(self, a, b) -> bool:
        key = (a, b) if a <= b else (b, a)
        if key not in self._common:
            self._common[key] = has_common_degeneration(a, b)
        return self._common[key]

    def models_below(self, a, b) -> bool:
        """True when a comes strictly before b in the linear order."""
        return self.position[a] < self.position[b]

    def index_sets(self, g: AdmissibleGraph) -> IndexSets:
        if g in self._index:
            return self._index[g]
        below = self.order[: self.position[g]]
        reduced = [
            h for h in below
            if self.common(g, h) and not any(self.sq(g, k) and self.gg(k, h) for k in below)
        ]
        persistent = [h for h in reduced if self.gg(g, h)]
        out = IndexSets(below, reduced, persistent)
        self._index[g] = out
        return out

    def accumulation(self, g: AdmissibleGraph, g1: AdmissibleGraph) -> list[AdmissibleGraph]:
        if self.gg(g, g1):
            return [g1]
        acc = [h for h in self.index_sets(g).below if self.gg(g1, h)]
        return acc or [g1]

    def vdash_order(self, g: AdmissibleGraph) -> list[AdmissibleGraph]:
        """The reduced index set of g, increasing under vdash."""
        reduced = self.index_sets(g).reduced

        def key(h):
            least = min(self.position[x] for x in self.accumulation(g, h))
            return (self.gg(g, h), least, self.position[h])

        return sorted(reduced, key=key)

    def corrections(self, g: AdmissibleGraph) -> list[AdmissibleGraph]:
        """Graphs subtracted in the modified invariant of g.

        For the top element this is the whole of Delta(n) minus itself;
        otherwise the members h of Delta(n) with g >> h.
        """
        if g == self.top and not negative_indices(g, self.m):
            return [h for h in self.order if h != g]
        return [h for h in self.order if h != g and self.gg(g, h)]

    def relation_matrices(self) -> dict:
        names = list(range(len(self.order)))
        return {
            "succ": [[int(self.succ(a, b)) for b in self.order] for a in self.order],
            "gg": [[int(self.gg(a, b)) for b in self.order] for a in self.order],
            "sq": [[int(self.sq(a, b)) for b in self.order] for a in self.order],
            "index": names,
        }
