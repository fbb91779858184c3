"""Admissible graphs and their type-I exceptional classes.

A graph on the vertices 1..n has arrowed edges a -> b with a < b.  It is
admissible when

* (axiom 3) every chordless cycle of the underlying undirected graph is a
  triangle a < b < c carrying the edges a->b, a->c, b->c;
* (axiom 4) every vertex has at most two direct ascendents, and when it has
  two of them they are joined by an edge;
* (axiom 5) whenever two triangles share an edge u->v, the vertex v has
  exactly one direct descendent among the other two triangle vertices.

Axioms 1 and 2 (vertices are the marked points, edges point upwards) are
encoded in the input format and reported as input errors.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import networkx as nx

from .config import check_n

Edge = tuple[int, int]


class GraphInputError(ValueError):
    """Malformed graph data (bad vertex labels, wrong edge orientation)."""


class ClassShapeError(ValueError):
    """A class list that is not of type-I shape."""


class PairingError(ValueError):
    """Two classes pair negatively, so no admissible graph realises them."""

    def __init__(self, a: int, b: int, value: int):
        super().__init__(f"e_{a} . e_{b} = {value} < 0")
        self.pair = (a, b)
        self.value = value


class AxiomError(ValueError):
    def __init__(self, violations: list["Violation"]):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = violations


@dataclass(frozen=True)
class Violation:
    axiom: int
    vertices: tuple[int, ...]

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "vertices": list(self.vertices)}

    def __str__(self) -> str:
        return f"axiom {self.axiom} violated at vertices {list(self.vertices)}"


# ---------------------------------------------------------------------------
# exceptional lattice


@dataclass(frozen=True)
class ExcClass:
    """An integral class c*C + sum coeffs[i-1] E_i.

    The pairing is E_i.E_j = -delta_ij and E_i.C = 0.  C.C is never needed
    by the library, so pairing two classes that both involve C is refused.
    """

    coeffs: tuple[int, ...]
    c_coeff: int = 0

    @classmethod
    def basis(cls, n: int, i: int) -> "ExcClass":
        v = [0] * n
        v[i - 1] = 1
        return cls(tuple(v))

    @classmethod
    def zero(cls, n: int) -> "ExcClass":
        return cls((0,) * n)

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i - 1]

    def __add__(self, other: "ExcClass") -> "ExcClass":
        return ExcClass(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.c_coeff + other.c_coeff)

    def __sub__(self, other: "ExcClass") -> "ExcClass":
        return ExcClass(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.c_coeff - other.c_coeff)

    def __neg__(self) -> "ExcClass":
        return ExcClass(tuple(-a for a in self.coeffs), -self.c_coeff)

    def __mul__(self, k: int) -> "ExcClass":
        return ExcClass(tuple(k * a for a in self.coeffs), k * self.c_coeff)

    __rmul__ = __mul__

    def dot(self, other: "ExcClass") -> int:
        if self.n != other.n:
            raise ValueError("classes live on different lattices")
        if self.c_coeff and other.c_coeff:
            raise ValueError("C.C is not part of the exceptional lattice")
        return -sum(a * b for a, b in zip(self.coeffs, other.coeffs))

    def square(self) -> int:
        return self.dot(self)

    def leading_index(self) -> int:
        for i, a in enumerate(self.coeffs, 1):
            if a:
                return i
        return 0

    def is_minus_one(self) -> bool:
        return self.c_coeff == 0 and self.square() == -1 and sum(self.coeffs) == 1

    def __str__(self) -> str:
        parts = []
        if self.c_coeff:
            parts.append(f"{self.c_coeff}C")
        for i, a in enumerate(self.coeffs, 1):
            if a == 0:
                continue
            sign = "-" if a < 0 else "+"
            mag = "" if abs(a) == 1 else str(abs(a))
            parts.append(f"{sign}{mag}E{i}")
        if not parts:
            return "0"
        s = "".join(p if p[0] in "+-" else "+" + p for p in parts)
        return s[1:] if s.startswith("+") else s


def d_gt(e: ExcClass) -> int:
    """(e.e - K_rel.e)/2 with K_rel = E_1 + ... + E_n."""
    k_rel = ExcClass((1,) * e.n)
    twice = e.square() - k_rel.dot(e)
    assert twice % 2 == 0
    return twice // 2


# ---------------------------------------------------------------------------
# axioms


def _normalise_edges(n: int, edges: Iterable[Sequence[int]]) -> tuple[Edge, ...]:
    if not isinstance(n, int) or n < 1:
        raise GraphInputError(f"vertex count must be a positive integer, got {n!r}")
    out = set()
    for e in edges:
        if len(e) != 2:
            raise GraphInputError(f"edge {list(e)} is not a pair")
        a, b = int(e[0]), int(e[1])
        if not (1 <= a <= n and 1 <= b <= n):
            raise GraphInputError(f"edge ({a},{b}) has a vertex outside 1..{n}")
        if a >= b:
            raise GraphInputError(f"edge ({a},{b}) must point from the smaller to the larger vertex")
        out.add((a, b))
    return tuple(sorted(out))


def _violations(n: int, edges: tuple[Edge, ...]) -> list[Violation]:
    es = set(edges)
    found = []

    g = nx.Graph()
    g.add_nodes_from(range(1, n + 1))
    g.add_edges_from(edges)
    if not nx.is_chordal(g):
        for cyc in nx.chordless_cycles(g):
            if len(cyc) > 3:
                found.append(Violation(3, tuple(sorted(cyc))))
                break

    for v in range(1, n + 1):
        asc = sorted(a for a in range(1, v) if (a, v) in es)
        if len(asc) > 2:
            found.append(Violation(4, (v, *asc)))
        elif len(asc) == 2 and tuple(asc) not in es:
            found.append(Violation(4, (v, *asc)))

    triangles = [t for t in itertools.combinations(range(1, n + 1), 3)
                 if (t[0], t[1]) in es and (t[0], t[2]) in es and (t[1], t[2]) in es]
    for t1, t2 in itertools.combinations(triangles, 2):
        shared = set(t1) & set(t2)
        if len(shared) != 2:
            continue
        u, v = sorted(shared)
        others = (set(t1) | set(t2)) - {v}
        below = [w for w in others if (v, w) in es]
        if len(below) != 1:
            found.append(Violation(5, tuple(sorted(set(t1) | set(t2)))))
    return found


def check_axioms(n: int, edges: Iterable[Sequence[int]]) -> list[Violation]:
    """Return the axiom violations of a raw graph (empty list when admissible).

    Raises :class:`GraphInputError` for malformed edges.
    """
    return _violations(n, _normalise_edges(n, edges))


# ---------------------------------------------------------------------------
# the graph type


@dataclass(frozen=True, order=True)
class AdmissibleGraph:
    """An admissible graph; edges are stored sorted, so equality is structural."""

    n: int
    edges: tuple[Edge, ...] = field(default=())

    def __post_init__(self):
        norm = _normalise_edges(self.n, self.edges)
        object.__setattr__(self, "edges", norm)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]] = (), check: bool = True) -> "AdmissibleGraph":
        g = cls(n, tuple(tuple(e) for e in edges))
        if check:
            bad = _violations(g.n, g.edges)
            if bad:
                raise AxiomError(bad)
        return g

    @classmethod
    def empty(cls, n: int) -> "AdmissibleGraph":
        """gamma_n, the graph without edges."""
        return cls(n, ())

    @classmethod
    def from_json(cls, data) -> "AdmissibleGraph":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            n, edges = data["n"], data.get("edges", [])
        except (TypeError, KeyError):
            raise GraphInputError('graph JSON needs the shape {"n": .., "edges": [[a,b], ..]}')
        return cls.from_edges(n, edges)

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    def key(self) -> tuple:
        return (self.n, self.edges)

    def descendents(self, i: int) -> tuple[int, ...]:
        """J_i, the direct descendents of vertex i."""
        return tuple(b for a, b in self.edges if a == i)

    def ascendents(self, i: int) -> tuple[int, ...]:
        return tuple(a for a, b in self.edges if b == i)

    def index_set(self, i: int) -> tuple[int, ...]:
        """I_i = {i} together with J_i."""
        return (i,) + self.descendents(i)

    def __str__(self) -> str:
        if not self.edges:
            return f"gamma_{self.n}"
        return f"[{self.n}: " + ", ".join(f"{a}->{b}" for a, b in self.edges) + "]"


def codim(g: AdmissibleGraph) -> int:
    return len(g.edges)


def type_I_classes(g: AdmissibleGraph) -> list[ExcClass]:
    """e_i = E_i - sum_{j in J_i} E_j for i = 1..n."""
    out = []
    for i in range(1, g.n + 1):
        v = [0] * g.n
        v[i - 1] = 1
        for j in g.descendents(i):
            v[j - 1] = -1
        out.append(ExcClass(tuple(v)))
    return out


def fan_subgraph(g: AdmissibleGraph, i: int) -> AdmissibleGraph:
    if not 1 <= i <= g.n:
        raise GraphInputError(f"vertex {i} outside 1..{g.n}")
    return AdmissibleGraph(g.n, tuple((i, j) for j in g.descendents(i)))


def is_chain_like(g: AdmissibleGraph) -> bool:
    return all(len(g.descendents(i)) <= 1 for i in range(1, g.n + 1))


def graph_from_classes(classes: Sequence[ExcClass]) -> AdmissibleGraph:
    """Rebuild the admissible graph whose type-I classes are ``classes``."""
    n = len(classes)
    edges = []
    for i, e in enumerate(classes, 1):
        if e.n != n or e.c_coeff != 0:
            raise ClassShapeError(f"class {i} is not a pure exceptional class on {n} points")
        if e[i] != 1 or any(e[j] != 0 for j in range(1, i)):
            raise ClassShapeError(f"class {i} = {e} is not of the form E_{i} - sum E_j with j > {i}")
        for j in range(i + 1, n + 1):
            if e[j] == -1:
                edges.append((i, j))
            elif e[j] != 0:
                raise ClassShapeError(f"class {i} = {e} has coefficient {e[j]} at E_{j}")
    for a, b in itertools.combinations(range(n), 2):
        value = classes[a].dot(classes[b])
        if value < 0:
            raise PairingError(a + 1, b + 1, value)
    return AdmissibleGraph.from_edges(n, edges)


def restrict(g: AdmissibleGraph, keep: Iterable[int]) -> AdmissibleGraph:
    """Substitute E_a -> 0 for a outside ``keep`` and relabel order-preservingly."""
    ks = sorted(set(keep))
    if not ks or ks[0] < 1 or ks[-1] > g.n:
        raise GraphInputError(f"index set {ks} must be a nonempty subset of 1..{g.n}")
    phi = {a: i for i, a in enumerate(ks)}
    classes = type_I_classes(g)
    out = []
    for a in ks:
        v = [0] * len(ks)
        for b in ks:
            v[phi[b]] = classes[a - 1][b]
        out.append(ExcClass(tuple(v)))
    return graph_from_classes(out)


def decompose_triangular(v: ExcClass, classes: Sequence[ExcClass]) -> tuple[int, ...]:
    """Coefficients c with v = sum c_i e_i, e_i the type-I classes of a graph.

    The type-I classes form a unitriangular basis (e_i has leading term E_i),
    so the decomposition exists, is unique and is integral.
    """
    rest = list(v.coeffs)
    n = len(classes)
    out = []
    for i in range(n):
        c = rest[i]
        out.append(c)
        if c:
            for j in range(i, n):
                rest[j] -= c * classes[i].coeffs[j]
    assert not any(rest)
    return tuple(out)


def degenerates(small: AdmissibleGraph, big: AdmissibleGraph) -> bool:
    """True when Y_small lies in the closure Y(big).

    Every type-I class of ``big`` must be a non-negative integral combination
    of the type-I classes of ``small``.
    """
    if small.n != big.n:
        return False
    base = type_I_classes(small)
    return all(min(decompose_triangular(e, base)) >= 0 for e in type_I_classes(big))


# ---------------------------------------------------------------------------
# enumeration


def _candidate_ascendent_sets(b: int):
    yield ()
    for a in range(1, b):
        yield (a,)
    for pair in itertools.combinations(range(1, b), 2):
        yield pair


@lru_cache(maxsize=None)
def _enumerate(n: int) -> tuple[AdmissibleGraph, ...]:
    # Vertex b's incoming edges are chosen after all edges among 1..b-1 are
    # fixed.  Every axiom violation inside the prefix 1..b is permanent, so
    # partial graphs are pruned as soon as a prefix fails.
    partial: list[tuple[Edge, ...]] = [()]
    for b in range(2, n + 1):
        nxt = []
        for edges in partial:
            es = set(edges)
            for asc in _candidate_ascendent_sets(b):
                if len(asc) == 2 and asc not in es:
                    continue
                cand = tuple(sorted(edges + tuple((a, b) for a in asc)))
                if not _violations(b, cand):
                    nxt.append(cand)
        partial = nxt
    return tuple(sorted(AdmissibleGraph(n, e) for e in partial))


def enumerate_adm(n: int) -> list[AdmissibleGraph]:
    """All admissible graphs on n vertices, sorted by their edge lists."""
    check_n(n)
    return list(_enumerate(n))


def all_edge_subsets(n: int):
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for r in range(len(pairs) + 1):
        for sub in itertools.combinations(pairs, r):
            yield sub
