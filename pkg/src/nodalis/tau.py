"""Tau classes, mixed invariants over strata and the corrected recursion.

The numbers produced here are integrals over M_n of

    c(tau_G) * c(U) * [Y(G)]

where U is the relative obstruction bundle for the multiplicity vector and
tau_G the correction bundle attached to the negative classes of G.  The
line bundles Q_k entering tau_G have no closed form in terms of the tower
generators; they are carried as the formal classes q_k and any integral
that still involves one is reported as a named symbol instead of a number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .chow import ChowExpr, Integrator, Q_BASE, STANDARD_RULES, BlowdownRules, class_of_stratum, code_name, obstruction_total_chern
from .cones import DomainError, MultiplicityVector, negative_indices, pairing_with_target, special_condition
from .config import check_delta
from .graphs import AdmissibleGraph, ExcClass, type_I_classes
from .orderings import OrderingContext
from .poly import BASE_VARS, UniversalPoly


@dataclass(frozen=True)
class TauClass:
    graph: AdmissibleGraph
    m: MultiplicityVector
    rank: int
    total_chern: ChowExpr
    zero_flag: bool

    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "mult": list(self.m),
            "rank": self.rank,
            "zero": self.zero_flag,
            "total_chern": str(self.total_chern),
        }


def _line_power(c1: ChowExpr, k: int, top: int) -> ChowExpr:
    """(1 + c1)^k truncated at grade ``top``; negative k gives the inverse series."""
    n = c1.n
    if k >= 0:
        return ((ChowExpr.one(n) + c1) ** k).truncate(top)
    out = ChowExpr.one(n)
    term = ChowExpr.one(n)
    for j in range(1, top + 1):
        term = (term * c1).truncate(top)
        out = out + term * Fraction(math.comb(-k + j - 1, j) * (-1) ** j)
    return out


def _line_class(g: AdmissibleGraph, m: MultiplicityVector, k: int) -> ChowExpr:
    """c_1 of the line summand at vertex k: h_k - sum_{r<k} m_r x_{r;k}."""
    n = g.n
    out = ChowExpr.h(n, k)
    for r in range(1, k):
        out = out - ChowExpr.x(n, r, k) * m[r]
    return out


def tau_rank(g: AdmissibleGraph, m: MultiplicityVector) -> int:
    classes = type_I_classes(g)
    me = m.as_class()
    total = 0
    seen = ExcClass.zero(g.n)
    for k in negative_indices(g, m):
        e = classes[k - 1]
        total += e.dot(e + me + seen)
        seen = seen + e
    return total


def tau_of(g: AdmissibleGraph, m: MultiplicityVector) -> TauClass:
    if g.n != m.n or not special_condition(g, m):
        raise DomainError(f"{g} is not in Delta({g.n}) for m=({m})")
    n = g.n
    classes = type_I_classes(g)
    neg = negative_indices(g, m)
    if any(classes[k - 1].square() < pairing_with_target(classes[k - 1], m) for k in neg):
        return TauClass(g, m, 0, ChowExpr.zero(n), True)
    top = 2 * n
    total = ChowExpr.one(n)
    for pos, k in enumerate(neg):
        e = classes[k - 1]
        q = ChowExpr.q(n, k)
        own = e.square() - pairing_with_target(e, m)
        if own:
            total = (total * _line_power(q + _line_class(g, m, k), own, top)).truncate(top)
        # cross-section summands: one line per unit of e_k . e_j, restricted
        # along the section E_{k;j}
        for j in neg[:pos]:
            count = e.dot(classes[j - 1])
            if not count:
                continue
            a, b = min(j, k), max(j, k)
            c1 = q + _line_class(g, m, k) - ChowExpr.x(n, a, b) * m[j]
            total = (total * _line_power(c1, count, top)).truncate(top)
    return TauClass(g, m, tau_rank(g, m), total, False)


def _split_parameters(expr: ChowExpr) -> dict[tuple, ChowExpr]:
    """Group the terms of ``expr`` by their q-monomial."""
    out: dict[tuple, dict] = {}
    for mono, c in expr.terms.items():
        qpart = tuple(t for t in mono if t[0] >= Q_BASE)
        rest = tuple(t for t in mono if t[0] < Q_BASE)
        bucket = out.setdefault(qpart, {})
        bucket[rest] = bucket.get(rest, Fraction(0)) + c
    return {k: ChowExpr(expr.n, v) for k, v in out.items()}


def _qname(qmono: tuple) -> str:
    return "*".join(code_name(c) if e == 1 else f"{code_name(c)}^{e}" for c, e in qmono)


def mixed_integrand(g: AdmissibleGraph, m: MultiplicityVector) -> Optional[ChowExpr]:
    """c(tau) * c(U) * [Y(g)], or None when tau vanishes."""
    tau = tau_of(g, m)
    if tau.zero_flag:
        return None
    n = g.n
    return tau.total_chern * obstruction_total_chern(n, m) * class_of_stratum(g)


def mixed_invariant(g: AdmissibleGraph, m: MultiplicityVector, rules: Optional[BlowdownRules] = None) -> UniversalPoly:
    """Integral of c(tau_g) c(U) [Y(g)] over M_n.

    Terms still carrying a formal q-class are returned as the symbol
    ``int[<q-monomial>;<graph>]`` standing for the integral of that
    q-monomial against its coefficient class.
    """
    expr = mixed_integrand(g, m)
    if expr is None:
        return UniversalPoly.zero()
    integ = Integrator(rules or STANDARD_RULES)
    out = UniversalPoly.zero()
    for qmono, part in sorted(_split_parameters(expr).items()):
        if not qmono:
            out = out + integ.integrate(part, g.n)
            continue
        qdeg = sum(e for _, e in qmono)
        if part.grade(2 * g.n - qdeg).is_zero():
            continue
        name = f"int[{_qname(qmono)};{g}]"
        out = out + UniversalPoly.var(name, BASE_VARS + (name,))
    return out


@dataclass
class InvariantContext:
    """Memoised corrected invariants for one (n, m)."""

    n: int
    m: MultiplicityVector
    reverse_tie: bool = False
    rules: Optional[BlowdownRules] = None
    orderings: OrderingContext = field(init=False)

    def __post_init__(self):
        self.orderings = OrderingContext(self.n, self.m, self.reverse_tie)
        self._mixed: dict = {}
        self._star: dict = {}
        self._active: set = set()

    def mixed(self, g: AdmissibleGraph) -> UniversalPoly:
        if g not in self._mixed:
            self._mixed[g] = mixed_invariant(g, self.m, self.rules)
        return self._mixed[g]

    def afsw_star(self, g: AdmissibleGraph) -> UniversalPoly:
        hit = self._star.get(g)
        if hit is not None:
            return hit
        if g in self._active:
            raise AssertionError(f"cycle in the correction relation through {g}")
        self._active.add(g)
        try:
            out = self.mixed(g)
            for h in self.orderings.corrections(g):
                out = out - self.afsw_star(h)
        finally:
            self._active.discard(g)
        self._star[g] = out
        return out


def afsw_star(g: AdmissibleGraph, m: MultiplicityVector, ctx: Optional[InvariantContext] = None) -> UniversalPoly:
    if ctx is None:
        ctx = InvariantContext(g.n, m)
    elif ctx.n != g.n or ctx.m != m:
        raise ValueError("context was built for a different (n, m)")
    return ctx.afsw_star(g)


@dataclass
class NodeCount:
    delta: int
    poly: UniversalPoly
    pre_division: UniversalPoly
    provenance: list

    @property
    def parametric(self) -> bool:
        return self.poly.parametric

    def to_json(self) -> dict:
        out = self.poly.to_json()
        out.update(
            delta=self.delta,
            pre_division=self.pre_division.to_json(),
            parametric=self.parametric,
            symbols=self.poly.extra_symbols(),
            provenance=self.provenance,
        )
        return out


def node_count(delta: int, reverse_tie: bool = False, rules: Optional[BlowdownRules] = None) -> NodeCount:
    """Universal polynomial for delta-nodal curves in |L|."""
    if delta < 1:
        raise ValueError("delta must be at least 1")
    check_delta(delta)
    m = MultiplicityVector.uniform(delta)
    ctx = InvariantContext(delta, m, reverse_tie, rules)
    top = AdmissibleGraph.empty(delta)
    star = ctx.afsw_star(top)
    provenance = []
    for g in ctx.orderings.order:
        tau = tau_of(g, m)
        mixed = ctx.mixed(g)
        provenance.append(
            {
                "graph": g.to_json(),
                "label": str(g),
                "tau_zero": tau.zero_flag,
                "status": "vanished" if mixed.is_zero() else "contributed",
                "mixed": mixed.to_json(),
            }
        )
    return NodeCount(delta, star * Fraction(1, math.factorial(delta)), star, provenance)
