"""Independent checks for the enumerator, the intersection engine and the orderings.

Nothing here calls the integration code in :mod:`nodalis.chow`; the second
evaluator keeps its own monomial representation, restriction map and
rule table, and only shares the :class:`ChowExpr` input type.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

import sympy

from .chow import BlowdownRules, ChowExpr, code_name, fiber_euler_check, pushforward_to_point
from .cones import MultiplicityVector, cone_of, enumerate_delta, negative_indices, pairing_with_target
from .graphs import (
    AdmissibleGraph,
    ExcClass,
    all_edge_subsets,
    check_axioms,
    codim,
    d_gt,
    enumerate_adm,
    graph_from_classes,
    type_I_classes,
)
from .orderings import OrderingContext, gg, intermediate_graph, sq, succ
from .poly import UniversalPoly, fraction_str

# ---------------------------------------------------------------------------
# enumeration


def brute_force_adm(n: int) -> list[AdmissibleGraph]:
    """Filter every edge subset of the complete graph through the axioms."""
    if n > 4:
        raise ValueError("brute force is limited to n <= 4")
    return sorted(AdmissibleGraph(n, sub) for sub in all_edge_subsets(n) if not check_axioms(n, sub))


# ---------------------------------------------------------------------------
# second evaluator
#
# Monomials are frozensets of (name, exponent) with names such as "h2" or
# "x1_3".  Powers E^e of the last exceptional divisor are lowered with the
# relation E^2 = c1 E - c2 restricted to E, where c1, c2 are ambient lifts
# of the normal bundle classes; E * pullback = 0 after integration and
# E^2 * beta integrates to minus beta on the blown-up locus.

_SURFACE = {  # integral over M of a degree-2 product of factor classes
    ("h", "h"): (1, 0, 0, 0),
    ("h", "k"): (0, 1, 0, 0),
    ("k", "k"): (0, 0, 1, 0),
    ("w",): (0, 0, 0, 1),
    ("p",): (0, 0, 0, 0),
}
_WEIGHT = {"h": 1, "k": 1, "p": 2, "w": 2, "x": 1}


def _parse(name: str) -> tuple:
    if name[0] == "x":
        a, b = name[1:].split("_")
        return ("x", int(a), int(b))
    return (name[0], int(name[1:]))


def _weight(mono) -> int:
    return sum(_WEIGHT[name[0]] * e for name, e in mono)


def _mono_times(mono, extra: dict):
    out = dict(mono)
    for name, e in extra.items():
        out[name] = out.get(name, 0) + e
    return frozenset(out.items())


def _lift_normal(a: int, n: int) -> tuple[dict, dict]:
    """Ambient lifts of c_1, c_2 of the normal bundle of Z_a in M_(n-1) x M."""
    c1 = {frozenset({(f"k{n}", 1)}): Fraction(-1)}
    c2 = {frozenset({(f"w{n}", 1)}): Fraction(1)}
    for c in range(1, a):
        c1[frozenset({(f"x{c}_{n}", 1)})] = Fraction(-1)
        c2[frozenset({(f"x{c}_{n}", 2)})] = Fraction(-1)
    return c1, c2


def _restrict(mono, a: int, n: int):
    out: dict[str, int] = {}
    for name, e in mono:
        p = _parse(name)
        if p[0] == "x":
            _, lo, hi = p
            new = f"x{lo}_{a}" if hi == n else name
        else:
            new = f"{p[0]}{a}" if p[1] == n else name
        out[new] = out.get(new, 0) + e
    return frozenset(out.items())


@lru_cache(maxsize=None)
def _alt_mono(mono: frozenset, n: int) -> tuple:
    return tuple(sorted(_alt_eval(mono, n).items()))


def _alt_eval(mono: frozenset, n: int) -> dict:
    if _weight(mono) != 2 * n:
        return {}
    if n == 0:
        return {(0, 0, 0, 0): Fraction(1)}
    top = None
    for name, e in mono:
        p = _parse(name)
        if p[0] == "x" and p[2] == n and (top is None or p[1] > top[1]):
            top = (name, p[1], e)
    if top is None:
        here = [(name, e) for name, e in mono if _parse(name)[0] != "x" and _parse(name)[1] == n]
        rest = frozenset((name, e) for name, e in mono if (name, e) not in here)
        letters = tuple(sorted(itertools.chain.from_iterable([name[0]] * e for name, e in here)))
        if letters not in _SURFACE:
            return {}
        base = _SURFACE[letters]
        sub = dict(_alt_mono(rest, n - 1))
        out = {}
        for k, c in sub.items():
            key = tuple(u + v for u, v in zip(k, base))
            out[key] = out.get(key, Fraction(0)) + c
        return out
    name, a, e = top
    if e == 1:
        return {}
    rest = frozenset((nm, k) for nm, k in mono if nm != name)
    if e == 2:
        sub = dict(_alt_mono(_restrict(rest, a, n), n - 1))
        return {k: -c for k, c in sub.items()}
    c1, c2 = _lift_normal(a, n)
    out: dict = {}
    for lifts, drop in ((c1, 1), (c2, 2)):
        for m, c in lifts.items():
            new = _mono_times(rest, dict(m))
            new = _mono_times(new, {name: e - drop})
            for k, v in _alt_mono(new, n):
                sign = 1 if drop == 1 else -1
                out[k] = out.get(k, Fraction(0)) + sign * c * v
    return {k: v for k, v in out.items() if v}


def alt_pushforward(expr: ChowExpr, n: Optional[int] = None) -> UniversalPoly:
    """Integral over M_n by relation rewriting, independent of the engine."""
    n = expr.n if n is None else n
    total: dict = {}
    for mono, c in expr.terms.items():
        names = frozenset((code_name(code), e) for code, e in mono)
        if any(nm[0] == "q" for nm, _ in names):
            raise ValueError("parameter classes cannot be integrated")
        for k, v in _alt_mono(names, n):
            total[k] = total.get(k, Fraction(0)) + c * v
    return UniversalPoly(total)


# ---------------------------------------------------------------------------
# classical delta = 1 count


def jet_discriminant_delta1() -> UniversalPoly:
    """c_2 of L + L (x) T*M, written in x = L^2, y = L.K, z = K^2, w = c_2."""
    l, t1, t2 = sympy.symbols("l t1 t2")
    total = sympy.expand((1 + l) * (1 + l - t1) * (1 + l - t2))
    c2 = sum(term for term in sympy.Add.make_args(total) if sympy.Poly(term, l, t1, t2).total_degree() == 2)
    # -(t1 + t2) = K, t1 t2 = c_2
    kk, cc = sympy.symbols("K c")
    c2 = sympy.expand(c2.subs(t2, -kk - t1))
    c2 = sympy.expand(c2.subs(t1**2, -kk * t1 - cc))
    poly = sympy.Poly(c2, l, kk, cc)
    table = {(2, 0, 0): (1, 0, 0, 0), (1, 1, 0): (0, 1, 0, 0), (0, 2, 0): (0, 0, 1, 0), (0, 0, 1): (0, 0, 0, 1)}
    return UniversalPoly({table[mon]: Fraction(int(c)) for mon, c in poly.terms()})


# ---------------------------------------------------------------------------
# lattice side


def expected_dimension_discrepancy(g: AdmissibleGraph, m: MultiplicityVector, c2=7, ck=-5) -> int:
    """d(D - S) - d(D) - codim(g) for D = C - sum m_i E_i, S the negative classes.

    d(X) = (X^2 - K.X)/2 with K = K_M + sum E_i; the numbers C^2 = c2 and
    C.K_M = ck cancel and may be chosen freely.
    """
    classes = type_I_classes(g)
    s = [0] * g.n
    for i in negative_indices(g, m):
        for j, v in enumerate(classes[i - 1].coeffs):
            s[j] += v

    def dim(b):
        square = c2 - sum(v * v for v in b)
        k_dot = ck - sum(b)
        twice = square - k_dot
        assert twice % 2 == 0
        return twice // 2

    d = [-mi for mi in m]
    return dim([u - v for u, v in zip(d, s)]) - dim(d) - codim(g)


def fiber_degree(mono_names: dict, n: int) -> UniversalPoly:
    """Integral of a grade-2 class in the last factor over a fibre of M_n -> M_(n-1).

    The fibre is M blown up at n-1 points: E_a.E_b = -delta_ab, E_a.L = 0.
    """
    letters = []
    for name, e in mono_names.items():
        letters += [name] * e
    if len(letters) == 1:
        return UniversalPoly.linear(w=1) if letters[0] == f"w{n}" else UniversalPoly.const(1)
    a, b = sorted(letters)
    if a[0] == "x" and b[0] == "x":
        return UniversalPoly.const(-1 if a == b else 0)
    if a[0] == "x" or b[0] == "x":
        return UniversalPoly.zero()
    pair = (a[0], b[0])
    return {("h", "h"): UniversalPoly.linear(x=1), ("h", "k"): UniversalPoly.linear(y=1), ("k", "k"): UniversalPoly.linear(z=1)}[pair]


# ---------------------------------------------------------------------------
# orderings


def restriction_lemma_violations(ctx: OrderingContext) -> list[tuple]:
    """Pairs (G, H) with H persistent under G where the reduced set of H
    differs from the members of the reduced set of G that share a
    degeneration with H and precede it."""
    bad = []
    for g in ctx.order:
        sets = ctx.index_sets(g)
        for h in sets.persistent:
            expected = {k for k in sets.reduced if ctx.common(h, k) and ctx.models_below(k, h)}
            actual = set(ctx.index_sets(h).reduced)
            if expected != actual:
                bad.append((g, h, sorted(expected), sorted(actual)))
    return bad


FIG7_SMALL = AdmissibleGraph.from_edges(7, [(1, 2), (1, 3), (1, 7)])
FIG7_LARGE = AdmissibleGraph.from_edges(7, [(1, 2), (1, 3), (1, 4), (1, 7), (2, 5), (2, 6)])
FIG8_MIDDLE = AdmissibleGraph.from_edges(7, [(1, 2), (1, 3), (1, 4), (1, 7)])


# ---------------------------------------------------------------------------
# reports


@dataclass
class OracleReport:
    check: str
    inputs: object
    expected: object
    actual: object

    @property
    def verdict(self) -> str:
        return "pass" if self.expected == self.actual else "fail"

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "inputs": _jsonable(self.inputs),
            "expected": _jsonable(self.expected),
            "actual": _jsonable(self.actual),
            "verdict": self.verdict,
        }


def _jsonable(v):
    if isinstance(v, UniversalPoly):
        return str(v)
    if isinstance(v, Fraction):
        return fraction_str(v)
    if isinstance(v, AdmissibleGraph):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, set, frozenset)):
        items = [_jsonable(x) for x in v]
        return sorted(items, key=str) if isinstance(v, (set, frozenset)) else items
    return v


def random_top_monomial(rng: random.Random, n: int, max_x_power: int = 4) -> ChowExpr:
    """A random monomial of grade 2n on M_n."""
    gens = []
    for i in range(1, n + 1):
        gens += [f"h{i}", f"k{i}", f"p{i}", f"w{i}"]
    gens += [f"x{a}_{b}" for b in range(2, n + 1) for a in range(1, b)]
    while True:
        out = ChowExpr.one(n)
        left = 2 * n
        while left > 0:
            name = rng.choice(gens)
            weight = 2 if name[0] in "pw" else 1
            if weight > left:
                continue
            if name[0] == "x" and rng.random() < 0.5:
                power = min(left, rng.randint(2, max_x_power))
                out = out * ChowExpr.gen(n, name) ** power
                left -= power
                continue
            out = out * ChowExpr.gen(n, name)
            left -= weight
        if not out.is_zero():
            return out


RULE_PROBES = {
    2: ["x1_2^2*h1^2", "x1_2^3*k1", "x1_2^3*h2", "x1_2^4", "x1_2^2*w2"],
    3: ["x1_2^2*x1_3^2*h1^2", "x2_3^3*x1_2*h1^2", "x1_3^4*p2", "x1_2^2*x2_3^4"],
}


def _checks(level: str, rules: Optional[BlowdownRules]) -> list[Callable[[], list[OracleReport]]]:
    full = level == "full"
    nmax = 4 if full else 3
    from .chow import from_string
    from .tau import InvariantContext, mixed_integrand, node_count, tau_of

    def enumeration():
        return [
            OracleReport("enumeration: pruned enumerator equals the exhaustive axiom filter", {"n": n}, brute_force_adm(n), enumerate_adm(n))
            for n in range(1, nmax + 1)
        ]

    def codim_dgt():
        out = []
        for n in range(1, nmax + 1):
            bad = [
                (str(g), i)
                for g in enumerate_adm(n)
                for i, e in enumerate(type_I_classes(g), 1)
                if len(g.descendents(i)) != -d_gt(e)
            ]
            out.append(OracleReport("relative canonical class: |J_i| = -d_GT(e_i) with K_rel = sum E_a", {"n": n}, [], bad))
        return out

    def round_trip():
        out = []
        for n in range(1, nmax + 2):
            bad = [str(g) for g in enumerate_adm(n) if graph_from_classes(type_I_classes(g)) != g]
            out.append(OracleReport("type-I classes determine the graph", {"n": n}, [], bad))
        return out

    def fiber_euler():
        return [
            OracleReport(
                "relative tangent classes and blowdown constants: fibre Euler number",
                {"n": n},
                UniversalPoly.linear(w=1) + UniversalPoly.const(n),
                fiber_euler_check(n, rules),
            )
            for n in range(0, 4)
        ]

    def delta_one():
        return [
            OracleReport(
                "blowdown sign and restricted reduction: delta=1 equals the jet discriminant",
                {"delta": 1},
                jet_discriminant_delta1(),
                node_count(1, rules=rules).poly,
            )
        ]

    def agreement():
        out = []
        rng = random.Random(20240611)
        count = 100 if full else 25
        for n in (2, 3):
            cases = [from_string(s, n) for s in RULE_PROBES[n]]
            cases += [random_top_monomial(rng, n) for _ in range(count)]
            bad = []
            for e in cases:
                if pushforward_to_point(e, n, rules) != alt_pushforward(e, n):
                    bad.append(str(e))
            out.append(OracleReport("blowup order and codimension-two blowdown: engine equals relation rewriting", {"n": n, "cases": len(cases)}, [], bad))
        return out

    def projection():
        rng = random.Random(7)
        bad = []
        for n in (2, 3):
            fiber_gens = [f"h{n}", f"k{n}"] + [f"x{a}_{n}" for a in range(1, n)]
            for _ in range(10 if full else 4):
                f = random_top_monomial(rng, n - 1)
                pair = rng.choice([[rng.choice(fiber_gens), rng.choice(fiber_gens)], [f"w{n}"], [f"p{n}"]])
                names: dict = {}
                e = ChowExpr.one(n)
                for nm in pair:
                    names[nm] = names.get(nm, 0) + 1
                    e = e * ChowExpr.gen(n, nm)
                lhs = pushforward_to_point(e * ChowExpr(n, f.terms), n, rules)
                rhs = fiber_degree(names, n) * pushforward_to_point(f, n - 1, rules)
                if lhs != rhs:
                    bad.append(f"{'*'.join(pair)} * ({f})")
        return [OracleReport("fibre lattice and projection formula", {"cases": 8 if not full else 20}, [], bad)]

    def two_strategy():
        m = MultiplicityVector.uniform(2)
        g = AdmissibleGraph.empty(2)
        expr = mixed_integrand(g, m)
        return [
            OracleReport(
                "section restriction of the line summand: delta=2 integrand under both evaluators",
                {"graph": str(g), "mult": str(m)},
                alt_pushforward(expr, 2),
                pushforward_to_point(expr, 2, rules),
            ),
            OracleReport(
                "tie-break independence: delta=2 with reversed canonical tie-break",
                {"delta": 2},
                node_count(2, rules=rules).poly,
                node_count(2, reverse_tie=True, rules=rules).poly,
            ),
        ]

    def orderings():
        out = []
        for n in range(1, nmax + 1):
            m = MultiplicityVector.uniform(n)
            ctx = OrderingContext(n, m)
            pairs = list(itertools.product(ctx.delta, ctx.delta))
            out.append(OracleReport("common-degeneration proxy: persistence implies cone inclusion", {"n": n}, [], [(str(a), str(b)) for a, b in pairs if ctx.gg(a, b) and not ctx.succ(a, b)]))
            out.append(OracleReport("common-degeneration proxy: persistence and breaking are exclusive", {"n": n}, [], [(str(a), str(b)) for a, b in pairs if ctx.gg(a, b) and ctx.sq(a, b)]))
            pos = ctx.position
            strict = [
                (str(a), str(b))
                for a, b in pairs
                if a != b and ctx.succ(a, b) and not ctx.succ(b, a) and pos[a] < pos[b]
            ]
            out.append(OracleReport("canonical tie-break: the linear order extends cone inclusion", {"n": n}, [], strict))
            out.append(OracleReport("canonical tie-break: gamma_n is last", {"n": n}, str(AdmissibleGraph.empty(n)), str(ctx.top)))
            if n >= 3:
                out.append(OracleReport("common-degeneration proxy: restriction of reduced index sets", {"n": n}, [], [(str(a), str(b)) for a, b, *_ in restriction_lemma_violations(ctx)]))
        return out

    def figures():
        m = MultiplicityVector.uniform(7)
        return [
            OracleReport("common-degeneration proxy: fig. 7 cone inclusion", {"pair": [str(FIG7_SMALL), str(FIG7_LARGE)]}, True, succ(FIG7_SMALL, FIG7_LARGE, m)),
            OracleReport("common-degeneration proxy: fig. 8 inserted graph", {"pair": [str(FIG7_SMALL), str(FIG7_LARGE)]}, str(FIG8_MIDDLE), str(intermediate_graph(FIG7_SMALL, FIG7_LARGE, m))),
            OracleReport(
                "common-degeneration proxy: inserted graph breaks then persists",
                {"middle": str(FIG8_MIDDLE)},
                [True, True],
                [sq(FIG7_SMALL, FIG8_MIDDLE, m), gg(FIG8_MIDDLE, FIG7_LARGE, m)],
            ),
        ]

    def tau_checks():
        out = []
        bad = []
        for n in range(1, nmax + 1):
            for mult in _mult_vectors(n):
                m = MultiplicityVector(mult)
                for g in enumerate_delta(n, m):
                    t = tau_of(g, m)
                    if not t.zero_flag and t.rank != expected_dimension_discrepancy(g, m):
                        bad.append((str(g), str(m)))
        out.append(OracleReport("rank of tau equals the expected-dimension discrepancy", {"n<=": nmax}, [], bad))
        vanish = []
        for d in range(1, 4):
            m = MultiplicityVector.uniform(d)
            for g in enumerate_delta(d, m):
                if g != AdmissibleGraph.empty(d) and not tau_of(g, m).zero_flag:
                    vanish.append(str(g))
        out.append(OracleReport("corrections vanish for delta <= 3", {"m": "2,...,2"}, [], vanish))
        return out

    return [enumeration, codim_dgt, round_trip, fiber_euler, delta_one, agreement, projection, two_strategy, orderings, figures, tau_checks]


def _mult_vectors(n: int):
    for combo in itertools.combinations_with_replacement((1, 2, 3), n):
        yield combo


def run_suite(level: str = "quick", rules: Optional[BlowdownRules] = None) -> list[OracleReport]:
    if level not in ("quick", "full"):
        raise ValueError("level must be 'quick' or 'full'")
    reports = []
    for check in _checks(level, rules):
        reports.extend(check())
    return sorted(reports, key=lambda r: (r.check, str(_jsonable(r.inputs))))
