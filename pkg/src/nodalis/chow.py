"""Intersection calculus on the universal spaces M_n over a symbolic surface M.

M_n is built from M_{n-1} x M by blowing up, in increasing order of a, the
strict transforms of the sections Z_a = {p_n = p_a}.  Classes are polynomials
in

* h_i, k_i, p_i, w_i : pullbacks of L, K_M, [pt] and c_2(TM) from the i-th
  factor (codimension 1, 1, 2, 2);
* x_a_b             : the total transform E_{a;b} of the exceptional divisor
  of the blowup along Z_a at stage b (codimension 1);
* q_j               : optional formal degree-one parameters that the engine
  refuses to integrate.

Integration over M_n is a recursion on n.  A monomial without any x_a_n
splits as (class on M_{n-1}) * (class on the n-th factor) and integrates
factorwise.  Otherwise let a be the largest index with x_a_n present and e
its exponent; pushing down the blowup along Z_a gives

    p_*(E^e * rest) = (-1)^(e-1) * s_{e-2}(N_a) * rest|_{Z_a}

(zero for e = 1), where Z_a is identified with M_{n-1} and N_a is the
relative tangent bundle of M_a -> M_{a-1}:

    c_1(N_a) = -k_a - sum_{c<a} x_c_a,   c_2(N_a) = w_a - sum_{c<a} x_c_a^2.

Restricting to Z_a sends the n-th factor classes to the a-th factor classes
and x_c_n to x_c_a.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional

import sympy
from sympy.polys.polyfuncs import symmetrize

from .cones import MultiplicityVector
from .graphs import AdmissibleGraph
from .poly import UniversalPoly, fraction_str

# generator codes -----------------------------------------------------------
# factor generators: 4*(i-1) + t with t = 0 (h), 1 (k), 2 (p), 3 (w)
# exceptional generators: X_BASE + (b-1)(b-2)/2 + (a-1) for x_a_b
# parameters: Q_BASE + j

X_BASE = 1_000
Q_BASE = 100_000
FACTOR_NAMES = "hkpw"
FACTOR_DEG = (1, 1, 2, 2)

Mono = tuple  # sorted tuple of (code, exponent)


class IntegrationError(RuntimeError):
    """A monomial pattern the integration rules cannot eliminate."""


def fcode(i: int, t: int) -> int:
    return 4 * (i - 1) + t


def xcode(a: int, b: int) -> int:
    if not 1 <= a < b:
        raise ValueError(f"x_{a}_{b} needs 1 <= a < b")
    return X_BASE + (b - 1) * (b - 2) // 2 + (a - 1)


def qcode(j: int) -> int:
    return Q_BASE + j


@lru_cache(maxsize=None)
def decode(code: int) -> tuple:
    if code >= Q_BASE:
        return ("q", code - Q_BASE)
    if code >= X_BASE:
        r = code - X_BASE
        b = 2
        while (b - 1) * b // 2 <= r:
            b += 1
        a = r - (b - 1) * (b - 2) // 2 + 1
        return ("x", a, b)
    i, t = divmod(code, 4)
    return (FACTOR_NAMES[t], i + 1)


@lru_cache(maxsize=None)
def code_degree(code: int) -> int:
    if code >= X_BASE:
        return 1
    return FACTOR_DEG[code % 4]


def code_name(code: int) -> str:
    d = decode(code)
    if d[0] == "x":
        return f"x{d[1]}_{d[2]}"
    return f"{d[0]}{d[1]}"


def parse_generator(name: str) -> int:
    m = re.fullmatch(r"x(\d+)_(\d+)", name)
    if m:
        return xcode(int(m.group(1)), int(m.group(2)))
    m = re.fullmatch(r"([hkpwq])(\d+)", name)
    if not m:
        raise ValueError(f"unknown generator {name!r}")
    if m.group(1) == "q":
        return qcode(int(m.group(2)))
    return fcode(int(m.group(2)), FACTOR_NAMES.index(m.group(1)))


def mono_degree(mono: Mono) -> int:
    return sum(code_degree(c) * e for c, e in mono)


def mono_mul(m1: Mono, m2: Mono) -> Mono:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for c, e in m2:
        d[c] = d.get(c, 0) + e
    return tuple(sorted(d.items()))


def _factor_ok(mono: Mono) -> bool:
    deg: dict[int, int] = {}
    for c, e in mono:
        if c < X_BASE:
            i = c // 4
            deg[i] = deg.get(i, 0) + FACTOR_DEG[c % 4] * e
            if deg[i] > 2:
                return False
    return True


# expressions ----------------------------------------------------------------


class ChowExpr:
    """A Q-linear combination of monomials on M_n (immutable by convention)."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[Mapping[Mono, Fraction]] = None):
        self.n = n
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = Fraction(c)
        self.terms: dict[Mono, Fraction] = clean

    # constructors
    @classmethod
    def one(cls, n: int) -> "ChowExpr":
        return cls(n, {(): Fraction(1)})

    @classmethod
    def zero(cls, n: int) -> "ChowExpr":
        return cls(n)

    @classmethod
    def gen(cls, n: int, name: str) -> "ChowExpr":
        return cls(n, {((parse_generator(name), 1),): Fraction(1)})

    @classmethod
    def h(cls, n, i):
        return cls(n, {((fcode(i, 0), 1),): Fraction(1)})

    @classmethod
    def k(cls, n, i):
        return cls(n, {((fcode(i, 1), 1),): Fraction(1)})

    @classmethod
    def p(cls, n, i):
        return cls(n, {((fcode(i, 2), 1),): Fraction(1)})

    @classmethod
    def w(cls, n, i):
        return cls(n, {((fcode(i, 3), 1),): Fraction(1)})

    @classmethod
    def x(cls, n, a, b):
        return cls(n, {((xcode(a, b), 1),): Fraction(1)})

    @classmethod
    def q(cls, n, j):
        return cls(n, {((qcode(j), 1),): Fraction(1)})

    @property
    def dim(self) -> int:
        return 2 * self.n

    def __add__(self, other):
        if not isinstance(other, ChowExpr):
            other = ChowExpr(self.n, {(): Fraction(other)})
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return ChowExpr(max(self.n, other.n), out)

    __radd__ = __add__

    def __neg__(self):
        return ChowExpr(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, ChowExpr):
            other = ChowExpr(self.n, {(): Fraction(other)})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ChowExpr):
            f = Fraction(other)
            return ChowExpr(self.n, {m: c * f for m, c in self.terms.items()})
        return multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = ChowExpr.one(self.n)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, ChowExpr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def grade(self, d: int) -> "ChowExpr":
        return ChowExpr(self.n, {m: c for m, c in self.terms.items() if mono_degree(m) == d})

    def grades(self) -> set[int]:
        return {mono_degree(m) for m in self.terms}

    def truncate(self, top: int) -> "ChowExpr":
        return ChowExpr(self.n, {m: c for m, c in self.terms.items() if mono_degree(m) <= top})

    def uses_parameters(self) -> bool:
        return any(c >= Q_BASE for m in self.terms for c, _ in m)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda kv: (mono_degree(kv[0]), kv[0])):
            body = "*".join(code_name(g) if e == 1 else f"{code_name(g)}^{e}" for g, e in m)
            coeff = fraction_str(abs(c))
            if not body:
                text = coeff
            elif coeff == "1":
                text = body
            else:
                text = f"{coeff}*{body}"
            parts.append(("- " if c < 0 else "+ ") + text)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    __repr__ = __str__


def multiply(e1: ChowExpr, e2: ChowExpr) -> ChowExpr:
    """Product with everything above the dimension of M_n dropped."""
    n = max(e1.n, e2.n)
    top = 2 * n
    out: dict[Mono, Fraction] = {}
    deg2 = [(m, c, mono_degree(m)) for m, c in e2.terms.items()]
    for m1, c1 in e1.terms.items():
        d1 = mono_degree(m1)
        for m2, c2, d2 in deg2:
            if d1 + d2 > top:
                continue
            m = mono_mul(m1, m2)
            if not _factor_ok(m):
                continue
            out[m] = out.get(m, Fraction(0)) + c1 * c2
    return ChowExpr(n, out)


def product(factors: Iterable[ChowExpr], n: int) -> ChowExpr:
    out = ChowExpr.one(n)
    for f in factors:
        out = multiply(out, f)
    return out


# blowdown rules ---------------------------------------------------------------


@dataclass(frozen=True)
class BlowdownRules:
    """The four constants of the codimension-two blowdown formula.

    p_*(E^2) = square * [Z];  p_*(E^(j+2)) = square * ratio^j * s_j(N) [Z];
    s_j = segre_c1 * c_1 * s_(j-1) + segre_c2 * c_2 * s_(j-2).
    """

    square: int = -1
    ratio: int = -1
    segre_c1: int = -1
    segre_c2: int = -1


STANDARD_RULES = BlowdownRules()


@lru_cache(maxsize=None)
def normal_chern(a: int) -> tuple[ChowExpr, ChowExpr]:
    """(c_1, c_2) of the relative tangent bundle of M_a -> M_(a-1)."""
    c1 = -ChowExpr.k(a, a)
    c2 = ChowExpr.w(a, a)
    for c in range(1, a):
        x = ChowExpr.x(a, c, a)
        c1 = c1 - x
        c2 = c2 - x * x
    return c1, c2


@lru_cache(maxsize=None)
def segre(j: int, a: int, rules: BlowdownRules = STANDARD_RULES) -> ChowExpr:
    if j < 0:
        return ChowExpr.zero(a)
    if j == 0:
        return ChowExpr.one(a)
    c1, c2 = normal_chern(a)
    out = c1 * segre(j - 1, a, rules) * rules.segre_c1
    if j >= 2:
        out = out + c2 * segre(j - 2, a, rules) * rules.segre_c2
    return out


def restrict_to_section(mono: Mono, a: int, n: int) -> Optional[Mono]:
    """Restrict a monomial without x_c_n (c >= a) along the section Z_a."""
    out: dict[int, int] = {}
    for c, e in mono:
        if c < X_BASE:
            i, t = divmod(c, 4)
            if i + 1 == n:
                c = fcode(a, t)
        elif c < Q_BASE:
            _, lo, hi = decode(c)
            if hi == n:
                if lo >= a:
                    raise IntegrationError(f"x{lo}_{hi} survives the restriction to Z_{a}")
                c = xcode(lo, a)
        else:
            raise IntegrationError("parameter classes cannot be restricted")
        out[c] = out.get(c, 0) + e
    m = tuple(sorted(out.items()))
    return m if _factor_ok(m) else None


FACTOR_INTEGRALS = {
    ((0, 2),): UniversalPoly.linear(x=1),
    ((0, 1), (1, 1)): UniversalPoly.linear(y=1),
    ((1, 2),): UniversalPoly.linear(z=1),
    ((2, 1),): UniversalPoly.const(1),
    ((3, 1),): UniversalPoly.linear(w=1),
}


def factor_integral(parts: Mono) -> UniversalPoly:
    """Integral over M of a monomial in h, k, p, w (given by type index)."""
    if mono_degree(tuple((t, e) for t, e in parts)) != 2:
        return UniversalPoly.zero()
    return FACTOR_INTEGRALS[parts]


class Integrator:
    """Memoised integration over M_n for a fixed rule table."""

    def __init__(self, rules: BlowdownRules = STANDARD_RULES):
        self.rules = rules
        self._cache: dict[tuple, UniversalPoly] = {}

    def integrate(self, expr: ChowExpr, n: Optional[int] = None) -> UniversalPoly:
        n = expr.n if n is None else n
        total = UniversalPoly.zero()
        for m, c in expr.terms.items():
            if mono_degree(m) != 2 * n:
                continue
            v = self.mono(m, n)
            if not v.is_zero():
                total = total + v * c
        return total

    def mono(self, mono: Mono, n: int) -> UniversalPoly:
        key = (mono, n)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._mono(mono, n)
            self._cache[key] = hit
        return hit

    def _mono(self, mono: Mono, n: int) -> UniversalPoly:
        if mono_degree(mono) != 2 * n:
            return UniversalPoly.zero()
        if n == 0:
            return UniversalPoly.const(1)
        top = None
        for c, e in mono:
            if c >= Q_BASE:
                raise IntegrationError("parameter classes cannot be integrated")
            if c >= X_BASE:
                _, lo, hi = decode(c)
                if hi > n:
                    raise IntegrationError(f"x{lo}_{hi} does not live on M_{n}")
                if hi == n and (top is None or lo > top[0]):
                    top = (lo, c, e)
            elif c // 4 + 1 > n:
                raise IntegrationError(f"{code_name(c)} does not live on M_{n}")
        if top is None:
            lo_c, hi_c = fcode(n, 0), fcode(n, 3)
            fpart = tuple((c - lo_c, e) for c, e in mono if lo_c <= c <= hi_c)
            rest = tuple((c, e) for c, e in mono if not lo_c <= c <= hi_c)
            f = factor_integral(fpart)
            if f.is_zero():
                return f
            return f * self.mono(rest, n - 1)
        a, code, e = top
        if e == 1:
            return UniversalPoly.zero()
        rest = tuple((c, k) for c, k in mono if c != code)
        res = restrict_to_section(rest, a, n)
        if res is None:
            return UniversalPoly.zero()
        sign = self.rules.square * self.rules.ratio ** (e - 2)
        total = UniversalPoly.zero()
        for sm, sc in segre(e - 2, a, self.rules).terms.items():
            m = mono_mul(sm, res)
            if not _factor_ok(m):
                continue
            v = self.mono(m, n - 1)
            if not v.is_zero():
                total = total + v * (sc * sign)
        return total


_DEFAULT = Integrator()


def pushforward_to_point(expr: ChowExpr, n: Optional[int] = None, rules: Optional[BlowdownRules] = None) -> UniversalPoly:
    """Integral over M_n of the degree-2n part of ``expr``."""
    integ = _DEFAULT if rules is None or rules == STANDARD_RULES else Integrator(rules)
    return integ.integrate(expr, n)


# named classes --------------------------------------------------------------


def class_of_stratum(g: AdmissibleGraph) -> ChowExpr:
    """[Y(g)] as a class of codimension codim(g) on M_n."""
    n = g.n
    out = ChowExpr.one(n)
    for k in range(1, n + 1):
        js = g.descendents(k)
        for s, j in enumerate(js):
            f = ChowExpr.x(n, k, j)
            for r in js[:s]:
                f = f - ChowExpr.x(n, r, j)
            out = out * f
    return out


@lru_cache(maxsize=None)
def _symmetric_total_chern(m: int) -> tuple:
    """Coefficients of prod_{i+j<=m-1} (1 + l + i a + j b) in (l, a+b, ab).

    These are the Chern roots of l tensor S^(m-1)(O + V) for a rank-two V
    with roots a, b.
    """
    lam, a, b = sympy.symbols("lam a b")
    expr = sympy.Integer(1)
    for i in range(m):
        for j in range(m - i):
            expr *= 1 + lam + i * a + j * b
    sym, rem, (pair1, pair2) = symmetrize(sympy.expand(expr), a, b, formal=True)
    assert rem == 0 and pair1[1] == a + b and pair2[1] == a * b
    poly = sympy.Poly(sym, lam, pair1[0], pair2[0])
    return tuple((mon, int(c)) for mon, c in poly.terms())


def obstruction_total_chern(n: int, m: MultiplicityVector) -> ChowExpr:
    """Total Chern class of the relative obstruction bundle U on M_n."""
    if m.n != n:
        raise ValueError("len(m) must equal n")
    top = 2 * n
    out = ChowExpr.one(n)
    for l in range(1, n + 1):
        lam = ChowExpr.h(n, l)
        e1 = ChowExpr.k(n, l)
        e2 = ChowExpr.w(n, l)
        for a in range(1, l):
            x = ChowExpr.x(n, a, l)
            lam = lam - x * m[a]
            e1 = e1 + x
            e2 = e2 - x * x
        powers = {}

        def pw(base, key, k):
            if (key, k) not in powers:
                powers[(key, k)] = (base ** k).truncate(top)
            return powers[(key, k)]

        summand = ChowExpr.zero(n)
        for (pl, p1, p2), c in _symmetric_total_chern(m[l]):
            term = pw(lam, "l", pl) * pw(e1, "1", p1) * pw(e2, "2", p2)
            summand = summand + term * c
        out = multiply(out, summand)
    return out


def fiber_euler_check(n: int, rules: Optional[BlowdownRules] = None) -> UniversalPoly:
    """Fibre integral of c_2 of the relative tangent of M_(n+1) -> M_n.

    Integrates c_2(T_rel) * p_1 ... p_n over M_(n+1); the answer is the
    Euler number w + n of M blown up at n points.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    N = n + 1
    c2 = ChowExpr.w(N, N)
    for a in range(1, N):
        x = ChowExpr.x(N, a, N)
        c2 = c2 - x * x
    pts = ChowExpr.one(N)
    for i in range(1, N):
        pts = pts * ChowExpr.p(N, i)
    return pushforward_to_point(c2 * pts, N, rules)


def pullback(expr: ChowExpr, n: int) -> ChowExpr:
    """View a class on M_k as a class on M_n (n >= k) via the tower projection."""
    if n < expr.n:
        raise ValueError("can only pull back to a larger n")
    return ChowExpr(n, expr.terms)


def from_string(text: str, n: int) -> ChowExpr:
    """Parse sums of products such as '3*h1^2 - x1_2*k2 + 1/2*p1'."""
    text = text.replace(" ", "")
    if not text:
        return ChowExpr.zero(n)
    out = ChowExpr.zero(n)
    for sign, body in re.findall(r"([+-]?)([^+-]+)", text):
        term = ChowExpr.one(n) * (-1 if sign == "-" else 1)
        for factor in body.split("*"):
            if re.fullmatch(r"\d+(/\d+)?", factor):
                term = term * Fraction(factor)
                continue
            base, _, exp = factor.partition("^")
            term = term * ChowExpr.gen(n, base) ** (int(exp) if exp else 1)
        out = out + term
    return out
