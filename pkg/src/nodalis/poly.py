"""Polynomials over Q in the surface numbers x = L^2, y = L.K, z = K^2, w = c_2."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

BASE_VARS = ("L2", "LK", "K2", "c2")


def fraction_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class UniversalPoly:
    """A polynomial with rational coefficients.

    ``vars`` always starts with the four surface numbers; parametric results
    append further symbols standing for integrals that cannot be evaluated.
    """

    terms: Mapping[tuple[int, ...], Fraction]
    vars: tuple[str, ...] = BASE_VARS

    def __post_init__(self):
        clean = {}
        for k, v in self.terms.items():
            k = tuple(k) + (0,) * (len(self.vars) - len(k))
            v = Fraction(v)
            if v:
                clean[k] = clean.get(k, Fraction(0)) + v
                if not clean[k]:
                    del clean[k]
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def zero(cls, vars: Sequence[str] = BASE_VARS) -> "UniversalPoly":
        return cls({}, tuple(vars))

    @classmethod
    def const(cls, c, vars: Sequence[str] = BASE_VARS) -> "UniversalPoly":
        return cls({(0,) * len(vars): Fraction(c)}, tuple(vars))

    @classmethod
    def var(cls, name: str, vars: Sequence[str] = BASE_VARS) -> "UniversalPoly":
        vars = tuple(vars)
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls({tuple(e): Fraction(1)}, vars)

    @classmethod
    def linear(cls, x=0, y=0, z=0, w=0) -> "UniversalPoly":
        return cls({(1, 0, 0, 0): x, (0, 1, 0, 0): y, (0, 0, 1, 0): z, (0, 0, 0, 1): w})

    def _aligned(self, other: "UniversalPoly"):
        if self.vars == other.vars:
            return self, other
        names = list(self.vars)
        for v in other.vars:
            if v not in names:
                names.append(v)
        return self.with_vars(names), other.with_vars(names)

    def with_vars(self, names: Sequence[str]) -> "UniversalPoly":
        names = tuple(names)
        idx = [names.index(v) for v in self.vars]
        out = {}
        for k, c in self.terms.items():
            e = [0] * len(names)
            for i, p in zip(idx, k):
                e[i] = p
            out[tuple(e)] = c
        return UniversalPoly(out, names)

    def __add__(self, other: "UniversalPoly") -> "UniversalPoly":
        a, b = self._aligned(other)
        out = dict(a.terms)
        for k, c in b.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return UniversalPoly(out, a.vars)

    def __neg__(self) -> "UniversalPoly":
        return UniversalPoly({k: -c for k, c in self.terms.items()}, self.vars)

    def __sub__(self, other: "UniversalPoly") -> "UniversalPoly":
        return self + (-other)

    def __mul__(self, other) -> "UniversalPoly":
        if not isinstance(other, UniversalPoly):
            return UniversalPoly({k: c * Fraction(other) for k, c in self.terms.items()}, self.vars)
        a, b = self._aligned(other)
        out = {}
        for k1, c1 in a.terms.items():
            for k2, c2 in b.terms.items():
                k = tuple(p + q for p, q in zip(k1, k2))
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return UniversalPoly(out, a.vars)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, UniversalPoly):
            return NotImplemented
        a, b = self._aligned(other)
        return a.terms == b.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {sum(k) for k in self.terms}

    def is_homogeneous(self, degree: int) -> bool:
        return all(sum(k) == degree for k in self.terms)

    @property
    def parametric(self) -> bool:
        extra = len(BASE_VARS)
        return any(any(k[extra:]) for k in self.terms)

    def extra_symbols(self) -> list[str]:
        extra = len(BASE_VARS)
        return [v for i, v in enumerate(self.vars[extra:], extra) if any(k[i] for k in self.terms)]

    def evaluate(self, values: Mapping[str, object]) -> Fraction:
        total = Fraction(0)
        for k, c in self.terms.items():
            term = c
            for name, p in zip(self.vars, k):
                if p:
                    term *= Fraction(values[name]) ** p
            total += term
        return total

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": {"(" + ",".join(map(str, k)) + ")": fraction_str(c) for k, c in self.terms.items()},
        }

    @classmethod
    def from_json(cls, data) -> "UniversalPoly":
        if isinstance(data, str):
            data = json.loads(data)
        vars = tuple(data.get("vars", BASE_VARS))
        terms = {}
        for k, v in data["terms"].items():
            exps = tuple(int(t) for t in k.strip("()").split(",") if t.strip())
            terms[exps] = Fraction(v)
        return cls(terms, vars)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = {"L2": "x", "LK": "y", "K2": "z", "c2": "w"}
        parts = []
        for k, c in sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-p for p in kv[0]))):
            mono = "*".join(
                (names.get(v, v) if p == 1 else f"{names.get(v, v)}^{p}") for v, p in zip(self.vars, k) if p
            )
            coeff = fraction_str(abs(c))
            if mono:
                body = mono if coeff == "1" else f"{coeff}*{mono}"
            else:
                body = coeff
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]
