"""Pairings against C - M(E)E, the special strata Delta(n) and exceptional cones."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .graphs import AdmissibleGraph, ExcClass, enumerate_adm, graph_from_classes, type_I_classes


class DomainError(ValueError):
    """An argument outside the operation's domain (e.g. a graph not in Delta(n))."""


@dataclass(frozen=True)
class MultiplicityVector:
    m: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(x) for x in self.m)
        if not m:
            raise ValueError("multiplicity vector must be nonempty")
        if any(x < 1 for x in m):
            raise ValueError(f"multiplicities must be positive, got {list(m)}")
        if any(a > b for a, b in zip(m, m[1:])):
            raise ValueError(f"multiplicities must be non-decreasing, got {list(m)}")
        object.__setattr__(self, "m", m)

    @classmethod
    def uniform(cls, n: int, value: int = 2) -> "MultiplicityVector":
        return cls((value,) * n)

    @classmethod
    def parse(cls, text: str) -> "MultiplicityVector":
        return cls(tuple(int(t) for t in text.split(",") if t.strip()))

    @property
    def n(self) -> int:
        return len(self.m)

    def __iter__(self):
        return iter(self.m)

    def __getitem__(self, i: int) -> int:
        return self.m[i - 1]

    def as_class(self) -> ExcClass:
        """M(E)E = sum m_i E_i."""
        return ExcClass(self.m)

    def __str__(self) -> str:
        return ",".join(map(str, self.m))


def pairing_with_target(e: ExcClass, m: MultiplicityVector) -> int:
    """e . (C - M(E)E)."""
    if e.n != m.n:
        raise ValueError("class and multiplicity vector disagree on n")
    return sum(mi * ci for mi, ci in zip(m, e.coeffs))


def negative_indices(g: AdmissibleGraph, m: MultiplicityVector) -> tuple[int, ...]:
    return tuple(i for i, e in enumerate(type_I_classes(g), 1) if pairing_with_target(e, m) < 0)


def special_condition(g: AdmissibleGraph, m: MultiplicityVector) -> bool:
    if g.n != m.n:
        raise ValueError("graph and multiplicity vector disagree on n")
    return all(pairing_with_target(e, m) < 0 or e.square() == -1 for e in type_I_classes(g))


def enumerate_delta(n: int, m: MultiplicityVector) -> list[AdmissibleGraph]:
    if m.n != n:
        raise ValueError("len(m) must equal n")
    return [g for g in enumerate_adm(n) if special_condition(g, m)]


# ---------------------------------------------------------------------------
# cones


@dataclass(frozen=True)
class ExcCone:
    n: int
    generators: tuple[ExcClass, ...]

    def to_json(self) -> dict:
        return {"n": self.n, "generators": [list(g.coeffs) for g in self.generators]}

    @classmethod
    def from_json(cls, data: dict) -> "ExcCone":
        n = int(data["n"])
        return cls(n, tuple(ExcClass(tuple(int(x) for x in g)) for g in data["generators"]))


def cone_of(g: AdmissibleGraph, m: Optional[MultiplicityVector] = None) -> ExcCone:
    """The exceptional cone of a stratum: all of its type-I classes, -1 classes included."""
    if m is not None and not special_condition(g, m):
        raise DomainError(f"{g} is not in Delta({g.n}) for m=({m})")
    return ExcCone(g.n, tuple(type_I_classes(g)))


def solve_exact(columns: Sequence[Sequence[int]], target: Sequence[int]) -> Optional[list[Fraction]]:
    """Solve sum_j x_j columns[j] = target over Q.

    Returns None when the system is inconsistent.  The columns must be
    linearly independent.
    """
    rows = len(target)
    k = len(columns)
    a = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            raise DomainError("cone generators are linearly dependent")
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    if any(a[i][k] != 0 for i in range(r, rows)):
        return None
    return [a[i][k] for i in range(k)]


def decompose_in_cone(v: ExcClass, cone: ExcCone) -> Optional[tuple[Fraction, ...]]:
    """Coefficients of v in the generators, or None if v is not in the cone."""
    coeffs = solve_exact([g.coeffs for g in cone.generators], v.coeffs)
    if coeffs is None or any(c < 0 for c in coeffs):
        return None
    return tuple(coeffs)


def cone_contains(inner: ExcCone, outer: ExcCone) -> bool:
    """True when ``inner`` is a subset of ``outer``."""
    return all(decompose_in_cone(g, outer) is not None for g in inner.generators)


def stratum_assignment(negclasses: Iterable[ExcClass], m: MultiplicityVector) -> AdmissibleGraph:
    """The graph whose non -1 classes are exactly ``negclasses``."""
    n = m.n
    classes = [ExcClass.basis(n, i) for i in range(1, n + 1)]
    for e in negclasses:
        if e.n != n:
            raise ValueError("class and multiplicity vector disagree on n")
        if pairing_with_target(e, m) >= 0:
            raise DomainError(f"{e} does not pair negatively with C - M(E)E")
        i = e.leading_index()
        if i == 0 or classes[i - 1] != ExcClass.basis(n, i):
            raise DomainError(f"two input classes share the leading index {i}")
        classes[i - 1] = e
    return graph_from_classes(classes)
