"""Divisor classes on the base curve of a ruled surface.

Expressions are integer combinations of ``K`` (the canonical class), named
points and torsion symbols. Cohomology is computed by a fixed rule cascade;
anything the cascade cannot decide must be supplied as a declared fact, so
special divisors never get a silently wrong ``h^0``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Mapping

__all__ = [
    "CurveClassExpr",
    "TorsionRelation",
    "BaseCurve",
    "NeedsDeclaration",
    "Positivity",
    "CurveError",
    "degree",
    "reduce",
    "h0_curve",
    "h1_curve",
    "rr_curve",
    "positivity_degree_check",
    "GENERIC_POINT",
]

GENERIC_POINT = "*"


class CurveError(ValueError):
    pass


def _norm(d: Mapping[str, int]) -> tuple[tuple[str, int], ...]:
    return tuple(sorted((k, v) for k, v in d.items() if v))


@dataclass(frozen=True)
class CurveClassExpr:
    k: int = 0
    points: tuple[tuple[str, int], ...] = ()
    torsion: tuple[tuple[str, int], ...] = ()

    @classmethod
    def of(cls, k: int = 0, points: Mapping[str, int] | None = None,
           torsion: Mapping[str, int] | None = None) -> "CurveClassExpr":
        return cls(k, _norm(points or {}), _norm(torsion or {}))

    @classmethod
    def point(cls, name: str, mult: int = 1) -> "CurveClassExpr":
        return cls.of(points={name: mult})

    @classmethod
    def tors(cls, name: str, mult: int = 1) -> "CurveClassExpr":
        return cls.of(torsion={name: mult})

    @classmethod
    def canonical(cls, mult: int = 1) -> "CurveClassExpr":
        return cls.of(k=mult)

    def _lin(self, other: "CurveClassExpr", s: int) -> "CurveClassExpr":
        pts, tor = dict(self.points), dict(self.torsion)
        for p, c in other.points:
            pts[p] = pts.get(p, 0) + s * c
        for t, c in other.torsion:
            tor[t] = tor.get(t, 0) + s * c
        return CurveClassExpr.of(self.k + s * other.k, pts, tor)

    def __add__(self, other):
        if not isinstance(other, CurveClassExpr):
            return NotImplemented
        return self._lin(other, 1)

    def __sub__(self, other):
        if not isinstance(other, CurveClassExpr):
            return NotImplemented
        return self._lin(other, -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, m: int):
        if not isinstance(m, int):
            return NotImplemented
        return CurveClassExpr.of(self.k * m, {p: c * m for p, c in self.points},
                                 {t: c * m for t, c in self.torsion})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.k == 0 and not self.points and not self.torsion

    def __str__(self) -> str:
        terms = []
        if self.k:
            terms.append((self.k, "K"))
        terms += [(c, p) for p, c in self.points]
        terms += [(c, f"<{t}>") for t, c in self.torsion]
        if not terms:
            return "0"
        out = ""
        for c, name in terms:
            sign = "-" if c < 0 else ("+" if out else "")
            out += f"{sign}{'' if abs(c) == 1 else abs(c)}{name}"
        return out


@dataclass(frozen=True)
class TorsionRelation:
    """A torsion class of exact order ``order``.

    ``definition`` optionally expresses it through named points (as
    ``alpha - beta`` on an elliptic curve); otherwise it is a bare symbol.
    """

    name: str
    order: int
    nonzero: bool = True
    definition: CurveClassExpr | None = None


@dataclass(frozen=True)
class NeedsDeclaration:
    """Result for a class outside the rule cascade; not an error."""

    expr: CurveClassExpr
    reason: str = "outside the degree rules; declare h0 as a fact"

    def __str__(self) -> str:
        return f"NeedsDeclaration({self.expr}: {self.reason})"


class Positivity(enum.Enum):
    UNKNOWN = 0
    BASE_POINT_FREE = 1
    VERY_AMPLE = 2


@dataclass(frozen=True)
class BaseCurve:
    genus: int
    points: tuple[str, ...] = ()
    torsion_relations: tuple[TorsionRelation, ...] = ()
    declared_facts: tuple[tuple[CurveClassExpr, int, str], ...] = ()
    hyperelliptic: bool | None = None
    has_g14: bool | None = None

    def canonical_expr(self) -> CurveClassExpr:
        return CurveClassExpr.canonical()

    def degree(self, e: CurveClassExpr) -> int:
        return e.k * (2 * self.genus - 2) + sum(c for _, c in e.points)

    def torsion(self, name: str) -> TorsionRelation:
        for t in self.torsion_relations:
            if t.name == name:
                return t
        raise CurveError(f"undeclared torsion symbol {name!r}")

    def with_point(self, name: str) -> "BaseCurve":
        if name in self.points:
            return self
        return replace(self, points=self.points + (name,))

    def with_torsion(self, name: str, order: int, nonzero: bool = True,
                     definition: CurveClassExpr | None = None) -> "BaseCurve":
        if order < 2:
            raise CurveError("torsion order must be at least 2")
        if any(t.name == name for t in self.torsion_relations):
            raise CurveError(f"torsion symbol {name!r} already declared")
        if definition is not None:
            if definition.torsion or self.degree(definition) != 0:
                raise CurveError("a torsion definition must be a degree-0 combination of points")
            for p, _ in definition.points:
                if p not in self.points:
                    raise CurveError(f"unknown point {p!r}")
        return replace(self, torsion_relations=self.torsion_relations
                       + (TorsionRelation(name, order, nonzero, definition),))

    def with_fact(self, e: CurveClassExpr, h0: int, why: str) -> "BaseCurve":
        e = reduce(self, e)
        d = self.degree(e)
        if h0 < 0 or (d >= 0 and h0 > d + 1) or (d < 0 and h0 != 0):
            raise CurveError(f"declared h0={h0} impossible for degree {d}")
        return replace(self, declared_facts=self.declared_facts + ((e, h0, why),))

    def check(self, e: CurveClassExpr) -> None:
        for p, _ in e.points:
            if p != GENERIC_POINT and p not in self.points:
                raise CurveError(f"unknown point {p!r}")
        for t, _ in e.torsion:
            self.torsion(t)


def degree(curve: BaseCurve, e: CurveClassExpr) -> int:
    return curve.degree(e)


def reduce(curve: BaseCurve, e: CurveClassExpr) -> CurveClassExpr:
    """Normal form modulo the declared torsion relations.

    Point combinations that are whole multiples of a torsion definition are
    replaced by the torsion symbol; torsion coefficients are taken modulo the
    order. On an elliptic curve ``K`` is trivial and is dropped.
    """
    curve.check(e)
    k = 0 if curve.genus == 1 else e.k
    pts, tor = dict(e.points), dict(e.torsion)
    for rel in curve.torsion_relations:
        d = rel.definition
        if d is None:
            continue
        (p0, c0) = d.points[0]
        n, rem = divmod(pts.get(p0, 0), c0)
        if n == 0 or rem:
            continue
        if all(pts.get(p, 0) == n * c for p, c in d.points):
            for p, c in d.points:
                pts[p] -= n * c
            tor[rel.name] = tor.get(rel.name, 0) + n
    for rel in curve.torsion_relations:
        if rel.name in tor:
            tor[rel.name] %= rel.order
    return CurveClassExpr.of(k, pts, tor)


def _nonzero_torsion(curve: BaseCurve, e: CurveClassExpr) -> bool:
    """True when ``e`` (reduced) is a single declared-nonzero torsion class."""
    if len(e.torsion) != 1 or e.points:
        return False
    name, _ = e.torsion[0]
    return curve.torsion(name).nonzero


def h0_curve(curve: BaseCurve, e: CurveClassExpr) -> int | NeedsDeclaration:
    """``h^0(O(e))`` by the rule cascade, then declared facts."""
    e = reduce(curve, e)
    q = curve.genus
    d = curve.degree(e)
    if d < 0:
        return 0
    if d > 2 * q - 2:
        return d + 1 - q
    if d == 0:
        if q == 0 or e.is_zero():
            return 1
        if e.k == 0 and _nonzero_torsion(curve, e):
            return 0
    if d == 2 * q - 2 and q >= 2:
        if e == CurveClassExpr.canonical():
            return q
        if e.k == 1 and _nonzero_torsion(curve, replace(e, k=0)):
            return q - 1
    for fact, value, _ in curve.declared_facts:
        if fact == e:
            return value
    return NeedsDeclaration(e)


def h1_curve(curve: BaseCurve, e: CurveClassExpr) -> int | NeedsDeclaration:
    """Serre duality: ``h^1(e) = h^0(K - e)``."""
    return h0_curve(curve, CurveClassExpr.canonical() - e)


def rr_curve(curve: BaseCurve, e: CurveClassExpr) -> int:
    """``h^0 - h^1 = deg + 1 - g``; checked against the cascade when both are known."""
    chi = curve.degree(e) + 1 - curve.genus
    h0, h1 = h0_curve(curve, e), h1_curve(curve, e)
    if isinstance(h0, int) and isinstance(h1, int) and h0 - h1 != chi:
        raise CurveError(f"Riemann-Roch violated for {e}: h0={h0}, h1={h1}, chi={chi}")
    return chi


def positivity_degree_check(curve: BaseCurve, e: CurveClassExpr) -> Positivity:
    d = curve.degree(e)
    q = curve.genus
    if d >= 2 * q + 1:
        return Positivity.VERY_AMPLE
    if d >= 2 * q:
        return Positivity.BASE_POINT_FREE
    return Positivity.UNKNOWN
