"""Decomposable ruled surfaces P(O + O(D)) over a curve.

For ``X = P(O + O(D))`` with ``deg D = -e`` the pushforward of ``O(aC0)`` is
``O + O(D) + ... + O(aD)``, so ``h^0(aC0 + delta f)`` is a sum of curve
``h^0`` values. Everything else here is bookkeeping around that identity.
"""

from __future__ import annotations

from dataclasses import dataclass

from .curvebundle import (GENERIC_POINT, BaseCurve, CurveClassExpr, NeedsDeclaration,
                          h0_curve, reduce)
from .picard import (DivisorClass, PicardError, SurfaceModel, fiber_class,
                     numerically_equal)

__all__ = [
    "RuledPresentation",
    "c1_class",
    "h0_ruled",
    "antibicanonical_h0",
    "divisor_to_ruled",
    "h0_ruled_class",
    "linear_equivalent",
]


@dataclass(frozen=True)
class RuledPresentation:
    surface: SurfaceModel
    D_class: CurveClassExpr
    decomposable: bool = True

    def __post_init__(self):
        base = self.surface.base
        if base is None:
            raise PicardError("ruled presentation needs a base curve")
        if base.degree(self.D_class) != -self.surface.e_invariant:
            raise PicardError(
                f"deg D = {base.degree(self.D_class)} but e = {self.surface.e_invariant}")

    @classmethod
    def from_surface(cls, S: SurfaceModel) -> "RuledPresentation":
        if S.kind != "ruled" or S.bundle is None:
            raise PicardError("surface has no bundle presentation; declare one first")
        return cls(S, S.bundle, S.decomposable)

    @property
    def base(self) -> BaseCurve:
        return self.surface.base

    def _require_decomposable(self) -> None:
        if not self.decomposable:
            raise PicardError("only decomposable bundles are supported here")


def c1_class(P: RuledPresentation) -> DivisorClass:
    """The section ``C1 = C0 - D f``, disjoint from ``C0``."""
    P._require_decomposable()
    return DivisorClass.gen("C0") + fiber_class(P.surface, -P.D_class)


def h0_ruled(P: RuledPresentation, a: int, delta: CurveClassExpr) -> int | NeedsDeclaration:
    """``h^0(aC0 + delta f) = sum_{i=0}^{a} h^0(delta + iD)``."""
    P._require_decomposable()
    if a < 0:
        raise PicardError("h0_ruled needs a >= 0")
    total = 0
    for i in range(a + 1):
        h = h0_curve(P.base, delta + P.D_class * i)
        if isinstance(h, NeedsDeclaration):
            return h
        total += h
    return total


def antibicanonical_h0(P: RuledPresentation) -> dict[str, int | NeedsDeclaration]:
    """``h^0(-K)`` and ``h^0(-2K)``; ``-K = 2C0 - (K_Gamma + D) f``."""
    KD = P.base.canonical_expr() + P.D_class
    return {"-K": h0_ruled(P, 2, -KD), "-2K": h0_ruled(P, 4, KD * -2)}


def divisor_to_ruled(S: SurfaceModel, D: DivisorClass) -> tuple[int, CurveClassExpr]:
    """Split a class without exceptional part as ``aC0 + delta f``.

    The generic fibre ``f`` maps to the general-point symbol, so only the
    degree rules of the cascade apply to it.
    """
    a = 0
    pts: dict[str, int] = {}
    for name, c in D.coeffs:
        g = S.generator(name)
        if g.role == "section":
            a = c
        elif g.role == "fiber":
            pts[g.point] = pts.get(g.point, 0) + c
        else:
            raise PicardError(f"{D} has an exceptional component; push it down first")
    return a, CurveClassExpr.of(0, pts, D.torsion_dict())


def h0_ruled_class(P: RuledPresentation, D: DivisorClass) -> int | NeedsDeclaration:
    a, delta = divisor_to_ruled(P.surface, D)
    if a < 0:
        return 0
    return h0_ruled(P, a, delta)


def linear_equivalent(S: SurfaceModel, D1: DivisorClass, D2: DivisorClass) -> bool | None:
    """True/False when decidable, ``None`` when the base-curve class is unknown."""
    if not numerically_equal(S, D1, D2):
        return False
    if S.kind == "plane" or S.base_genus == 0:
        return True
    diff = D1 - D2
    pts: dict[str, int] = {}
    for name, c in diff.coeffs:
        g = S.generator(name)
        if g.role != "fiber":
            # numerically trivial combination of non-fibre generators cannot
            # occur, but stay conservative
            return None
        pts[g.point] = pts.get(g.point, 0) + c
    if pts.get(GENERIC_POINT):
        return None
    pts.pop(GENERIC_POINT, None)
    r = reduce(S.base, CurveClassExpr.of(0, pts, diff.torsion_dict()))
    if r.is_zero():
        return True
    if not r.points and len(r.torsion) == 1 and S.base.torsion(r.torsion[0][0]).nonzero:
        return False
    return None
