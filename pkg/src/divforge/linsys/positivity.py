"""Nef and big certificates, fixed-part peeling and the bounded Reider search."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from ..curvebundle import NeedsDeclaration
from ..picard import CurveRecord, DivisorClass, SurfaceModel, intersect, numerically_equal

__all__ = [
    "CertKind",
    "Certificate",
    "PositivityError",
    "nef_on_effective",
    "big_check",
    "PeelResult",
    "fixed_part_peel",
    "NoObstruction",
    "Witness",
    "reider_search",
]


class PositivityError(ValueError):
    pass


class CertKind(enum.Enum):
    Nef = "Nef"
    Big = "Big"
    FixedPart = "FixedPart"
    BasePointFree = "BasePointFree"
    Separation = "Separation"


@dataclass(frozen=True)
class Certificate:
    """Itemized evidence; ``recheck`` recomputes every item from the model."""

    kind: CertKind
    subject: DivisorClass
    items: tuple[tuple[str, DivisorClass, int, int], ...]  # name, class, mult, value
    conclusion: bool

    def recheck(self, S: SurfaceModel) -> bool:
        if self.kind is CertKind.Nef:
            values = [intersect(S, self.subject, cls) for _, cls, _, _ in self.items]
            if values != [v for *_, v in self.items]:
                return False
            total = DivisorClass()
            for _, cls, m, _ in self.items:
                total = total + cls * m
            return numerically_equal(S, total, self.subject) and \
                self.conclusion == all(v >= 0 for v in values)
        if self.kind is CertKind.Big:
            (_, _, _, sq), (_, _, _, nef) = self.items
            return sq == intersect(S, self.subject, self.subject) and \
                self.conclusion == (sq > 0 and nef == 1)
        raise PositivityError(f"no recheck for {self.kind}")

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "subject": str(self.subject),
            "items": [{"name": n, "class": str(c), "mult": m, "value": v}
                      for n, c, m, v in self.items],
            "conclusion": self.conclusion,
        }


def nef_on_effective(S: SurfaceModel, D: DivisorClass,
                     decomposition: Sequence[tuple[CurveRecord, int]]) -> Certificate:
    """``D`` is nef if it meets every irreducible component of an effective
    representative nonnegatively; curves outside the support meet it
    nonnegatively anyway.
    """
    total = DivisorClass()
    for rec, m in decomposition:
        if m <= 0:
            raise PositivityError(f"multiplicity of {rec.name} must be positive")
        if not rec.irreducible:
            raise PositivityError(f"component {rec.name} is not declared irreducible")
        total = total + rec.cls * m
    if not numerically_equal(S, total, D):
        raise PositivityError(f"decomposition sums to {total}, not numerically {D}")
    items = tuple((rec.name, rec.cls, m, intersect(S, D, rec.cls)) for rec, m in decomposition)
    return Certificate(CertKind.Nef, D, items, all(v >= 0 for *_, v in items))


def big_check(S: SurfaceModel, D: DivisorClass, nef_cert: Certificate) -> Certificate:
    """A nef class is big iff its self-intersection is positive."""
    if nef_cert.kind is not CertKind.Nef or nef_cert.subject != D:
        raise PositivityError("big_check needs the nef certificate of the same class")
    sq = intersect(S, D, D)
    items = (("D^2", D, 1, sq), ("nef", D, 1, int(nef_cert.conclusion)))
    return Certificate(CertKind.Big, D, items, nef_cert.conclusion and sq > 0)


@dataclass(frozen=True)
class PeelResult:
    fixed: DivisorClass
    mobile: DivisorClass
    trace: tuple[str, ...]
    multiplicities: tuple[tuple[str, int], ...]


def fixed_part_peel(S: SurfaceModel, M: DivisorClass, candidates: Sequence[CurveRecord],
                    max_mult: int = 64) -> PeelResult:
    """Subtract irreducible curves that the residual meets negatively.

    If ``current.N < 0`` for an irreducible curve ``N`` then ``N`` lies in
    every member of ``|current|``, so it is part of the fixed part of ``|M|``.
    The most negative candidate goes first; ties follow declaration order.
    """
    current = M
    mult = {c.name: 0 for c in candidates}
    trace = []
    while True:
        best = None
        for i, c in enumerate(candidates):
            v = intersect(S, current, c.cls)
            if v < 0 and (best is None or v < best[0]):
                best = (v, i, c)
        if best is None:
            break
        v, _, c = best
        mult[c.name] += 1
        if mult[c.name] > max_mult:
            raise PositivityError(f"peeling diverges on {c.name} (multiplicity > {max_mult})")
        current = current - c.cls
        trace.append(f"({current + c.cls}).{c.name} = {v} < 0: peel {c.name}")
    fixed = M - current
    return PeelResult(fixed, current, tuple(trace),
                      tuple((n, m) for n, m in mult.items() if m))


@dataclass(frozen=True)
class NoObstruction:
    box: tuple[tuple[str, int, int], ...]
    examined: int

    def __str__(self) -> str:
        return f"NoObstruction(box={len(self.box)} generators, examined={self.examined})"


@dataclass(frozen=True)
class Witness:
    E: DivisorClass
    value: int

    def __str__(self) -> str:
        return f"Witness({self.E}, C.E={self.value})"


def reider_search(S: SurfaceModel, C: DivisorClass, box: Sequence[tuple[str, int, int]],
                  effective: Callable[[DivisorClass], bool | NeedsDeclaration],
                  threshold: int = 4, require_meeting: bool = True
                  ) -> NoObstruction | Witness:
    """Look for an effective ``E`` in the box with ``C.E < threshold``.

    ``box`` lists ``(generator, lo, hi)`` coefficient ranges. With
    ``require_meeting`` classes with ``C.E = 0`` are skipped, since a curve
    through two general points is not contracted by ``|C|``. The search says
    nothing about classes outside the box.
    """
    names = [g for g, _, _ in box]
    ranges = [range(lo, hi + 1) for _, lo, hi in box]
    examined = 0
    pending = None
    for coeffs in itertools.product(*ranges):
        E = DivisorClass.of(dict(zip(names, coeffs)))
        if E.is_zero():
            continue
        examined += 1
        v = intersect(S, C, E)
        if v >= threshold or (require_meeting and v == 0):
            continue
        eff = effective(E)
        if isinstance(eff, NeedsDeclaration):
            pending = pending or E
            continue
        if eff:
            return Witness(E, v)
    if pending is not None:
        raise PositivityError(f"effectivity of {pending} is undecided; declare it")
    return NoObstruction(tuple(box), examined)
