"""Picard lattices of rational and ruled surfaces and their iterated blow-ups.

A :class:`SurfaceModel` is presented by named divisor generators and an
integer Gram matrix. Divisor classes are sparse integer vectors over the
generator names, so a class built on a model stays meaningful (as its total
transform) on every later blow-up of that model.

Generator naming:

* ``l`` -- the line class on the projective plane;
* ``C0`` -- the negative section of a ruled surface, ``f`` a generic fibre;
* ``f[P]`` -- the fibre over the base point ``P``;
* ``E[p]`` -- the total transform of the exceptional curve over the point ``p``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .curvebundle import BaseCurve, CurveClassExpr

__all__ = [
    "Generator",
    "DivisorClass",
    "CurveRecord",
    "BlowUpRecord",
    "SurfaceModel",
    "PicardError",
    "ParityError",
    "new_plane",
    "new_ruled",
    "intersect",
    "canonical",
    "adjunction_pa",
    "chi_rr",
    "blow_up",
    "pullback",
    "strict_transform",
    "fiber_class",
    "numerically_equal",
    "natural_key",
]


class PicardError(ValueError):
    """Raised on malformed classes, unknown generators or bad blow-up data."""


class ParityError(PicardError):
    """D^2 + D.K is odd: the class cannot be a divisor on this surface."""


def natural_key(name: str) -> tuple:
    """Sort key that orders ``x9`` before ``x10``."""
    return tuple(int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name))


@dataclass(frozen=True)
class Generator:
    name: str
    role: str  # "line" | "section" | "fiber" | "exceptional"
    point: str | None = None
    depth: int = 0


@dataclass(frozen=True)
class DivisorClass:
    """Integer combination of generators, plus torsion tags.

    Torsion tags name degree-zero torsion classes pulled back from the base
    curve. They never enter intersection numbers.
    """

    coeffs: tuple[tuple[str, int], ...] = ()
    torsion: tuple[tuple[str, int], ...] = ()

    @classmethod
    def of(cls, coeffs: Mapping[str, int] | None = None,
           torsion: Mapping[str, int] | None = None) -> "DivisorClass":
        return cls(_normalize(coeffs or {}), _normalize(torsion or {}))

    @classmethod
    def gen(cls, name: str, mult: int = 1) -> "DivisorClass":
        return cls.of({name: mult})

    def as_dict(self) -> dict[str, int]:
        return dict(self.coeffs)

    def torsion_dict(self) -> dict[str, int]:
        return dict(self.torsion)

    def __getitem__(self, name: str) -> int:
        return dict(self.coeffs).get(name, 0)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return DivisorClass(_combine(self.coeffs, other.coeffs, 1),
                            _combine(self.torsion, other.torsion, 1))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return DivisorClass(_combine(self.coeffs, other.coeffs, -1),
                            _combine(self.torsion, other.torsion, -1))

    def __neg__(self) -> "DivisorClass":
        return self * -1

    def __mul__(self, k: int) -> "DivisorClass":
        if not isinstance(k, int):
            return NotImplemented
        return DivisorClass.of({n: c * k for n, c in self.coeffs},
                               {n: c * k for n, c in self.torsion})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.coeffs and not self.torsion

    def without_torsion(self) -> "DivisorClass":
        return DivisorClass(self.coeffs)

    def key(self) -> tuple:
        return (self.coeffs, self.torsion)

    def __str__(self) -> str:
        parts = []
        for name, c in self.coeffs:
            parts.append(_fmt_term(c, name, not parts))
        for name, c in self.torsion:
            parts.append(_fmt_term(c, f"<{name}>", not parts))
        return "".join(parts) if parts else "0"

    def to_json(self) -> dict:
        out: dict = {"coeffs": dict(self.coeffs)}
        if self.torsion:
            out["torsion"] = dict(self.torsion)
        return out


def _fmt_term(c: int, name: str, first: bool) -> str:
    sign = "-" if c < 0 else ("" if first else "+")
    mag = abs(c)
    return f"{sign}{'' if mag == 1 else mag}{name}"


def _normalize(d: Mapping[str, int]) -> tuple[tuple[str, int], ...]:
    for v in d.values():
        if not isinstance(v, int) or isinstance(v, bool):
            raise PicardError(f"non-integer coefficient {v!r}")
    return tuple(sorted(((k, v) for k, v in d.items() if v), key=lambda kv: natural_key(kv[0])))


def _combine(a, b, sign):
    out = dict(a)
    for k, v in b:
        out[k] = out.get(k, 0) + sign * v
    return _normalize(out)


@dataclass(frozen=True)
class CurveRecord:
    name: str
    cls: DivisorClass
    declared_pa: int | None = None
    irreducible: bool = True
    smooth: bool = False
    rational: bool = False
    auto: bool = False  # created for a generator (section, fibre, exceptional curve)
    origin: DivisorClass | None = None  # class when the curve was declared
    gonality_pencils: tuple[tuple[int, int], ...] = ()

    def flags(self) -> dict[str, bool]:
        return {"irreducible": self.irreducible, "smooth": self.smooth, "rational": self.rational}


@dataclass(frozen=True)
class BlowUpRecord:
    point: str
    exceptional: str
    hosts: tuple[tuple[str, int], ...]
    parent: str | None = None


@dataclass(frozen=True)
class SurfaceModel:
    kind: str  # "plane" | "ruled"
    base_genus: int
    e_invariant: int | None
    generators: tuple[Generator, ...]
    gram: tuple[tuple[int, ...], ...]
    canonical: DivisorClass
    blowup_log: tuple[BlowUpRecord, ...] = ()
    curves: tuple[CurveRecord, ...] = ()
    base: BaseCurve | None = None
    bundle: CurveClassExpr | None = None
    decomposable: bool = True
    _index: dict = field(default=None, init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {g.name: i for i, g in enumerate(self.generators)})

    @property
    def chi_structure(self) -> int:
        return 1 - self.base_genus

    @property
    def generator_names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def has_generator(self, name: str) -> bool:
        return name in self._index

    def generator(self, name: str) -> Generator:
        try:
            return self.generators[self._index[name]]
        except KeyError:
            raise PicardError(f"unknown generator {name!r}") from None

    def pair(self, a: str, b: str) -> int:
        try:
            return self.gram[self._index[a]][self._index[b]]
        except KeyError as exc:
            raise PicardError(f"unknown generator {exc.args[0]!r}") from None

    def curve(self, name: str) -> CurveRecord:
        for c in self.curves:
            if c.name == name:
                return c
        raise PicardError(f"unknown curve {name!r}")

    def has_curve(self, name: str) -> bool:
        return any(c.name == name for c in self.curves)

    def with_curve(self, record: CurveRecord) -> "SurfaceModel":
        """Add or replace a curve record; the declared genus is checked."""
        if record.declared_pa is not None:
            pa = adjunction_pa(self, record.cls)
            if pa != record.declared_pa:
                raise PicardError(
                    f"curve {record.name}: declared p_a={record.declared_pa} "
                    f"but adjunction gives {pa}")
        if record.origin is None:
            record = replace(record, origin=record.cls)
        for g, _ in record.cls.coeffs:
            self.generator(g)
        others = tuple(c for c in self.curves if c.name != record.name)
        if len(others) == len(self.curves):
            return replace(self, curves=self.curves + (record,))
        return replace(self, curves=tuple(record if c.name == record.name else c
                                          for c in self.curves))

    def with_base(self, base: BaseCurve) -> "SurfaceModel":
        return replace(self, base=base)

    def with_canonical(self, K: DivisorClass) -> "SurfaceModel":
        """Fix a representative of the canonical class (must be numerically K)."""
        if not numerically_equal(self, K, self.canonical):
            raise PicardError(f"{K} is not numerically canonical (K = {self.canonical})")
        return replace(self, canonical=K)

    def with_bundle(self, D: CurveClassExpr, decomposable: bool = True) -> "SurfaceModel":
        if self.kind != "ruled":
            raise PicardError("a bundle presentation needs a ruled surface")
        base = self.base
        if base.degree(D) != -self.e_invariant:
            raise PicardError(f"deg D = {base.degree(D)} but e = {self.e_invariant}")
        K = DivisorClass.gen("C0", -2) + fiber_class(self, base.canonical_expr() + D)
        return replace(self, bundle=D, decomposable=decomposable, canonical=K)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "base_genus": self.base_genus,
            "e_invariant": self.e_invariant,
            "generators": [g.name for g in self.generators],
            "gram": [list(r) for r in self.gram],
            "canonical": self.canonical.to_json(),
            "chi": self.chi_structure,
            "blowups": [{"point": b.point, "hosts": dict(b.hosts), "parent": b.parent}
                        for b in self.blowup_log],
        }


def _auto_curve(name: str, cls: DivisorClass, pa: int) -> CurveRecord:
    return CurveRecord(name, cls, declared_pa=None, smooth=True, rational=(pa == 0),
                       auto=True, origin=cls)


def new_plane() -> SurfaceModel:
    """The projective plane: one generator ``l`` with ``l^2 = 1`` and ``K = -3l``."""
    return SurfaceModel(
        kind="plane",
        base_genus=0,
        e_invariant=None,
        generators=(Generator("l", "line"),),
        gram=((1,),),
        canonical=DivisorClass.gen("l", -3),
    )


def new_ruled(q: int, e: int, named_fibers: Iterable[str] = (),
              decomposable: bool = True, D: CurveClassExpr | None = None) -> SurfaceModel:
    """A minimal ruled surface over a genus ``q`` curve with invariant ``e``.

    Generators are ``C0``, the generic fibre ``f`` and one fibre ``f[P]`` per
    named base point. Without a bundle divisor ``D`` the canonical class is
    ``-2C0 + (2q-2-e) f``; with one it is ``-2C0 + (K_Gamma + D) f`` with the
    fibre part spread over the named points.
    """
    if q < 0:
        raise PicardError("base genus must be nonnegative")
    points = list(dict.fromkeys(named_fibers))
    gens = [Generator("C0", "section"), Generator("f", "fiber", "*")]
    gens += [Generator(f"f[{p}]", "fiber", p) for p in points]
    n = len(gens)
    gram = [[0] * n for _ in range(n)]
    gram[0][0] = -e
    for i in range(1, n):
        gram[0][i] = gram[i][0] = 1
    base = BaseCurve(genus=q, points=tuple(points))
    S = SurfaceModel(
        kind="ruled",
        base_genus=q,
        e_invariant=e,
        generators=tuple(gens),
        gram=tuple(tuple(r) for r in gram),
        canonical=DivisorClass.of({"C0": -2, "f": 2 * q - 2 - e}),
        base=base,
        decomposable=decomposable,
    )
    curves = [_auto_curve("C0", DivisorClass.gen("C0"), q)]
    curves += [_auto_curve(g.name, DivisorClass.gen(g.name), 0) for g in gens[1:]]
    S = replace(S, curves=tuple(curves))
    if D is not None:
        S = S.with_bundle(D, decomposable)
    return S


def fiber_class(S: SurfaceModel, expr: CurveClassExpr) -> DivisorClass:
    """Pull back a divisor on the base curve to the ruled surface.

    ``K_Gamma`` goes onto the generic fibre, named points onto their fibres and
    torsion symbols become torsion tags.
    """
    if S.kind != "ruled":
        raise PicardError("fibre classes exist only on ruled surfaces")
    coeffs: dict[str, int] = {}
    if expr.k:
        coeffs["f"] = expr.k * (2 * S.base_genus - 2)
    for p, c in expr.points:
        name = "f" if p == "*" else f"f[{p}]"
        S.generator(name)
        coeffs[name] = coeffs.get(name, 0) + c
    return DivisorClass.of(coeffs, dict(expr.torsion))


def _vector(S: SurfaceModel, D: DivisorClass) -> list[tuple[int, int]]:
    out = []
    for name, c in D.coeffs:
        try:
            out.append((S._index[name], c))
        except KeyError:
            raise PicardError(f"unknown generator {name!r}") from None
    return out


def intersect(S: SurfaceModel, D1: DivisorClass, D2: DivisorClass) -> int:
    """Intersection number: bilinear extension of the Gram matrix."""
    v1, v2 = _vector(S, D1), _vector(S, D2)
    g = S.gram
    return sum(a * b * g[i][j] for i, a in v1 for j, b in v2)


def numerically_equal(S: SurfaceModel, D1: DivisorClass, D2: DivisorClass) -> bool:
    """Equal intersection numbers against every generator."""
    diff = D1 - D2
    return all(intersect(S, diff, DivisorClass.gen(g.name)) == 0 for g in S.generators)


def canonical(S: SurfaceModel) -> DivisorClass:
    return S.canonical


def _half(S: SurfaceModel, D: DivisorClass, what: str) -> int:
    value = intersect(S, D, D) + intersect(S, D, S.canonical)
    if value % 2:
        raise ParityError(f"{what}: D^2 + D.K = {value} is odd for D = {D}")
    return value // 2


def adjunction_pa(S: SurfaceModel, D: DivisorClass) -> int:
    """Arithmetic genus ``1 + (D^2 + D.K)/2``."""
    return 1 + _half(S, D, "adjunction")


def chi_rr(S: SurfaceModel, D: DivisorClass) -> int:
    """Surface Riemann-Roch: ``chi(O) + D.(D-K)/2``."""
    value = intersect(S, D, D) - intersect(S, D, S.canonical)
    if value % 2:
        raise ParityError(f"Riemann-Roch: D.(D-K) = {value} is odd for D = {D}")
    return S.chi_structure + value // 2


def blow_up(S: SurfaceModel, point: str, hosts: Mapping[str, int] | None = None,
            parent: str | None = None) -> SurfaceModel:
    """Blow up ``point``, lying on the listed curves with given multiplicities.

    ``parent`` names an earlier blown-up point when the new point is
    infinitely near to it; the strict transform of the parent's exceptional
    curve then loses one copy of the new exceptional class.
    """
    hosts = dict(hosts or {})
    exc = f"E[{point}]"
    if S.has_generator(exc):
        raise PicardError(f"point {point!r} already blown up")
    for name, m in hosts.items():
        if not isinstance(m, int) or m <= 0:
            raise PicardError(f"nonpositive multiplicity {m!r} for host {name!r}")
        S.curve(name)
    depth = 1
    if parent is not None:
        parent_exc = f"E[{parent}]"
        depth = S.generator(parent_exc).depth + 1
        hosts.setdefault(parent_exc, 1)
        if hosts[parent_exc] != 1:
            raise PicardError("an infinitely near point lies simply on its parent")
        S.curve(parent_exc)
    n = len(S.generators)
    gram = [list(r) + [0] for r in S.gram]
    gram.append([0] * n + [-1])
    E = DivisorClass.gen(exc)
    curves = tuple(
        replace(c, cls=c.cls - E * hosts[c.name]) if c.name in hosts else c
        for c in S.curves
    ) + (_auto_curve(exc, E, 0),)
    return replace(
        S,
        generators=S.generators + (Generator(exc, "exceptional", point, depth),),
        gram=tuple(tuple(r) for r in gram),
        canonical=S.canonical + E,
        blowup_log=S.blowup_log + (BlowUpRecord(point, exc, tuple(sorted(hosts.items())), parent),),
        curves=curves,
    )


def pullback(S_after: SurfaceModel, D_before: DivisorClass) -> DivisorClass:
    """Total transform: same coefficients, zero on the new exceptional classes."""
    for name, _ in D_before.coeffs:
        if not S_after.has_generator(name):
            raise PicardError(f"stale class: {name!r} is not a generator of this model")
    return D_before


def strict_transform(S_after: SurfaceModel, curve: CurveRecord | str,
                     mults: Mapping[str, int]) -> DivisorClass:
    """Pullback of the curve's original class minus ``sum m_p E[p]``.

    The multiplicities are checked against the blow-up log; every exceptional
    class created after the curve must be accounted for.
    """
    name = curve if isinstance(curve, str) else curve.name
    record = S_after.curve(name)
    origin = record.origin if record.origin is not None else record.cls
    cls = pullback(S_after, origin)
    for point, m in mults.items():
        cls = cls - DivisorClass.gen(f"E[{point}]", m)
    if cls != record.cls:
        raise PicardError(
            f"inconsistent multiplicities for {name}: log gives {record.cls}, "
            f"requested {cls}")
    return cls
