"""Operations callable from scripts, with their arities.

Each operation receives a :class:`Context` (current surface, ledger and a
trace sink) and already-evaluated arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from ..curvebundle import (CurveClassExpr, NeedsDeclaration, h0_curve, h1_curve,
                           positivity_degree_check, rr_curve)
from ..linsys import counting, ledger as L, positivity as P
from ..picard import (CurveRecord, DivisorClass, SurfaceModel, adjunction_pa,
                      chi_rr, fiber_class, intersect, numerically_equal)
from ..ruled import (RuledPresentation, antibicanonical_h0, c1_class, h0_ruled,
                     h0_ruled_class, linear_equivalent)
from ..singularities import (ExceptionalConfig, NonRational, Rational, RationalDoublePoint,
                             classify_singularity, fundamental_cycle, genus_budget_check,
                             is_negative_definite, pa_cycle)

__all__ = ["OPS", "OpSpec", "Context", "CurveVal", "AllCurves", "ScriptError", "as_class"]


class ScriptError(ValueError):
    pass


@dataclass(frozen=True)
class CurveVal:
    """A named curve with a multiplicity, as written ``~C`` or ``2*~C``."""

    record: CurveRecord
    mult: int = 1

    @property
    def cls(self) -> DivisorClass:
        return self.record.cls * self.mult

    def __str__(self) -> str:
        return f"{'' if self.mult == 1 else self.mult}~{self.record.name}"


class Context:
    def __init__(self, surface: SurfaceModel | None, ledger: L.Ledger):
        self.surface = surface
        self.ledger = ledger
        self.trace: list[str] = []

    @property
    def S(self) -> SurfaceModel:
        if self.surface is None:
            raise ScriptError("no surface declared")
        return self.surface

    def note(self, line: str) -> None:
        self.trace.append(line)


@dataclass(frozen=True)
class OpSpec:
    arity: tuple[int, int]
    fn: Callable[..., Any]
    doc: str


OPS: dict[str, OpSpec] = {}


def op(name: str, lo: int, hi: int | None = None):
    def deco(fn):
        OPS[name] = OpSpec((lo, lo if hi is None else hi), fn, (fn.__doc__ or "").strip())
        return fn
    return deco


# -- coercions -------------------------------------------------------------


def as_class(v) -> DivisorClass:
    if isinstance(v, DivisorClass):
        return v
    if isinstance(v, CurveVal):
        return v.cls
    if isinstance(v, int) and not isinstance(v, bool) and v == 0:
        return DivisorClass()
    raise ScriptError(f"expected a divisor class, got {_kind(v)}")


def as_expr(v) -> CurveClassExpr:
    if isinstance(v, CurveClassExpr):
        return v
    if isinstance(v, int) and not isinstance(v, bool) and v == 0:
        return CurveClassExpr()
    raise ScriptError(f"expected a base-curve expression, got {_kind(v)}")


def as_int(v) -> int:
    if isinstance(v, int) and not isinstance(v, bool):
        return v
    raise ScriptError(f"expected an integer, got {_kind(v)}")


def as_cfg(v) -> ExceptionalConfig:
    if isinstance(v, ExceptionalConfig):
        return v
    raise ScriptError(f"expected a curve configuration, got {_kind(v)}")


def as_int_list(v) -> list[int]:
    if not isinstance(v, list):
        raise ScriptError(f"expected a list, got {_kind(v)}")
    return [as_int(x) for x in v]


def _kind(v) -> str:
    return {DivisorClass: "divisor class", CurveClassExpr: "base-curve expression",
            CurveVal: "curve", bool: "boolean", int: "integer", list: "list",
            str: "string", ExceptionalConfig: "configuration"}.get(type(v), type(v).__name__)


class AllCurves:
    """The ``all`` keyword: every irreducible curve record on the surface."""

    def __str__(self) -> str:
        return "all"


def _curves(ctx: Context, v) -> list[CurveVal]:
    if isinstance(v, AllCurves):
        return [CurveVal(c) for c in ctx.S.curves if c.irreducible]
    if not isinstance(v, list) or not all(isinstance(x, CurveVal) for x in v):
        raise ScriptError("expected a list of curves written ~NAME")
    return v


def _known(v):
    if isinstance(v, NeedsDeclaration):
        raise ScriptError(str(v))
    return v


def _presentation(ctx: Context) -> RuledPresentation:
    return RuledPresentation.from_surface(ctx.S)


# -- lattice -------------------------------------------------------------------


@op("intersect", 2)
def _intersect(ctx, a, b):
    """Intersection number."""
    return intersect(ctx.S, as_class(a), as_class(b))


@op("self", 1)
def _self(ctx, a):
    """Self-intersection."""
    D = as_class(a)
    return intersect(ctx.S, D, D)


@op("pa", 1)
def _pa(ctx, a):
    """Arithmetic genus by adjunction."""
    return adjunction_pa(ctx.S, as_class(a))


@op("chi", 1)
def _chi(ctx, a):
    """Euler characteristic by Riemann-Roch."""
    return chi_rr(ctx.S, as_class(a))


@op("numeq", 2)
def _numeq(ctx, a, b):
    """Numerical equivalence."""
    return numerically_equal(ctx.S, as_class(a), as_class(b))


@op("eq", 2)
def _eq(ctx, a, b):
    """Equality of class vectors, torsion tags included."""
    return as_class(a) == as_class(b)


@op("lineq", 2)
def _lineq(ctx, a, b):
    """Linear equivalence: true, false or unknown."""
    r = linear_equivalent(ctx.S, as_class(a), as_class(b))
    return "unknown" if r is None else r


@op("fib", 1)
def _fib(ctx, e):
    """Pull a base-curve divisor back to the fibres."""
    return fiber_class(ctx.S, as_expr(e))


@op("canon", 0)
def _canon(ctx):
    """The current canonical class."""
    return ctx.S.canonical


# -- base curve and ruled surface ------------------------------------------------


@op("deg", 1)
def _deg(ctx, e):
    """Degree on the base curve."""
    return ctx.S.base.degree(as_expr(e))


@op("h0c", 1)
def _h0c(ctx, e):
    """h0 on the base curve."""
    return _known(h0_curve(ctx.S.base, as_expr(e)))


@op("h1c", 1)
def _h1c(ctx, e):
    """h1 on the base curve."""
    return _known(h1_curve(ctx.S.base, as_expr(e)))


@op("rr", 1)
def _rr(ctx, e):
    """deg + 1 - q, checked against the rule cascade."""
    return rr_curve(ctx.S.base, as_expr(e))


@op("poscheck", 1)
def _poscheck(ctx, e):
    """VeryAmple, BasePointFree or Unknown by degree."""
    return {"VERY_AMPLE": "VeryAmple", "BASE_POINT_FREE": "BasePointFree",
            "UNKNOWN": "Unknown"}[positivity_degree_check(ctx.S.base, as_expr(e)).name]


@op("c1", 0)
def _c1(ctx):
    """The section C1 = C0 - D f."""
    return c1_class(_presentation(ctx))


@op("h0r", 2)
def _h0r(ctx, a, delta):
    """h0(a C0 + delta f) as a sum over the bundle decomposition."""
    return _known(h0_ruled(_presentation(ctx), as_int(a), as_expr(delta)))


@op("h0ruled", 1)
def _h0ruled(ctx, D):
    """h0 of a class without exceptional part."""
    return _known(h0_ruled_class(_presentation(ctx), as_class(D)))


@op("antibican", 1)
def _antibican(ctx, m):
    """h0(-K) for m = 1, h0(-2K) for m = 2."""
    m = as_int(m)
    if m not in (1, 2):
        raise ScriptError("antibican takes 1 or 2")
    return _known(antibicanonical_h0(_presentation(ctx))["-K" if m == 1 else "-2K"])


# -- positivity ----------------------------------------------------------------


def _peel(ctx, M, cands, max_mult):
    cs = _curves(ctx, cands)
    res = P.fixed_part_peel(ctx.S, as_class(M), [c.record for c in cs],
                            64 if max_mult is None else as_int(max_mult))
    for line in res.trace:
        ctx.note(line)
    ctx.note(f"fixed = {res.fixed}; mobile = {res.mobile}")
    return res


@op("mobile", 2, 3)
def _mobile(ctx, M, cands, max_mult=None):
    """Residual after peeling negative curves."""
    return _peel(ctx, M, cands, max_mult).mobile


@op("fixed", 2, 3)
def _fixed(ctx, M, cands, max_mult=None):
    """Fixed part found by peeling negative curves."""
    return _peel(ctx, M, cands, max_mult).fixed


def _nef_cert(ctx, D, decomposition):
    cs = _curves(ctx, decomposition)
    cert = P.nef_on_effective(ctx.S, as_class(D), [(c.record, c.mult) for c in cs])
    for name, _, m, v in cert.items:
        ctx.note(f"D.{name} = {v} (mult {m})")
    if not cert.recheck(ctx.S):
        raise ScriptError("nef certificate failed its recheck")
    return cert


@op("nef", 2)
def _nef(ctx, D, decomposition):
    """Nef certificate over an effective decomposition."""
    return _nef_cert(ctx, D, decomposition).conclusion


@op("big", 2)
def _big(ctx, D, decomposition):
    """Nef and positive self-intersection."""
    cert = P.big_check(ctx.S, as_class(D), _nef_cert(ctx, D, decomposition))
    ctx.note(f"D^2 = {cert.items[0][3]}")
    return cert.conclusion


@op("reider", 3, 4)
def _reider(ctx, C, gens, hi, threshold=4):
    """Bounded search for effective E with C.E below the threshold."""
    if not isinstance(gens, list):
        raise ScriptError("reider expects a list of generators")
    names = []
    for g in gens:
        D = as_class(g)
        if len(D.coeffs) != 1 or D.coeffs[0][1] != 1:
            raise ScriptError(f"box entries must be single generators, got {D}")
        names.append(D.coeffs[0][0])
    box = [(n, 0, as_int(hi)) for n in names]
    S = ctx.S

    if S.kind == "ruled" and S.bundle is not None:
        pres = _presentation(ctx)

        def effective(E):
            h = h0_ruled_class(pres, E)
            return h if isinstance(h, NeedsDeclaration) else h > 0
    else:
        def effective(E):
            entry = ctx.ledger.get(E)
            if entry is None:
                return NeedsDeclaration(None, f"effectivity of {E}")
            if entry.h0.lo > 0:
                return True
            if entry.h0.hi == 0:
                return False
            return NeedsDeclaration(None, f"effectivity of {E}")

    res = P.reider_search(S, as_class(C), box, effective, as_int(threshold))
    ctx.note(f"box {box}, threshold {as_int(threshold)}: {res}")
    return "NoObstruction" if isinstance(res, P.NoObstruction) else str(res)


# -- singularities ------------------------------------------------------------------


@op("negdef", 1)
def _negdef(ctx, cfg):
    """Negative definiteness of the configuration."""
    ok, witness = is_negative_definite(as_cfg(cfg))
    if not ok:
        ctx.note(f"witness {witness}")
    return ok


@op("z0", 1)
def _z0(ctx, cfg):
    """Fundamental cycle."""
    return str(fundamental_cycle(as_cfg(cfg)))


@op("z0sq", 1)
def _z0sq(ctx, cfg):
    """Self-intersection of the fundamental cycle."""
    c = as_cfg(cfg)
    v = fundamental_cycle(c).vector(c)
    return c.dot(v, v)


@op("z0pa", 1)
def _z0pa(ctx, cfg):
    """Arithmetic genus of the fundamental cycle."""
    c = as_cfg(cfg)
    return pa_cycle(c, fundamental_cycle(c))


@op("classify", 1)
def _classify(ctx, cfg):
    """RationalDoublePoint, Rational(m), NonRational(p) or Unknown."""
    return str(classify_singularity(as_cfg(cfg)))


@op("rational", 1)
def _rational(ctx, cfg):
    """Rational singularity (double points included)."""
    return isinstance(classify_singularity(as_cfg(cfg)), (Rational, RationalDoublePoint))


@op("rdp", 1)
def _rdp(ctx, cfg):
    """Rational double point."""
    return isinstance(classify_singularity(as_cfg(cfg)), RationalDoublePoint)


@op("multiplicity", 1)
def _multiplicity(ctx, cfg):
    """Multiplicity -Z0^2 of a rational singularity."""
    c = classify_singularity(as_cfg(cfg))
    if isinstance(c, RationalDoublePoint):
        return 2
    if isinstance(c, Rational):
        return c.multiplicity
    raise ScriptError(f"multiplicity is defined here for rational singularities only ({c})")


@op("sing_pa", 1)
def _sing_pa(ctx, cfg):
    """Lower bound for the geometric genus: 0 if rational, else p_a(Z0)."""
    c = classify_singularity(as_cfg(cfg))
    return c.pa_lower_bound if isinstance(c, NonRational) else 0


@op("budget", 2)
def _budget(ctx, q, genera):
    """Geometric genera of the singular points add up to q."""
    return genus_budget_check(as_int(q), as_int_list(genera))


# -- counts ---------------------------------------------------------------------------


@op("expdim", 2)
def _expdim(ctx, d, mults):
    """Expected dimension of plane curves with assigned multiplicities."""
    return counting.expected_dim_plane(as_int(d), as_int_list(mults))


@op("plucker", 2)
def _plucker(ctx, d, mults):
    """Genus of a plane curve with ordinary multiple points."""
    return counting.plucker_genus(as_int(d), as_int_list(mults))


@op("cs", 4)
def _cs(ctx, d1, g1, d2, g2):
    """Castelnuovo-Severi bound."""
    return counting.castelnuovo_severi_bound(*(as_int(x) for x in (d1, g1, d2, g2)))


@op("prodgenus", 2)
def _prodgenus(ctx, a, b):
    """Genus bound for bidegree (a, b) on P1 x P1."""
    return counting.product_curve_genus(as_int(a), as_int(b))


@op("bpf", 2)
def _bpf(ctx, a, b):
    """One general point drops the dimension by exactly one."""
    return counting.bpf_drop_test(as_int(a), as_int(b))


@op("sep", 2)
def _sep(ctx, a, b):
    """Two points drop the dimension by exactly two."""
    return counting.separation_drop_test(as_int(a), as_int(b))


@op("parity", 1)
def _parity(ctx, m):
    """h0 of m times a nonzero 2-torsion class."""
    return counting.plurigenus_parity_bound(as_int(m))


# -- ledger reads -------------------------------------------------------------------


def _coh(ctx, D, i):
    led = L.touch(ctx.ledger, ctx.S, as_class(D))
    entry = led.get(as_class(D))
    iv = entry[i]
    ctx.note(f"h{i}({as_class(D)}) = {iv}; provenance: {', '.join(entry.provenance)}")
    return iv.lo if iv.exact else str(iv)


@op("h0", 1)
def _h0(ctx, D):
    """h0 from the ledger (an interval string if not exact)."""
    return _coh(ctx, D, 0)


@op("h1", 1)
def _h1(ctx, D):
    """h1 from the ledger."""
    return _coh(ctx, D, 1)


@op("h2", 1)
def _h2(ctx, D):
    """h2 from the ledger."""
    return _coh(ctx, D, 2)


@op("dim", 1)
def _dim(ctx, D):
    """Projective dimension h0 - 1 from the ledger."""
    v = _coh(ctx, D, 0)
    if not isinstance(v, int):
        raise ScriptError(f"h0 is only known as {v}")
    return v - 1

