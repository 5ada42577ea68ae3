"""Statement-by-statement evaluation of surface scripts.

State is a value: each statement maps the current :class:`State` to a new
one. ``branch`` and each ``for`` iteration run on a copy that is dropped
afterwards, so alternatives never leak into each other. A failing assert
does not stop the script; an erroring statement leaves the state unchanged.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field, replace
from typing import Any

from .. import __version__
from ..curvebundle import CurveClassExpr, CurveError
from ..linsys import ledger as L
from ..linsys.positivity import PositivityError
from ..picard import CurveRecord, DivisorClass, PicardError, blow_up, new_plane, new_ruled
from ..singularities import ExceptionalConfig, SingularityError
from . import ast as A
from .ops import OPS, AllCurves, Context, CurveVal, ScriptError, as_class, as_expr, as_int

__all__ = ["State", "Result", "Report", "evaluate", "expand_range", "ENGINE"]

ENGINE = f"divforge {__version__}"

_ERRORS = (ScriptError, PicardError, CurveError, L.LedgerError, SingularityError,
           PositivityError, ZeroDivisionError)


@dataclass(frozen=True)
class State:
    surface: Any = None
    ledger: L.Ledger = field(default_factory=L.Ledger)
    env: dict = field(default_factory=dict)

    def bind(self, name: str, value) -> "State":
        return replace(self, env={**self.env, name: value})


@dataclass
class Result:
    stmt: int
    line: int
    kind: str
    value: Any
    status: str  # "ok" | "fail" | "error"
    trace: list[str]

    def to_json(self) -> dict:
        return {"stmt": self.stmt, "line": self.line, "kind": self.kind,
                "value": jsonable(self.value), "status": self.status, "trace": self.trace}


@dataclass
class Report:
    script: str
    results: list[Result]
    engine: str = ENGINE

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results if r.kind == "assert" and r.status == "ok")

    @property
    def failed(self) -> int:
        return sum(1 for r in self.results if r.status == "fail")

    @property
    def errored(self) -> int:
        return sum(1 for r in self.results if r.status == "error")

    @property
    def exit_code(self) -> int:
        return 0 if self.failed == 0 and self.errored == 0 else 1

    def to_json(self) -> dict:
        return {"script": self.script, "engine": self.engine,
                "results": [r.to_json() for r in self.results],
                "summary": {"pass": self.passed, "fail": self.failed}}


def jsonable(v):
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, dict):
        return {k: jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    return str(v)


_RANGE_RE = re.compile(r"^(.*?)(\d+)$")


def expand_range(a: str, b: str | None) -> list[str]:
    """``x4..x10`` -> ``x4 x5 ... x10``; both ends share a prefix."""
    if b is None:
        return [a]
    ma, mb = _RANGE_RE.match(a), _RANGE_RE.match(b)
    if not ma or not mb or ma.group(1) != mb.group(1):
        raise ScriptError(f"bad range {a}..{b}: ends need a common prefix and numeric suffix")
    lo, hi = int(ma.group(2)), int(mb.group(2))
    if lo > hi:
        raise ScriptError(f"empty range {a}..{b}")
    return [f"{ma.group(1)}{i}" for i in range(lo, hi + 1)]


# -- expressions ------------------------------------------------------------------


class _Eval:
    def __init__(self, state: State, ctx: Context):
        self.state = state
        self.ctx = ctx

    def __call__(self, e):
        return getattr(self, "e_" + type(e).__name__)(e)

    def e_Num(self, e):
        return e.value

    def e_Bool(self, e):
        return e.value

    def e_Str(self, e):
        return e.value

    def e_All(self, e):
        return AllCurves()

    def e_Name(self, e):
        name = e.id
        st = self.state
        if name in st.env:
            return st.env[name]
        S = st.surface
        if name == "K":
            return CurveClassExpr.canonical()
        if S is None:
            raise ScriptError(f"{name!r} needs a surface")
        if name == "KX":
            return S.canonical
        if S.base is not None:
            if any(t.name == name for t in S.base.torsion_relations):
                return CurveClassExpr.tors(name)
            if name in S.base.points:
                return CurveClassExpr.point(name)
        if S.has_generator(name):
            return DivisorClass.gen(name)
        if S.has_curve(name):
            return S.curve(name).cls
        raise ScriptError(f"{name!r} is not defined on the current surface")

    def e_Indexed(self, e):
        S = self.state.surface
        if S is None:
            raise ScriptError("generators need a surface")
        total = DivisorClass()
        for p in expand_range(e.index, e.index_end):
            g = f"{e.base}[{p}]"
            if not S.has_generator(g):
                raise ScriptError(f"unknown generator {g}")
            total = total + DivisorClass.gen(g)
        return total

    def e_CurveRef(self, e):
        S = self.state.surface
        if S is None:
            raise ScriptError("curves need a surface")
        return CurveVal(S.curve(e.name))

    def e_Neg(self, e):
        return _mul(-1, self(e.operand))

    def e_BinOp(self, e):
        a, b = self(e.left), self(e.right)
        if e.op == "*":
            return _mul(a, b)
        if e.op == "-":
            b = _mul(-1, b)
        return _add(a, b)

    def e_Call(self, e):
        args = [self(a) for a in e.args]
        return OPS[e.func].fn(self.ctx, *args)

    def e_ListExpr(self, e):
        out = []
        for item in e.items:
            if isinstance(item, A.Repeat):
                out += [self(item.item)] * as_int(self(item.count))
            else:
                out.append(self(item))
        return out

    def e_Repeat(self, e):
        raise ScriptError("a:n repetition is only allowed inside a list")


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _mul(a, b):
    if _is_int(b) and not _is_int(a):
        a, b = b, a
    if not _is_int(a):
        raise ScriptError("products need an integer factor")
    if _is_int(b):
        return a * b
    if isinstance(b, CurveVal):
        return CurveVal(b.record, b.mult * a)
    if isinstance(b, (DivisorClass, CurveClassExpr)):
        return b * a
    raise ScriptError(f"cannot multiply {type(b).__name__}")


def _add(a, b):
    if _is_int(a) and _is_int(b):
        return a + b
    if isinstance(a, CurveClassExpr) or isinstance(b, CurveClassExpr):
        return as_expr(a) + as_expr(b)
    return as_class(a) + as_class(b)


# -- statements -----------------------------------------------------------------------


class _Runner:
    def __init__(self, full_trace: bool):
        self.full = full_trace
        self.results: list[Result] = []

    def emit(self, s, kind: str, value, status: str, trace: list[str]) -> None:
        self.results.append(Result(len(self.results) + 1, getattr(s, "line", 0), kind,
                                   value, status, trace))

    def block(self, state: State, stmts) -> State:
        for s in stmts:
            state = self.stmt(state, s)
        return state

    def stmt(self, state: State, s) -> State:
        kind = _KIND[type(s)]
        if isinstance(s, A.For):
            return self.run_for(state, s)
        if isinstance(s, A.Branch):
            self.block(state, s.body)
            return state
        ctx = Context(state.surface, state.ledger)
        ev = _Eval(state, ctx)
        try:
            new_state, value, status, trace = getattr(self, "s_" + kind)(state, s, ev, ctx)
        except L.LedgerContradiction as exc:
            self.emit(s, kind, None, "error", [str(exc)] + list(exc.trace[-12:]))
            return state
        except _ERRORS as exc:
            self.emit(s, kind, None, "error", [str(exc)] + ctx.trace)
            return state
        self.emit(s, kind, value, status, trace)
        return new_state

    def run_for(self, state: State, s: A.For) -> State:
        ctx = Context(state.surface, state.ledger)
        ev = _Eval(state, ctx)
        try:
            lo, hi = as_int(ev(s.lo)), as_int(ev(s.hi))
        except _ERRORS as exc:
            self.emit(s, "for", None, "error", [str(exc)])
            return state
        for v in range(lo, hi + 1):
            self.block(state.bind(s.var, v), s.body)
        return state

    def details(self, ctx: Context) -> list[str]:
        return list(ctx.trace) if self.full else []

    # each handler returns (state, value, status, trace)

    def s_surface(self, state, s, ev, ctx):
        if s.kind == "plane":
            S = new_plane()
        else:
            S = new_ruled(as_int(ev(s.q)), as_int(ev(s.e)), s.fibers, s.decomposable)
        return State(S, L.Ledger(), {k: v for k, v in state.env.items()
                                     if _is_int(v)}), S.kind, "ok", []

    def s_torsion(self, state, s, ev, ctx):
        S = ctx.S
        d = as_expr(ev(s.definition)) if s.definition is not None else None
        base = S.base.with_torsion(s.name, as_int(ev(s.order)), s.nonzero, d)
        return replace(state, surface=S.with_base(base)), s.name, "ok", []

    def s_bundle(self, state, s, ev, ctx):
        D = as_expr(ev(s.expr))
        ctx.S.base.check(D)
        S = ctx.S.with_bundle(D, ctx.S.decomposable)
        return replace(state, surface=S).bind(s.name, D), str(D), "ok", \
            [f"K = {S.canonical}"] if self.full else []

    def s_fact(self, state, s, ev, ctx):
        e = as_expr(ev(s.expr))
        base = ctx.S.base.with_fact(e, as_int(ev(s.value)), s.why)
        return replace(state, surface=ctx.S.with_base(base)), str(e), "ok", []

    def s_canonical(self, state, s, ev, ctx):
        S = ctx.S.with_canonical(as_class(ev(s.expr)))
        return replace(state, surface=S), str(S.canonical), "ok", []

    def s_curve(self, state, s, ev, ctx):
        cls = as_class(ev(s.expr))
        pa = as_int(ev(s.pa)) if s.pa is not None else None
        rec = CurveRecord(s.name, cls, declared_pa=pa,
                          irreducible="reducible" not in s.flags,
                          smooth="smooth" in s.flags, rational="rational" in s.flags)
        S = ctx.S.with_curve(rec)
        return replace(state, surface=S), str(cls), "ok", []

    def s_let(self, state, s, ev, ctx):
        v = ev(s.expr)
        return state.bind(s.name, v), v, "ok", self.details(ctx)

    def s_blowup(self, state, s, ev, ctx):
        S = ctx.S
        points = expand_range(s.point, s.point_end)
        parents = expand_range(s.over, s.over_end) if s.over is not None else [None]
        if len(parents) == 1:
            parents = parents * len(points)
        if len(parents) != len(points):
            raise ScriptError("'over' range must match the blown-up points")
        hosts = {h.curve: h.mult for h in s.hosts}
        for p, parent in zip(points, parents):
            S = blow_up(S, p, hosts, parent=_point_of(parent))
        trace = [f"K = {S.canonical}"] if self.full else []
        return replace(state, surface=S), " ".join(f"E[{p}]" for p in points), "ok", trace

    def s_cfg(self, state, s, ev, ctx):
        cfg = ExceptionalConfig.from_curves(ctx.S, s.curves)
        return state.bind(s.name, cfg), f"gram {[list(r) for r in cfg.gram]}", "ok", []

    def s_nef(self, state, s, ev, ctx):
        N = as_class(ev(s.expr))
        return replace(state, ledger=state.ledger.with_nef(N)), str(N), "ok", []

    def s_assert(self, state, s, ev, ctx):
        got = ev(s.query)
        want = ev(s.expected)
        ok = _same(got, want)
        value = {"expected": want, "computed": got}
        trace = ctx.trace if (self.full or not ok) else []
        return state, value, "ok" if ok else "fail", list(trace)

    def s_expect_paper(self, state, s, ev, ctx):
        got = ev(s.query)
        paper = ev(s.expected)
        value = {"paper": paper, "computed": got, "agrees": _same(got, paper)}
        if s.note:
            value["note"] = s.note
        return state, value, "ok", self.details(ctx)

    def s_show(self, state, s, ev, ctx):
        return state, ev(s.expr), "ok", self.details(ctx)

    def s_ledger(self, state, s, ev, ctx):
        S = ctx.S
        led = state.ledger
        start = len(led.trace)
        for st in s.steps:
            if isinstance(st, A.Ses):
                step = L.SESStep(as_class(ev(st.A)), S.curve(st.B), st.restrict, st.why)
                led = L.ses_propagate(led, S, step)
            elif isinstance(st, A.Serre):
                led = L.serre_dual_surface(led, S, as_class(ev(st.expr)))
            elif isinstance(st, A.DeclareCoh):
                led = L.declare(led, S, as_class(ev(st.expr)), dict(st.values), st.why)
            elif isinstance(st, A.BoundCoh):
                lo, hi = (st.value, None) if st.op == ">=" else (None, st.value)
                led = L.bound(led, S, as_class(ev(st.expr)), st.index, lo, hi, st.why)
        new = list(led.trace[start:])
        trace = new if self.full else [t for t in new if not t.startswith("  ")]
        return replace(state, ledger=led), f"{len(s.steps)} steps", "ok", trace


def _point_of(parent: str | None) -> str | None:
    if parent is None:
        return None
    m = re.fullmatch(r"E\[(.+)\]", parent)
    return m.group(1) if m else parent


def _same(got, want) -> bool:
    if isinstance(got, bool) or isinstance(want, bool):
        return type(got) is type(want) and got == want
    if _is_int(got) and _is_int(want):
        return got == want
    if isinstance(want, str):
        return str(got) == want
    classes = (DivisorClass, CurveVal)
    if isinstance(got, classes) or isinstance(want, classes):
        # the literal 0 stands for the zero class
        try:
            return as_class(got) == as_class(want)
        except ScriptError:
            return False
    return got == want


_KIND = {A.Surface: "surface", A.Torsion: "torsion", A.Bundle: "bundle", A.Fact: "fact",
         A.Canonical: "canonical", A.CurveDecl: "curve", A.Let: "let", A.BlowUp: "blowup",
         A.Cfg: "cfg", A.Nef: "nef", A.Assert: "assert", A.ExpectPaper: "expect_paper",
         A.Show: "show", A.LedgerBlock: "ledger", A.For: "for", A.Branch: "branch"}


def evaluate(script: A.Script, full_trace: bool | None = None) -> Report:
    """Run a parsed script; ``DIVFORGE_TRACE=1`` turns on full traces."""
    if full_trace is None:
        full_trace = os.environ.get("DIVFORGE_TRACE", "") == "1"
    runner = _Runner(full_trace)
    runner.block(State(), script.statements)
    return Report(script.name, runner.results)

