"""Syntax tree of surface scripts and a printer that parses back to the same tree.

Source positions are carried for error messages but excluded from equality,
so ``parse(print_script(ast)) == ast`` compares structure only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union


def _pos():
    return field(default=0, compare=False, repr=False)


# -- expressions -----------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class Bool:
    value: bool
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class Str:
    value: str
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class Name:
    id: str
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class Indexed:
    """``f[Q1]``, ``E[x4]`` or the range sum ``E[x4..x10]``."""

    base: str
    index: str
    index_end: str | None = None
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class CurveRef:
    """``~NAME``: the current class of a curve record, kept with its identity."""

    name: str
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class All:
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class BinOp:
    op: str  # "+", "-", "*"
    left: "Expr"
    right: "Expr"
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple["Expr", ...]
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class ListExpr:
    items: tuple["Expr", ...]
    line: int = _pos()
    col: int = _pos()


@dataclass(frozen=True)
class Repeat:
    """``a:n`` inside a list: ``a`` repeated ``n`` times."""

    item: "Expr"
    count: "Expr"
    line: int = _pos()
    col: int = _pos()


Expr = Union[Num, Bool, Str, Name, Indexed, CurveRef, All, Neg, BinOp, Call, ListExpr, Repeat]


# -- statements ---------------------------------------------------------------


@dataclass(frozen=True)
class Surface:
    kind: str  # "plane" | "ruled"
    q: Expr | None = None
    e: Expr | None = None
    fibers: tuple[str, ...] = ()
    decomposable: bool = True
    line: int = _pos()


@dataclass(frozen=True)
class Torsion:
    name: str
    definition: Expr | None
    order: Expr
    nonzero: bool = True
    line: int = _pos()


@dataclass(frozen=True)
class Bundle:
    name: str
    expr: Expr
    line: int = _pos()


@dataclass(frozen=True)
class Fact:
    expr: Expr
    value: Expr
    why: str = ""
    line: int = _pos()


@dataclass(frozen=True)
class Canonical:
    expr: Expr
    line: int = _pos()


@dataclass(frozen=True)
class CurveDecl:
    name: str
    expr: Expr
    pa: Expr | None = None
    flags: tuple[str, ...] = ()
    line: int = _pos()


@dataclass(frozen=True)
class Let:
    name: str
    expr: Expr
    line: int = _pos()


@dataclass(frozen=True)
class Host:
    curve: str
    mult: int = 1


@dataclass(frozen=True)
class BlowUp:
    point: str
    point_end: str | None = None
    hosts: tuple[Host, ...] = ()
    over: str | None = None
    over_end: str | None = None
    line: int = _pos()


@dataclass(frozen=True)
class Cfg:
    name: str
    curves: tuple[str, ...]
    line: int = _pos()


@dataclass(frozen=True)
class Nef:
    expr: Expr
    line: int = _pos()


@dataclass(frozen=True)
class Assert:
    query: Expr
    expected: Expr  # Num, Bool or Str
    line: int = _pos()


@dataclass(frozen=True)
class ExpectPaper:
    query: Expr
    expected: Expr
    note: str = ""
    line: int = _pos()


@dataclass(frozen=True)
class Show:
    expr: Expr
    line: int = _pos()


@dataclass(frozen=True)
class Ses:
    A: Expr
    B: str
    restrict: tuple[int, int] | None = None
    why: str = ""
    line: int = _pos()


@dataclass(frozen=True)
class Serre:
    expr: Expr
    line: int = _pos()


@dataclass(frozen=True)
class DeclareCoh:
    expr: Expr
    values: tuple[tuple[int, int], ...]
    why: str = ""
    line: int = _pos()


@dataclass(frozen=True)
class BoundCoh:
    expr: Expr
    index: int
    op: str  # ">=" | "<="
    value: int
    why: str = ""
    line: int = _pos()


LedgerStep = Union[Ses, Serre, DeclareCoh, BoundCoh]


@dataclass(frozen=True)
class LedgerBlock:
    steps: tuple[LedgerStep, ...]
    line: int = _pos()


@dataclass(frozen=True)
class For:
    var: str
    lo: Expr
    hi: Expr
    body: tuple["Stmt", ...]
    line: int = _pos()


@dataclass(frozen=True)
class Branch:
    body: tuple["Stmt", ...]
    line: int = _pos()


Stmt = Union[Surface, Torsion, Bundle, Fact, Canonical, CurveDecl, Let, BlowUp, Cfg, Nef,
             Assert, ExpectPaper, Show, LedgerBlock, For, Branch]


@dataclass(frozen=True)
class Script:
    statements: tuple[Stmt, ...]
    name: str = field(default="<script>", compare=False)


# -- printer ------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2}


def print_expr(e: Expr, prec: int = 0) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Bool):
        return "true" if e.value else "false"
    if isinstance(e, Str):
        return _quote(e.value)
    if isinstance(e, Name):
        return e.id
    if isinstance(e, Indexed):
        idx = e.index if e.index_end is None else f"{e.index}..{e.index_end}"
        return f"{e.base}[{idx}]"
    if isinstance(e, CurveRef):
        return f"~{e.name}"
    if isinstance(e, All):
        return "all"
    if isinstance(e, Neg):
        return f"-{print_expr(e.operand, 3)}"
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        # left-associative: the right operand needs parentheses at equal precedence
        s = f"{print_expr(e.left, p)} {e.op} {print_expr(e.right, p + 1)}"
        return f"({s})" if p < prec else s
    if isinstance(e, Call):
        return f"{e.func}({', '.join(print_expr(a) for a in e.args)})"
    if isinstance(e, ListExpr):
        return f"[{', '.join(print_expr(a) for a in e.items)}]"
    if isinstance(e, Repeat):
        return f"{print_expr(e.item, 3)}:{print_expr(e.count, 3)}"
    raise TypeError(f"not an expression: {e!r}")


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _why(s: str) -> str:
    return f" {_quote(s)}" if s else ""


def _range(a: str, b: str | None) -> str:
    return a if b is None else f"{a}..{b}"


def print_stmt(s: Stmt, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(s, Surface):
        if s.kind == "plane":
            return [pad + "surface plane"]
        out = f"surface ruled q={print_expr(s.q)} e={print_expr(s.e)}"
        if s.fibers:
            out += " fibers " + " ".join(s.fibers)
        if not s.decomposable:
            out += " indecomposable"
        return [pad + out]
    if isinstance(s, Torsion):
        d = f" = {print_expr(s.definition)}" if s.definition is not None else ""
        flag = "nonzero" if s.nonzero else "maybezero"
        return [pad + f"torsion {s.name}{d} order {print_expr(s.order)} {flag}"]
    if isinstance(s, Bundle):
        return [pad + f"bundle {s.name} = {print_expr(s.expr)}"]
    if isinstance(s, Fact):
        return [pad + f"fact h0({print_expr(s.expr)}) = {print_expr(s.value)}{_why(s.why)}"]
    if isinstance(s, Canonical):
        return [pad + f"canonical {print_expr(s.expr)}"]
    if isinstance(s, CurveDecl):
        out = f"curve {s.name} = {print_expr(s.expr)}"
        if s.pa is not None:
            out += f" pa {print_expr(s.pa)}"
        for f in s.flags:
            out += f" {f}"
        return [pad + out]
    if isinstance(s, Let):
        return [pad + f"let {s.name} = {print_expr(s.expr)}"]
    if isinstance(s, BlowUp):
        out = f"blowup {_range(s.point, s.point_end)}"
        if s.hosts:
            out += " on " + " ".join(h.curve if h.mult == 1 else f"{h.curve}:{h.mult}"
                                     for h in s.hosts)
        if s.over is not None:
            out += f" over {_range(s.over, s.over_end)}"
        return [pad + out]
    if isinstance(s, Cfg):
        return [pad + f"cfg {s.name} = " + " ".join(s.curves)]
    if isinstance(s, Nef):
        return [pad + f"nef {print_expr(s.expr)}"]
    if isinstance(s, Assert):
        return [pad + f"assert {print_expr(s.query)} == {print_expr(s.expected)}"]
    if isinstance(s, ExpectPaper):
        return [pad + f"expect_paper {print_expr(s.query)} == {print_expr(s.expected)}"
                + _why(s.note)]
    if isinstance(s, Show):
        return [pad + f"show {print_expr(s.expr)}"]
    if isinstance(s, LedgerBlock):
        lines = [pad + "ledger {"]
        for st in s.steps:
            lines.append(pad + "  " + _print_step(st))
        lines.append(pad + "}")
        return lines
    if isinstance(s, For):
        lines = [pad + f"for {s.var} in {print_expr(s.lo, 3)}..{print_expr(s.hi, 3)} {{"]
        for st in s.body:
            lines += print_stmt(st, indent + 1)
        return lines + [pad + "}"]
    if isinstance(s, Branch):
        lines = [pad + "branch {"]
        for st in s.body:
            lines += print_stmt(st, indent + 1)
        return lines + [pad + "}"]
    raise TypeError(f"not a statement: {s!r}")


def _print_step(st: LedgerStep) -> str:
    if isinstance(st, Ses):
        out = f"ses {print_expr(st.A)} on {st.B}"
        if st.restrict is not None:
            out += f" restrict {st.restrict[0]} {st.restrict[1]}"
        return out + _why(st.why)
    if isinstance(st, Serre):
        return f"serre {print_expr(st.expr)}"
    if isinstance(st, DeclareCoh):
        vals = " ".join(f"h{i}={v}" for i, v in st.values)
        return f"declare {print_expr(st.expr)} {vals}{_why(st.why)}"
    if isinstance(st, BoundCoh):
        return f"bound {print_expr(st.expr)} h{st.index}{st.op}{st.value}{_why(st.why)}"
    raise TypeError(f"not a ledger step: {st!r}")


def print_script(script: Script) -> str:
    lines: list[str] = []
    for s in script.statements:
        lines += print_stmt(s)
    return "\n".join(lines) + "\n"
