"""Recursive-descent parser for surface scripts.

Grammar, one statement per line (``#`` starts a comment)::

    stmt   := "surface" "plane"
            | "surface" "ruled" "q" "=" expr "e" "=" expr ["fibers" NAME*] ["indecomposable"]
            | "torsion" NAME ["=" expr] "order" expr ["nonzero" | "maybezero"]
            | "bundle" NAME "=" expr
            | "fact" "h0" "(" expr ")" "=" expr [STRING]
            | "canonical" expr
            | "curve" NAME "=" expr ["pa" expr] flag*
            | "let" NAME "=" expr
            | "blowup" pts ["on" host+] ["over" pts]
            | "cfg" NAME "=" cname+
            | "nef" expr
            | "assert" expr "==" expr
            | "expect_paper" expr "==" expr [STRING]
            | "show" expr
            | "ledger" "{" step* "}"
            | "for" NAME "in" atom ".." atom "{" stmt* "}"
            | "branch" "{" stmt* "}"
    step   := "ses" expr "on" cname ["restrict" INT INT] [STRING]
            | "serre" expr
            | "declare" expr ("h0"|"h1"|"h2") "=" INT ... [STRING]
            | "bound" expr ("h0"|"h1"|"h2") (">="|"<=") INT [STRING]
    host   := cname [":" INT]
    pts    := NAME [".." NAME]
    cname  := NAME ["[" NAME "]"]
    expr   := term (("+"|"-") term)*
    term   := unary ("*" unary)*
    unary  := "-" unary | atom
    atom   := INT | "true" | "false" | STRING | "all" | "~" cname | NAME "(" args ")"
            | NAME "[" NAME [".." NAME] "]" | NAME | "(" expr ")" | "[" items "]"
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import ast as A
from .ops import OPS

__all__ = ["ParseError", "parse_script", "tokenize", "BUILTIN_NAMES", "check_script"]

BUILTIN_NAMES = frozenset({"K", "KX", "C0", "f", "l"})
CURVE_FLAGS = ("rational", "smooth", "reducible")


class ParseError(Exception):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col
        self.message = message


@dataclass(frozen=True)
class Token:
    kind: str  # NAME INT STRING OP NL EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>==|>=|<=|\.\.|[-+*=()\[\]{},:~])
""", re.VERBOSE)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(line, col, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            tokens.append(Token("NL", "\n", line, col))
            line += 1
            line_start = m.end()
        elif kind == "string":
            body = re.sub(r"\\(.)", r"\1", s[1:-1])
            tokens.append(Token("STRING", body, line, col))
        elif kind in ("int", "name", "op"):
            tokens.append(Token(kind.upper(), s, line, col))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    # -- token helpers -----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        t = tok or self.tok
        return ParseError(t.line, t.col, msg)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("OP", "NAME")

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = "end of input" if self.tok.kind == "EOF" else repr(self.tok.text)
            raise self.error(f"expected {text!r}, found {found}")
        return self.advance()

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            found = "end of input" if self.tok.kind == "EOF" else repr(self.tok.text)
            raise self.error(f"expected {what}, found {found}")
        return self.advance()

    def name(self) -> str:
        return self.expect_kind("NAME", "a name").text

    def integer(self) -> int:
        return int(self.expect_kind("INT", "an integer").text)

    def opt_string(self) -> str:
        if self.tok.kind == "STRING":
            return self.advance().text
        return ""

    def skip_nl(self) -> None:
        while self.tok.kind == "NL":
            self.advance()

    def end_stmt(self) -> None:
        if self.tok.kind == "NL":
            self.skip_nl()
        elif self.tok.kind == "EOF" or self.at("}"):
            return
        else:
            raise self.error(f"unexpected {self.tok.text!r} after statement")

    # -- statements --------------------------------------------------------

    def script(self) -> tuple:
        self.skip_nl()
        stmts = []
        while self.tok.kind != "EOF":
            if self.at("}"):
                raise self.error("unbalanced '}'")
            stmts.append(self.stmt())
            self.end_stmt()
        return tuple(stmts)

    def block(self) -> tuple:
        self.expect("{")
        self.skip_nl()
        stmts = []
        while not self.at("}"):
            if self.tok.kind == "EOF":
                raise self.error("unterminated block: missing '}'")
            stmts.append(self.stmt())
            self.end_stmt()
        self.expect("}")
        return tuple(stmts)

    def stmt(self):
        t = self.tok
        if t.kind != "NAME":
            raise self.error(f"expected a statement, found {t.text!r}")
        handler = getattr(self, "stmt_" + t.text, None)
        if handler is None:
            raise self.error(f"unknown statement {t.text!r}")
        self.advance()
        return handler(t.line)

    def stmt_surface(self, line):
        kind = self.name()
        if kind == "plane":
            return A.Surface("plane", line=line)
        if kind != "ruled":
            raise self.error(f"unknown surface kind {kind!r}")
        self.expect("q")
        self.expect("=")
        q = self.expr()
        self.expect("e")
        self.expect("=")
        e = self.expr()
        fibers = []
        if self.at("fibers"):
            self.advance()
            while self.tok.kind == "NAME" and self.tok.text != "indecomposable":
                fibers.append(self.advance().text)
        dec = True
        if self.at("indecomposable"):
            self.advance()
            dec = False
        return A.Surface("ruled", q, e, tuple(fibers), dec, line=line)

    def stmt_torsion(self, line):
        name = self.name()
        definition = None
        if self.at("="):
            self.advance()
            definition = self.expr()
        self.expect("order")
        order = self.expr()
        nonzero = True
        if self.at("nonzero"):
            self.advance()
        elif self.at("maybezero"):
            self.advance()
            nonzero = False
        return A.Torsion(name, definition, order, nonzero, line=line)

    def stmt_bundle(self, line):
        name = self.name()
        self.expect("=")
        return A.Bundle(name, self.expr(), line=line)

    def stmt_fact(self, line):
        self.expect("h0")
        self.expect("(")
        e = self.expr()
        self.expect(")")
        self.expect("=")
        v = self.expr()
        return A.Fact(e, v, self.opt_string(), line=line)

    def stmt_canonical(self, line):
        return A.Canonical(self.expr(), line=line)

    def stmt_curve(self, line):
        name = self.name()
        self.expect("=")
        e = self.expr()
        pa = None
        if self.at("pa"):
            self.advance()
            pa = self.expr()
        flags = []
        while self.tok.kind == "NAME" and self.tok.text in CURVE_FLAGS:
            flags.append(self.advance().text)
        return A.CurveDecl(name, e, pa, tuple(flags), line=line)

    def stmt_let(self, line):
        name = self.name()
        self.expect("=")
        return A.Let(name, self.expr(), line=line)

    def points(self) -> tuple[str, str | None]:
        a = self.name()
        if self.at(".."):
            self.advance()
            return a, self.name()
        return a, None

    def cname(self) -> str:
        n = self.name()
        if self.at("["):
            self.advance()
            idx = self.name() if self.tok.kind == "NAME" else self.expect_kind("INT", "an index").text
            self.expect("]")
            return f"{n}[{idx}]"
        return n

    def stmt_blowup(self, line):
        p, p_end = self.points()
        hosts = []
        if self.at("on"):
            self.advance()
            while self.tok.kind == "NAME" and self.tok.text != "over":
                c = self.cname()
                m = 1
                if self.at(":"):
                    self.advance()
                    m = self.integer()
                hosts.append(A.Host(c, m))
            if not hosts:
                raise self.error("expected at least one host curve after 'on'")
        over = over_end = None
        if self.at("over"):
            self.advance()
            # both "over x1" and "over E[x1]" name the parent point
            if self.at("E") and self.peek().text == "[":
                self.advance()
                self.advance()
                over, over_end = self.points()
                self.expect("]")
            else:
                over, over_end = self.points()
        return A.BlowUp(p, p_end, tuple(hosts), over, over_end, line=line)

    def stmt_cfg(self, line):
        name = self.name()
        self.expect("=")
        curves = [self.cname()]
        while self.tok.kind == "NAME":
            curves.append(self.cname())
        return A.Cfg(name, tuple(curves), line=line)

    def stmt_nef(self, line):
        return A.Nef(self.expr(), line=line)

    def stmt_assert(self, line):
        q = self.expr()
        self.expect("==")
        return A.Assert(q, self.expr(), line=line)

    def stmt_expect_paper(self, line):
        q = self.expr()
        self.expect("==")
        v = self.expr()
        return A.ExpectPaper(q, v, self.opt_string(), line=line)

    def stmt_show(self, line):
        return A.Show(self.expr(), line=line)

    def stmt_for(self, line):
        var = self.name()
        self.expect("in")
        lo = self.unary()
        self.expect("..")
        hi = self.unary()
        return A.For(var, lo, hi, self.block(), line=line)

    def stmt_branch(self, line):
        return A.Branch(self.block(), line=line)

    def stmt_ledger(self, line):
        self.expect("{")
        self.skip_nl()
        steps = []
        while not self.at("}"):
            if self.tok.kind == "EOF":
                raise self.error("unterminated ledger block: missing '}'")
            steps.append(self.ledger_step())
            self.end_stmt()
        self.expect("}")
        return A.LedgerBlock(tuple(steps), line=line)

    def coh_index(self) -> int:
        t = self.tok
        if t.kind == "NAME" and t.text in ("h0", "h1", "h2"):
            self.advance()
            return int(t.text[1])
        raise self.error("expected h0, h1 or h2")

    def ledger_step(self):
        t = self.tok
        word = self.name()
        if word == "ses":
            a = self.expr()
            self.expect("on")
            b = self.cname()
            restrict = None
            if self.at("restrict"):
                self.advance()
                restrict = (self.integer(), self.integer())
            return A.Ses(a, b, restrict, self.opt_string(), line=t.line)
        if word == "serre":
            return A.Serre(self.expr(), line=t.line)
        if word == "declare":
            e = self.expr()
            values = []
            while self.tok.kind == "NAME" and self.tok.text in ("h0", "h1", "h2"):
                i = self.coh_index()
                self.expect("=")
                values.append((i, self.integer()))
            if not values:
                raise self.error("declare needs at least one hN=value")
            return A.DeclareCoh(e, tuple(values), self.opt_string(), line=t.line)
        if word == "bound":
            e = self.expr()
            i = self.coh_index()
            if not (self.at(">=") or self.at("<=")):
                raise self.error("expected '>=' or '<='")
            op = self.advance().text
            return A.BoundCoh(e, i, op, self.integer(), self.opt_string(), line=t.line)
        raise ParseError(t.line, t.col, f"unknown ledger step {word!r}")

    # -- expressions -------------------------------------------------------

    def expr(self):
        left = self.term()
        while self.at("+") or self.at("-"):
            t = self.advance()
            left = A.BinOp(t.text, left, self.term(), line=t.line, col=t.col)
        return left

    def term(self):
        left = self.unary()
        while self.at("*"):
            t = self.advance()
            left = A.BinOp("*", left, self.unary(), line=t.line, col=t.col)
        return left

    def unary(self):
        if self.at("-"):
            t = self.advance()
            return A.Neg(self.unary(), line=t.line, col=t.col)
        return self.atom()

    def atom(self):
        t = self.tok
        if t.kind == "INT":
            self.advance()
            return A.Num(int(t.text), line=t.line, col=t.col)
        if t.kind == "STRING":
            self.advance()
            return A.Str(t.text, line=t.line, col=t.col)
        if self.at("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if self.at("["):
            self.advance()
            items = []
            if not self.at("]"):
                items.append(self.list_item())
                while self.at(","):
                    self.advance()
                    items.append(self.list_item())
            self.expect("]")
            return A.ListExpr(tuple(items), line=t.line, col=t.col)
        if self.at("~"):
            self.advance()
            return A.CurveRef(self.cname(), line=t.line, col=t.col)
        if t.kind == "NAME":
            self.advance()
            if t.text == "true" or t.text == "false":
                return A.Bool(t.text == "true", line=t.line, col=t.col)
            if t.text == "all":
                return A.All(line=t.line, col=t.col)
            if self.at("("):
                self.advance()
                args = []
                if not self.at(")"):
                    args.append(self.expr())
                    while self.at(","):
                        self.advance()
                        args.append(self.expr())
                self.expect(")")
                return A.Call(t.text, tuple(args), line=t.line, col=t.col)
            if self.at("["):
                self.advance()
                idx = self.name() if self.tok.kind == "NAME" else \
                    self.expect_kind("INT", "an index").text
                end = None
                if self.at(".."):
                    self.advance()
                    end = self.name()
                self.expect("]")
                return A.Indexed(t.text, idx, end, line=t.line, col=t.col)
            return A.Name(t.text, line=t.line, col=t.col)
        found = "end of input" if t.kind == "EOF" else repr(t.text)
        raise self.error(f"expected an expression, found {found}")

    def list_item(self):
        e = self.expr()
        if self.at(":"):
            t = self.advance()
            return A.Repeat(e, self.unary(), line=t.line, col=t.col)
        return e


# -- static checks ---------------------------------------------------------------


class _Checker:
    """Names used before declaration and calls with the wrong arity."""

    def __init__(self):
        self.scopes: list[set[str]] = [set(BUILTIN_NAMES)]
        self.curves: list[set[str]] = [{"C0", "f"}]

    def declared(self, name: str) -> bool:
        return any(name in s for s in self.scopes) or any(name in s for s in self.curves)

    def is_curve(self, name: str) -> bool:
        return "[" in name or any(name in s for s in self.curves)

    def push(self):
        self.scopes.append(set())
        self.curves.append(set())

    def pop(self):
        self.scopes.pop()
        self.curves.pop()

    def expr(self, e):
        if isinstance(e, A.Name):
            if not self.declared(e.id):
                raise ParseError(e.line, e.col, f"undeclared name {e.id!r}")
        elif isinstance(e, A.CurveRef):
            if not self.is_curve(e.name):
                raise ParseError(e.line, e.col, f"undeclared curve {e.name!r}")
        elif isinstance(e, A.Neg):
            self.expr(e.operand)
        elif isinstance(e, A.BinOp):
            self.expr(e.left)
            self.expr(e.right)
        elif isinstance(e, A.Call):
            if e.func not in OPS:
                raise ParseError(e.line, e.col, f"unknown operation {e.func!r}")
            lo, hi = OPS[e.func].arity
            if not lo <= len(e.args) <= hi:
                want = str(lo) if lo == hi else f"{lo}..{hi}"
                raise ParseError(e.line, e.col,
                                 f"{e.func} takes {want} arguments, got {len(e.args)}")
            for a in e.args:
                self.expr(a)
        elif isinstance(e, A.ListExpr):
            for a in e.items:
                self.expr(a)
        elif isinstance(e, A.Repeat):
            self.expr(e.item)
            self.expr(e.count)

    def curve_name(self, name: str, line: int):
        if not self.is_curve(name):
            raise ParseError(line, 1, f"undeclared curve {name!r}")

    def stmts(self, stmts):
        for s in stmts:
            self.stmt(s)

    def stmt(self, s):
        sc, cv = self.scopes[-1], self.curves[-1]
        if isinstance(s, A.Surface):
            for x in (s.q, s.e):
                if x is not None:
                    self.expr(x)
            sc.update(s.fibers)
        elif isinstance(s, A.Torsion):
            if s.definition is not None:
                self.expr(s.definition)
            self.expr(s.order)
            sc.add(s.name)
        elif isinstance(s, A.Bundle):
            self.expr(s.expr)
            sc.add(s.name)
        elif isinstance(s, A.Fact):
            self.expr(s.expr)
            self.expr(s.value)
        elif isinstance(s, (A.Canonical, A.Nef, A.Show)):
            self.expr(s.expr)
        elif isinstance(s, A.CurveDecl):
            self.expr(s.expr)
            if s.pa is not None:
                self.expr(s.pa)
            cv.add(s.name)
        elif isinstance(s, A.Let):
            self.expr(s.expr)
            sc.add(s.name)
        elif isinstance(s, A.BlowUp):
            for h in s.hosts:
                self.curve_name(h.curve, s.line)
        elif isinstance(s, A.Cfg):
            for c in s.curves:
                self.curve_name(c, s.line)
            sc.add(s.name)
        elif isinstance(s, (A.Assert, A.ExpectPaper)):
            self.expr(s.query)
            self.expr(s.expected)
        elif isinstance(s, A.LedgerBlock):
            for st in s.steps:
                if isinstance(st, A.Ses):
                    self.expr(st.A)
                    self.curve_name(st.B, st.line)
                else:
                    self.expr(st.expr)
        elif isinstance(s, A.For):
            self.expr(s.lo)
            self.expr(s.hi)
            self.push()
            self.scopes[-1].add(s.var)
            self.stmts(s.body)
            self.pop()
        elif isinstance(s, A.Branch):
            self.push()
            self.stmts(s.body)
            self.pop()


def check_script(script: A.Script) -> None:
    _Checker().stmts(script.statements)


def parse_script(text: str, name: str = "<script>", check: bool = True) -> A.Script:
    """Parse and statically check a script; errors carry line and column."""
    script = A.Script(_Parser(text).script(), name)
    if check:
        check_script(script)
    return script
