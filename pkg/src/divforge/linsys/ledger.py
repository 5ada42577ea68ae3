"""Cohomology ledger: h^0, h^1, h^2 of divisor classes as integer intervals.

Every piece of knowledge is a linear equation over nonnegative integer
unknowns: Riemann-Roch for each class, the long exact sequence of each
restriction ``0 -> O(A-B) -> O(A) -> O_B(A) -> 0`` (written through the ranks
of its maps), Serre duality links and declared values. After every update
all intervals are tightened to a common fixpoint. An empty interval is a
contradiction and is reported with the steps that led to it.

The ledger is a value: every operation returns a new ledger.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..curvebundle import NeedsDeclaration
from ..picard import (CurveRecord, DivisorClass, PicardError, SurfaceModel,
                      adjunction_pa, chi_rr, intersect)

__all__ = [
    "Interval",
    "CohTriple",
    "Rule",
    "SESStep",
    "Ledger",
    "LedgerError",
    "LedgerContradiction",
    "restrict_coh",
    "ses_propagate",
    "serre_dual_surface",
    "declare",
    "bound",
    "default_nef",
]

INF = math.inf
MAX_PASSES = 500


class LedgerError(ValueError):
    pass


class LedgerContradiction(LedgerError):
    def __init__(self, message: str, trace: Sequence[str]):
        super().__init__(message)
        self.trace = tuple(trace)


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int | None  # None means unbounded

    @property
    def exact(self) -> bool:
        return self.hi is not None and self.lo == self.hi

    @property
    def value(self) -> int:
        if not self.exact:
            raise LedgerError(f"interval {self} is not exact")
        return self.lo

    def __str__(self) -> str:
        if self.exact:
            return str(self.lo)
        return f"[{self.lo},{'inf' if self.hi is None else self.hi}]"


@dataclass(frozen=True)
class CohTriple:
    h0: Interval
    h1: Interval
    h2: Interval
    provenance: tuple[str, ...] = ()

    def __getitem__(self, i: int) -> Interval:
        return (self.h0, self.h1, self.h2)[i]

    def to_json(self) -> dict:
        return {"h0": str(self.h0), "h1": str(self.h1), "h2": str(self.h2),
                "provenance": list(self.provenance)}


class Rule(enum.Enum):
    RationalCurveRestriction = "RationalCurveRestriction"
    HighDegreeCurveRestriction = "HighDegreeCurveRestriction"
    DeclaredRestriction = "DeclaredRestriction"
    SerreDualSurface = "SerreDualSurface"
    DeclaredVanishing = "DeclaredVanishing"
    EffectiveNonvanishing = "EffectiveNonvanishing"
    RiemannRoch = "RiemannRoch"
    NegativeOnNef = "NegativeOnNef"
    StructureSheaf = "StructureSheaf"


@dataclass(frozen=True)
class SESStep:
    """The sequence ``0 -> O(A-B) -> O(A) -> O_B(A) -> 0``.

    ``restriction`` overrides the curve rules with declared ``(h0, h1)`` of
    ``O_B(A)``.
    """

    A: DivisorClass
    B: CurveRecord
    restriction: tuple[int, int] | None = None
    why: str = ""


def restrict_coh(S: SurfaceModel, B: CurveRecord, A: DivisorClass
                 ) -> tuple[int, int, Rule] | NeedsDeclaration:
    """``(h0, h1)`` of ``O_B(A)`` by degree on ``B``, with the rule used."""
    d = intersect(S, A, B.cls)
    g = B.declared_pa if B.declared_pa is not None else adjunction_pa(S, B.cls)
    if B.irreducible and (B.rational or g == 0):
        return max(0, d + 1), max(0, -d - 1), Rule.RationalCurveRestriction
    if B.irreducible and d > 2 * g - 2:
        return d + 1 - g, 0, Rule.HighDegreeCurveRestriction
    return NeedsDeclaration(None, f"O_{B.name}(A) has degree {d} on a curve of genus {g}; "
                                  "declare its cohomology")


def default_nef(S: SurfaceModel) -> tuple[DivisorClass, ...]:
    """Pullbacks of the line on the plane and of a fibre on a ruled surface."""
    return (DivisorClass.gen("l" if S.kind == "plane" else "f"),)


@dataclass(frozen=True)
class _Eq:
    terms: tuple[tuple[str, int], ...]
    const: int
    tag: str


@dataclass(frozen=True)
class Ledger:
    bounds: tuple[tuple[str, tuple[float, float]], ...] = ()
    entries: tuple[tuple[tuple, DivisorClass, int], ...] = ()  # key, class, chi
    equations: tuple[_Eq, ...] = ()
    provenance: tuple[tuple[str, tuple[str, ...]], ...] = ()
    nef: tuple[DivisorClass, ...] = ()
    trace: tuple[str, ...] = ()
    counter: int = 0
    _b: dict = field(default=None, init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_b", dict(self.bounds))

    # -- reading ---------------------------------------------------------

    def has(self, D: DivisorClass) -> bool:
        return any(k == D.key() for k, _, _ in self.entries)

    def get(self, D: DivisorClass) -> CohTriple | None:
        if not self.has(D):
            return None
        name = _entry_name(D)
        prov = dict(self.provenance).get(name, ())
        return CohTriple(*(self._interval(f"{name}.h{i}") for i in range(3)), prov)

    def _interval(self, var: str) -> Interval:
        lo, hi = self._b[var]
        return Interval(int(lo), None if hi == INF else int(hi))

    def classes(self) -> list[DivisorClass]:
        return [D for _, D, _ in self.entries]

    def with_nef(self, N: DivisorClass) -> "Ledger":
        return _replace(self, nef=self.nef + (N,))

    def to_json(self) -> list:
        out = []
        for _, D, chi in self.entries:
            c = self.get(D)
            out.append({"class": str(D), "chi": chi, **c.to_json()})
        return out


def _replace(ledger: Ledger, **kw) -> Ledger:
    data = {f: getattr(ledger, f) for f in
            ("bounds", "entries", "equations", "provenance", "nef", "trace", "counter")}
    data.update(kw)
    return Ledger(**data)


def _entry_name(D: DivisorClass) -> str:
    return f"[{D}]"


class _Work:
    """Mutable scratch copy used while one operation runs."""

    def __init__(self, ledger: Ledger):
        self.b = dict(ledger.bounds)
        self.entries = list(ledger.entries)
        self.eqs = list(ledger.equations)
        self.prov = {k: list(v) for k, v in ledger.provenance}
        self.nef = ledger.nef
        self.trace = list(ledger.trace)
        self.counter = ledger.counter
        self.touched: list[str] = []

    def freeze(self) -> Ledger:
        return Ledger(tuple(self.b.items()), tuple(self.entries), tuple(self.eqs),
                      tuple((k, tuple(v)) for k, v in self.prov.items()), self.nef,
                      tuple(self.trace), self.counter)

    def fresh(self, prefix: str) -> str:
        self.counter += 1
        name = f"{prefix}#{self.counter}"
        self.b[name] = (0, INF)
        return name

    def add_eq(self, terms: Iterable[tuple[str, int]], const: int, tag: str) -> None:
        self.eqs.append(_Eq(tuple(terms), const, tag))

    def tighten(self, var: str, lo: float, hi: float, tag: str) -> None:
        olo, ohi = self.b[var]
        nlo, nhi = max(olo, lo), min(ohi, hi)
        if (nlo, nhi) != (olo, ohi):
            self.b[var] = (nlo, nhi)
            self._note(var, tag)
            if nlo > nhi:
                self.fail(f"empty interval for {var}: [{nlo},{nhi}] via {tag}")

    def _note(self, var: str, tag: str) -> None:
        if var.startswith("["):
            entry = var.rsplit(".", 1)[0]
            p = self.prov.setdefault(entry, [])
            if tag not in p:
                p.append(tag)
            self.touched.append(var)

    def fail(self, message: str):
        raise LedgerContradiction(message, self.trace + [f"CONTRADICTION: {message}"])

    def entry(self, S: SurfaceModel, D: DivisorClass) -> str:
        """Variables ``name.h0/h1/h2`` for ``D``; created with the fresh-entry rules."""
        name = _entry_name(D)
        if any(k == D.key() for k, _, _ in self.entries):
            return name
        try:
            chi = chi_rr(S, D)
        except PicardError as exc:
            raise LedgerError(str(exc)) from None
        self.entries.append((D.key(), D, chi))
        for i in range(3):
            self.b[f"{name}.h{i}"] = (0, INF)
        self.add_eq([(f"{name}.h0", 1), (f"{name}.h1", -1), (f"{name}.h2", 1)], chi,
                    f"{Rule.RiemannRoch.value}(chi={chi})")
        if D.is_zero():
            q = S.base_genus
            for i, v in enumerate((1, q, 0)):
                self.tighten(f"{name}.h{i}", v, v, Rule.StructureSheaf.value)
        nefs = default_nef(S) + self.nef
        K = S.canonical
        for N in nefs:
            if not all(S.has_generator(g) for g, _ in N.coeffs):
                continue
            if intersect(S, D, N) < 0:
                self.tighten(f"{name}.h0", 0, 0, f"{Rule.NegativeOnNef.value}({N})")
            if intersect(S, K - D, N) < 0:
                self.tighten(f"{name}.h2", 0, 0, f"{Rule.NegativeOnNef.value}(K-D vs {N})")
        return name

    def propagate(self) -> None:
        for _ in range(MAX_PASSES):
            changed = False
            for eq in self.eqs:
                changed |= self._apply(eq)
            if not changed:
                return
        self.fail("interval propagation did not reach a fixpoint")

    def _apply(self, eq: _Eq) -> bool:
        b = self.b
        ranges = []
        for v, s in eq.terms:
            lo, hi = b[v]
            ranges.append((s * lo, s * hi) if s > 0 else (s * hi, s * lo))
        changed = False
        for k, (v, s) in enumerate(eq.terms):
            # s*x = const - (sum of the other terms)
            rest_lo = sum(r[0] for j, r in enumerate(ranges) if j != k)
            rest_hi = sum(r[1] for j, r in enumerate(ranges) if j != k)
            r_lo, r_hi = eq.const - rest_hi, eq.const - rest_lo
            lo, hi = (r_lo, r_hi) if s > 0 else (-r_hi, -r_lo)
            before = b[v]
            self.tighten(v, lo, hi, eq.tag)
            if b[v] != before:
                changed = True
                lo2, hi2 = b[v]
                ranges[k] = (s * lo2, s * hi2) if s > 0 else (s * hi2, s * lo2)
        return changed

    def log_changes(self, header: str) -> None:
        self.trace.append(header)
        seen = []
        for var in self.touched:
            if var not in seen:
                seen.append(var)
        for var in seen:
            lo, hi = self.b[var]
            val = str(int(lo)) if lo == hi else f"[{int(lo)},{'inf' if hi == INF else int(hi)}]"
            entry, h = var.rsplit(".", 1)
            self.trace.append(f"  {h}({entry[1:-1]}) = {val}")
        self.touched = []


def _run(ledger: Ledger, header: str, body) -> Ledger:
    w = _Work(ledger)
    body(w)
    w.propagate()
    w.log_changes(header)
    return w.freeze()


def ses_propagate(ledger: Ledger, S: SurfaceModel, step: SESStep) -> Ledger:
    A, B = step.A, step.B
    if step.restriction is not None:
        r0, r1 = step.restriction
        rule = Rule.DeclaredRestriction
        d = intersect(S, A, B.cls)
        g = B.declared_pa if B.declared_pa is not None else adjunction_pa(S, B.cls)
        if r0 < 0 or r1 < 0 or r0 - r1 != d + 1 - g:
            raise LedgerContradiction(
                f"declared restriction ({r0},{r1}) to {B.name} violates Riemann-Roch "
                f"on the curve (deg {d}, genus {g})", ledger.trace)
    else:
        res = restrict_coh(S, B, A)
        if isinstance(res, NeedsDeclaration):
            raise LedgerError(res.reason)
        r0, r1, rule = res
    header = (f"SES[{rule.value}] A={A} B={B.name}: h0(O_B(A))={r0}, h1(O_B(A))={r1}"
              + (f" ({step.why})" if step.why else ""))

    def body(w: _Work):
        a = w.entry(S, A - B.cls)
        b = w.entry(S, A)
        c0, c1 = w.fresh("c0"), w.fresh("c1")
        w.tighten(c0, r0, r0, rule.value)
        w.tighten(c1, r1, r1, rule.value)
        seq = [f"{a}.h0", f"{b}.h0", c0, f"{a}.h1", f"{b}.h1", c1, f"{a}.h2", f"{b}.h2"]
        ranks = [w.fresh("r") for _ in range(len(seq) - 1)]
        tag = f"SES[{rule.value}]({B.name})"
        for k, v in enumerate(seq):
            terms = [(v, 1)]
            if k > 0:
                terms.append((ranks[k - 1], -1))
            if k < len(ranks):
                terms.append((ranks[k], -1))
            w.add_eq(terms, 0, tag)

    return _run(ledger, header, body)


def serre_dual_surface(ledger: Ledger, S: SurfaceModel, D: DivisorClass) -> Ledger:
    """Link ``h^i(D)`` with ``h^{2-i}(K - D)``."""
    KD = S.canonical - D

    def body(w: _Work):
        a = w.entry(S, D)
        b = w.entry(S, KD)
        for i in range(3):
            w.add_eq([(f"{a}.h{i}", 1), (f"{b}.h{2 - i}", -1)], 0,
                     f"{Rule.SerreDualSurface.value}({D} | {KD})")

    return _run(ledger, f"SERRE {D} <-> {KD}", body)


def declare(ledger: Ledger, S: SurfaceModel, D: DivisorClass, values: dict[int, int],
            why: str = "") -> Ledger:
    """Exact values ``{i: h^i}`` supplied by the user (vanishing theorems, hypotheses)."""

    def body(w: _Work):
        name = w.entry(S, D)
        for i, v in values.items():
            w.tighten(f"{name}.h{i}", v, v, f"{Rule.DeclaredVanishing.value}({why})")

    desc = ", ".join(f"h{i}={v}" for i, v in sorted(values.items()))
    return _run(ledger, f"DECLARE {D}: {desc}" + (f" ({why})" if why else ""), body)


def bound(ledger: Ledger, S: SurfaceModel, D: DivisorClass, i: int,
          lo: int | None = None, hi: int | None = None, why: str = "") -> Ledger:
    """One-sided knowledge, e.g. ``h^0 >= 1`` for an effective class."""

    def body(w: _Work):
        name = w.entry(S, D)
        w.tighten(f"{name}.h{i}", -INF if lo is None else lo, INF if hi is None else hi,
                  f"{Rule.EffectiveNonvanishing.value}({why})")

    parts = []
    if lo is not None:
        parts.append(f"h{i}>={lo}")
    if hi is not None:
        parts.append(f"h{i}<={hi}")
    return _run(ledger, f"BOUND {D}: {' '.join(parts)}" + (f" ({why})" if why else ""), body)


def touch(ledger: Ledger, S: SurfaceModel, D: DivisorClass) -> Ledger:
    """Make sure ``D`` has an entry (fresh-entry rules plus Riemann-Roch)."""
    if ledger.has(D):
        return ledger
    return _run(ledger, f"ENTRY {D}", lambda w: w.entry(S, D))
