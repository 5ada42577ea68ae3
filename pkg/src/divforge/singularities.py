"""Contractible curve configurations and the singularities they resolve.

Negative definiteness is tested with exact symmetric elimination, the
fundamental cycle with Laufer's augmentation sequence, and rationality with
the arithmetic genus of that cycle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .picard import PicardError, SurfaceModel, intersect

__all__ = [
    "ExceptionalConfig",
    "Cycle",
    "SingularityError",
    "Rational",
    "RationalDoublePoint",
    "NonRational",
    "Unknown",
    "is_negative_definite",
    "laufer_sequence",
    "fundamental_cycle",
    "pa_cycle",
    "classify_singularity",
    "genus_budget_check",
    "parse_dual_graph",
    "laufer_step_bound",
]


class SingularityError(ValueError):
    pass


@dataclass(frozen=True)
class ExceptionalConfig:
    """Curves ``E_i`` with their Gram matrix and canonical degrees ``E_i.K``.

    ``k_dot`` is taken from the host model when the curves come with classes;
    for a bare dual graph it follows from adjunction, ``E.K = 2p_a - 2 - E^2``.
    """

    names: tuple[str, ...]
    gram: tuple[tuple[int, ...], ...]
    k_dot: tuple[int, ...]
    pa: tuple[int | None, ...] = ()

    def __post_init__(self):
        n = len(self.names)
        if n == 0:
            raise SingularityError("empty configuration")
        if len(self.gram) != n or any(len(r) != n for r in self.gram):
            raise SingularityError("gram matrix has the wrong shape")
        for i in range(n):
            for j in range(n):
                if self.gram[i][j] != self.gram[j][i]:
                    raise SingularityError("gram matrix is not symmetric")
                if i != j and self.gram[i][j] < 0:
                    raise SingularityError("distinct curves meet negatively")
        if not self.pa:
            pa = []
            for i in range(n):
                num = self.gram[i][i] + self.k_dot[i]
                pa.append(1 + num // 2 if num % 2 == 0 else None)
            object.__setattr__(self, "pa", tuple(pa))

    @property
    def size(self) -> int:
        return len(self.names)

    @classmethod
    def from_curves(cls, S: SurfaceModel, names: Sequence[str]) -> "ExceptionalConfig":
        recs = [S.curve(n) for n in names]
        gram = tuple(tuple(intersect(S, a.cls, b.cls) for b in recs) for a in recs)
        k_dot = tuple(intersect(S, r.cls, S.canonical) for r in recs)
        return cls(tuple(names), gram, k_dot)

    @classmethod
    def from_dual_graph(cls, curves: Sequence[tuple[str, int, int]],
                        edges: Iterable[tuple[str, str, int]] = ()) -> "ExceptionalConfig":
        names = tuple(c[0] for c in curves)
        if len(set(names)) != len(names):
            raise SingularityError("duplicate curve name")
        idx = {n: i for i, n in enumerate(names)}
        n = len(names)
        g = [[0] * n for _ in range(n)]
        for name, self_int, _ in curves:
            g[idx[name]][idx[name]] = self_int
        for a, b, m in edges:
            if a not in idx or b not in idx:
                raise SingularityError(f"edge {a}-{b} names an unknown curve")
            if a == b:
                raise SingularityError("self-loop in dual graph")
            g[idx[a]][idx[b]] += m
            g[idx[b]][idx[a]] += m
        k_dot = tuple(2 * pa - 2 - si for _, si, pa in curves)
        return cls(names, tuple(tuple(r) for r in g), k_dot, tuple(c[2] for c in curves))

    def connected(self) -> bool:
        seen, stack = {0}, [0]
        while stack:
            i = stack.pop()
            for j in range(self.size):
                if j not in seen and self.gram[i][j] > 0:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == self.size

    def dot(self, z: Sequence[int], w: Sequence[int]) -> int:
        g = self.gram
        return sum(z[i] * w[j] * g[i][j] for i in range(self.size) for j in range(self.size)
                   if z[i] and w[j])

    def dot_curve(self, z: Sequence[int], j: int) -> int:
        return sum(z[i] * self.gram[i][j] for i in range(self.size) if z[i])


@dataclass(frozen=True)
class Cycle:
    coeffs: tuple[tuple[str, int], ...]

    @classmethod
    def from_vector(cls, cfg: ExceptionalConfig, v: Sequence[int]) -> "Cycle":
        if any(c < 0 for c in v):
            raise SingularityError("cycles are effective")
        return cls(tuple((n, c) for n, c in zip(cfg.names, v) if c))

    def vector(self, cfg: ExceptionalConfig) -> tuple[int, ...]:
        d = dict(self.coeffs)
        for n in d:
            if n not in cfg.names:
                raise SingularityError(f"cycle component {n!r} not in configuration")
        return tuple(d.get(n, 0) for n in cfg.names)

    def __str__(self) -> str:
        return "+".join(f"{'' if c == 1 else c}{n}" for n, c in self.coeffs) or "0"


# -- negative definiteness ------------------------------------------------


def is_negative_definite(cfg: ExceptionalConfig) -> tuple[bool, tuple[int, ...] | None]:
    """Exact LDL^T elimination; a nonnegative pivot yields a witness.

    The witness ``v`` is the matching row of ``L^{-1}``, scaled to integers,
    so ``v.G.v`` equals that pivot (times a square) and is ``>= 0``.
    """
    n = cfg.size
    a = [[Fraction(x) for x in row] for row in cfg.gram]
    linv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(n):
        pivot = a[k][k]
        if pivot >= 0:
            row = linv[k]
            den = lcm(*(x.denominator for x in row))
            v = tuple(int(x * den) for x in row)
            assert cfg.dot(v, v) >= 0
            return False, v
        for i in range(k + 1, n):
            if a[i][k] == 0:
                continue
            r = a[i][k] / pivot
            for j in range(k, n):
                a[i][j] -= r * a[k][j]
            for j in range(n):
                linv[i][j] -= r * linv[k][j]
    return True, None


def _require_contractible(cfg: ExceptionalConfig) -> None:
    if not cfg.connected():
        raise SingularityError("configuration is not connected")
    nd, witness = is_negative_definite(cfg)
    if not nd:
        raise SingularityError(f"configuration is not negative definite (witness {witness})")


# -- fundamental cycle -----------------------------------------------------


def laufer_step_bound(cfg: ExceptionalConfig) -> tuple[int, ...]:
    """An effective anti-nef cycle dominating ``Z0``.

    It is the smallest integer multiple of ``-G^{-1} 1``. For a connected
    negative definite form ``-G^{-1}`` is entrywise positive, so the vector is
    effective and ``G y`` is a negative multiple of ``1``.
    """
    n = cfg.size
    a = [[Fraction(x) for x in row] + [Fraction(-1)] for row in cfg.gram]
    for k in range(n):
        piv = next(i for i in range(k, n) if a[i][k] != 0)
        a[k], a[piv] = a[piv], a[k]
        for i in range(n):
            if i != k and a[i][k] != 0:
                r = a[i][k] / a[k][k]
                a[i] = [x - r * y for x, y in zip(a[i], a[k])]
    sol = [a[i][n] / a[i][i] for i in range(n)]
    den = lcm(*(x.denominator for x in sol))
    return tuple(int(x * den) for x in sol)


def laufer_sequence(cfg: ExceptionalConfig, start: int = 0) -> list[tuple[int, ...]]:
    """The cycles visited by Laufer's algorithm, ending at ``Z0``."""
    _require_contractible(cfg)
    bound = laufer_step_bound(cfg)
    cap = sum(bound)
    z = [0] * cfg.size
    z[start] = 1
    seq = [tuple(z)]
    while True:
        j = next((j for j in range(cfg.size) if cfg.dot_curve(z, j) > 0), None)
        if j is None:
            return seq
        z[j] += 1
        seq.append(tuple(z))
        if len(seq) > cap:
            raise SingularityError("Laufer sequence exceeded its a priori bound")


def fundamental_cycle(cfg: ExceptionalConfig) -> Cycle:
    return Cycle.from_vector(cfg, laufer_sequence(cfg)[-1])


def pa_cycle(cfg: ExceptionalConfig, Z: Cycle | Sequence[int]) -> int:
    """``1 + (Z^2 + Z.K)/2`` with ``E_i.K`` from the configuration."""
    z = Z.vector(cfg) if isinstance(Z, Cycle) else tuple(Z)
    num = cfg.dot(z, z) + sum(c * k for c, k in zip(z, cfg.k_dot))
    if num % 2:
        raise PicardError(f"odd Z^2 + Z.K = {num}")
    return 1 + num // 2


# -- classification ----------------------------------------------------------


@dataclass(frozen=True)
class RationalDoublePoint:
    def __str__(self) -> str:
        return "RationalDoublePoint"


@dataclass(frozen=True)
class Rational:
    multiplicity: int

    def __str__(self) -> str:
        return f"Rational({self.multiplicity})"


@dataclass(frozen=True)
class NonRational:
    pa_lower_bound: int

    def __str__(self) -> str:
        return f"NonRational({self.pa_lower_bound})"


@dataclass(frozen=True)
class Unknown:
    reason: str

    def __str__(self) -> str:
        return f"Unknown({self.reason})"


Classification = RationalDoublePoint | Rational | NonRational | Unknown

_SWEEP_LIMIT = 200_000


def classify_singularity(cfg: ExceptionalConfig) -> Classification:
    z0 = laufer_sequence(cfg)[-1]
    if any(p is None for p in cfg.pa):
        return Unknown("a component has odd E^2 + E.K")
    pa0 = pa_cycle(cfg, z0)
    self_int = cfg.dot(z0, z0)
    if pa0 > 0:
        return NonRational(pa0)
    if any(p != 0 for p in cfg.pa):
        # components of positive genus: the shortcut through Z0 is not enough
        cap = 2 * max(z0)
        if (cap + 1) ** cfg.size > _SWEEP_LIMIT:
            return Unknown("subcycle sweep too large")
        for y in itertools.product(range(cap + 1), repeat=cfg.size):
            if any(y):
                p = pa_cycle(cfg, y)
                if p > 0:
                    return NonRational(p)
    if self_int == -2:
        return RationalDoublePoint()
    return Rational(-self_int)


def genus_budget_check(q: int, sings: Iterable[int]) -> bool:
    """Geometric genera of the singular points must add up to ``q``."""
    return sum(sings) == q


def parse_dual_graph(text: str) -> ExceptionalConfig:
    """Lines ``name self_int p_a`` declare curves, ``name name mult`` edges.

    ``#`` starts a comment. Curves must be declared before edges use them.
    """
    curves: list[tuple[str, int, int]] = []
    edges: list[tuple[str, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 3:
            raise SingularityError(f"line {lineno}: expected three fields")
        try:
            if _is_int(toks[1]):
                curves.append((toks[0], int(toks[1]), int(toks[2])))
            else:
                edges.append((toks[0], toks[1], int(toks[2])))
        except ValueError:
            raise SingularityError(f"line {lineno}: bad integer") from None
    return ExceptionalConfig.from_dual_graph(curves, edges)


def _is_int(tok: str) -> bool:
    try:
        int(tok)
    except ValueError:
        return False
    return True
