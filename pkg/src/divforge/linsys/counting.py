"""Closed-form counts: expected dimensions, genera and covering bounds."""

from __future__ import annotations

from math import comb
from typing import Iterable

__all__ = [
    "expected_dim_plane",
    "plucker_genus",
    "castelnuovo_severi_bound",
    "product_curve_genus",
    "bpf_drop_test",
    "separation_drop_test",
    "plurigenus_parity_bound",
]


def expected_dim_plane(d: int, mults: Iterable[int]) -> int:
    """Plane curves of degree ``d`` with points of the given multiplicities.

    Each point of multiplicity ``r`` imposes ``r(r+1)/2`` conditions.
    """
    if d < 0:
        raise ValueError("degree must be nonnegative")
    return max(-1, comb(d + 2, 2) - sum(r * (r + 1) // 2 for r in mults) - 1)


def plucker_genus(d: int, mults: Iterable[int]) -> int:
    """Geometric genus of a degree ``d`` plane curve with ordinary singular points."""
    if d < 1:
        raise ValueError("degree must be positive")
    g = (d - 1) * (d - 2) // 2 - sum(r * (r - 1) // 2 for r in mults)
    if g < 0:
        raise ValueError(f"negative genus {g}: no irreducible curve has these singularities")
    return g


def castelnuovo_severi_bound(d1: int, g1: int, d2: int, g2: int) -> int:
    """Largest genus of a curve with independent covers of degrees ``d1``, ``d2``."""
    return d1 * g1 + d2 * g2 + (d1 - 1) * (d2 - 1)


def product_curve_genus(a: int, b: int) -> int:
    """Genus bound for a curve of bidegree ``(a, b)`` on P^1 x P^1."""
    if a < 1 or b < 1:
        raise ValueError("bidegrees must be positive")
    return (a - 1) * (b - 1)


def bpf_drop_test(dim_L: int, dim_L_minus_point: int) -> bool:
    """A general point imposes one condition exactly when there is no base point."""
    return dim_L - dim_L_minus_point == 1


def separation_drop_test(dim_L: int, dim_L_minus_two_points: int) -> bool:
    return dim_L - dim_L_minus_two_points == 2


def plurigenus_parity_bound(m: int) -> int:
    """``h^0`` of ``m`` times a nonzero 2-torsion class: 1 for even ``m``, else 0."""
    if m < 1:
        raise ValueError("m must be positive")
    return 1 - m % 2
