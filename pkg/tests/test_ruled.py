from __future__ import annotations

import itertools

import pytest

from divforge.curvebundle import CurveClassExpr, NeedsDeclaration
from divforge.picard import DivisorClass, PicardError, blow_up, new_ruled
from divforge.ruled import (RuledPresentation, antibicanonical_h0, c1_class,
                            divisor_to_ruled, h0_ruled, h0_ruled_class, linear_equivalent)

import surfaces as SF

G = DivisorClass.gen
P = CurveClassExpr.point


def hirzebruch(e: int):
    S = new_ruled(0, e, ["P"])
    return RuledPresentation.from_surface(S.with_bundle(P("P", -e)))


def toric_count(e: int, a: int, b: int) -> int:
    """Lattice points of the polygon 0 <= y <= a, 0 <= x <= b - e*y."""
    return sum(1 for y, x in itertools.product(range(a + 1), range(b + 1)) if x <= b - e * y)


class TestHirzebruch:
    @pytest.mark.parametrize("e", [0, 1, 2, 3, 4])
    def test_against_polygon_count(self, e):
        pres = hirzebruch(e)
        for a in range(5):
            for b in range(-2, 12):
                assert h0_ruled(pres, a, P("P", b)) == toric_count(e, a, b), (a, b)

    def test_class_form_and_c1(self):
        pres = hirzebruch(3)
        C1 = c1_class(pres)
        assert C1 == G("C0") + G("f[P]", 3)
        assert h0_ruled_class(pres, C1 * 2) == toric_count(3, 2, 6)
        assert h0_ruled_class(pres, G("C0", -1)) == 0

    def test_anticanonical(self):
        h = antibicanonical_h0(hirzebruch(1))
        # del Pezzo of degree d: h0(-mK) = 1 + m(m+1)d/2
        assert h == {"-K": 1 + 8, "-2K": 1 + 3 * 8}
        assert h["-K"] == toric_count(1, 2, 3)
        assert h["-2K"] == toric_count(1, 4, 6)


class TestPresentation:
    def test_degree_mismatch(self):
        S = new_ruled(0, 2, ["P"])
        with pytest.raises(PicardError):
            RuledPresentation(S, P("P", -1))
        with pytest.raises(PicardError):
            RuledPresentation.from_surface(S)

    def test_negative_a(self):
        with pytest.raises(PicardError):
            h0_ruled(hirzebruch(1), -1, P("P"))

    def test_special_classes_need_declaration(self):
        S = new_ruled(3, 1, ["p", "q"]).with_bundle(-P("p"))
        pres = RuledPresentation.from_surface(S)
        assert isinstance(h0_ruled(pres, 0, P("p") + P("q")), NeedsDeclaration)


class TestDivisorToRuled:
    def test_split(self):
        S = new_ruled(1, 3, ["a", "b"])
        assert divisor_to_ruled(S, G("C0", 2) + G("f[a]") - G("f[b]")) == (2, P("a") - P("b"))

    def test_exceptional_component_raises(self):
        S = blow_up(new_ruled(0, 1, ["P"]), "x", {"f[P]": 1})
        with pytest.raises(PicardError):
            divisor_to_ruled(S, G("C0") + G("E[x]"))


class TestLinearEquivalence:
    def test_rational_base(self):
        S = new_ruled(0, 4, ["F", "F1"])
        assert linear_equivalent(S, G("f[F]"), G("f[F1]")) is True
        assert linear_equivalent(S, G("f[F]"), G("C0")) is False

    def test_torsion_decides(self):
        S = SF.elliptic_base()
        assert linear_equivalent(S, G("f[a]"), G("f[b]")) is False
        assert linear_equivalent(S, G("f[a]", 2), G("f[b]", 2)) is True
        assert linear_equivalent(S, G("f[Q1]"), G("f[Q2]")) is None
