from __future__ import annotations

import pytest

from divforge.picard import CurveRecord, DivisorClass, blow_up, new_plane
from divforge.singularities import (Cycle, ExceptionalConfig, NonRational, Rational,
                                    RationalDoublePoint, SingularityError, Unknown,
                                    classify_singularity, fundamental_cycle,
                                    genus_budget_check, is_negative_definite,
                                    laufer_sequence, laufer_step_bound, pa_cycle,
                                    parse_dual_graph)

from oracles import ade_graphs

G = DivisorClass.gen


def graph(selfs, edges, pas=None):
    names = [f"c{i}" for i in range(len(selfs))]
    pas = pas or [0] * len(selfs)
    return ExceptionalConfig.from_dual_graph(
        [(n, s, p) for n, s, p in zip(names, selfs, pas)],
        [(names[a], names[b], 1) for a, b in edges])


class TestADE:
    @pytest.mark.parametrize("name,n,edges,highest", ade_graphs(), ids=lambda x: x if isinstance(x, str) else "")
    def test_highest_root(self, name, n, edges, highest):
        cfg = graph([-2] * n, edges)
        z = fundamental_cycle(cfg).vector(cfg)
        assert list(z) == highest
        assert classify_singularity(cfg) == RationalDoublePoint()
        assert pa_cycle(cfg, z) == 0
        bound = laufer_step_bound(cfg)
        assert all(b >= c for b, c in zip(bound, z))

    def test_e8_sequence(self):
        name, n, edges, highest = ade_graphs()[-1]
        seq = laufer_sequence(graph([-2] * n, edges))
        # one unit added per step, starting from a single curve
        assert len(seq) == sum(highest) == 29
        assert all(sum(b) - sum(a) == 1 for a, b in zip(seq, seq[1:]))


class TestClassification:
    @pytest.mark.parametrize("n", [2, 3, 4, 7])
    def test_single_rational_curve(self, n):
        c = classify_singularity(graph([-n], []))
        assert c == (RationalDoublePoint() if n == 2 else Rational(n))

    def test_curve_of_positive_genus(self):
        assert classify_singularity(graph([-3], [], [2])) == NonRational(2)

    def test_cone_over_plane_curve(self):
        # a plane quartic pushed to self-intersection -1 after 17 blow-ups
        S = new_plane().with_curve(CurveRecord("C", G("l", 4)))
        for i in range(17):
            S = blow_up(S, f"p{i}", {"C": 1})
        cfg = ExceptionalConfig.from_curves(S, ["C"])
        assert cfg.gram == ((-1,),)
        assert classify_singularity(cfg) == NonRational(3)

    def test_elliptic_cycle_of_rational_curves(self):
        # a triangle of -3 curves: minimally elliptic
        cfg = graph([-3, -3, -3], [(0, 1), (1, 2), (2, 0)])
        assert fundamental_cycle(cfg).vector(cfg) == (1, 1, 1)
        assert classify_singularity(cfg) == NonRational(1)

    def test_odd_component_is_unknown(self):
        cfg = ExceptionalConfig(("a", "b"), ((-2, 1), (1, -3)), (0, 0))
        assert isinstance(classify_singularity(cfg), Unknown)

    def test_genus_budget(self):
        assert genus_budget_check(5, [5])
        assert not genus_budget_check(5, [2, 2])


class TestErrors:
    def test_not_negative_definite_has_witness(self):
        cfg = graph([-1, -1], [(0, 1)])
        nd, w = is_negative_definite(cfg)
        assert not nd and cfg.dot(w, w) >= 0 and any(w)
        with pytest.raises(SingularityError, match="witness"):
            fundamental_cycle(cfg)

    def test_disconnected(self):
        with pytest.raises(SingularityError, match="connected"):
            fundamental_cycle(graph([-2, -2], []))

    def test_malformed(self):
        with pytest.raises(SingularityError):
            ExceptionalConfig(("a", "b"), ((-2, 1), (0, -2)), (0, 0))
        with pytest.raises(SingularityError):
            ExceptionalConfig.from_dual_graph([("a", -2, 0), ("a", -2, 0)])
        with pytest.raises(SingularityError):
            ExceptionalConfig.from_dual_graph([("a", -2, 0)], [("a", "b", 1)])
        with pytest.raises(SingularityError):
            Cycle.from_vector(graph([-2], []), [-1])


class TestDualGraphParser:
    def test_parse(self):
        cfg = parse_dual_graph("# A2\na -2 0\nb -2 0\na b 1\n")
        assert cfg.names == ("a", "b")
        assert cfg.gram == ((-2, 1), (1, -2))
        assert classify_singularity(cfg) == RationalDoublePoint()

    @pytest.mark.parametrize("text", ["a -2\n", "a -2 x\n", "a -2 0\na b 1\n"])
    def test_errors(self, text):
        with pytest.raises(SingularityError):
            parse_dual_graph(text)
