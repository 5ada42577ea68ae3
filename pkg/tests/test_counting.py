from __future__ import annotations

import itertools

import pytest

from divforge.linsys import counting


def monomials(d: int) -> int:
    return sum(1 for i, j in itertools.product(range(d + 1), repeat=2) if i + j <= d)


class TestCounts:
    @pytest.mark.parametrize("d", range(0, 12))
    def test_expected_dim_without_points(self, d):
        assert counting.expected_dim_plane(d, []) == monomials(d) - 1

    def test_expected_dim_with_points(self):
        assert counting.expected_dim_plane(3, [1] * 9) == 0
        assert counting.expected_dim_plane(2, [2, 2]) == -1  # clamped
        with pytest.raises(ValueError):
            counting.expected_dim_plane(-1, [])

    def test_plucker(self):
        assert counting.plucker_genus(4, []) == 3
        assert counting.plucker_genus(4, [2, 2, 2]) == 0
        assert counting.plucker_genus(6, [2] * 10) == 0
        with pytest.raises(ValueError):
            counting.plucker_genus(3, [2, 2])

    def test_covers(self):
        assert counting.castelnuovo_severi_bound(2, 0, 2, 0) == 1
        assert counting.product_curve_genus(3, 3) == 4
        with pytest.raises(ValueError):
            counting.product_curve_genus(0, 2)

    def test_drop_tests(self):
        assert counting.bpf_drop_test(12, 11)
        assert not counting.bpf_drop_test(12, 12) and not counting.bpf_drop_test(12, 10)
        assert counting.separation_drop_test(12, 10)
        assert not counting.separation_drop_test(12, 11) and not counting.separation_drop_test(12, 9)

    @pytest.mark.parametrize("m,expected", [(1, 0), (2, 1), (3, 0), (4, 1)])
    def test_parity(self, m, expected):
        assert counting.plurigenus_parity_bound(m) == expected
