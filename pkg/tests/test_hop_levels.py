"""hop grid: ceiling rounding, inverse identities, sum and gap bounds."""

import math

import pytest

from dynapsp.hop_levels import HopLevels


def test_grid_base_values():
    hl = HopLevels(100)
    assert hl.h[0] == 1
    assert hl.h[1] == 2
    assert list(hl.h[:7]) == [1, 2, 3, 4, 6, 8, 12]


def test_cap_brackets_sqrt_n():
    for n in range(2, 2000):
        hl = HopLevels(n)
        assert hl.H * hl.H >= n
        if hl.i_h > 0:
            assert hl.h[hl.i_h - 1] ** 2 < n
        assert hl.H < 1.5 * math.sqrt(n) + 1


def test_h_inverse_identities_exhaustive():
    for n in (10, 100, 5000, 10**4):
        hl = HopLevels(n)
        top = int(hl.h[-1])
        # independent oracle: linear scan over the grid
        for x in range(1, min(top, 4 * hl.H) + 1):
            y = hl.h_inverse(x)
            scan = next(j for j in range(len(hl.h)) if x <= hl.h[j])
            assert y == scan
            assert x <= hl.h[y]
            if y > 0:
                assert hl.h[y - 1] < x
        for j in range(len(hl.h)):
            assert hl.h_inverse(int(hl.h[j])) == j


def test_h_inverse_rejects_nonpositive():
    hl = HopLevels(50)
    with pytest.raises(ValueError):
        hl.h_inverse(0)


def test_geometric_sum_bound():
    hl = HopLevels(10**4)
    assert sum(1.0 / float(h) for h in hl.h[: hl.i_h + 1]) <= 3.0


def test_four_level_gap():
    # the recovery argument needs h[j+4] >= 4*h[j]; with ceiling rounding the
    # inequality is tight (not strict) at j in {1, 2}
    for n in (50, 1000, 10**4):
        hl = HopLevels(n)
        for j in range(len(hl.h) - 4):
            assert hl.h[j + 4] >= 4 * hl.h[j]


def test_strictly_increasing():
    hl = HopLevels(10**4)
    assert all(hl.h[j] < hl.h[j + 1] for j in range(len(hl.h) - 1))


def test_extended_grid_covers_concatenations():
    hl = HopLevels(64)
    assert hl.h[-1] >= 4 * hl.H
    assert hl.h[-1] >= 2 * 64
