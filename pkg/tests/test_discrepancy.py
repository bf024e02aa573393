"""Occupancy grids, exact sup-discrepancy, and weighted-measure CDF errors."""

from fractions import Fraction
from itertools import product
from math import gcd, log

import numpy as np
import pytest

from coprime_lab.constraints import Box, DivisibleBy, TupleConstraint
from coprime_lab.counting import count_box_bruteforce, member, weighted_sum_gcd, weighted_sum_lcm
from coprime_lab.discrepancy import (
    FLAG_AT_CORNER,
    FLAG_LEFT_LIMIT,
    GRID_CELL_CAP,
    build_grid,
    measure_cdf_error,
    rate_scan,
    sup_discrepancy,
)
from coprime_lab.errors import CapacityError


def test_grid_cumulative_matches_membership():
    for constraint in (
        TupleConstraint.mutual(2),
        TupleConstraint.pairwise(3),
        TupleConstraint.mutual(3),
        TupleConstraint.kwise(3, 3),
        TupleConstraint.pairwise(2, (DivisibleBy(2), None)),
    ):
        n = 12
        grid = build_grid(n, constraint)
        for bounds in product(range(0, n + 1, 3), repeat=constraint.r):
            want = sum(
                1
                for x in product(*(range(1, b + 1) for b in bounds))
                if member(x, constraint)
            )
            assert int(grid.cumulative[bounds]) == want, (constraint.kind, bounds)


def test_grid_frozen_corner():
    grid = build_grid(4, TupleConstraint.mutual(2))
    assert int(grid.cumulative[4, 4]) == 11
    assert int(grid.cumulative[0, 4]) == 0


def test_grid_count_method_field():
    grid = build_grid(6, TupleConstraint.mutual(2))
    res = grid.count((5, 3))
    assert res.count == int(grid.cumulative[5, 3])
    assert res.method == "PrefixGrid"


def test_grid_cell_cap():
    with pytest.raises(CapacityError):
        build_grid(int(GRID_CELL_CAP ** (1 / 3)) + 10, TupleConstraint.mutual(3))


def test_sup_discrepancy_degenerate_n1():
    report = sup_discrepancy(build_grid(1, TupleConstraint.mutual(2)))
    assert report.value == 1.0
    assert report.argmax == (0, 0)
    assert report.flag == FLAG_LEFT_LIMIT
    assert report.total == 1
    assert report.rate_ratio is None


def test_sup_discrepancy_against_dense_grid():
    """Bracket the exact sup by sampling the continuous parameter on a fine
    grid: the sampled max can undershoot by at most r * step."""
    for constraint, n in ((TupleConstraint.mutual(2), 24), (TupleConstraint.pairwise(3), 8)):
        r = constraint.r
        grid = build_grid(n, constraint)
        report = sup_discrepancy(grid, constraint)
        total = report.total
        step = 1.0 / (4 * n)
        sampled = Fraction(0)
        axis = [Fraction(i, 4 * n) for i in range(0, 4 * n + 1)]
        for t in product(axis, repeat=r):
            idx = tuple(int(ti * n) for ti in t)
            emp = Fraction(int(grid.cumulative[idx]), total)
            vol = Fraction(1)
            for ti in t:
                vol *= ti
            dev = abs(emp - vol)
            if dev > sampled:
                sampled = dev
        assert float(sampled) <= report.value + 1e-12
        assert report.value <= float(sampled) + r * step


def test_sup_discrepancy_attained_value_is_consistent():
    n = 16
    constraint = TupleConstraint.mutual(2)
    grid = build_grid(n, constraint)
    report = sup_discrepancy(grid, constraint)
    m = report.argmax
    emp = Fraction(int(grid.cumulative[m]), report.total)
    if report.flag == FLAG_AT_CORNER:
        vol = Fraction(m[0], n) * Fraction(m[1], n)
    else:
        vol = Fraction(min(m[0] + 1, n), n) * Fraction(min(m[1] + 1, n), n)
    assert abs(float(emp - vol)) == pytest.approx(report.value, abs=1e-15)


def test_sup_discrepancy_lower_bound_witness():
    # the empty slab x1 <= 0 gives |0 - t2...tr/n| -> 1/n at the left limit,
    # so the sup is always at least 1/n > 1/(2n)
    for constraint in (TupleConstraint.mutual(2), TupleConstraint.mutual(3)):
        for n in (8, 32):
            report = sup_discrepancy(build_grid(n, constraint), constraint)
            assert report.value >= 1.0 / n - 1e-12
            assert report.value > 1.0 / (2 * n)


def test_empty_grid_raises():
    # an empty point set: nothing <= 4 is divisible by 5
    grid = build_grid(4, TupleConstraint.pairwise(2, (DivisibleBy(5), None)))
    with pytest.raises(ValueError):
        sup_discrepancy(grid)


def test_rate_scan_and_ratio_normalization():
    c2 = TupleConstraint.mutual(2)
    reports = rate_scan((16, 64), c2)
    assert [rep.n for rep in reports] == [16, 64]
    for rep in reports:
        assert rep.rate_ratio == pytest.approx(rep.value * rep.n / log(rep.n))
    c3 = TupleConstraint.mutual(3)
    rep3 = rate_scan((16,), c3)[0]
    assert rep3.rate_ratio == pytest.approx(rep3.value * 16)
    pc = TupleConstraint.pairwise(3)
    rep_pc = rate_scan((16,), pc)[0]
    assert rep_pc.rate_ratio == pytest.approx(rep_pc.value * 16 / log(16) ** 2)


def test_measure_cdf_error_small_case():
    # n=4, step 2: check the gcd variant against a direct computation
    n, step = 4, 2
    base = weighted_sum_gcd(n, (1, 1))
    worst = Fraction(0)
    for i in (1, 2):
        for j in (1, 2):
            a, b = Fraction(i, 2), Fraction(j, 2)
            got = Fraction(weighted_sum_gcd(n, (a, b)), base)
            worst = max(worst, abs(got - a * b))
    assert measure_cdf_error("gcd", n, step) == pytest.approx(float(worst))


def test_measure_cdf_error_lcm_small_case():
    n, step = 6, 3
    base = weighted_sum_lcm(n, (1, 1))
    worst = Fraction(0)
    for i in range(1, 4):
        for j in range(1, 4):
            a, b = Fraction(i, 3), Fraction(j, 3)
            got = Fraction(weighted_sum_lcm(n, (a, b)), base)
            worst = max(worst, abs(got - (a * b) ** 2))
    assert measure_cdf_error("lcm", n, step) == pytest.approx(float(worst))


def test_measure_cdf_error_validation():
    with pytest.raises(ValueError):
        measure_cdf_error("max", 10, 2)
    with pytest.raises(ValueError):
        measure_cdf_error("gcd", 10, 0)


def test_grid_matches_bruteforce_counts():
    c = TupleConstraint.pairwise(3)
    n = 20
    grid = build_grid(n, c)
    for bounds in ((20, 20, 20), (7, 13, 20), (1, 1, 1)):
        want = count_box_bruteforce(Box(bounds=bounds, n=n), c).count
        assert int(grid.cumulative[bounds]) == want
