import math

import pytest

from refinement import bisect_crossing, expand_bracket, golden_section_max, scan_then_golden


def test_golden_section_interior_maximum():
    x, fx = golden_section_max(lambda x: -(x - 0.3) ** 2, 0.0, 1.0, tol=1e-10)
    assert x == pytest.approx(0.3, abs=1e-8)
    assert fx == pytest.approx(0.0, abs=1e-15)


def test_golden_section_boundary_maximum():
    x, fx = golden_section_max(lambda x: x, 0.0, 1.0)
    assert x == 1.0 and fx == 1.0


def test_golden_section_ties_go_to_smallest_x():
    x, _ = golden_section_max(lambda x: 1.0, 0.25, 2.0)
    assert x == 0.25


def test_scan_then_golden_finds_global_peak():
    def f(x):
        return math.exp(-(x - 0.2) ** 2 / 1e-3) + 2.0 * math.exp(-(x - 0.8) ** 2 / 1e-3)

    x, fx = scan_then_golden(f, 0.0, 1.0, points=101, tol=1e-12)
    assert x == pytest.approx(0.8, abs=1e-6)
    assert fx == pytest.approx(2.0, abs=1e-9)


def test_scan_then_golden_degenerate_interval():
    assert scan_then_golden(lambda x: x * x, 0.5, 0.5, points=10) == (0.5, 0.25)


def test_bisect_crossing():
    t = bisect_crossing(lambda t: t >= 0.37, 0.0, 1.0, tol=1e-9)
    assert 0.37 <= t <= 0.37 + 1e-9


def test_expand_bracket():
    assert expand_bracket(lambda t: t >= 5.0, 0.0, 1.0, limit=100.0) == (3.0, 7.0)
    assert expand_bracket(lambda t: t >= 5.0, 0.0, 1.0, limit=4.0) is None
    assert expand_bracket(lambda t: True, 0.0, 1.0, limit=4.0) == (0.0, 1.0)
