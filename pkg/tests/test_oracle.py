# Brute-force search against the closed forms. Searches run at a tight
# threshold so the threshold offset stays far below the 1e-3 agreement.

import logging
import math

import numpy as np
import pytest

from analytic import tmin_constrained, tmin_general, tmin_ground_to_ground
from errors import ConsistencyError, DomainError
from oracle import (
    DeltaLimitReport,
    SearchFamily,
    SearchSpec,
    search_min_time,
    sweep_fig1,
    verify_delta_limit,
)
from states import LzParams, QubitState, ket0, ket1, random_state

TIGHT = 1 - 1e-9


def _threshold_offset(threshold, omega):
    # fidelity falls at most like cos(omega dt), so the crossing sits at most this far before T_min
    return math.sqrt(2.0 * (1.0 - threshold)) / omega


def test_search_spec_validation():
    with pytest.raises(DomainError):
        SearchSpec(SearchFamily.COMPOSITE, grid_points=1)
    with pytest.raises(DomainError):
        SearchSpec(SearchFamily.COMPOSITE, threshold=1.0)
    with pytest.raises(DomainError):
        SearchSpec(SearchFamily.PIECEWISE_CONSTANT, segments=9)
    with pytest.raises(DomainError):
        SearchSpec(SearchFamily.COMPOSITE, t_max=-1.0)
    with pytest.raises(ValueError):
        SearchSpec("nope")
    assert SearchSpec("composite").family is SearchFamily.COMPOSITE


def test_constrained_families_need_c():
    params = LzParams(gamma=2.0, omega=1.0)
    for family in (SearchFamily.THREE_SEGMENT, SearchFamily.PIECEWISE_CONSTANT):
        with pytest.raises(DomainError):
            search_min_time(SearchSpec(family), params.initial_ground(), params.final_ground(), params)


def test_composite_search_ground_pair(validate_output):
    params = LzParams(gamma=2.0, omega=1.0)
    result = search_min_time(SearchSpec(SearchFamily.COMPOSITE, threshold=TIGHT),
                             params.initial_ground(), params.final_ground(), params)
    assert result.reached
    assert result.duration == pytest.approx(math.atan(2.0), abs=1e-3)
    assert result.duration >= tmin_ground_to_ground(2.0, 1.0) - _threshold_offset(TIGHT, 1.0) - 1e-6
    assert result.coordinates["alpha_in"] == pytest.approx(math.pi / 4, abs=1e-2)
    assert result.coordinates["alpha_f"] == pytest.approx(-math.pi / 4, abs=1e-2)
    assert result.fidelity >= TIGHT - 1e-12
    assert result.to_dict()["family"] == "composite"
    validate_output(result.to_dict(), "search_result")


def test_composite_search_identical_states():
    params = LzParams(gamma=1.0, omega=1.0)
    s = ket0()
    result = search_min_time(SearchSpec(SearchFamily.COMPOSITE), s, s, params)
    assert result.reached and result.duration == 0.0


def test_search_logs_full_threshold(caplog):
    params = LzParams(gamma=1.0, omega=1.0)
    with caplog.at_level(logging.INFO, logger="oracle"):
        search_min_time(SearchSpec(SearchFamily.COMPOSITE, threshold=TIGHT), ket0(), ket0(), params)
    assert "threshold 0.999999999)" in caplog.text


@pytest.mark.parametrize("threshold", [TIGHT, 1 - 1e-6])
def test_composite_search_quarter_turn(threshold):
    # from a pole the target is hit only in a narrow window around pi/4
    params = LzParams(gamma=1.0, omega=1.0)
    final = QubitState(1.0, 1.0)
    result = search_min_time(SearchSpec(SearchFamily.COMPOSITE, threshold=threshold), ket0(), final, params)
    assert result.reached
    assert math.pi / 4 - _threshold_offset(threshold, 1.0) - 1e-6 <= result.duration <= math.pi / 4
    assert result.fidelity >= threshold - 1e-12


@pytest.mark.slow
def test_composite_search_random_pairs():
    rng = np.random.default_rng(2024)
    params = LzParams(gamma=1.0, omega=1.0)
    spec = SearchSpec(SearchFamily.COMPOSITE, threshold=TIGHT)
    for _ in range(50):
        initial, final = random_state(rng), random_state(rng)
        predicted = tmin_general(initial, final, 1.0)
        result = search_min_time(spec, initial, final, params)
        assert result.reached
        assert abs(result.duration - predicted) <= 1e-3
        assert result.duration >= predicted - _threshold_offset(TIGHT, 1.0) - 1e-6


@pytest.mark.slow
@pytest.mark.parametrize("gamma,c", [(2.0, 5.0), (2.0, 0.4), (2.0, 0.1), (1.0, 3.0), (1.0, 0.8)])
def test_three_segment_search_matches_closed_form(gamma, c):
    params = LzParams(gamma=gamma, omega=1.0, c=c)
    expected = tmin_constrained(gamma, 1.0, c)
    result = search_min_time(SearchSpec(SearchFamily.THREE_SEGMENT, threshold=TIGHT),
                             params.initial_ground(), params.final_ground(), params)
    assert result.reached
    assert abs(result.duration - expected.t_min) / expected.t_min <= 1e-3
    assert result.coordinates["t_c"] == result.coordinates["t_minus_c"]
    assert result.coordinates["t_c"] == pytest.approx(expected.t_c, abs=1e-2)


@pytest.mark.slow
def test_asymmetric_search_finds_symmetric_optimum():
    params = LzParams(gamma=2.0, omega=1.0, c=5.0)
    expected = tmin_constrained(2.0, 1.0, 5.0)
    result = search_min_time(SearchSpec(SearchFamily.THREE_SEGMENT, symmetric=False, threshold=TIGHT),
                             params.initial_ground(), params.final_ground(), params)
    assert result.reached
    assert abs(result.duration - expected.t_min) / expected.t_min <= 1e-3
    assert result.coordinates["t_minus_c"] == pytest.approx(result.coordinates["t_c"], abs=1e-2)


def test_piecewise_search_respects_unconstrained_bound(validate_output):
    # |0> -> |1> cannot beat pi/(2 omega) whatever Gamma does
    params = LzParams(gamma=1.0, omega=1.0, c=1.0)
    spec = SearchSpec(SearchFamily.PIECEWISE_CONSTANT, segments=2, threshold=TIGHT)
    result = search_min_time(spec, ket0(), ket1(), params)
    assert result.reached
    assert result.duration == pytest.approx(math.pi / 2, abs=1e-4)
    assert len(result.protocol.segments) == 2
    assert result.fidelity >= TIGHT - 1e-9
    validate_output(result.to_dict(), "search_result")


def test_unreachable_threshold_is_reported(validate_output):
    params = LzParams(gamma=2.0, omega=1.0, c=5.0)
    spec = SearchSpec(SearchFamily.THREE_SEGMENT, grid_points=20, t_max=0.05, threshold=TIGHT)
    result = search_min_time(spec, params.initial_ground(), params.final_ground(), params)
    assert not result.reached
    assert result.duration is None and result.protocol is None
    assert 0.0 < result.fidelity < TIGHT
    validate_output(result.to_dict(), "search_result")


# ============================================================
# SWEEP AND DELTA LIMIT
# ============================================================

def test_sweep_reproduces_regimes(caplog):
    grid = np.linspace(0.05, 20.0, 400)
    with caplog.at_level(logging.WARNING, logger="oracle"):
        rows = sweep_fig1(2.0, grid)
    assert "rises" not in caplog.text
    assert len(rows) == 400

    for row in rows:
        assert row.wTmin == row.two_wTc + row.wToff
        if row.c_over_omega <= 0.5:
            assert row.wToff == 0.0
            assert row.regime == "bang_bang"
        else:
            assert row.wToff > 0.0

    w_tmin = [row.wTmin for row in rows]
    assert all(b <= a + 1e-12 for a, b in zip(w_tmin, w_tmin[1:]))
    # c/omega = 20 is still visibly above the asymptote
    assert 0.0 < rows[-1].wTmin - math.atan(2.0) < 3e-2


def test_sweep_asymptote():
    (row,) = sweep_fig1(2.0, [1e3])
    assert 0.0 < row.wTmin - math.atan(2.0) < 5e-3


def test_sweep_boundary_continuity():
    below, at, above = sweep_fig1(2.0, [0.5 - 1e-12, 0.5, 0.5 + 1e-12])
    assert at.regime == "bang_bang" and above.regime == "bang_off_bang"
    assert abs(above.wTmin - at.wTmin) <= 1e-10
    assert abs(below.wTmin - at.wTmin) <= 1e-10


def test_delta_limit_converges():
    report = verify_delta_limit(math.pi / 4, 1.0)
    assert isinstance(report, DeltaLimitReport)
    assert report.decreasing
    assert report.errors[0] == pytest.approx(math.sin(math.pi / 4) * 1e-2, rel=0.2)
    assert report.to_dict()["gammas"] == [1e2, 1e3, 1e4]


def test_delta_limit_zero_area():
    report = verify_delta_limit(0.0, 1.0)
    assert report.errors == (0.0, 0.0, 0.0)
    assert report.decreasing


def test_delta_limit_rejects_rising_errors():
    # a descending grid makes the pulses coarser, so the errors grow
    with pytest.raises(ConsistencyError):
        verify_delta_limit(math.pi / 4, 1.0, [1e4, 1e2])
    report = verify_delta_limit(math.pi / 4, 1.0, [1e4, 1e2], strict=False)
    assert not report.decreasing
    assert report.to_dict()["decreasing"] is False


def test_delta_limit_domain():
    with pytest.raises(DomainError):
        verify_delta_limit(0.3, 0.0)
    with pytest.raises(DomainError):
        verify_delta_limit(0.3, 1.0, [-10.0])
