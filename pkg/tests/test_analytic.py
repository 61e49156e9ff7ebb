import math

import numpy as np
import pytest

from analytic import (
    QslReport,
    Regime,
    TminResult,
    bang_bang_duration,
    bang_off_bang_durations,
    composite_fidelity,
    pulse_areas,
    qsl_times,
    regime,
    regime_boundary,
    t_fleming,
    tmin_constrained,
    tmin_general,
    tmin_ground_to_ground,
    tmin_optical,
    tmin_unconstrained,
)
from errors import ConsistencyError, DomainError
from states import Level, QubitState, ket0, ket1, lz_eigenstate, random_state


def _ground_pair(gamma, omega=1.0):
    return lz_eigenstate(-gamma, omega), lz_eigenstate(gamma, omega)


# ============================================================
# UNCONSTRAINED
# ============================================================

def test_ground_to_ground_at_gamma_two():
    assert tmin_ground_to_ground(2.0, 1.0) == pytest.approx(1.1071487177940904, abs=1e-12)
    assert tmin_ground_to_ground(1.0, 1.0) == pytest.approx(math.pi / 4, abs=1e-12)
    assert tmin_ground_to_ground(1e-12, 1.0) == pytest.approx(0.0, abs=1e-11)


@pytest.mark.parametrize("gamma,omega", [(2.0, 1.0), (0.3, 2.0), (7.0, 0.5), (1.0, 1.0)])
def test_general_formula_on_ground_pair(gamma, omega):
    initial, final = _ground_pair(gamma, omega)
    assert tmin_general(initial, final, omega) == pytest.approx(tmin_ground_to_ground(gamma, omega), abs=1e-12)


def test_ground_to_excited_of_same_hamiltonian():
    # omega T_min = arctan(gamma/omega) for this pair as well
    gamma, omega = 2.0, 1.0
    g = lz_eigenstate(gamma, omega, Level.GROUND)
    e = lz_eigenstate(gamma, omega, Level.EXCITED)
    assert tmin_general(g, e, omega) == pytest.approx(math.atan(gamma / omega) / omega, abs=1e-12)


def test_tmin_examples():
    assert tmin_general(ket0(), ket1(), 2.0) == pytest.approx(math.pi / 4, abs=1e-15)
    assert tmin_general(ket0(), QubitState(1.0, 1.0), 1.0) == pytest.approx(math.pi / 4, abs=1e-15)
    assert tmin_general(ket0(), ket0(), 1.0) == 0.0
    # omega_max replaces omega
    assert tmin_general(ket0(), ket1(), 1.0, omega_max=2.0) == pytest.approx(math.pi / 4, abs=1e-15)


def test_tmin_zero_iff_magnitudes_proportional(rng):
    a = QubitState(0.6, 0.8)
    b = QubitState(0.6, -0.8j)
    assert tmin_general(a, b, 1.0) == 0.0
    for _ in range(100):
        s, t = random_state(rng), random_state(rng)
        assert tmin_general(s, t, 1.0) > 0.0


def test_tmin_swap_symmetry(rng):
    for _ in range(100):
        s, t = random_state(rng), random_state(rng)
        assert tmin_general(s, t, 1.3) == tmin_general(t, s, 1.3)


def test_tmin_domain_errors():
    with pytest.raises(DomainError):
        tmin_general(ket0(), ket1(), 0.0)
    with pytest.raises(DomainError):
        tmin_ground_to_ground(-1.0, 1.0)
    with pytest.raises(DomainError):
        tmin_general(ket0(), ket1(), 1.0, omega_max=-2.0)


def test_tmin_optical():
    # sigma1 pulses are free: |0> -> |1> costs nothing
    assert tmin_optical(ket0(), ket1(), 1.0) == 0.0
    plus, minus = QubitState(1.0, 1.0), QubitState(1.0, -1.0)
    assert tmin_optical(plus, minus, 2.0) == pytest.approx(math.pi / 4, abs=1e-12)
    with pytest.raises(DomainError):
        tmin_optical(ket0(), ket1(), 0.0)


def test_pulse_areas_ground_pair():
    initial, final = _ground_pair(2.0)
    areas = pulse_areas(initial, final, 1.0)
    assert areas.alpha_in == pytest.approx(math.pi / 4, abs=1e-12)
    assert areas.alpha_f == pytest.approx(-math.pi / 4, abs=1e-12)
    assert areas.t_min == pytest.approx(math.atan(2.0), abs=1e-12)


def test_pulse_areas_identical_states():
    areas = pulse_areas(ket0(), ket0(), 1.0)
    assert areas == (0.0, 0.0, 0.0)


def test_pulse_areas_random_pairs(rng):
    for _ in range(50):
        initial, final = random_state(rng), random_state(rng)
        omega = rng.uniform(0.2, 3.0)
        areas = pulse_areas(initial, final, omega)
        assert -math.pi / 2 <= areas.alpha_in < math.pi / 2
        assert -math.pi / 2 <= areas.alpha_f < math.pi / 2
        f = composite_fidelity(initial, final, omega, areas.alpha_in, areas.alpha_f, areas.t_min)
        assert f >= 1 - 1e-9


def test_pulse_areas_search_agrees():
    initial, final = _ground_pair(2.0)
    areas = pulse_areas(initial, final, 1.0, method="search")
    f = composite_fidelity(initial, final, 1.0, areas.alpha_in, areas.alpha_f, areas.t_min)
    assert f >= 1 - 1e-9
    with pytest.raises(DomainError):
        pulse_areas(initial, final, 1.0, method="guess")


def test_tmin_unconstrained_result():
    initial, final = _ground_pair(2.0)
    result = tmin_unconstrained(initial, final, 1.0)
    assert result.regime is Regime.UNCONSTRAINED
    assert result.t_c is None and result.t_off is None
    d = result.to_dict()
    assert set(d) == {"t_min", "regime", "t_c", "t_off", "alpha_in", "alpha_f"}
    assert d["regime"] == "unconstrained"


# ============================================================
# CONSTRAINED
# ============================================================

def test_regime_selection():
    assert regime(2.0, 1.0) is Regime.UNCONSTRAINED
    assert regime(2.0, 1.0, 5.0) is Regime.BANG_OFF_BANG
    assert regime(2.0, 1.0, 0.4) is Regime.BANG_BANG
    # boundary c = omega^2/gamma belongs to bang-bang
    assert regime(2.0, 1.0, 0.5) is Regime.BANG_BANG
    assert regime(2.0, 1.0, 0.5 + 1e-9) is Regime.BANG_OFF_BANG
    assert regime_boundary(2.0, 1.0) == 0.5


@pytest.mark.parametrize("gamma,c", [(2.0, 5.0), (2.0, 0.4), (1.0, 3.0), (1.0, 0.8), (0.5, 100.0)])
def test_constrained_row_identity(gamma, c):
    result = tmin_constrained(gamma, 1.0, c)
    assert result.t_min == 2.0 * result.t_c + result.t_off
    if result.regime is Regime.BANG_BANG:
        assert result.t_off == 0.0
    else:
        assert result.t_off > 0.0


def test_constrained_known_value():
    t_c, t_off = bang_off_bang_durations(2.0, 1.0, 5.0)
    rabi = math.sqrt(26.0)
    assert t_c == pytest.approx(math.asin(math.sqrt(26.0 / 70.0)) / rabi, abs=1e-15)
    assert t_off == pytest.approx(math.atan(9.0 / math.sqrt(44.0)), abs=1e-15)


def test_branch_continuity():
    t_c, t_off = bang_off_bang_durations(2.0, 1.0, 0.5)
    assert t_off == 0.0
    assert abs(2.0 * bang_bang_duration(2.0, 1.0, 0.5) - 2.0 * t_c) <= 1e-12
    below = tmin_constrained(2.0, 1.0, 0.5)
    above = tmin_constrained(2.0, 1.0, 0.5 + 1e-10)
    assert below.regime is Regime.BANG_BANG and above.regime is Regime.BANG_OFF_BANG
    assert above.t_min == pytest.approx(below.t_min, abs=1e-8)


def test_large_c_limit():
    c = 1e6
    t_c, t_off = bang_off_bang_durations(2.0, 1.0, c)
    assert t_off == pytest.approx(math.atan(2.0), abs=1e-5)
    assert math.hypot(c, 1.0) * t_c == pytest.approx(math.pi / 4, abs=1e-5)
    assert tmin_constrained(2.0, 1.0, c).t_min > tmin_ground_to_ground(2.0, 1.0)


def test_constrained_never_beats_unconstrained():
    unconstrained = tmin_ground_to_ground(2.0, 1.0)
    for c in np.geomspace(0.05, 1e4, 60):
        assert tmin_constrained(2.0, 1.0, float(c)).t_min >= unconstrained


def test_constrained_domain_errors():
    with pytest.raises(DomainError):
        tmin_constrained(2.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        tmin_constrained(-2.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        bang_off_bang_durations(2.0, 1.0, 0.1)


def test_tmin_result_checks():
    with pytest.raises(ConsistencyError):
        TminResult(t_min=-1.0, regime=Regime.UNCONSTRAINED)
    with pytest.raises(ConsistencyError):
        TminResult(t_min=1.0, regime=Regime.BANG_BANG, t_c=0.5, t_off=0.1)


# ============================================================
# SPEED LIMITS
# ============================================================

def test_qsl_ordering_random_pairs(rng):
    for _ in range(1000):
        initial, final = random_state(rng), random_state(rng)
        report = qsl_times(initial, final, 1.0)
        assert report.ordered(tol=1e-12)


def test_qsl_equality_on_phase_matched_pairs(rng):
    for _ in range(50):
        a, b = rng.uniform(0.0, math.pi / 2, size=2)
        initial = QubitState(math.cos(a), math.sin(a))
        final = QubitState(math.cos(b), math.sin(b))
        report = qsl_times(initial, final, 1.0)
        assert abs(report.t_min - report.t_qsl_overlap) <= 1e-12


def test_qsl_strict_on_phase_mismatched_pairs(rng):
    for _ in range(50):
        a, b = rng.uniform(0.2, math.pi / 2 - 0.2, size=2)
        initial = QubitState(math.cos(a), math.sin(a))
        final = QubitState(math.cos(b), 1j * math.sin(b))
        report = qsl_times(initial, final, 1.0)
        assert report.t_min < report.t_qsl_overlap - 1e-6


def test_qsl_orthogonal_pair():
    g = lz_eigenstate(2.0, 1.5, Level.GROUND)
    e = lz_eigenstate(2.0, 1.5, Level.EXCITED)
    report = qsl_times(g, e, 1.5)
    assert report.t_qsl_overlap == pytest.approx(math.pi / 3, abs=1e-12)


def test_qsl_variance_undefined():
    # sigma1 eigenstate has no energy spread under omega sigma1
    plus = QubitState(1.0, 1.0)
    report = qsl_times(plus, ket0(), 1.0)
    assert report.t_qsl_variance == math.inf
    assert not report.variance_defined
    assert report.ordered()
    assert report.to_dict()["variance_defined"] is False


def test_fleming_time():
    # ket0 under omega sigma1 has spread omega
    assert t_fleming(ket0(), ket1(), 2.0) == pytest.approx(math.pi / 4, abs=1e-12)
    # spread sqrt(gamma^2 + omega^2) - mean^2 with mean = gamma
    assert t_fleming(ket0(), ket1(), 1.0, gamma=3.0) == pytest.approx(math.pi / 2, abs=1e-12)
    assert t_fleming(QubitState(1.0, 1.0), ket0(), 1.0) == math.inf


def test_qsl_report_fields():
    report = QslReport(t_min=1.0, t_qsl_overlap=1.2, t_qsl_variance=1.5, t_fleming=2.0)
    assert report.ordered()
    assert not QslReport(t_min=1.3, t_qsl_overlap=1.2, t_qsl_variance=1.5, t_fleming=2.0).ordered()
