# Closed-form propagators and the Euler factorization.

import math

import numpy as np
import pytest
from scipy.linalg import expm

from errors import DomainError
from su2 import (
    SIGMA_1,
    SIGMA_3,
    EulerAngles,
    Unitary2,
    axis_rotation,
    delta_rotation,
    euler_compose,
    euler_decompose,
    expm_pauli,
    pauli,
)


def _random_su2(rng: np.random.Generator) -> Unitary2:
    """Haar-uniform SU(2) via a random unit quaternion."""
    v = rng.normal(size=4)
    a, b, c, d = v / np.linalg.norm(v)
    return Unitary2(np.array([[a + 1j * b, c + 1j * d], [-c + 1j * d, a - 1j * b]]))


@pytest.mark.parametrize("a,b,t", [
    (2.0, 1.0, 0.7),
    (-5.0, 1.0, 0.13),
    (0.0, 1.0, math.pi / 2),
    (3.0, 0.0, 1.1),
    (1e3, 1.0, 1e-3),
    (0.4, -0.3, -2.0),
])
def test_expm_pauli_matches_matrix_exponential(a, b, t):
    expected = expm(-1j * (a * SIGMA_3 + b * SIGMA_1) * t)
    u = expm_pauli(a, b, t)
    assert np.max(np.abs(u.matrix - expected)) < 1e-12


def test_expm_pauli_series_branch():
    # s * t far below the switch point
    u = expm_pauli(1.0, 0.5, 1e-10)
    expected = expm(-1j * (SIGMA_3 + 0.5 * SIGMA_1) * 1e-10)
    assert np.max(np.abs(u.matrix - expected)) < 1e-15
    assert expm_pauli(0.0, 0.0, 3.0).max_abs_diff(Unitary2.identity()) == 0.0


def test_expm_pauli_semigroup_and_inverse(rng):
    for _ in range(50):
        a, b = rng.uniform(-5.0, 5.0, size=2)
        t1, t2 = rng.uniform(-2.0, 2.0, size=2)
        joined = expm_pauli(a, b, t1) @ expm_pauli(a, b, t2)
        assert joined.max_abs_diff(expm_pauli(a, b, t1 + t2)) < 1e-12
        back = expm_pauli(a, b, -t1) @ expm_pauli(a, b, t1)
        assert back.max_abs_diff(Unitary2.identity()) < 1e-12
        assert expm_pauli(a, b, -t1).max_abs_diff(expm_pauli(a, b, t1).dagger()) < 1e-12


def test_generated_unitaries_are_special_unitary():
    rng = np.random.default_rng(11)
    for _ in range(200):
        a, b = rng.normal(scale=5.0, size=2)
        t = rng.uniform(-3.0, 3.0)
        u = expm_pauli(a, b, t)
        assert u.unitarity_error() < 1e-12
        assert abs(u.det() - 1.0) < 1e-12


def test_delta_rotation_is_sigma3_exponential():
    alpha = 0.3
    expected = expm(-1j * alpha * SIGMA_3)
    assert np.max(np.abs(delta_rotation(alpha).matrix - expected)) < 1e-15


def test_axis_rotation_half_angle():
    for axis in (1, 2, 3):
        expected = expm(-0.5j * 0.9 * pauli(axis))
        assert np.max(np.abs(axis_rotation(axis, 0.9).matrix - expected)) < 1e-14
    with pytest.raises(DomainError):
        axis_rotation(0, 1.0)


def test_unitary_is_read_only():
    u = expm_pauli(1.0, 1.0, 0.5)
    with pytest.raises(ValueError):
        u.matrix[0, 0] = 2.0


def test_unitary_rejects_bad_input():
    with pytest.raises(DomainError):
        Unitary2(np.eye(3))
    with pytest.raises(DomainError):
        Unitary2(np.array([[np.nan, 0], [0, 1]]))
    with pytest.raises(DomainError):
        expm_pauli(math.inf, 1.0, 1.0)
    with pytest.raises(DomainError):
        pauli(4)


@pytest.mark.parametrize("n_samples", [256])
def test_euler_round_trip(n_samples):
    rng = np.random.default_rng(12345)
    errs = []
    for _ in range(n_samples):
        u = _random_su2(rng)
        angles = euler_decompose(u)
        errs.append(euler_compose(angles).max_abs_diff(u))

        assert -math.pi <= angles.tau1 <= math.pi
        assert -math.pi < angles.tau2 <= 2 * math.pi
        assert -math.pi < angles.tau3 <= 2 * math.pi

    assert max(errs) < 1e-10


def test_euler_decompose_recovers_canonical_angles():
    angles = EulerAngles(tau3=0.7, tau1=-0.4, tau2=1.3)
    found = euler_decompose(euler_compose(angles))
    assert found.as_tuple() == pytest.approx(angles.as_tuple(), abs=1e-12)


@pytest.mark.parametrize("tau3", [-4.0, -2 * math.pi + 1e-3, -math.pi - 1e-9])
@pytest.mark.parametrize("tau1,tau2", [(0.3, 0.5), (-0.3, 0.5), (0.3, -0.5), (-1.2, 2.9)])
def test_euler_decompose_moves_large_negative_tau3_into_box(tau3, tau1, tau2):
    u = euler_compose(EulerAngles(tau3=tau3, tau1=tau1, tau2=tau2))
    angles = euler_decompose(u)
    assert -math.pi <= angles.tau1 <= math.pi
    assert -math.pi < angles.tau2 <= 2 * math.pi
    assert -math.pi < angles.tau3 <= 2 * math.pi
    assert euler_compose(angles).max_abs_diff(u) < 1e-12


def test_euler_decompose_half_turn_identity():
    angles = euler_decompose(euler_compose(EulerAngles(tau3=-4.0, tau1=0.3, tau2=0.5)))
    assert angles.as_tuple() == pytest.approx((-4.0 + math.pi, math.pi - 0.3, 0.5 - math.pi), abs=1e-12)


def test_euler_gimbal_lock():
    u = euler_compose(EulerAngles(tau3=0.4, tau1=math.pi / 2, tau2=0.7))
    angles = euler_decompose(u)
    assert angles.tau2 == 0.0
    assert angles.tau1 == pytest.approx(math.pi / 2, abs=1e-9)
    assert euler_compose(angles).max_abs_diff(u) < 1e-9


def test_euler_decompose_rejects_non_unitary():
    with pytest.raises(DomainError):
        euler_decompose(Unitary2(np.array([[2.0, 0.0], [0.0, 0.5]])))
    # unitary but det = -1
    with pytest.raises(DomainError):
        euler_decompose(Unitary2(SIGMA_3))
