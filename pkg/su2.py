"""
Exact SU(2) algebra for two-level propagators.

Every unitary used by the package is the exponential of a traceless
Hamiltonian, so it is stored as a 2x2 complex matrix with det = 1 and all
exponentials are evaluated in closed form:

    exp(-i (a sigma3 + b sigma1) t) = cos(s t) 1 - i sin(s t) (a sigma3 + b sigma1) / s,
    s = sqrt(a^2 + b^2).

Euler factorization used throughout:

    U = exp(-i sigma3 tau3 / 2) exp(-i sigma1 tau1 / 2) exp(-i sigma2 tau2 / 2)
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from config import EULER_TOL, SERIES_SWITCH, UNITARY_INPUT_TOL
from errors import DomainError

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)

_PAULI = {0: SIGMA_0, 1: SIGMA_1, 2: SIGMA_2, 3: SIGMA_3}


def pauli(k: int) -> np.ndarray:
    """Return a copy of sigma_k (k = 0 gives the identity)."""
    if k not in _PAULI:
        raise DomainError(f"Pauli index must be 0..3, got {k}")
    return _PAULI[k].copy()


@dataclass(frozen=True, eq=False)
class Unitary2:
    """
    Immutable 2x2 special-unitary matrix.

    The wrapped array is copied and marked read-only, so instances can be
    shared between concurrent evaluations.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise DomainError(f"Unitary2 needs a 2x2 matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise DomainError("Unitary2 entries must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls) -> "Unitary2":
        return cls(SIGMA_0)

    @property
    def a(self) -> complex:
        return complex(self.matrix[0, 0])

    @property
    def b(self) -> complex:
        return complex(self.matrix[0, 1])

    @property
    def c(self) -> complex:
        return complex(self.matrix[1, 0])

    @property
    def d(self) -> complex:
        return complex(self.matrix[1, 1])

    def __matmul__(self, other: "Unitary2") -> "Unitary2":
        if not isinstance(other, Unitary2):
            return NotImplemented
        return Unitary2(self.matrix @ other.matrix)

    def dagger(self) -> "Unitary2":
        return Unitary2(self.matrix.conj().T)

    def det(self) -> complex:
        m = self.matrix
        return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])

    def apply(self, vector: np.ndarray) -> np.ndarray:
        """Apply to a length-2 amplitude vector."""
        return self.matrix @ np.asarray(vector, dtype=complex)

    def unitarity_error(self) -> float:
        """Largest entry of |U†U - 1|."""
        return float(np.max(np.abs(self.matrix.conj().T @ self.matrix - SIGMA_0)))

    def is_special_unitary(self, tol: float = UNITARY_INPUT_TOL) -> bool:
        return self.unitarity_error() <= tol and abs(self.det() - 1) <= tol

    def max_abs_diff(self, other: "Unitary2") -> float:
        """Entrywise max-norm distance."""
        return float(np.max(np.abs(self.matrix - other.matrix)))

    def distance(self, other: "Unitary2") -> float:
        """Operator 2-norm distance."""
        return float(np.linalg.norm(self.matrix - other.matrix, 2))


@dataclass(frozen=True)
class EulerAngles:
    """Angles (radians) of U = e^{-i s3 tau3/2} e^{-i s1 tau1/2} e^{-i s2 tau2/2}."""

    tau3: float
    tau1: float
    tau2: float

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.tau3, self.tau1, self.tau2)


def _require_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite, got {value!r}")


def expm_pauli(a: float, b: float, t: float) -> Unitary2:
    """
    Closed-form propagator exp(-i (a sigma3 + b sigma1) t) of a constant segment.

    Args:
        a: coefficient of sigma3 (angular frequency)
        b: coefficient of sigma1 (angular frequency)
        t: duration; negative values give the inverse propagator

    Returns:
        Unitary2 with det = 1
    """
    _require_finite(a=a, b=b, t=t)

    s = math.hypot(a, b)
    x = s * t
    if abs(x) < SERIES_SWITCH:
        # cos x ~ 1 - x^2/2, sin(x)/s ~ t (1 - x^2/6)
        cos_x = 1.0 - 0.5 * x * x
        k = t * (1.0 - x * x / 6.0)
    else:
        cos_x = math.cos(x)
        k = math.sin(x) / s

    return Unitary2(np.array([
        [cos_x - 1j * k * a, -1j * k * b],
        [-1j * k * b, cos_x + 1j * k * a],
    ]))


def delta_rotation(alpha: float) -> Unitary2:
    """Instantaneous sigma3 pulse exp(-i alpha sigma3)."""
    _require_finite(alpha=alpha)
    return Unitary2(np.diag([np.exp(-1j * alpha), np.exp(1j * alpha)]))


def axis_rotation(axis: int, angle: float) -> Unitary2:
    """exp(-i sigma_axis angle / 2) for axis in {1, 2, 3}."""
    if axis not in (1, 2, 3):
        raise DomainError(f"rotation axis must be 1, 2 or 3, got {axis}")
    _require_finite(angle=angle)
    half = 0.5 * angle
    return Unitary2(math.cos(half) * SIGMA_0 - 1j * math.sin(half) * _PAULI[axis])


def euler_compose(angles: EulerAngles) -> Unitary2:
    """Product e^{-i s3 tau3/2} e^{-i s1 tau1/2} e^{-i s2 tau2/2}."""
    return (
        axis_rotation(3, angles.tau3)
        @ axis_rotation(1, angles.tau1)
        @ axis_rotation(2, angles.tau2)
    )


def euler_decompose(u: Unitary2) -> EulerAngles:
    """
    Factor a special-unitary matrix into Euler angles.

    Result box: tau1 in [-pi, pi], tau2 and tau3 in (-pi, 2pi]. The factor is
    taken with cos tau1 >= 0 first; when that puts tau3 at or below -pi the
    triple is moved into the box with the identities

        (tau3, tau1, tau2) ~ (tau3 + 2pi, tau1, tau2 + 2pi)
        (tau3, tau1, tau2) ~ (tau3 + pi, pi - tau1, tau2 - pi)
        (tau3, tau1, tau2) ~ (tau3 + 3pi, -pi - tau1, tau2 - pi)

    At gimbal lock (|cos tau1| below EULER_TOL) only tau3 + tau2 (or tau3 - tau2)
    is determined; tau2 = 0 is taken before the move into the box.

    Raises:
        DomainError: if u is not special-unitary within UNITARY_INPUT_TOL
    """
    if not u.is_special_unitary(UNITARY_INPUT_TOL):
        raise DomainError(
            f"euler_decompose needs a special-unitary matrix "
            f"(unitarity error {u.unitarity_error():.3g}, det {u.det():.6g})"
        )

    u00 = u.a
    u01 = u.b
    w = u00 * u01.conjugate()
    diff = abs(u00) ** 2 - abs(u01) ** 2

    # u00 conj(u01) = -sin(tau2) cos(tau1)/2 + i sin(tau1)/2
    # |u00|^2 - |u01|^2 = cos(tau2) cos(tau1)
    sin_t1 = max(-1.0, min(1.0, 2.0 * w.imag))
    cos_t1 = math.hypot(diff, 2.0 * w.real)
    tau1 = math.atan2(sin_t1, cos_t1)

    if cos_t1 < EULER_TOL:
        tau2 = 0.0
    else:
        tau2 = math.atan2(-2.0 * w.real, diff)

    cb, sb = math.cos(0.5 * tau1), math.sin(0.5 * tau1)
    cc, sc = math.cos(0.5 * tau2), math.sin(0.5 * tau2)
    p, q, r, s = cb * cc, sb * sc, cb * sc, sb * cc

    # u00 = e^{-i tau3/2} (p - iq), u01 = -e^{-i tau3/2} (r + is)
    phase = u00 * complex(p, q) - u01 * complex(r, -s)
    tau3 = -2.0 * math.atan2(phase.imag, phase.real)

    return _into_box(tau3, tau1, tau2)


def _into_box(tau3: float, tau1: float, tau2: float) -> EulerAngles:
    """Equivalent triple with tau1 in [-pi, pi] and tau2, tau3 in (-pi, 2pi]."""
    # tau1 in [-pi/2, pi/2], tau2 in (-pi, pi], tau3 in [-2pi, 2pi) on entry
    if tau3 > -math.pi:
        return EulerAngles(tau3=tau3, tau1=tau1, tau2=tau2)
    if tau2 <= 0.0:
        return EulerAngles(tau3=tau3 + 2.0 * math.pi, tau1=tau1, tau2=tau2 + 2.0 * math.pi)

    if tau1 >= 0.0:
        tau3, tau1 = tau3 + math.pi, math.pi - tau1
    else:
        tau3, tau1 = tau3 + 3.0 * math.pi, -math.pi - tau1
    tau2 -= math.pi
    if tau3 <= -math.pi:
        tau3, tau2 = tau3 + 2.0 * math.pi, tau2 + 2.0 * math.pi
    return EulerAngles(tau3=tau3, tau1=tau1, tau2=tau2)
