"""
Closed-form minimal times for Landau-Zener driving H = Gamma(t) sigma3 + omega sigma1.

Unconstrained Gamma:
    cos(omega T_min) = |f0 i0| + |f1 i1|
realized by a sigma3 pulse, free evolution under omega sigma1 for T_min and a
second sigma3 pulse. For ground states of H_{-gamma} -> H_{+gamma} this is
tan(omega T_min) = gamma / omega with pulse areas +/- pi/4.

Constrained |Gamma| <= c, ground states of H_{-gamma} -> H_{+gamma}:
    c > omega^2/gamma   bang-off-bang  T_min = 2 T_c + T_off
    c <= omega^2/gamma  bang-bang      T_min = 2 T_c
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, NamedTuple, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from config import (
    CLAMP_TOL,
    PROTOCOL_FIDELITY_TOL,
    PULSE_AREA_INFIDELITY_TOL,
    PULSE_AREA_SEED_GRID,
)
from errors import ConsistencyError, DomainError
from states import QubitState, bloch_vector, energy_variance, fidelity, overlap, to_sigma1_basis
from su2 import delta_rotation, expm_pauli

_HALF_PI = 0.5 * math.pi


class Regime(str, Enum):
    UNCONSTRAINED = "unconstrained"
    BANG_OFF_BANG = "bang_off_bang"
    BANG_BANG = "bang_bang"


@dataclass(frozen=True)
class TminResult:
    """
    Minimal time and the data of the protocol realizing it.

    alpha_in / alpha_f are set only in the unconstrained regime, t_c / t_off
    only in the constrained regimes.
    """

    t_min: float
    regime: Regime
    alpha_in: Optional[float] = None
    alpha_f: Optional[float] = None
    t_c: Optional[float] = None
    t_off: Optional[float] = None

    def __post_init__(self):
        if self.t_min < 0:
            raise ConsistencyError(f"negative minimal time {self.t_min}")
        if self.regime is Regime.BANG_BANG and self.t_off != 0.0:
            raise ConsistencyError("bang-bang result must have t_off == 0")

    def to_dict(self) -> Dict:
        return {
            "t_min": self.t_min,
            "regime": self.regime.value,
            "t_c": self.t_c,
            "t_off": self.t_off,
            "alpha_in": self.alpha_in,
            "alpha_f": self.alpha_f,
        }


@dataclass(frozen=True)
class QslReport:
    """
    Minimal time next to the speed-limit times it is compared with.

    t_qsl_overlap uses omega, t_qsl_variance uses the energy spread Delta E_0
    of the initial state under H_0 = omega sigma1 and is +inf (variance_defined
    False) when that spread vanishes. t_fleming is the Fleming-Bhattacharyya
    time for the stated constant Hamiltonian fleming_gamma sigma3 + omega sigma1.
    """

    t_min: float
    t_qsl_overlap: float
    t_qsl_variance: float
    t_fleming: float
    variance_defined: bool = True
    fleming_gamma: float = 0.0

    def ordered(self, tol: float = 1e-12) -> bool:
        """t_min <= t_qsl_overlap <= t_qsl_variance (where defined)."""
        ok = self.t_min <= self.t_qsl_overlap + tol
        if self.variance_defined:
            ok = ok and self.t_qsl_overlap <= self.t_qsl_variance + tol
        return ok

    def to_dict(self) -> Dict:
        return {
            "t_min": self.t_min,
            "t_qsl_overlap": self.t_qsl_overlap,
            "t_qsl_variance": self.t_qsl_variance,
            "t_fleming": self.t_fleming,
            "variance_defined": self.variance_defined,
            "fleming_gamma": self.fleming_gamma,
        }


class PulseAreas(NamedTuple):
    alpha_in: float
    alpha_f: float
    t_min: float


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if value is None or not math.isfinite(value) or value <= 0:
            raise DomainError(f"{name} must be positive and finite, got {value!r}")


def _clamp_unit(x: float, name: str) -> float:
    """Clamp into [-1, 1], rejecting excursions larger than CLAMP_TOL."""
    if x > 1.0 + CLAMP_TOL or x < -1.0 - CLAMP_TOL:
        raise DomainError(f"{name} argument {x!r} outside [-1, 1]")
    return max(-1.0, min(1.0, x))


def _wrap_half_turn(alpha: float) -> float:
    """Pulse areas are defined mod pi (e^{-i(alpha+pi) s3} = -e^{-i alpha s3})."""
    return (alpha + _HALF_PI) % math.pi - _HALF_PI


# ============================================================
# UNCONSTRAINED DRIVING
# ============================================================

def _magnitude_angle(state: QubitState) -> float:
    """Angle of (|c0|, |c1|) in [0, pi/2]."""
    return math.atan2(abs(state.c1), abs(state.c0))


def tmin_general(
    initial: QubitState,
    final: QubitState,
    omega: float,
    omega_max: Optional[float] = None,
) -> float:
    """
    Minimal time between two states under unconstrained Gamma(t).

    omega T_min = arccos(|f0 i0| + |f1 i1|), evaluated as the angle between the
    magnitude vectors so that T_min = 0 exactly when |f1||i0| = |f0||i1|.

    Args:
        initial: starting state
        final: target state
        omega: fixed coupling
        omega_max: if given, omega(t) is a second control bounded by omega_max
                   and the minimal time uses omega_max instead of omega

    Returns:
        Minimal time (units of 1/omega)
    """
    _require_positive(omega=omega)
    if omega_max is not None:
        _require_positive(omega_max=omega_max)
        omega = omega_max

    i0, i1 = initial.magnitudes()
    f0, f1 = final.magnitudes()
    dot = f0 * i0 + f1 * i1
    cross = abs(i0 * f1 - i1 * f0)
    return math.atan2(cross, dot) / omega


def tmin_ground_to_ground(gamma: float, omega: float) -> float:
    """Ground of H_{-gamma} to ground of H_{+gamma}: tan(omega T_min) = gamma/omega."""
    _require_positive(gamma=gamma, omega=omega)
    return math.atan2(gamma, omega) / omega


def tmin_optical(initial: QubitState, final: QubitState, detuning: float) -> float:
    """
    Optical driving with fixed detuning Delta and unconstrained Rabi frequency.

    The roles of sigma1 and sigma3 swap: components are taken in the sigma1
    eigenbasis and omega is replaced by |Delta|.
    """
    if not math.isfinite(detuning) or detuning == 0:
        raise DomainError(f"detuning must be non-zero and finite, got {detuning!r}")
    return tmin_general(to_sigma1_basis(initial), to_sigma1_basis(final), abs(detuning))


def composite_fidelity(
    initial: QubitState,
    final: QubitState,
    omega: float,
    alpha_in: float,
    alpha_f: float,
    t: float,
) -> float:
    """Fidelity reached by e^{-i alpha_f s3} e^{-i omega s1 t} e^{-i alpha_in s3}."""
    u = delta_rotation(alpha_f) @ expm_pauli(0.0, omega, t) @ delta_rotation(alpha_in)
    return fidelity(QubitState.from_array(u.apply(initial.as_array())), final)


def _closed_form_areas(initial: QubitState, final: QubitState, omega: float, t_min: float) -> Tuple[float, float]:
    """
    Pulse areas from the magnitude-rotation picture.

    With relative phase -pi/2 (resp. +pi/2) the omega sigma1 segment rotates
    (|c0|, |c1|) by +omega t (resp. -omega t) and keeps the relative phase;
    a sigma3 pulse of area alpha adds 2 alpha to the relative phase.
    """
    phi_in = initial.relative_phase() or 0.0
    phi_f = final.relative_phase() or 0.0

    if t_min == 0.0:
        return 0.0, _wrap_half_turn(0.5 * (phi_f - phi_in))

    rho = -_HALF_PI if _magnitude_angle(final) >= _magnitude_angle(initial) else _HALF_PI
    alpha_in = _wrap_half_turn(0.5 * (rho - phi_in))
    alpha_f = _wrap_half_turn(0.5 * (phi_f - rho))
    return alpha_in, alpha_f


def _searched_areas(initial: QubitState, final: QubitState, omega: float, t_min: float) -> Tuple[float, float]:
    """
    Pulse areas by two-dimensional search at fixed T = t_min.

    Seed: PULSE_AREA_SEED_GRID^2 grid over [-pi/2, pi/2)^2, then Nelder-Mead on
    the infidelity.
    """
    n = PULSE_AREA_SEED_GRID
    alphas = -_HALF_PI + math.pi * np.arange(n) / n
    phases = np.exp(-1j * alphas)

    # rotated initial states for every alpha_in, bra of the target for every alpha_f
    start = np.stack([phases * initial.c0, phases.conj() * initial.c1], axis=1)
    bra = np.stack([phases * final.c0.conjugate(), phases.conj() * final.c1.conjugate()], axis=1)
    free = expm_pauli(0.0, omega, t_min).matrix
    fid = np.abs(bra @ free @ start.T)

    j_f, j_in = np.unravel_index(np.argmax(fid), fid.shape)
    seed = np.array([alphas[j_in], alphas[j_f]])

    def infidelity(x):
        return 1.0 - composite_fidelity(initial, final, omega, x[0], x[1], t_min)

    result = minimize(
        infidelity,
        seed,
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": PULSE_AREA_INFIDELITY_TOL * 1e-3, "maxiter": 4000},
    )
    return _wrap_half_turn(float(result.x[0])), _wrap_half_turn(float(result.x[1]))


def pulse_areas(
    initial: QubitState,
    final: QubitState,
    omega: float,
    method: str = "closed_form",
) -> PulseAreas:
    """
    Pulse areas alpha_in, alpha_f of the optimal composite protocol.

    Args:
        initial: starting state
        final: target state
        omega: coupling during the free segment
        method: "closed_form" (phase alignment) or "search" (grid seed + Nelder-Mead)

    Returns:
        PulseAreas(alpha_in, alpha_f, t_min), areas in [-pi/2, pi/2)

    Raises:
        ConsistencyError: the areas do not reproduce the target at t_min
    """
    t_min = tmin_general(initial, final, omega)

    if method == "closed_form":
        alpha_in, alpha_f = _closed_form_areas(initial, final, omega, t_min)
    elif method == "search":
        alpha_in, alpha_f = _searched_areas(initial, final, omega, t_min)
    else:
        raise DomainError(f"unknown pulse-area method {method!r}")

    reached = composite_fidelity(initial, final, omega, alpha_in, alpha_f, t_min)
    if reached < 1.0 - PROTOCOL_FIDELITY_TOL:
        raise ConsistencyError(
            f"pulse areas ({alpha_in:.6g}, {alpha_f:.6g}) reach fidelity {reached:.12g} "
            f"at T_min={t_min:.12g}"
        )
    return PulseAreas(alpha_in, alpha_f, t_min)


def tmin_unconstrained(
    initial: QubitState,
    final: QubitState,
    omega: float,
    omega_max: Optional[float] = None,
) -> TminResult:
    """TminResult of the composite protocol (uses omega_max when omega is a control)."""
    effective = omega_max if omega_max is not None else omega
    areas = pulse_areas(initial, final, effective)
    return TminResult(
        t_min=areas.t_min,
        regime=Regime.UNCONSTRAINED,
        alpha_in=areas.alpha_in,
        alpha_f=areas.alpha_f,
    )


# ============================================================
# CONSTRAINED DRIVING |Gamma| <= c
# ============================================================

def regime(gamma: float, omega: float, c: Optional[float] = None) -> Regime:
    """bang_bang iff c <= omega^2/gamma (boundary inclusive); unconstrained without c."""
    if c is None:
        _require_positive(gamma=gamma, omega=omega)
        return Regime.UNCONSTRAINED
    _require_positive(gamma=gamma, omega=omega, c=c)
    if c * gamma <= omega * omega:
        return Regime.BANG_BANG
    return Regime.BANG_OFF_BANG


def regime_boundary(gamma: float, omega: float) -> float:
    """Bound c = omega^2/gamma separating the two constrained regimes."""
    _require_positive(gamma=gamma, omega=omega)
    return omega * omega / gamma


def bang_off_bang_durations(gamma: float, omega: float, c: float) -> Tuple[float, float]:
    """
    (T_c, T_off) of the bang-off-bang protocol.

    T_c   = arcsin(sqrt((c^2+w^2) / (2c(c+g)))) / sqrt(c^2+w^2)
    T_off = arctan((c g - w^2) / (w sqrt(c^2 + 2cg - w^2))) / w
    """
    _require_positive(gamma=gamma, omega=omega, c=c)
    rabi = math.hypot(c, omega)
    ratio = _clamp_unit((c * c + omega * omega) / (2.0 * c * (c + gamma)), "T_c arcsin")
    t_c = math.asin(math.sqrt(ratio)) / rabi

    radicand = c * c + 2.0 * c * gamma - omega * omega
    if radicand <= 0:
        raise DomainError(f"c={c!r} is in the bang-bang regime; T_off is undefined")
    t_off = math.atan2(c * gamma - omega * omega, omega * math.sqrt(radicand)) / omega
    return t_c, t_off


def bang_bang_duration(gamma: float, omega: float, c: float) -> float:
    """T_c of the bang-bang protocol: arcsin(sqrt(g(c^2+w^2) / (2 w^2 (c+g)))) / sqrt(c^2+w^2)."""
    _require_positive(gamma=gamma, omega=omega, c=c)
    rabi = math.hypot(c, omega)
    ratio = _clamp_unit(gamma * (c * c + omega * omega) / (2.0 * omega * omega * (c + gamma)), "bang-bang arcsin")
    return math.asin(math.sqrt(ratio)) / rabi


def tmin_constrained(gamma: float, omega: float, c: float) -> TminResult:
    """
    Minimal time for ground of H_{-gamma} -> ground of H_{+gamma} with |Gamma| <= c.

    Returns:
        TminResult with regime bang_off_bang (t_off > 0) or bang_bang (t_off = 0)
    """
    kind = regime(gamma, omega, c)
    if kind is Regime.BANG_BANG:
        t_c = bang_bang_duration(gamma, omega, c)
        t_off = 0.0
    else:
        t_c, t_off = bang_off_bang_durations(gamma, omega, c)
    return TminResult(t_min=2.0 * t_c + t_off, regime=kind, t_c=t_c, t_off=t_off)


# ============================================================
# QUANTUM SPEED LIMIT TIMES
# ============================================================

def _overlap_angle(initial: QubitState, final: QubitState) -> float:
    """arccos |<f|i>| computed as atan2(|f0 i1 - f1 i0|, |<f|i>|)."""
    cos_part = abs(overlap(final, initial))
    sin_part = abs(final.c0 * initial.c1 - final.c1 * initial.c0)
    return math.atan2(sin_part, cos_part)


def t_fleming(initial: QubitState, final: QubitState, omega: float, gamma: float = 0.0) -> float:
    """
    Fleming-Bhattacharyya time arccos|<f|i>| / Delta E for the constant
    Hamiltonian gamma sigma3 + omega sigma1; +inf when Delta E = 0.
    """
    _require_positive(omega=omega)
    # |h x r| for h = (omega, 0, gamma) and the Bloch vector r of the initial state
    x, y, z = bloch_vector(initial)
    spread = math.sqrt((gamma * y) ** 2 + (gamma * x - omega * z) ** 2 + (omega * y) ** 2)
    angle = _overlap_angle(initial, final)
    if spread == 0.0:
        return 0.0 if angle == 0.0 else math.inf
    return angle / spread


def qsl_times(
    initial: QubitState,
    final: QubitState,
    omega: float,
    fleming_gamma: float = 0.0,
) -> QslReport:
    """
    T_min next to the overlap- and variance-based speed-limit times.

    t_qsl_overlap  = arccos|<f|i>| / omega
    t_qsl_variance = arccos|<f|i>| / Delta E_0, Delta E_0 the spread of the
                     initial state under omega sigma1 (+inf when zero)
    """
    _require_positive(omega=omega)
    angle = _overlap_angle(initial, final)
    spread = energy_variance(initial, omega)

    if spread == 0.0:
        t_variance = 0.0 if angle == 0.0 else math.inf
        defined = angle == 0.0
    else:
        t_variance = angle / spread
        defined = True

    return QslReport(
        t_min=tmin_general(initial, final, omega),
        t_qsl_overlap=angle / omega,
        t_qsl_variance=t_variance,
        t_fleming=t_fleming(initial, final, omega, fleming_gamma),
        variance_defined=defined,
        fleming_gamma=fleming_gamma,
    )
