"""
Propagation of protocols and drives.

Exact path: every segment becomes a Unitary2 (closed-form exponentials,
delta rotations, midpoint-exponential products for ramps).

Numeric path: adaptive RK45 (scipy solve_ivp) on i psi' = H psi, on
i U' = H U, and on the Euler-angle system

    tau1' = 2 omega cos tau3
    tau2' = -2 omega sin tau3 / cos tau1
    tau3' = 2 Gamma + 2 omega sin tau3 tan tau1

started from (0, 0, 0), i.e. U(0) = 1. Integration restarts at every
breakpoint of a piecewise drive.
"""

import bisect
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.integrate import solve_ivp

import config
from config import (
    DIFF_STEP_FRACTION,
    EULER_SINGULARITY,
    RAMP_SUBSTEPS,
    TRAJECTORY_CSV_COLUMNS,
    TRAJECTORY_SAMPLES,
)
from errors import DomainError, EulerSingularityError, IntegrationError
from protocol import Protocol, Segment, SegmentKind
from states import QubitState
from su2 import EulerAngles, Unitary2, delta_rotation, euler_compose, euler_decompose, expm_pauli

logger = logging.getLogger(__name__)

Scalar = Callable[[float], float]


# ============================================================
# EXACT PROPAGATION
# ============================================================

def segment_propagator(segment: Segment, substeps: int = RAMP_SUBSTEPS) -> Unitary2:
    """Exact propagator of one segment; ramps use `substeps` midpoint exponentials."""
    if segment.kind is SegmentKind.DELTA_PULSE:
        return delta_rotation(segment.area)
    if segment.kind is SegmentKind.CONSTANT:
        return expm_pauli(segment.gamma_start, segment.omega, segment.duration)

    h = segment.duration / substeps
    u = Unitary2.identity()
    for k in range(substeps):
        u = expm_pauli(segment.gamma_at((k + 0.5) * h), segment.omega, h) @ u
    return u


def protocol_propagator(p: Protocol) -> Unitary2:
    """Time-ordered product, later segments on the left."""
    u = Unitary2.identity()
    for segment in p.segments:
        u = segment_propagator(segment) @ u
    return u


def propagate_protocol(p: Protocol, initial: QubitState) -> QubitState:
    return QubitState.from_array(protocol_propagator(p).apply(initial.as_array()))


# ============================================================
# DRIVES
# ============================================================

@dataclass(frozen=True)
class DrivePiece:
    """Smooth stretch [start, end] of a drive with its own Gamma and omega."""

    start: float
    end: float
    gamma: Scalar
    omega: Scalar


@dataclass(frozen=True)
class DriveFunction:
    """
    Gamma(t), omega(t) on [0, horizon].

    A drive built from a protocol is split into pieces at the segment
    boundaries; each piece is integrated separately with the functions of
    that piece, so jumps of Gamma are never stepped across.
    """

    gamma: Scalar
    omega: Scalar
    horizon: float
    pieces: Tuple[DrivePiece, ...] = ()

    def __post_init__(self):
        if not (math.isfinite(self.horizon) and self.horizon >= 0):
            raise DomainError(f"horizon must be >= 0 and finite, got {self.horizon!r}")
        if not self.pieces:
            object.__setattr__(self, "pieces", (DrivePiece(0.0, self.horizon, self.gamma, self.omega),))

    @classmethod
    def constant(cls, gamma: float, omega: float, horizon: float) -> "DriveFunction":
        return cls(lambda t: gamma, lambda t: omega, horizon)

    @classmethod
    def from_protocol(cls, p: Protocol) -> "DriveFunction":
        """Drive of a protocol without delta pulses."""
        if p.has_delta_pulses:
            raise DomainError("delta pulses have no finite drive; use integrate_protocol")

        pieces: List[DrivePiece] = []
        start = 0.0
        for seg in p.segments:
            end = start + seg.duration
            pieces.append(DrivePiece(
                start,
                end,
                (lambda t, s=seg, t0=start: s.gamma_at(t - t0)),
                (lambda t, w=seg.omega: w),
            ))
            start = end

        starts = [piece.start for piece in pieces]

        def locate(t: float) -> DrivePiece:
            k = max(0, bisect.bisect_right(starts, t) - 1)
            return pieces[k]

        if not pieces:
            return cls.constant(0.0, 0.0, 0.0)
        return cls(
            gamma=lambda t: locate(t).gamma(t),
            omega=lambda t: locate(t).omega(t),
            horizon=start,
            pieces=tuple(pieces),
        )

    @property
    def breakpoints(self) -> Tuple[float, ...]:
        return tuple(piece.start for piece in self.pieces[1:])

    def hamiltonian(self, t: float) -> np.ndarray:
        return _hamiltonian(self.gamma(t), self.omega(t))

    def respects_omega_max(self, omega_max: float, samples: int = TRAJECTORY_SAMPLES) -> bool:
        """|omega(t)| <= omega_max on a sample grid of every piece."""
        for piece in self.pieces:
            for t in np.linspace(piece.start, piece.end, samples):
                if abs(piece.omega(float(t))) > omega_max:
                    return False
        return True


def _hamiltonian(gamma: float, omega: float) -> np.ndarray:
    return np.array([[gamma, omega], [omega, -gamma]], dtype=complex)


def _drive_values(piece: DrivePiece, t: float) -> Tuple[float, float]:
    g = float(piece.gamma(t))
    w = float(piece.omega(t))
    if not (math.isfinite(g) and math.isfinite(w)):
        raise DomainError(f"drive is not finite at t={t:.6g} (Gamma={g!r}, omega={w!r})")
    return g, w


def _resolve_tol(tol: Optional[float]) -> float:
    if tol is None:
        return config.ODE_RTOL
    if not (math.isfinite(tol) and tol > 0):
        raise DomainError(f"integration tolerance must be positive, got {tol!r}")
    return tol


def _integrate_pieces(
    pieces: Sequence[DrivePiece],
    y0: np.ndarray,
    rhs: Callable[[DrivePiece, float, np.ndarray], np.ndarray],
    tol: float,
    times: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, List[np.ndarray]]:
    """
    Run solve_ivp piece by piece.

    Returns the final vector and, if `times` is given, the solution at each
    of those times (in order).
    """
    y = np.array(y0)
    samples: List[Optional[np.ndarray]] = [None] * (0 if times is None else len(times))
    if times is not None:
        for k, t in enumerate(times):
            if t <= (pieces[0].start if pieces else 0.0):
                samples[k] = y.copy()

    for piece in pieces:
        if piece.end <= piece.start:
            continue

        t_eval = None
        wanted: List[int] = []
        if times is not None:
            wanted = [k for k, t in enumerate(times)
                      if samples[k] is None and piece.start < t <= piece.end]
            t_list = [float(times[k]) for k in wanted]
            if not t_list or t_list[-1] < piece.end:
                t_list.append(piece.end)
            t_eval = np.array(t_list)

        sol = solve_ivp(
            lambda t, v: rhs(piece, t, v),
            (piece.start, piece.end),
            y,
            method=config.ODE_METHOD,
            rtol=tol,
            atol=tol,
            t_eval=t_eval,
        )
        if not sol.success:
            raise IntegrationError(
                f"integration failed on [{piece.start:.6g}, {piece.end:.6g}] "
                f"(tolerance {tol:g}): {sol.message}"
            )

        for j, k in enumerate(wanted):
            samples[k] = sol.y[:, j].copy()
        y = sol.y[:, -1]

    if times is not None:
        for k in range(len(samples)):
            if samples[k] is None:
                samples[k] = y.copy()
    return y, samples


def _schrodinger_rhs(piece: DrivePiece, t: float, psi: np.ndarray) -> np.ndarray:
    g, w = _drive_values(piece, t)
    return -1j * np.array([g * psi[0] + w * psi[1], w * psi[0] - g * psi[1]])


def _propagator_rhs(piece: DrivePiece, t: float, flat: np.ndarray) -> np.ndarray:
    g, w = _drive_values(piece, t)
    return (-1j * (_hamiltonian(g, w) @ flat.reshape(2, 2))).reshape(-1)


def _normalized(psi: np.ndarray, tol: float) -> QubitState:
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > 100.0 * tol:
        logger.warning("Norm drifted to %.12g during integration", norm)
    return QubitState.from_array(psi / norm)


def integrate_schrodinger(d: DriveFunction, initial: QubitState, tol: Optional[float] = None) -> QubitState:
    """
    Adaptive RK45 integration of i psi' = H(t) psi.

    Args:
        d: drive
        initial: state at t = 0
        tol: rtol = atol (default config.ODE_RTOL)

    Raises:
        IntegrationError: solver failure (step-size underflow)
    """
    tol = _resolve_tol(tol)
    psi, _ = _integrate_pieces(d.pieces, initial.as_array(), _schrodinger_rhs, tol)
    return _normalized(psi, tol)


def integrate_propagator(d: DriveFunction, tol: Optional[float] = None) -> Unitary2:
    """Adaptive RK45 integration of i U' = H(t) U with U(0) = 1."""
    tol = _resolve_tol(tol)
    flat, _ = _integrate_pieces(d.pieces, np.eye(2, dtype=complex).reshape(-1), _propagator_rhs, tol)
    return Unitary2(flat.reshape(2, 2))


def integrate_protocol(p: Protocol, initial: QubitState, tol: Optional[float] = None) -> QubitState:
    """ODE counterpart of propagate_protocol: delta pulses exact, everything else integrated."""
    tol = _resolve_tol(tol)
    psi = initial.as_array()
    for segment in p.segments:
        if segment.kind is SegmentKind.DELTA_PULSE:
            psi = delta_rotation(segment.area).apply(psi)
            continue
        piece = DrivePiece(
            0.0,
            segment.duration,
            (lambda t, s=segment: s.gamma_at(t)),
            (lambda t, w=segment.omega: w),
        )
        psi, _ = _integrate_pieces((piece,), psi, _schrodinger_rhs, tol)
    return _normalized(psi, tol)


# ============================================================
# EULER-ANGLE SYSTEM
# ============================================================

@dataclass(frozen=True)
class EulerTrajectory:
    """Sampled Euler angles; euler_compose at each sample gives U(t)."""

    times: np.ndarray
    tau1: np.ndarray
    tau2: np.ndarray
    tau3: np.ndarray

    def angles_at(self, k: int) -> EulerAngles:
        return EulerAngles(tau3=float(self.tau3[k]), tau1=float(self.tau1[k]), tau2=float(self.tau2[k]))

    def final_angles(self) -> EulerAngles:
        return self.angles_at(len(self.times) - 1)

    def propagator(self, k: int = -1) -> Unitary2:
        if k < 0:
            k += len(self.times)
        return euler_compose(self.angles_at(k))


def _euler_rhs(piece: DrivePiece, t: float, tau: np.ndarray) -> np.ndarray:
    g, w = _drive_values(piece, t)
    tau1, _, tau3 = tau
    cos1 = math.cos(tau1)
    return np.array([
        2.0 * w * math.cos(tau3),
        -2.0 * w * math.sin(tau3) / cos1,
        2.0 * g + 2.0 * w * math.sin(tau3) * math.sin(tau1) / cos1,
    ])


def _singularity_event(t: float, tau: np.ndarray) -> float:
    # signed: cos tau1 > 0 on the chart started at tau1 = 0, so leaving it is a zero crossing
    return math.cos(tau[0]) - EULER_SINGULARITY


_singularity_event.terminal = True
_singularity_event.direction = -1


def integrate_euler_angles(
    d: DriveFunction,
    tol: Optional[float] = None,
    samples: int = TRAJECTORY_SAMPLES,
) -> EulerTrajectory:
    """
    Integrate the Euler-angle system from (0, 0, 0).

    Raises:
        EulerSingularityError: |cos tau1| reached EULER_SINGULARITY
        IntegrationError: solver failure
    """
    tol = _resolve_tol(tol)
    grid = np.linspace(0.0, d.horizon, max(2, samples))
    out_t: List[float] = [0.0]
    out_y: List[np.ndarray] = [np.zeros(3)]
    y = np.zeros(3)

    for piece in d.pieces:
        if piece.end <= piece.start:
            continue
        inner = grid[(grid > piece.start) & (grid < piece.end)]
        t_eval = np.concatenate([inner, [piece.end]])
        sol = solve_ivp(
            lambda t, v: _euler_rhs(piece, t, v),
            (piece.start, piece.end),
            y,
            method=config.ODE_METHOD,
            rtol=tol,
            atol=tol,
            t_eval=t_eval,
            events=_singularity_event,
        )
        if sol.status == 1 and len(sol.t_events[0]):
            raise EulerSingularityError(float(sol.t_events[0][0]), float(sol.y_events[0][0][0]))
        if not sol.success:
            raise IntegrationError(
                f"Euler-angle integration failed on [{piece.start:.6g}, {piece.end:.6g}]: {sol.message}"
            )
        out_t.extend(sol.t.tolist())
        out_y.extend(sol.y.T)
        y = sol.y[:, -1]

    values = np.array(out_y)
    return EulerTrajectory(
        times=np.array(out_t),
        tau1=values[:, 0],
        tau2=values[:, 1],
        tau3=values[:, 2],
    )


def _central_difference(f: Scalar, t: float, h: float) -> float:
    return (f(t + h) - f(t - h)) / (2.0 * h)


def inverse_engineer(tau3: Scalar, omega: float, horizon: float, tol: Optional[float] = None) -> DriveFunction:
    """
    Drive that realizes a prescribed tau3(t) at constant omega.

    tau1 follows from tau1' = 2 omega cos tau3, tau1(0) = 0, and then
    Gamma = tau3'/2 - omega sin tau3 tan tau1 with tau3' from central
    differences (step horizon * DIFF_STEP_FRACTION).

    Raises:
        DomainError: non-finite derivative, bad omega / horizon
        EulerSingularityError: |cos tau1| drops below EULER_SINGULARITY
    """
    if not (math.isfinite(omega) and omega > 0):
        raise DomainError(f"omega must be positive, got {omega!r}")
    if not (math.isfinite(horizon) and horizon > 0):
        raise DomainError(f"horizon must be positive, got {horizon!r}")
    tol = _resolve_tol(tol)
    h = horizon * DIFF_STEP_FRACTION

    if abs(float(tau3(0.0))) > config.EULER_TOL:
        logger.warning("tau3(0) = %.6g; the Euler system starts from tau3 = 0", tau3(0.0))

    sol = solve_ivp(
        lambda t, v: [2.0 * omega * math.cos(float(tau3(t)))],
        (0.0, horizon),
        [0.0],
        method=config.ODE_METHOD,
        rtol=tol,
        atol=tol,
        dense_output=True,
        events=_singularity_event,
    )
    if sol.t_events[0].size:
        raise EulerSingularityError(float(sol.t_events[0][0]), float(sol.y_events[0][0][0]))
    if not sol.success:
        raise IntegrationError(f"tau1 integration failed: {sol.message}")

    tau1_of = sol.sol

    def gamma(t: float) -> float:
        rate = _central_difference(lambda s: float(tau3(s)), t, h)
        if not math.isfinite(rate):
            raise DomainError(f"tau3 derivative is not finite at t={t:.6g}")
        tau1 = float(tau1_of(t)[0])
        return 0.5 * rate - omega * math.sin(float(tau3(t))) * math.tan(tau1)

    for t in np.linspace(0.0, horizon, TRAJECTORY_SAMPLES):
        gamma(float(t))

    return DriveFunction(gamma=gamma, omega=lambda t: omega, horizon=horizon)


# ============================================================
# EXPORT
# ============================================================

def trajectory_frame(d: DriveFunction, initial: QubitState, samples: int = TRAJECTORY_SAMPLES,
                     tol: Optional[float] = None) -> pd.DataFrame:
    """
    Sampled state and Euler angles along a drive.

    The angles come from euler_decompose of the integrated propagator, so
    they are on the canonical branch and defined through gimbal lock.
    """
    tol = _resolve_tol(tol)
    times = np.linspace(0.0, d.horizon, max(2, samples))
    _, flats = _integrate_pieces(
        d.pieces, np.eye(2, dtype=complex).reshape(-1), _propagator_rhs, tol, times=times
    )
    return _frame(times, [flat.reshape(2, 2) for flat in flats], initial)


def protocol_frame(p: Protocol, initial: QubitState, samples: int = TRAJECTORY_SAMPLES,
                   tol: Optional[float] = None) -> pd.DataFrame:
    """
    trajectory_frame for any protocol, delta pulses included.

    A pulse acts at its instant: a sample taken at that time still shows
    the state before it, except the last row, which is the state after
    every segment of the protocol.
    """
    tol = _resolve_tol(tol)
    times = np.linspace(0.0, p.total_duration, max(2, samples))
    mats: List[Optional[np.ndarray]] = [None] * len(times)
    u = np.eye(2, dtype=complex)
    start = 0.0

    for segment in p.segments:
        if segment.kind is SegmentKind.DELTA_PULSE:
            for k, t in enumerate(times):
                if mats[k] is None and t <= start:
                    mats[k] = u.copy()
            u = delta_rotation(segment.area).matrix @ u
            continue

        end = start + segment.duration
        piece = DrivePiece(
            start,
            end,
            (lambda t, s=segment, t0=start: s.gamma_at(t - t0)),
            (lambda t, w=segment.omega: w),
        )
        wanted = [k for k, t in enumerate(times) if mats[k] is None and t <= end]
        flat, flats = _integrate_pieces((piece,), u.reshape(-1), _propagator_rhs, tol,
                                        times=times[wanted])
        for k, sample in zip(wanted, flats):
            mats[k] = sample.reshape(2, 2)
        u = flat.reshape(2, 2)
        start = end

    mats = [u.copy() if m is None else m for m in mats]
    mats[-1] = u
    return _frame(times, mats, initial)


def _frame(times: np.ndarray, mats: Sequence[np.ndarray], initial: QubitState) -> pd.DataFrame:
    rows = []
    psi0 = initial.as_array()
    for t, u in zip(times, mats):
        psi = u @ psi0
        angles = euler_decompose(Unitary2(_special_unitary(u)))
        rows.append([t, psi[0].real, psi[0].imag, psi[1].real, psi[1].imag,
                     angles.tau1, angles.tau2, angles.tau3])
    return pd.DataFrame(rows, columns=TRAJECTORY_CSV_COLUMNS)


def _special_unitary(u: np.ndarray) -> np.ndarray:
    """Nearest special-unitary matrix (removes integration drift before factoring)."""
    a, b = u[0, 0], u[0, 1]
    n = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
    a, b = a / n, b / n
    return np.array([[a, b], [-b.conjugate(), a.conjugate()]])
