"""
Brute-force minimal-time search, used to check the closed-form results.

Every family is searched the same way:
1. exhaustive vectorized grid pass over all coordinates
2. screen: shortest grid time whose fidelity is within the grid's
   discretization loss of 1
3. refinement: inner maximization of the fidelity at fixed total time and
   bisection of the total time on the threshold crossing

Families:
    composite           delta(alpha_in), omega sigma1 for T, delta(alpha_f)
    three_segment       Gamma = +c, 0, -c for T_c, T_off, T_-c (symmetric: T_-c = T_c)
    piecewise_constant  n equal-duration segments with Gamma in {-c, 0, +c}
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

import config
from analytic import tmin_constrained
from config import (
    DELTA_LIMIT_GRID,
    MAX_PIECEWISE_SEGMENTS,
    ORACLE_FIDELITY_THRESHOLD,
    ORACLE_GRID_POINTS,
    ORACLE_INNER_GRID,
    ORACLE_SCREEN_FACTOR,
)
from dynamics import propagate_protocol
from errors import ConsistencyError, DomainError
from protocol import Protocol, Segment, build_composite
from refinement import bisect_crossing, expand_bracket, golden_section_max, scan_then_golden
from states import LzParams, QubitState, fidelity
from su2 import delta_rotation, expm_pauli

logger = logging.getLogger(__name__)

_HALF_PI = 0.5 * math.pi


class SearchFamily(str, Enum):
    COMPOSITE = "composite"
    THREE_SEGMENT = "three_segment"
    PIECEWISE_CONSTANT = "piecewise_constant"


@dataclass(frozen=True)
class SearchSpec:
    """
    What to search and how finely.

    Args:
        family: protocol family
        grid_points: points per continuous coordinate in the grid pass
        t_max: bound on each time coordinate (family default when None)
        symmetric: three_segment only, enforce T_-c = T_c
        segments: piecewise_constant only, number of equal segments
        threshold: fidelity to reach
        inner_grid: seed grid of the inner maximization
        time_tol: bisection tolerance (config.ORACLE_TIME_TOL when None)
    """

    family: SearchFamily
    grid_points: int = ORACLE_GRID_POINTS
    t_max: Optional[float] = None
    symmetric: bool = True
    segments: int = 4
    threshold: float = ORACLE_FIDELITY_THRESHOLD
    inner_grid: int = ORACLE_INNER_GRID
    time_tol: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "family", SearchFamily(self.family))
        if self.grid_points < 2 or self.inner_grid < 2:
            raise DomainError("grid resolutions must be at least 2 points")
        if not 0.0 < self.threshold < 1.0:
            raise DomainError(f"threshold must lie in (0, 1), got {self.threshold!r}")
        if self.t_max is not None and not (math.isfinite(self.t_max) and self.t_max > 0):
            raise DomainError(f"t_max must be positive, got {self.t_max!r}")
        if not 1 <= self.segments <= MAX_PIECEWISE_SEGMENTS:
            raise DomainError(f"piecewise search supports 1..{MAX_PIECEWISE_SEGMENTS} segments")
        if self.time_tol is not None and not self.time_tol > 0:
            raise DomainError(f"time_tol must be positive, got {self.time_tol!r}")

    @property
    def resolved_time_tol(self) -> float:
        return self.time_tol if self.time_tol is not None else config.ORACLE_TIME_TOL


@dataclass(frozen=True)
class SearchResult:
    """
    Outcome of search_min_time.

    reached is False when no protocol of the family reaches the threshold
    within the bounds; duration and protocol are then None and fidelity is
    the best value seen.
    """

    reached: bool
    duration: Optional[float]
    protocol: Optional[Protocol]
    fidelity: float
    family: SearchFamily
    evaluations: int
    coordinates: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        d = {
            "family": self.family.value,
            "reached": self.reached,
            "duration": self.duration,
            "fidelity": self.fidelity,
            "evaluations": self.evaluations,
        }
        d.update(self.coordinates)
        return d


@dataclass(frozen=True)
class SweepRow:
    c_over_omega: float
    wTmin: float
    wToff: float
    two_wTc: float
    regime: str

    def to_dict(self) -> Dict:
        return {
            "c_over_omega": self.c_over_omega,
            "wTmin": self.wTmin,
            "wToff": self.wToff,
            "two_wTc": self.two_wTc,
            "regime": self.regime,
        }


@dataclass(frozen=True)
class DeltaLimitReport:
    """Operator-norm distance of finite sigma3 pulses from the ideal delta rotation."""

    alpha: float
    omega: float
    gammas: Tuple[float, ...]
    errors: Tuple[float, ...]

    @property
    def decreasing(self) -> bool:
        return all(b < a or (a == 0.0 and b == 0.0) for a, b in zip(self.errors, self.errors[1:]))

    def to_dict(self) -> Dict:
        return {
            "alpha": self.alpha,
            "omega": self.omega,
            "gammas": list(self.gammas),
            "errors": list(self.errors),
            "decreasing": self.decreasing,
        }


# ============================================================
# VECTORIZED PROPAGATION
# ============================================================

def _expm_batch(a: float, b: float, t: np.ndarray) -> np.ndarray:
    """exp(-i (a s3 + b s1) t) for an array of durations, shape (n, 2, 2)."""
    t = np.asarray(t, dtype=float)
    s = math.hypot(a, b)
    cos_x = np.cos(s * t)
    k = np.sin(s * t) / s if s > 0 else t.copy()
    out = np.empty(t.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = cos_x - 1j * k * a
    out[..., 0, 1] = -1j * k * b
    out[..., 1, 0] = -1j * k * b
    out[..., 1, 1] = cos_x + 1j * k * a
    return out


def _screen_slack(rotation_error: float) -> float:
    """Worst fidelity loss of the nearest grid cell to an exact optimum."""
    return 0.5 * rotation_error * rotation_error * ORACLE_SCREEN_FACTOR


class _Counter:
    def __init__(self):
        self.count = 0

    def add(self, n: int = 1) -> None:
        self.count += n


def _bisect_search(
    best_at: Callable[[float], Tuple[float, Protocol, Dict]],
    t_guess: float,
    margin: float,
    t_limit: float,
    threshold: float,
    tol: float,
) -> Optional[Tuple[float, Tuple[float, Protocol, Dict]]]:
    """
    Shortest total time near t_guess at which best_at reaches the threshold.

    The reached set need not extend to larger times (a composite protocol
    from a pole hits the target only in a window around T_min), so the
    inner maximum is first golden-sectioned over the grid cell around
    t_guess. Only when that peak stays below the threshold is the bracket
    grown towards t_limit.

    Returns (duration, best_at(duration)) or None when nothing up to t_limit
    reaches it.
    """
    cache: Dict[float, Tuple[float, Protocol, Dict]] = {}

    def evaluate(t: float):
        if t not in cache:
            cache[t] = best_at(t)
        return cache[t]

    def reached(t: float) -> bool:
        return evaluate(t)[0] >= threshold

    if reached(0.0):
        return 0.0, evaluate(0.0)

    lo = max(0.0, t_guess - margin)
    step = margin
    while lo > 0.0 and reached(lo):
        lo = max(0.0, lo - step)
        step *= 2.0
    if reached(lo):
        return lo, evaluate(lo)

    hi = min(t_limit, max(t_guess, lo) + margin)
    if hi > lo:
        t_peak, peak = golden_section_max(lambda t: evaluate(t)[0], lo, hi, tol)
        if peak >= threshold:
            t_star = bisect_crossing(reached, lo, t_peak, tol)
            return t_star, evaluate(t_star)
        logger.debug("Peak %.12g at t=%.12g below threshold; growing the bracket", peak, t_peak)

    bracket = expand_bracket(reached, lo, hi, t_limit)
    if bracket is None:
        return None
    lo, hi = bracket
    t_star = bisect_crossing(reached, lo, hi, tol)
    return t_star, evaluate(t_star)


# ============================================================
# COMPOSITE FAMILY
# ============================================================

def _composite_fidelity(initial: QubitState, final: QubitState, omega: float,
                        alpha_in: float, alpha_f: float, t: float) -> float:
    c, s = math.cos(omega * t), math.sin(omega * t)
    p0 = cmath.exp(-1j * alpha_in) * initial.c0
    p1 = cmath.exp(1j * alpha_in) * initial.c1
    v0 = c * p0 - 1j * s * p1
    v1 = -1j * s * p0 + c * p1
    amp = (final.c0.conjugate() * cmath.exp(-1j * alpha_f) * v0
           + final.c1.conjugate() * cmath.exp(1j * alpha_f) * v1)
    return min(1.0, abs(amp))


def _composite_grid(initial: QubitState, final: QubitState, omega: float,
                    t: float, alphas: np.ndarray) -> np.ndarray:
    """Fidelity matrix [alpha_f, alpha_in] at free-evolution time t."""
    ph = np.exp(-1j * alphas)
    start = np.stack([ph * initial.c0, ph.conj() * initial.c1], axis=1)
    bra = np.stack([ph * final.c0.conjugate(), ph.conj() * final.c1.conjugate()], axis=1)
    c, s = math.cos(omega * t), math.sin(omega * t)
    x = np.array([[c, -1j * s], [-1j * s, c]])
    return np.abs(bra @ x @ start.T)


def _wrap(alpha: float) -> float:
    return (alpha + _HALF_PI) % math.pi - _HALF_PI


def _smallest_norm_argmax(fid: np.ndarray, a_f: np.ndarray, a_in: np.ndarray) -> Tuple[int, int]:
    """argmax of fid; ties (to 1e-12) go to the smallest ||(alpha_in, alpha_f)||."""
    best = fid.max()
    rows, cols = np.nonzero(fid >= best - 1e-12)
    norms = a_f[rows] ** 2 + a_in[cols] ** 2
    k = int(np.argmin(norms))
    return int(rows[k]), int(cols[k])


def _search_composite(spec: SearchSpec, initial: QubitState, final: QubitState,
                      params: LzParams) -> SearchResult:
    omega = params.effective_omega
    t_max = spec.t_max if spec.t_max is not None else _HALF_PI / omega
    n = spec.grid_points
    counter = _Counter()

    alphas = -_HALF_PI + math.pi * np.arange(n) / n
    times = np.linspace(0.0, t_max, n)
    d_alpha = math.pi / n
    d_t = times[1] - times[0]
    slack = _screen_slack(d_alpha + 0.5 * omega * d_t)

    best_coarse = 0.0
    t_guess = None
    for t in times:
        fid = _composite_grid(initial, final, omega, float(t), alphas)
        counter.add(fid.size)
        best_coarse = max(best_coarse, float(fid.max()))
        if fid.max() >= 1.0 - slack:
            t_guess = float(t)
            break
    logger.debug("composite grid: guess %s, best %.12g", t_guess, best_coarse)
    if t_guess is None:
        return SearchResult(False, None, None, best_coarse, SearchFamily.COMPOSITE, counter.count)

    inner = -_HALF_PI + math.pi * np.arange(spec.inner_grid) / spec.inner_grid

    def best_at(t: float):
        fid = _composite_grid(initial, final, omega, t, inner)
        counter.add(fid.size)
        j_f, j_in = _smallest_norm_argmax(fid, inner, inner)

        def objective(x):
            counter.add()
            return -_composite_fidelity(initial, final, omega, x[0], x[1], t)

        res = minimize(objective, [inner[j_in], inner[j_f]], method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": 2000})
        a_in, a_f = _wrap(float(res.x[0])), _wrap(float(res.x[1]))
        value = _composite_fidelity(initial, final, omega, a_in, a_f, t)
        if value < fid[j_f, j_in]:
            a_in, a_f, value = float(inner[j_in]), float(inner[j_f]), float(fid[j_f, j_in])
        return value, build_composite(a_in, a_f, omega, t), {"alpha_in": a_in, "alpha_f": a_f, "t": t}

    margin = d_t + math.sqrt(2.0 * slack) / omega
    found = _bisect_search(best_at, t_guess, margin, t_max, spec.threshold, spec.resolved_time_tol)
    return _finish(found, initial, final, SearchFamily.COMPOSITE, counter, best_coarse)


def _finish(found, initial: QubitState, final: QubitState, family: SearchFamily,
            counter: _Counter, best_seen: float) -> SearchResult:
    if found is None:
        return SearchResult(False, None, None, best_seen, family, counter.count)
    duration, (_, protocol, coordinates) = found
    achieved = fidelity(propagate_protocol(protocol, initial), final)
    return SearchResult(True, duration, protocol, achieved, family, counter.count, coordinates)


# ============================================================
# THREE-SEGMENT FAMILY
# ============================================================

def _three_segment_protocol(c: float, omega: float, t_c: float, t_off: float, t_mc: float) -> Protocol:
    return Protocol(
        segments=(
            Segment.constant(c, omega, t_c),
            Segment.constant(0.0, omega, t_off),
            Segment.constant(-c, omega, t_mc),
        ),
        regime=SearchFamily.THREE_SEGMENT.value,
        params={"c": c, "omega": omega},
    )


def _three_segment_fidelity(initial: QubitState, final: QubitState, c: float, omega: float,
                            t_c: float, t_off: float, t_mc: float) -> float:
    u = expm_pauli(-c, omega, t_mc) @ expm_pauli(0.0, omega, t_off) @ expm_pauli(c, omega, t_c)
    return fidelity(QubitState.from_array(u.apply(initial.as_array())), final)


def _search_three_segment(spec: SearchSpec, initial: QubitState, final: QubitState,
                          params: LzParams) -> SearchResult:
    if params.c is None:
        raise DomainError("three_segment search needs the bound c")
    c, omega = params.c, params.omega
    rabi = math.hypot(c, omega)
    n = spec.grid_points
    counter = _Counter()

    bang_max = spec.t_max if spec.t_max is not None else _HALF_PI / rabi
    off_max = spec.t_max if spec.t_max is not None else _HALF_PI / omega
    t_limit = 2.0 * bang_max + off_max

    bang = np.linspace(0.0, bang_max, n)
    off = np.linspace(0.0, off_max, n)
    d_bang, d_off = bang[1] - bang[0], off[1] - off[0]
    u_plus = _expm_batch(c, omega, bang)
    u_zero = _expm_batch(0.0, omega, off)
    u_minus = _expm_batch(-c, omega, bang)
    bra = final.as_array().conj()

    psi1 = u_plus @ initial.as_array()                         # [a, i]
    psi2 = np.einsum("bij,aj->abi", u_zero, psi1)              # [a, b, i]

    slack = _screen_slack(rabi * d_bang + 0.5 * omega * d_off)
    if spec.symmetric:
        psi3 = np.einsum("aij,abj->abi", u_minus, psi2)
        fid = np.abs(psi3 @ bra)
        counter.add(fid.size)
        total = 2.0 * bang[:, None] + off[None, :]
        passing = fid >= 1.0 - slack
        best_coarse = float(fid.max())
        t_guess = float(total[passing].min()) if passing.any() else None
    else:
        best_coarse = 0.0
        t_guess = None
        # chunked over the last bang so memory stays at n^2
        for k in range(n):
            psi3 = np.einsum("ij,abj->abi", u_minus[k], psi2)
            fid = np.abs(psi3 @ bra)
            counter.add(fid.size)
            best_coarse = max(best_coarse, float(fid.max()))
            passing = fid >= 1.0 - slack
            if passing.any():
                total = bang[:, None] + off[None, :] + bang[k]
                candidate = float(total[passing].min())
                t_guess = candidate if t_guess is None else min(t_guess, candidate)

    logger.debug("three_segment grid: guess %s, best %.12g", t_guess, best_coarse)
    if t_guess is None:
        return SearchResult(False, None, None, best_coarse, SearchFamily.THREE_SEGMENT, counter.count)

    def coordinates(t_c, t_off, t_mc):
        return {"t_c": t_c, "t_off": t_off, "t_minus_c": t_mc}

    if spec.symmetric:
        def best_at(t: float):
            def f(t_c: float) -> float:
                counter.add()
                return _three_segment_fidelity(initial, final, c, omega, t_c, max(0.0, t - 2.0 * t_c), t_c)

            t_c, value = scan_then_golden(f, 0.0, 0.5 * t, spec.inner_grid, tol=1e-12)
            t_off = max(0.0, t - 2.0 * t_c)
            return value, _three_segment_protocol(c, omega, t_c, t_off, t_c), coordinates(t_c, t_off, t_c)
    else:
        seeds = (np.arange(spec.inner_grid) + 0.5) / spec.inner_grid

        def split(t, p, q):
            return p * q * t, (1.0 - p) * t, p * (1.0 - q) * t

        def best_at(t: float):
            if t == 0.0:
                value = fidelity(initial, final)
                return value, _three_segment_protocol(c, omega, 0.0, 0.0, 0.0), coordinates(0.0, 0.0, 0.0)
            p_grid, q_grid = np.meshgrid(seeds, seeds, indexing="ij")
            t1, t2, t3 = split(t, p_grid, q_grid)
            psi = np.einsum("abij,j->abi", _expm_batch(c, omega, t1), initial.as_array())
            psi = np.einsum("abij,abj->abi", _expm_batch(0.0, omega, t2), psi)
            psi = np.einsum("abij,abj->abi", _expm_batch(-c, omega, t3), psi)
            seed_fid = np.abs(psi @ final.as_array().conj())
            counter.add(seed_fid.size)
            # ties go to the smallest T_c
            ties = np.argwhere(seed_fid >= seed_fid.max() - 1e-12)
            a, b = min(ties, key=lambda ab: t1[ab[0], ab[1]])
            best = ((float(seed_fid[a, b]),), float(p_grid[a, b]), float(q_grid[a, b]))

            def objective(x):
                counter.add()
                return -_three_segment_fidelity(initial, final, c, omega, *split(t, x[0], x[1]))

            res = minimize(objective, [best[1], best[2]], method="Nelder-Mead",
                           bounds=[(0.0, 1.0), (0.0, 1.0)],
                           options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": 2000})
            p, q = (float(res.x[0]), float(res.x[1])) if -res.fun >= best[0][0] else (best[1], best[2])
            t_c, t_off, t_mc = split(t, p, q)
            value = _three_segment_fidelity(initial, final, c, omega, t_c, t_off, t_mc)
            return value, _three_segment_protocol(c, omega, t_c, t_off, t_mc), coordinates(t_c, t_off, t_mc)

    margin = 2.0 * (d_bang + d_off) + math.sqrt(2.0 * slack) / omega
    found = _bisect_search(best_at, t_guess, margin, t_limit, spec.threshold, spec.resolved_time_tol)
    return _finish(found, initial, final, SearchFamily.THREE_SEGMENT, counter, best_coarse)


# ============================================================
# PIECEWISE-CONSTANT FAMILY
# ============================================================

def _pattern_fidelities(initial: QubitState, final: QubitState, levels: Sequence[float],
                        omega: float, n: int, t: float) -> np.ndarray:
    """Fidelity of every Gamma pattern (lexicographic, first segment most significant)."""
    h = t / n
    steps = np.stack([_expm_batch(g, omega, np.array(h)) for g in levels])   # [k, i, j]
    psi = initial.as_array()[None, :]
    for _ in range(n):
        psi = np.einsum("kij,pj->pki", steps, psi).reshape(-1, 2)
    return np.abs(psi @ final.as_array().conj())


def _pattern_fidelity(initial: QubitState, final: QubitState, pattern: Sequence[float],
                      omega: float, t: float) -> float:
    h = t / len(pattern)
    psi = initial.as_array()
    for g in pattern:
        psi = expm_pauli(g, omega, h).apply(psi)
    return min(1.0, float(abs(np.vdot(final.as_array(), psi))))


def _search_piecewise(spec: SearchSpec, initial: QubitState, final: QubitState,
                      params: LzParams) -> SearchResult:
    if params.c is None:
        raise DomainError("piecewise_constant search needs the bound c")
    c, omega = params.c, params.omega
    rabi = math.hypot(c, omega)
    n = spec.segments
    levels = (-c, 0.0, c)
    patterns = [tuple(levels[(p // 3 ** (n - 1 - j)) % 3] for j in range(n)) for p in range(3 ** n)]
    counter = _Counter()
    tol = spec.resolved_time_tol

    t_max = spec.t_max if spec.t_max is not None else math.pi / rabi + _HALF_PI / omega
    times = np.linspace(0.0, t_max, spec.grid_points)
    d_t = times[1] - times[0]
    # away from a peak the fidelity moves at most rabi per unit time
    slack = rabi * d_t

    if fidelity(initial, final) >= spec.threshold:
        proto = Protocol(tuple(Segment.constant(g, omega, 0.0) for g in patterns[0]),
                         regime=SearchFamily.PIECEWISE_CONSTANT.value, params={"c": c, "omega": omega})
        return _finish((0.0, (1.0, proto, {"pattern": list(patterns[0]), "t": 0.0})),
                       initial, final, SearchFamily.PIECEWISE_CONSTANT, counter, 1.0)

    grid = [_pattern_fidelities(initial, final, levels, omega, n, float(t)) for t in times]
    counter.add(len(times) * len(patterns))
    best_coarse = float(max(g.max() for g in grid))

    for k in range(len(times) - 1):
        t_lo, t_hi = float(times[k]), float(times[k + 1])
        candidates = np.nonzero(np.maximum(grid[k], grid[k + 1]) >= spec.threshold - slack)[0]
        best: Optional[Tuple[float, int]] = None
        for idx in candidates:
            pattern = patterns[idx]

            def f(t: float, pattern=pattern) -> float:
                counter.add()
                return _pattern_fidelity(initial, final, pattern, omega, t)

            peak_t, peak = golden_section_max(f, t_lo, t_hi, tol=0.1 * tol)
            if peak < spec.threshold:
                continue
            if f(t_lo) >= spec.threshold:
                crossing = t_lo
            else:
                crossing = bisect_crossing(lambda t: f(t) >= spec.threshold, t_lo, peak_t, tol)
            if best is None or crossing < best[0]:
                best = (crossing, int(idx))

        if best is not None:
            t_star, idx = best
            pattern = patterns[idx]
            proto = Protocol(
                tuple(Segment.constant(g, omega, t_star / n) for g in pattern),
                regime=SearchFamily.PIECEWISE_CONSTANT.value,
                params={"c": c, "omega": omega},
            )
            value = _pattern_fidelity(initial, final, pattern, omega, t_star)
            return _finish((t_star, (value, proto, {"pattern": list(pattern), "t": t_star})),
                           initial, final, SearchFamily.PIECEWISE_CONSTANT, counter, best_coarse)

    return SearchResult(False, None, None, best_coarse, SearchFamily.PIECEWISE_CONSTANT, counter.count)


# ============================================================
# PUBLIC OPERATIONS
# ============================================================

def search_min_time(spec: SearchSpec, initial: QubitState, final: QubitState, params: LzParams) -> SearchResult:
    """
    Shortest protocol of the family reaching spec.threshold from initial to final.

    Returns:
        SearchResult; an unreachable threshold is reported with reached=False
    """
    logger.info("Searching %s family (grid %d, threshold %.12g)", spec.family.value, spec.grid_points, spec.threshold)
    if spec.family is SearchFamily.COMPOSITE:
        result = _search_composite(spec, initial, final, params)
    elif spec.family is SearchFamily.THREE_SEGMENT:
        result = _search_three_segment(spec, initial, final, params)
    else:
        result = _search_piecewise(spec, initial, final, params)
    logger.info("  reached=%s duration=%s fidelity=%.12g (%d evaluations)",
                result.reached, result.duration, result.fidelity, result.evaluations)
    return result


def sweep_fig1(gamma_over_omega: float, c_grid: Sequence[float]) -> List[SweepRow]:
    """
    Minimal time against the bound c, all quantities in units of omega = 1.

    Rows keep the order of c_grid; a rise of wTmin along increasing c is
    logged as a warning.
    """
    rows = []
    for c in c_grid:
        result = tmin_constrained(gamma_over_omega, 1.0, float(c))
        rows.append(SweepRow(
            c_over_omega=float(c),
            wTmin=result.t_min,
            wToff=result.t_off,
            two_wTc=2.0 * result.t_c,
            regime=result.regime.value,
        ))

    ordered = sorted(rows, key=lambda r: r.c_over_omega)
    for prev, nxt in zip(ordered, ordered[1:]):
        if nxt.wTmin > prev.wTmin + 1e-12:
            logger.warning("wTmin rises from %.12g to %.12g between c/omega=%.6g and %.6g",
                           prev.wTmin, nxt.wTmin, prev.c_over_omega, nxt.c_over_omega)
    return rows


def verify_delta_limit(
    alpha: float,
    omega: float,
    gamma_big_grid: Sequence[float] = DELTA_LIMIT_GRID,
    strict: bool = True,
) -> DeltaLimitReport:
    """
    Compare the finite pulse exp(-i (Gamma s3 + omega s1) alpha/Gamma) with
    exp(-i alpha s3) for Gamma = g * omega, g in gamma_big_grid.

    Raises:
        DomainError: omega or a grid value is not positive
        ConsistencyError: strict and the errors do not decrease along the grid
    """
    if not (math.isfinite(omega) and omega > 0):
        raise DomainError(f"omega must be positive, got {omega!r}")
    ideal = delta_rotation(alpha)
    gammas, errors = [], []
    for ratio in gamma_big_grid:
        gamma = float(ratio) * omega
        if gamma <= 0:
            raise DomainError(f"delta-limit grid values must be positive, got {ratio!r}")
        gammas.append(gamma)
        errors.append(expm_pauli(gamma, omega, alpha / gamma).distance(ideal))
    report = DeltaLimitReport(alpha=alpha, omega=omega, gammas=tuple(gammas), errors=tuple(errors))
    if not report.decreasing:
        if strict:
            raise ConsistencyError(f"delta-limit errors do not decrease along Gamma/omega = "
                                   f"{list(gamma_big_grid)}: {errors}")
        logger.warning("Delta-limit errors do not decrease: %s", errors)
    return report
