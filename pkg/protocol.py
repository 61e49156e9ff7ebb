"""
Driving protocols: ordered segments of instantaneous sigma3 pulses, constant
(Gamma, omega) stretches and ramped switches of Gamma.

Builders cover the three optimal families (composite pulse, bang-off-bang,
bang-bang); apply_switching replaces the instantaneous jumps of Gamma by
ramps of finite duration.
"""

import json
import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from analytic import (
    Regime,
    bang_bang_duration,
    bang_off_bang_durations,
    pulse_areas,
    regime,
)
from config import PROTOCOL_FIDELITY_TOL, RAMP_SUBSTEPS
from errors import DomainError
from report_generator import parse_float, to_json_text
from states import LzParams, QubitState, fidelity

logger = logging.getLogger(__name__)


def _linear(x: float) -> float:
    return x


def _cosine(x: float) -> float:
    return 0.5 * (1.0 - math.cos(math.pi * x))


def _smoothstep(x: float) -> float:
    return x * x * (3.0 - 2.0 * x)


# Ramp profiles on [0, 1] with s(0) = 0, s(1) = 1
SWITCH_SHAPES: Dict[str, Callable[[float], float]] = {
    "linear": _linear,
    "cosine": _cosine,
    "smoothstep": _smoothstep,
}


class SegmentKind(str, Enum):
    DELTA_PULSE = "delta_pulse"
    CONSTANT = "constant"
    RAMP = "ramp"


def _require_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class Segment:
    """
    One piece of a protocol.

    delta_pulse: e^{-i area sigma3}, zero duration
    constant:    Gamma = gamma_start (= gamma_end), omega, duration
    ramp:        Gamma goes gamma_start -> gamma_end along `shape`
    """

    kind: SegmentKind
    gamma_start: float = 0.0
    gamma_end: float = 0.0
    omega: float = 0.0
    duration: float = 0.0
    area: float = 0.0
    shape: str = "linear"

    def __post_init__(self):
        object.__setattr__(self, "kind", SegmentKind(self.kind))
        _require_finite(
            gamma_start=self.gamma_start,
            gamma_end=self.gamma_end,
            omega=self.omega,
            duration=self.duration,
            area=self.area,
        )
        if self.duration < 0:
            raise DomainError(f"segment duration must be >= 0, got {self.duration!r}")
        if self.kind is SegmentKind.DELTA_PULSE and self.duration != 0.0:
            raise DomainError("delta pulses carry zero duration")
        if self.kind is SegmentKind.CONSTANT and self.gamma_start != self.gamma_end:
            raise DomainError("constant segment needs gamma_start == gamma_end")
        if self.shape not in SWITCH_SHAPES:
            raise DomainError(f"unknown ramp shape {self.shape!r}; choose from {sorted(SWITCH_SHAPES)}")

    @classmethod
    def delta(cls, area: float) -> "Segment":
        return cls(SegmentKind.DELTA_PULSE, area=area)

    @classmethod
    def constant(cls, gamma: float, omega: float, duration: float) -> "Segment":
        return cls(SegmentKind.CONSTANT, gamma_start=gamma, gamma_end=gamma, omega=omega, duration=duration)

    @classmethod
    def ramp(cls, gamma_start: float, gamma_end: float, omega: float, duration: float,
             shape: str = "linear") -> "Segment":
        return cls(SegmentKind.RAMP, gamma_start=gamma_start, gamma_end=gamma_end,
                   omega=omega, duration=duration, shape=shape)

    def gamma_at(self, t: float) -> float:
        """Gamma at local time t in [0, duration]."""
        if self.kind is not SegmentKind.RAMP or self.duration == 0.0:
            return self.gamma_start
        x = min(1.0, max(0.0, t / self.duration))
        return self.gamma_start + (self.gamma_end - self.gamma_start) * SWITCH_SHAPES[self.shape](x)

    def to_dict(self) -> Dict:
        d = {
            "kind": self.kind.value,
            "gamma_start": self.gamma_start,
            "gamma_end": self.gamma_end,
            "omega": self.omega,
            "duration": self.duration,
            "area": self.area,
        }
        if self.kind is SegmentKind.RAMP:
            d["shape"] = self.shape
        return d

    @classmethod
    def from_dict(cls, d: Dict) -> "Segment":
        return cls(
            kind=SegmentKind(d["kind"]),
            gamma_start=parse_float(d.get("gamma_start", 0.0)),
            gamma_end=parse_float(d.get("gamma_end", 0.0)),
            omega=parse_float(d.get("omega", 0.0)),
            duration=parse_float(d.get("duration", 0.0)),
            area=parse_float(d.get("area", 0.0)),
            shape=d.get("shape", "linear"),
        )


@dataclass(frozen=True)
class Protocol:
    """Time-ordered segments (earliest first) plus a regime tag and parameter record."""

    segments: Tuple[Segment, ...] = ()
    regime: str = "custom"
    params: Dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if isinstance(self.regime, Enum):
            object.__setattr__(self, "regime", self.regime.value)

    @property
    def total_duration(self) -> float:
        return math.fsum(s.duration for s in self.segments)

    @property
    def has_delta_pulses(self) -> bool:
        return any(s.kind is SegmentKind.DELTA_PULSE for s in self.segments)

    def durations(self) -> List[float]:
        return [s.duration for s in self.segments if s.kind is not SegmentKind.DELTA_PULSE]

    def gamma_profile(self, ramp_points: int = RAMP_SUBSTEPS) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        (t, Gamma, omega) samples for export: segment end points plus interior
        ramp samples. Delta pulses occupy no time and are omitted.
        """
        times, gammas, omegas = [], [], []
        start = 0.0
        for seg in self.segments:
            if seg.kind is SegmentKind.DELTA_PULSE:
                continue
            n = ramp_points if seg.kind is SegmentKind.RAMP else 1
            for k in range(n + 1):
                local = seg.duration * k / n
                times.append(start + local)
                gammas.append(seg.gamma_at(local))
                omegas.append(seg.omega)
            start += seg.duration
        return np.array(times), np.array(gammas), np.array(omegas)

    def to_dict(self) -> Dict:
        return {
            "regime": self.regime,
            "total_duration": self.total_duration,
            "params": dict(self.params),
            "segments": [s.to_dict() for s in self.segments],
        }

    def to_json(self) -> str:
        return to_json_text(self.to_dict())

    @classmethod
    def from_dict(cls, d: Dict) -> "Protocol":
        if "segments" not in d:
            raise DomainError("protocol JSON needs a 'segments' list")
        params = {k: (float(v) if isinstance(v, (int, float)) and not isinstance(v, bool) else v)
                  for k, v in d.get("params", {}).items()}
        return cls(
            segments=tuple(Segment.from_dict(s) for s in d["segments"]),
            regime=d.get("regime", "custom"),
            params=params,
        )

    @classmethod
    def from_json(cls, text: str) -> "Protocol":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"protocol file is not valid JSON: {exc}") from None
        if isinstance(data, list):
            data = {"segments": data}
        return cls.from_dict(data)


# ============================================================
# BUILDERS
# ============================================================

def build_composite(alpha_in: float, alpha_f: float, omega: float, t: float) -> Protocol:
    """delta(alpha_in), free evolution under omega sigma1 for t, delta(alpha_f)."""
    if not (math.isfinite(omega) and omega > 0):
        raise DomainError(f"omega must be positive, got {omega!r}")
    if not (math.isfinite(t) and t >= 0):
        raise DomainError(f"free-evolution time must be >= 0, got {t!r}")
    return Protocol(
        segments=(
            Segment.delta(alpha_in),
            Segment.constant(0.0, omega, t),
            Segment.delta(alpha_f),
        ),
        regime=Regime.UNCONSTRAINED,
        params={"omega": omega, "alpha_in": alpha_in, "alpha_f": alpha_f},
    )


def build_bang_off_bang(gamma: float, omega: float, c: float) -> Protocol:
    """Gamma = +c for T_c, 0 for T_off, -c for T_c."""
    if regime(gamma, omega, c) is not Regime.BANG_OFF_BANG:
        raise DomainError(
            f"c={c!r} <= omega^2/gamma={omega * omega / gamma!r} is the bang-bang regime; "
            f"use build_bang_bang"
        )
    t_c, t_off = bang_off_bang_durations(gamma, omega, c)
    return Protocol(
        segments=(
            Segment.constant(c, omega, t_c),
            Segment.constant(0.0, omega, t_off),
            Segment.constant(-c, omega, t_c),
        ),
        regime=Regime.BANG_OFF_BANG,
        params={"gamma": gamma, "omega": omega, "c": c},
    )


def build_bang_bang(gamma: float, omega: float, c: float) -> Protocol:
    """Gamma = +c for T_c, then -c for T_c."""
    if regime(gamma, omega, c) is not Regime.BANG_BANG:
        raise DomainError(
            f"c={c!r} > omega^2/gamma={omega * omega / gamma!r} is the bang-off-bang regime; "
            f"use build_bang_off_bang"
        )
    t_c = bang_bang_duration(gamma, omega, c)
    return Protocol(
        segments=(
            Segment.constant(c, omega, t_c),
            Segment.constant(-c, omega, t_c),
        ),
        regime=Regime.BANG_BANG,
        params={"gamma": gamma, "omega": omega, "c": c},
    )


def build_constrained(gamma: float, omega: float, c: float) -> Protocol:
    if regime(gamma, omega, c) is Regime.BANG_BANG:
        return build_bang_bang(gamma, omega, c)
    return build_bang_off_bang(gamma, omega, c)


def build_optimal(initial: QubitState, final: QubitState, params: LzParams) -> Protocol:
    """
    Regime-appropriate optimal protocol.

    Without c: composite pulse for arbitrary endpoints (omega_max replaces
    omega when set). With c: bang-off-bang / bang-bang, which are derived for
    ground of H_{-gamma} -> ground of H_{+gamma} only.
    """
    if params.c is None:
        omega = params.effective_omega
        areas = pulse_areas(initial, final, omega)
        return build_composite(areas.alpha_in, areas.alpha_f, omega, areas.t_min)

    lz_pair = (
        fidelity(initial, params.initial_ground()) >= 1.0 - PROTOCOL_FIDELITY_TOL
        and fidelity(final, params.final_ground()) >= 1.0 - PROTOCOL_FIDELITY_TOL
    )
    if not lz_pair:
        raise DomainError(
            "constrained protocols connect the ground state of H_{-gamma} to the ground "
            "state of H_{+gamma}; use --ground -G --ground G with --c"
        )
    return build_constrained(params.gamma, params.omega, params.c)


# ============================================================
# SWITCHING RAMPS
# ============================================================

def apply_switching(
    p: Protocol,
    epsilon: float,
    corrected: bool,
    shape: str = "linear",
) -> Protocol:
    """
    Replace every jump of Gamma between consecutive constant segments by a
    ramp of duration epsilon.

    Uncorrected: segment durations are kept (total time grows by epsilon per
    ramp). Corrected: each constant segment loses epsilon/2 per adjacent ramp,
    i.e. T_c - epsilon/2 and T_off - epsilon, total time unchanged.

    Raises:
        DomainError: protocol has pulses or ramps, unknown shape, or a
                     corrected duration would be negative
    """
    if not (math.isfinite(epsilon) and epsilon >= 0):
        raise DomainError(f"epsilon must be >= 0, got {epsilon!r}")
    if shape not in SWITCH_SHAPES:
        raise DomainError(f"unknown ramp shape {shape!r}; choose from {sorted(SWITCH_SHAPES)}")
    if epsilon == 0.0:
        return p
    if any(s.kind is not SegmentKind.CONSTANT for s in p.segments):
        raise DomainError("switching ramps apply to bang-off-bang or bang-bang protocols only")

    segments = list(p.segments)
    jumps = [k for k in range(len(segments) - 1)
             if segments[k].gamma_end != segments[k + 1].gamma_start]

    cut = [0.0] * len(segments)
    if corrected:
        for k in jumps:
            cut[k] += 0.5 * epsilon
            cut[k + 1] += 0.5 * epsilon

    out: List[Segment] = []
    for k, seg in enumerate(segments):
        duration = seg.duration - cut[k]
        if duration < 0:
            raise DomainError(
                f"epsilon={epsilon!r} too large: corrected duration of segment {k} "
                f"(Gamma={seg.gamma_start!r}) would be {duration!r}"
            )
        out.append(replace(seg, duration=duration))
        if k in jumps:
            out.append(Segment.ramp(seg.gamma_end, segments[k + 1].gamma_start, seg.omega, epsilon, shape))

    params = dict(p.params)
    params.update({"epsilon": epsilon, "corrected": bool(corrected), "shape": shape})
    logger.debug("Inserted %d %s ramps of %.6g (corrected=%s)", len(jumps), shape, epsilon, corrected)
    return Protocol(segments=tuple(out), regime=p.regime, params=params)
