"""
Qubit states in the sigma3 eigenbasis.

Convention: sigma3|0> = +|0>, sigma3|1> = -|1>. States are normalized on
construction; the Landau-Zener eigenvectors are built already normalized.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np

from config import NORM_TOL
from errors import DomainError

logger = logging.getLogger(__name__)

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class Level(str, Enum):
    GROUND = "ground"
    EXCITED = "excited"


@dataclass(frozen=True)
class QubitState:
    """Normalized amplitudes (c0, c1) on {|0>, |1>}."""

    c0: complex
    c1: complex

    def __post_init__(self):
        c0 = complex(self.c0)
        c1 = complex(self.c1)
        if not all(math.isfinite(x) for x in (c0.real, c0.imag, c1.real, c1.imag)):
            raise DomainError(f"state amplitudes must be finite, got ({c0}, {c1})")

        norm = math.sqrt(abs(c0) ** 2 + abs(c1) ** 2)
        if norm == 0.0:
            raise DomainError("cannot normalize the zero vector")
        if abs(norm - 1.0) > NORM_TOL:
            logger.warning("Normalizing state (%s, %s) with norm %.12g", c0, c1, norm)

        object.__setattr__(self, "c0", c0 / norm)
        object.__setattr__(self, "c1", c1 / norm)

    @classmethod
    def from_array(cls, vector) -> "QubitState":
        v = np.asarray(vector, dtype=complex).reshape(-1)
        if v.shape != (2,):
            raise DomainError(f"a qubit state has 2 amplitudes, got {v.shape[0]}")
        return cls(complex(v[0]), complex(v[1]))

    def as_array(self) -> np.ndarray:
        return np.array([self.c0, self.c1], dtype=complex)

    def with_phase(self, phi: float) -> "QubitState":
        """Same ray, amplitudes multiplied by e^{i phi}."""
        p = cmath.exp(1j * phi)
        return QubitState(self.c0 * p, self.c1 * p)

    def magnitudes(self):
        return abs(self.c0), abs(self.c1)

    def relative_phase(self) -> Optional[float]:
        """arg(c1) - arg(c0), or None when either amplitude vanishes."""
        if abs(self.c0) < NORM_TOL or abs(self.c1) < NORM_TOL:
            return None
        return cmath.phase(self.c1) - cmath.phase(self.c0)

    def to_literal(self) -> str:
        return ",".join(_complex_literal(z) for z in (self.c0, self.c1))


def ket0() -> QubitState:
    return QubitState(1.0, 0.0)


def ket1() -> QubitState:
    return QubitState(0.0, 1.0)


def random_state(rng: np.random.Generator) -> QubitState:
    """Haar-random state from a seeded generator."""
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return QubitState.from_array(v / np.linalg.norm(v))


@dataclass(frozen=True)
class LzParams:
    """
    Drive parameters of H = Gamma sigma3 + omega sigma1 (angular frequencies).

    gamma is the asymmetry magnitude used by the eigenstate pair of
    H_{-gamma} -> H_{+gamma}; c bounds |Gamma(t)|; omega_max bounds |omega(t)|
    when omega is itself a control; epsilon is the switching (ramp) time.
    """

    gamma: float
    omega: float
    c: Optional[float] = None
    omega_max: Optional[float] = None
    epsilon: Optional[float] = None

    def __post_init__(self):
        if not math.isfinite(self.gamma):
            raise DomainError(f"gamma must be finite, got {self.gamma!r}")
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise DomainError(f"omega must be positive, got {self.omega!r}")
        if self.c is not None and not (math.isfinite(self.c) and self.c > 0):
            raise DomainError(f"c must be positive, got {self.c!r}")
        if self.omega_max is not None and not (math.isfinite(self.omega_max) and self.omega_max > 0):
            raise DomainError(f"omega_max must be positive, got {self.omega_max!r}")
        if self.epsilon is not None and not (math.isfinite(self.epsilon) and self.epsilon >= 0):
            raise DomainError(f"epsilon must be non-negative, got {self.epsilon!r}")

    @property
    def constrained(self) -> bool:
        return self.c is not None

    @property
    def effective_omega(self) -> float:
        return self.omega_max if self.omega_max is not None else self.omega

    def initial_ground(self) -> QubitState:
        return lz_eigenstate(-self.gamma, self.omega, Level.GROUND)

    def final_ground(self) -> QubitState:
        return lz_eigenstate(self.gamma, self.omega, Level.GROUND)


def lz_eigenstate(gamma: float, omega: float, level: Union[Level, str] = Level.GROUND) -> QubitState:
    """
    Normalized eigenvector of gamma sigma3 + omega sigma1.

    Ground (eigenvalue -E, E = sqrt(gamma^2 + omega^2)): omega|0> + (-E - gamma)|1>
    Excited (eigenvalue +E):                            omega|0> + ( E - gamma)|1>

    Args:
        gamma: signed asymmetry
        omega: coupling, > 0
        level: "ground" or "excited"
    """
    level = Level(level)
    if not math.isfinite(gamma):
        raise DomainError(f"gamma must be finite, got {gamma!r}")
    if not (math.isfinite(omega) and omega > 0):
        raise DomainError(f"omega must be positive, got {omega!r}")

    energy = math.hypot(gamma, omega)
    # rewrite E -/+ gamma as omega^2 / (E +/- gamma) where it would cancel
    if level is Level.GROUND:
        second = -(energy + gamma) if gamma >= 0 else -omega * omega / (energy - gamma)
    else:
        second = energy - gamma if gamma <= 0 else omega * omega / (energy + gamma)

    norm = math.hypot(omega, second)
    return QubitState(omega / norm, second / norm)


def lz_energy(gamma: float, omega: float, level: Union[Level, str] = Level.GROUND) -> float:
    energy = math.hypot(gamma, omega)
    return -energy if Level(level) is Level.GROUND else energy


def overlap(a: QubitState, b: QubitState) -> complex:
    """<a|b>, conjugating the first argument."""
    return a.c0.conjugate() * b.c0 + a.c1.conjugate() * b.c1


def fidelity(achieved: QubitState, target: QubitState, squared: bool = False) -> float:
    """
    Phase-insensitive fidelity |<target|achieved>| (or its square).

    Rounding can push the overlap a hair above 1; the result is clipped to [0, 1].
    """
    f = min(1.0, abs(overlap(target, achieved)))
    return f * f if squared else f


def to_sigma1_basis(s: QubitState) -> QubitState:
    """Components with respect to the sigma1 eigenvectors (|0> +/- |1>)/sqrt(2)."""
    return QubitState((s.c0 + s.c1) * _INV_SQRT2, (s.c0 - s.c1) * _INV_SQRT2)


def bloch_vector(state: QubitState) -> Tuple[float, float, float]:
    """(<sigma1>, <sigma2>, <sigma3>) of a pure state."""
    w = state.c0.conjugate() * state.c1
    return 2.0 * w.real, 2.0 * w.imag, abs(state.c0) ** 2 - abs(state.c1) ** 2


def energy_variance(state: QubitState, omega: float) -> float:
    """
    Energy spread Delta E_0 of a state with respect to H_0 = omega sigma1 (hbar = 1).

    Taken from the Bloch components orthogonal to sigma1, so sigma1
    eigenstates give exactly 0.
    """
    _, y, z = bloch_vector(state)
    return abs(omega) * math.hypot(y, z)


def _complex_literal(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


def parse_state(literal: str) -> QubitState:
    """
    Parse "re+imi,re+imi" (also "0.5,0.5", "1,i", "0.3-0.2j,...") into a state.

    Raises:
        ValueError: malformed literal
    """
    parts = [p.strip() for p in literal.split(",")]
    if len(parts) != 2 or not all(parts):
        raise ValueError(f"state literal needs two comma-separated amplitudes, got {literal!r}")

    amplitudes = []
    for part in parts:
        text = part.replace(" ", "").replace("i", "j")
        if text in ("j", "+j", "-j"):
            text = text.replace("j", "1j")
        try:
            amplitudes.append(complex(text))
        except ValueError:
            raise ValueError(f"cannot parse amplitude {part!r} in {literal!r}") from None

    return QubitState(amplitudes[0], amplitudes[1])
