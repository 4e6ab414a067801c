"""Parameter types for the two-particle setup and the time/distance mapping.

Everything is SI. Dimensionless runs simply use ``hbar = mass = 1``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .errors import ParameterError

DEFAULT_BROAD_FACTOR = 100.0


def _check_positive(name, value, allow_zero=False):
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise ParameterError(name, value, "must be a real number") from None
    if not math.isfinite(v):
        raise ParameterError(name, value, "must be finite")
    if v < 0 or (v == 0 and not allow_zero):
        raise ParameterError(name, value, "must be non-negative" if allow_zero else "must be positive")
    return v


@dataclass(frozen=True)
class SourceParams:
    """Entangled Gaussian source.

    Parameters
    ----------
    sigma : float
        Momentum-spread scale (kg m/s). ``hbar/sigma`` sets the width of the
        relative-coordinate Gaussian.
    omega : float
        Overall spatial extent of the pair (m).
    hbar : float
        Reduced Planck constant (J s).
    mass : float
        Mass of each particle (kg).
    """

    sigma: float
    omega: float
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        for name in ("sigma", "omega", "hbar", "mass"):
            object.__setattr__(self, name, _check_positive(name, getattr(self, name)))

    @property
    def rel_length(self) -> float:
        """hbar/sigma, the correlation length of the pair (m)."""
        return self.hbar / self.sigma

    def is_broad(self, epsilon: float, factor: float = DEFAULT_BROAD_FACTOR) -> bool:
        """True when omega exceeds ``factor * max(epsilon, hbar/sigma)``."""
        return self.omega > factor * max(epsilon, self.rel_length)

    def entanglement_parameter(self) -> float:
        """4 Omega^2 sigma^2 / hbar^2; equal to 1 for a product state."""
        return 4.0 * self.omega**2 * self.sigma**2 / self.hbar**2


@dataclass(frozen=True)
class SlitPair:
    """Two Gaussian slit modes at +y0 and -y0, each of width epsilon."""

    y0: float
    epsilon: float

    def __post_init__(self):
        object.__setattr__(self, "y0", _check_positive("y0", self.y0))
        object.__setattr__(self, "epsilon", _check_positive("epsilon", self.epsilon))
        if self.y0 <= self.epsilon:
            raise ParameterError("y0", self.y0, f"slits overlap (y0 must exceed epsilon={self.epsilon})")

    @property
    def separation(self) -> float:
        return 2.0 * self.y0

    def mode_overlap(self) -> float:
        """<phi_A|phi_B> = exp(-2 y0^2 / epsilon^2)."""
        return math.exp(-2.0 * self.y0**2 / self.epsilon**2)


class Mode(enum.Enum):
    TIME = "time"
    DISTANCE = "distance"


@dataclass(frozen=True)
class KinematicsConfig:
    """Propagation times, either as durations or as flight distances.

    In time mode ``t0`` is the source-to-slit flight time and ``t`` the
    slit-to-detector time. In distance mode the same information is carried by
    ``lambda_d``, ``L2`` (source to slit) and ``L1`` (slit to D1). The two are
    linked by ``hbar t / m = lambda_d L1 / 2 pi`` and
    ``hbar t0 / m = lambda_d L2 / 2 pi``. ``velocity`` is needed to go from
    time to distance; distance-to-time fills it in.

    Use :meth:`time_domain` or :meth:`distance_domain` to build one.
    """

    mode: Mode
    t0: Optional[float] = None
    t: Optional[float] = None
    lambda_d: Optional[float] = None
    L1: Optional[float] = None
    L2: Optional[float] = None
    velocity: Optional[float] = None

    def __post_init__(self):
        mode = Mode(self.mode)
        object.__setattr__(self, "mode", mode)
        if mode is Mode.TIME:
            object.__setattr__(self, "t0", _check_positive("t0", self.t0, allow_zero=True))
            object.__setattr__(self, "t", _check_positive("t", self.t))
        else:
            object.__setattr__(self, "lambda_d", _check_positive("lambda_d", self.lambda_d))
            object.__setattr__(self, "L1", _check_positive("L1", self.L1))
            object.__setattr__(self, "L2", _check_positive("L2", self.L2, allow_zero=True))
        if self.velocity is not None:
            object.__setattr__(self, "velocity", _check_positive("velocity", self.velocity))

    @classmethod
    def time_domain(cls, t0: float, t: float, velocity: Optional[float] = None) -> "KinematicsConfig":
        return cls(Mode.TIME, t0=t0, t=t, velocity=velocity)

    @classmethod
    def distance_domain(cls, lambda_d: float, L1: float, L2: float) -> "KinematicsConfig":
        return cls(Mode.DISTANCE, lambda_d=lambda_d, L1=L1, L2=L2)

    @property
    def D(self) -> Optional[float]:
        """Slit -> source -> D2 distance, L1 + 2 L2 (distance mode only)."""
        if self.mode is not Mode.DISTANCE:
            return None
        return self.L1 + 2.0 * self.L2

    def spreads(self, hbar: float, mass: float) -> tuple[float, float]:
        """Return ``(hbar t0 / m, hbar t / m)`` in m^2.

        In distance mode these are ``lambda_d L2 / 2 pi`` and
        ``lambda_d L1 / 2 pi`` and do not depend on ``hbar`` or ``mass``.
        """
        if self.mode is Mode.TIME:
            return hbar * self.t0 / mass, hbar * self.t / mass
        two_pi = 2.0 * math.pi
        return self.lambda_d * self.L2 / two_pi, self.lambda_d * self.L1 / two_pi

    def to_time(self, hbar: float, mass: float) -> "KinematicsConfig":
        if self.mode is Mode.TIME:
            return self
        hbar = _check_positive("hbar", hbar)
        mass = _check_positive("mass", mass)
        scale = self.lambda_d * mass / (2.0 * math.pi * hbar)
        velocity = 2.0 * math.pi * hbar / (mass * self.lambda_d)
        return KinematicsConfig.time_domain(t0=self.L2 * scale, t=self.L1 * scale, velocity=velocity)

    def to_distance(self, hbar: float, mass: float, velocity: Optional[float] = None) -> "KinematicsConfig":
        if self.mode is Mode.DISTANCE:
            return self
        v = velocity if velocity is not None else self.velocity
        if v is None:
            raise ParameterError("velocity", None, "required to map time mode to distance mode")
        v = _check_positive("velocity", v)
        hbar = _check_positive("hbar", hbar)
        mass = _check_positive("mass", mass)
        lambda_d = 2.0 * math.pi * hbar / (mass * v)
        return KinematicsConfig.distance_domain(lambda_d=lambda_d, L1=v * self.t, L2=v * self.t0)


def distance_map(k: KinematicsConfig, hbar: float, mass: float,
                 velocity: Optional[float] = None) -> KinematicsConfig:
    """Convert ``k`` to the other parametrization."""
    if k.mode is Mode.TIME:
        return k.to_distance(hbar, mass, velocity)
    return k.to_time(hbar, mass)


@dataclass(frozen=True)
class RegimeReport:
    omega_over_epsilon: float
    omega_sigma_over_hbar: float
    threshold: float

    @property
    def admissible(self) -> bool:
        """Whether the broad-source approximations may be used."""
        return min(self.omega_over_epsilon, self.omega_sigma_over_hbar) > self.threshold


def validate_regime(source: SourceParams, slits: SlitPair,
                    threshold: float = DEFAULT_BROAD_FACTOR) -> RegimeReport:
    return RegimeReport(
        omega_over_epsilon=source.omega / slits.epsilon,
        omega_sigma_over_hbar=source.omega * source.sigma / source.hbar,
        threshold=threshold,
    )

