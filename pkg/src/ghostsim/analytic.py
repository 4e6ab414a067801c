"""Closed-form Gaussian treatment of the two-particle slit experiment.

The source amplitude is

    Psi(y1, y2) = N exp(-(y1 - y2)^2 / a) exp(-(y1 + y2)^2 / b)

with ``a = hbar^2/sigma^2`` and ``b = 4 Omega^2`` at emission. In the
normal coordinates ``y1 -+ y2`` the free Hamiltonian separates with mass
``m/2`` each, so both squared widths grow by ``4i hbar t / m``.

Projecting particle 1 onto the two slit modes leaves particle 2 in a pair of
Gaussian packets (the virtual slits); afterwards every factor is a
:class:`~ghostsim.gaussian.ComplexGaussian` evolving independently.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Union

import numpy as np

from .errors import ParameterError, SingularConfigurationError
from .gaussian import ComplexGaussian
from .physics import (
    DEFAULT_BROAD_FACTOR,
    KinematicsConfig,
    Mode,
    SlitPair,
    SourceParams,
    validate_regime,
)

# below this the cross term of the branch norm is dropped
CROSS_NORM_CUTOFF = 1e-12
SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class SourceState:
    """Entangled pair amplitude, possibly after free evolution."""

    params: SourceParams
    t_elapsed: float
    rel_sq_width: complex
    cm_sq_width: complex
    amplitude: complex

    def __call__(self, y1, y2):
        y1 = np.asarray(y1)
        y2 = np.asarray(y2)
        u = y1 - y2
        v = y1 + y2
        return self.amplitude * np.exp(-u * u / self.rel_sq_width - v * v / self.cm_sq_width)

    def norm_sq(self) -> float:
        # dy1 dy2 = du dv / 2
        pa = (1.0 / self.rel_sq_width).real
        pb = (1.0 / self.cm_sq_width).real
        return abs(self.amplitude) ** 2 * 0.5 * math.pi / (2.0 * math.sqrt(pa * pb))

    @property
    def hbar(self) -> float:
        return self.params.hbar

    @property
    def mass(self) -> float:
        return self.params.mass


def make_source_state(p: SourceParams) -> SourceState:
    """Emitted pair state, normalized to one."""
    a = p.rel_length**2
    b = 4.0 * p.omega**2
    # int exp(-2u^2/a) exp(-2v^2/b) du dv / 2 = pi sqrt(ab) / 4
    amp = math.sqrt(4.0 / (math.pi * math.sqrt(a * b)))
    return SourceState(p, 0.0, complex(a), complex(b), complex(amp))


def uncertainties(p: SourceParams) -> dict:
    """Position and momentum spread of either particle in the emitted state.

    ``dp = sqrt(sigma^2 + hbar^2/4 Omega^2)`` is the standard deviation of
    either momentum. ``dy = sqrt(Omega^2 + hbar^2/4 sigma^2)`` is the
    customary width measure, which is twice the standard deviation of either
    position; both standard deviations are also returned (``y_std``,
    ``p_std``).
    """
    dp = math.sqrt(p.sigma**2 + p.hbar**2 / (4.0 * p.omega**2))
    dy = math.sqrt(p.omega**2 + p.hbar**2 / (4.0 * p.sigma**2))
    return {"dy": dy, "dp": dp, "y_std": 0.5 * dy, "p_std": dp}


def evolve_source(s: SourceState, tau: float) -> SourceState:
    if tau < 0:
        raise ParameterError("tau", tau, "must be non-negative")
    if tau == 0:
        return s
    shift = 4j * s.params.hbar * tau / s.params.mass
    a = s.rel_sq_width + shift
    b = s.cm_sq_width + shift
    amp = s.amplitude * cmath.sqrt(s.rel_sq_width / a) * cmath.sqrt(s.cm_sq_width / b)
    return SourceState(s.params, s.t_elapsed + tau, a, b, amp)


@dataclass(frozen=True)
class BranchedState:
    """Pair state just after (or some time after) particle 1 clears the slits.

    ``Psi = (phi_a(y1) psi_a(y2) + phi_b(y1) psi_b(y2)) / norm_c``. The slit
    modes ``phi`` are normalized; ``psi`` are the raw overlaps <phi|Psi>.
    ``y0_prime`` and ``gamma_sq`` describe the virtual slits at the moment of
    projection; ``y0_prime`` is complex once ``t0 > 0`` (the packets carry a
    mean momentum).
    """

    branch_a: tuple[ComplexGaussian, ComplexGaussian]
    branch_b: tuple[ComplexGaussian, ComplexGaussian]
    norm_c: float
    y0_prime: complex
    gamma_sq: complex
    params: SourceParams
    t_elapsed: float = 0.0

    def __call__(self, y1, y2):
        (pa, qa), (pb, qb) = self.branch_a, self.branch_b
        return (pa(y1) * qa(y2) + pb(y1) * qb(y2)) / self.norm_c

    def terms(self, y1, y2):
        """The two envelope terms and the interference term of ``|Psi|^2``."""
        (pa, qa), (pb, qb) = self.branch_a, self.branch_b
        amp_a = pa(y1) * qa(y2) / self.norm_c
        amp_b = pb(y1) * qb(y2) / self.norm_c
        return np.abs(amp_a) ** 2, np.abs(amp_b) ** 2, 2.0 * np.real(np.conj(amp_a) * amp_b)

    def norm_sq(self) -> float:
        return _branch_norm_sq(self.branch_a, self.branch_b) / self.norm_c**2

    @property
    def hbar(self) -> float:
        return self.params.hbar

    @property
    def mass(self) -> float:
        return self.params.mass

    def fringe_wavenumbers(self) -> tuple[float, float]:
        """Exact phase slopes of the interference term along y1 and y2."""
        def slope(g):
            return -4.0 * (g.center / g.sq_width).imag
        return slope(self.branch_a[0]), slope(self.branch_a[1])


def _branch_norm_sq(branch_a, branch_b) -> float:
    (pa, qa), (pb, qb) = branch_a, branch_b
    total = pa.norm_sq() * qa.norm_sq() + pb.norm_sq() * qb.norm_sq()
    cross = pa.overlap(pb) * qa.overlap(qb)
    if abs(cross) > CROSS_NORM_CUTOFF:
        total += 2.0 * cross.real
    return total


def project_slits(s: SourceState, sl: SlitPair) -> BranchedState:
    """Keep the part of ``s`` in which particle 1 passes a slit, renormalized."""
    p = s.params
    if abs(p.entanglement_parameter() - 1.0) < SINGULAR_TOL:
        raise SingularConfigurationError(
            "4 Omega^2 sigma^2 / hbar^2 = 1: the source is a product state and the "
            "virtual-slit position is undefined"
        )
    a, b = s.rel_sq_width, s.cm_sq_width
    eps2 = sl.epsilon**2
    y0 = sl.y0
    # exponent of Psi: -(alpha y1^2 + 2 beta y1 y2 + alpha y2^2)
    alpha = 1.0 / a + 1.0 / b
    beta = 1.0 / b - 1.0 / a
    big_a = alpha + 1.0 / eps2
    denom = a + b + 4.0 * eps2
    gamma_sq = (a * b + eps2 * (a + b)) / denom
    y0p = y0 * (b - a) / denom

    phi_a = ComplexGaussian.slit_mode(y0, sl.epsilon)
    phi_b = ComplexGaussian.slit_mode(-y0, sl.epsilon)
    k = y0 * y0 / (eps2 * eps2 * big_a) - y0 * y0 / eps2
    amp = (s.amplitude * phi_a.amplitude * cmath.sqrt(math.pi / big_a)
           * cmath.exp(k + y0p * y0p / gamma_sq))
    psi_a = ComplexGaussian(y0p, gamma_sq, amp)
    psi_b = ComplexGaussian(-y0p, gamma_sq, amp)

    branch_a, branch_b = (phi_a, psi_a), (phi_b, psi_b)
    norm_c = math.sqrt(_branch_norm_sq(branch_a, branch_b))
    return BranchedState(branch_a, branch_b, norm_c, y0p, gamma_sq, p, 0.0)


def virtual_slit_params(s: SourceState, sl: SlitPair) -> tuple[complex, complex]:
    """Half-separation ``y0'`` and squared width ``Gamma^2`` of the virtual slits."""
    b = project_slits(s, sl)
    return b.y0_prime, b.gamma_sq


def which_way_overlap(b: BranchedState) -> complex:
    """Normalized <psi_A|psi_B>; zero means complete which-way information."""
    qa, qb = b.branch_a[1], b.branch_b[1]
    return qa.overlap(qb) / math.sqrt(qa.norm_sq() * qb.norm_sq())


def evolve_branches(b: BranchedState, tau: float) -> BranchedState:
    if tau < 0:
        raise ParameterError("tau", tau, "must be non-negative")
    spread = b.params.hbar * tau / b.params.mass
    branch_a = tuple(g.evolved(spread) for g in b.branch_a)
    branch_b = tuple(g.evolved(spread) for g in b.branch_b)
    return BranchedState(branch_a, branch_b, b.norm_c, b.y0_prime, b.gamma_sq,
                         b.params, b.t_elapsed + tau)


@dataclass(frozen=True)
class GammaApprox:
    value: complex
    admissible: bool

    @property
    def gamma_sq(self) -> float:
        return self.value.real


def gamma_approx(sl: Union[SlitPair, float], p: SourceParams, spread0: float = 0.0,
                 threshold: float = DEFAULT_BROAD_FACTOR) -> GammaApprox:
    """Broad-source virtual-slit width ``gamma^2 + 4i hbar t0 / m``.

    ``sl`` may be a bare slit width. ``spread0`` is ``hbar t0 / m``.
    """
    eps = sl.epsilon if isinstance(sl, SlitPair) else float(sl)
    g2 = eps**2 + p.rel_length**2
    admissible = p.omega > threshold * max(eps, p.rel_length)
    return GammaApprox(complex(g2, 4.0 * spread0), admissible)


def joint_density_time(b: BranchedState, y1, y2):
    """Coincidence density ``|Psi(y1, y2)|^2`` of an evolved branched state."""
    return np.abs(b(y1, y2)) ** 2


@dataclass(frozen=True)
class FringeParams:
    theta1: float
    theta2: float
    w1: float
    w2: float
    gamma_sq_used: complex
    young_w1: float
    young_w2: float

    @property
    def young_deviation(self) -> tuple[float, float]:
        """Relative excess of w1, w2 over their Young-formula limits."""
        return self.w1 / self.young_w1 - 1.0, self.w2 / self.young_w2 - 1.0


@dataclass(frozen=True)
class Experiment:
    """Source, slits and propagation bundled together."""

    source: SourceParams
    slits: SlitPair
    kinematics: KinematicsConfig

    @cached_property
    def spreads(self) -> tuple[float, float]:
        return self.kinematics.spreads(self.source.hbar, self.source.mass)

    @cached_property
    def at_slits(self) -> BranchedState:
        spread0 = self.spreads[0]
        s = make_source_state(self.source)
        s = evolve_source(s, spread0 * self.source.mass / self.source.hbar)
        return project_slits(s, self.slits)

    @cached_property
    def branched(self) -> BranchedState:
        """State when both particles reach their detectors."""
        return evolve_branches(self.at_slits, self.spreads[1] * self.source.mass / self.source.hbar)

    def density(self, y1, y2):
        return joint_density_time(self.branched, y1, y2)

    def terms(self, y1, y2):
        return self.branched.terms(y1, y2)

    def fringe_params(self) -> FringeParams:
        return fringe_params(self.kinematics, self.source, self.slits)

    def regime(self):
        return validate_regime(self.source, self.slits)

    def time_domain(self) -> "Experiment":
        k = self.kinematics.to_time(self.source.hbar, self.source.mass)
        return Experiment(self.source, self.slits, k)


def joint_density_distance(k: KinematicsConfig, s: SourceParams, sl: SlitPair, y1, y2):
    """Coincidence density with propagation given as distances."""
    if k.mode is not Mode.DISTANCE:
        raise ParameterError("mode", k.mode, "distance-mode kinematics required")
    return Experiment(s, sl, k.to_time(s.hbar, s.mass)).density(y1, y2)


def fringe_params(k: KinematicsConfig, s: SourceParams, sl: SlitPair) -> FringeParams:
    """Fringe wavenumbers and widths in the broad-source approximation."""
    spread0, spread = k.spreads(s.hbar, s.mass)
    total = spread + 2.0 * spread0
    eps2 = sl.epsilon**2
    g = gamma_approx(sl, s, spread0)
    g2 = g.gamma_sq
    theta1 = 8.0 * sl.y0 * spread / (eps2**2 + 4.0 * spread**2)
    theta2 = 8.0 * sl.y0 * total / (g2**2 + 4.0 * total**2)
    return FringeParams(
        theta1=theta1,
        theta2=theta2,
        w1=2.0 * math.pi / theta1,
        w2=2.0 * math.pi / theta2,
        gamma_sq_used=g.value,
        young_w1=math.pi * spread / sl.y0,
        young_w2=math.pi * total / sl.y0,
    )


def approx_joint_density(exp: Experiment, y1, y2, fringe: Optional[FringeParams] = None):
    """Broad-source closed form with ``y0' = y0`` and ``Gamma^2 = gamma^2 + 4i hbar t0/m``.

    Normalized as if the two branches were orthogonal. ``fringe`` overrides
    the wavenumbers of the cosine term, which is useful for sensitivity tests.
    """
    fp = fringe if fringe is not None else exp.fringe_params()
    spread0, spread = exp.spreads
    total = spread + 2.0 * spread0
    y0 = exp.slits.y0
    eps2 = exp.slits.epsilon**2
    g2 = fp.gamma_sq_used.real
    s1 = eps2 + (2.0 * spread) ** 2 / eps2
    s2 = g2 + (2.0 * total) ** 2 / g2
    pref = (2.0 / math.pi) / math.sqrt(s1 * s2) / 2.0
    y1 = np.asarray(y1)
    y2 = np.asarray(y2)
    env_a = np.exp(-2 * (y1 - y0) ** 2 / s1 - 2 * (y2 - y0) ** 2 / s2)
    env_b = np.exp(-2 * (y1 + y0) ** 2 / s1 - 2 * (y2 + y0) ** 2 / s2)
    cross = np.exp(-2 * (y1**2 + y0**2) / s1 - 2 * (y2**2 + y0**2) / s2)
    return pref * (env_a + env_b + 2.0 * cross * np.cos(fp.theta1 * y1 + fp.theta2 * y2))
