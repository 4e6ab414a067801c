"""One-dimensional Gaussian packets with complex squared width.

A packet is ``amplitude * exp(-(y - center)**2 / sq_width)``. ``sq_width`` is
stored directly (never its square root) and may be complex; so may
``center``, which is how a packet carrying a mean momentum is represented.
Free evolution only shifts ``sq_width`` by ``2i hbar tau / m``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

_QUARTER_ROOT = (2.0 / math.pi) ** 0.25


def gaussian_integral(a, b, c=0.0):
    """Integral of ``exp(-a y^2 + b y + c)`` over the real line.

    Requires ``Re(a) > 0``; uses the principal square root.
    """
    return cmath.sqrt(math.pi / a) * cmath.exp(b * b / (4.0 * a) + c)


@dataclass(frozen=True)
class ComplexGaussian:
    center: complex
    sq_width: complex
    amplitude: complex = 1.0

    def __post_init__(self):
        w = complex(self.sq_width)
        if not (cmath.isfinite(w) and w.real > 0):
            raise ParameterError("sq_width", self.sq_width, "real part must be positive")
        object.__setattr__(self, "sq_width", w)
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "amplitude", complex(self.amplitude))

    @classmethod
    def normalized(cls, center, sq_width) -> "ComplexGaussian":
        g = cls(center, sq_width, 1.0)
        return cls(center, sq_width, 1.0 / math.sqrt(g.norm_sq()))

    @classmethod
    def slit_mode(cls, center: float, epsilon: float) -> "ComplexGaussian":
        """Real slit mode ``(2/pi)^(1/4) eps^(-1/2) exp(-(y-c)^2/eps^2)``."""
        return cls(center, epsilon**2, _QUARTER_ROOT / math.sqrt(epsilon))

    def __call__(self, y):
        y = np.asarray(y)
        return self.amplitude * np.exp(-((y - self.center) ** 2) / self.sq_width)

    def overlap(self, other: "ComplexGaussian") -> complex:
        """<self|other> in closed form."""
        w1 = self.sq_width.conjugate()
        m1 = self.center.conjugate()
        w2, m2 = other.sq_width, other.center
        a = 1.0 / w1 + 1.0 / w2
        b = 2.0 * m1 / w1 + 2.0 * m2 / w2
        c = -(m1 * m1) / w1 - (m2 * m2) / w2
        return self.amplitude.conjugate() * other.amplitude * gaussian_integral(a, b, c)

    def norm_sq(self) -> float:
        # |exp(-(y-mu)^2/w)|^2 integrates to sqrt(pi/2p) exp(2 mu_i^2 / Re w), p = Re(1/w)
        p = (1.0 / self.sq_width).real
        mi = self.center.imag
        return abs(self.amplitude) ** 2 * math.sqrt(math.pi / (2.0 * p)) * math.exp(2.0 * mi * mi / self.sq_width.real)

    def peak(self) -> float:
        """Center of ``|g|^2``."""
        inv = 1.0 / self.sq_width
        return self.center.real - self.center.imag * inv.imag / inv.real

    def intensity_width(self) -> float:
        """1/e^2 half-width of ``|g|^2``, i.e. ``1/sqrt(Re(1/w))``."""
        return 1.0 / math.sqrt((1.0 / self.sq_width).real)

    def evolved(self, spread: float) -> "ComplexGaussian":
        """Free evolution for ``spread = hbar tau / m`` (m^2)."""
        if spread < 0:
            raise ParameterError("tau", spread, "must be non-negative")
        if spread == 0:
            return self
        w = self.sq_width + 2j * spread
        return ComplexGaussian(self.center, w, self.amplitude * cmath.sqrt(self.sq_width / w))

    def scaled(self, factor: complex) -> "ComplexGaussian":
        return ComplexGaussian(self.center, self.sq_width, self.amplitude * factor)

    def mirrored(self) -> "ComplexGaussian":
        return ComplexGaussian(-self.center, self.sq_width, self.amplitude)
