import cmath
import math

import numpy as np
import pytest
from scipy.integrate import quad

from ghostsim.errors import ParameterError
from ghostsim.gaussian import ComplexGaussian, gaussian_integral


def cquad(f, lo, hi):
    re = quad(lambda y: f(y).real, lo, hi, epsabs=0, epsrel=1e-12, limit=400)[0]
    im = quad(lambda y: f(y).imag, lo, hi, epsabs=0, epsrel=1e-12, limit=400)[0]
    return complex(re, im)


def test_gaussian_integral_against_quadrature():
    a, b, c = 0.7 + 0.3j, 0.4 - 1.1j, 0.2j
    num = cquad(lambda y: cmath.exp(-a * y * y + b * y + c), -40, 40)
    assert abs(gaussian_integral(a, b, c) - num) < 1e-10 * abs(num)


def test_rejects_unnormalizable_width():
    with pytest.raises(ParameterError):
        ComplexGaussian(0.0, -1.0 + 1j)
    with pytest.raises(ParameterError):
        ComplexGaussian(0.0, 0.0)


@pytest.mark.parametrize("center,w", [(0.0, 1.0), (0.3 - 0.2j, 0.5 + 2j), (-2.0, 0.01 + 0.3j)])
def test_normalized_has_unit_norm(center, w):
    g = ComplexGaussian.normalized(center, w)
    assert g.norm_sq() == pytest.approx(1.0, abs=1e-10)
    num = quad(lambda y: abs(g(y)) ** 2, -60, 60, points=[g.peak()], limit=400)[0]
    assert num == pytest.approx(1.0, abs=1e-8)


def test_slit_mode_is_normalized():
    assert ComplexGaussian.slit_mode(1.0, 0.25).norm_sq() == pytest.approx(1.0, abs=1e-12)


def test_overlap_of_separated_packets_is_exp_minus_four():
    # y0' = 1, real Gamma^2 = 0.5
    a = ComplexGaussian.normalized(1.0, 0.5)
    b = a.mirrored()
    ov = a.overlap(b)
    assert abs(ov) == pytest.approx(math.exp(-4.0), rel=1e-12)
    num = cquad(lambda y: np.conj(a(y)) * b(y), -20, 20)
    assert abs(ov - num) < 1e-10


def test_overlap_of_identical_packets_is_one():
    g = ComplexGaussian.normalized(0.2 + 0.1j, 0.7 + 0.4j)
    assert g.overlap(g) == pytest.approx(1.0, abs=1e-12)


def test_overlap_decreases_with_separation():
    vals = [abs(ComplexGaussian.normalized(s, 0.5).overlap(ComplexGaussian.normalized(-s, 0.5)))
            for s in np.linspace(0, 3, 13)]
    assert all(x > y for x, y in zip(vals, vals[1:]))


def test_peak_and_width_with_complex_center():
    g = ComplexGaussian(0.4 + 0.3j, 0.8 + 0.6j)
    y = np.linspace(-10, 10, 200001)
    dens = np.abs(g(y)) ** 2
    mean = np.sum(y * dens) / np.sum(dens)
    var = np.sum((y - mean) ** 2 * dens) / np.sum(dens)
    assert mean == pytest.approx(g.peak(), abs=1e-9)
    # |g|^2 ~ exp(-2 (y - peak)^2 / W^2) has variance W^2 / 4
    assert math.sqrt(4 * var) == pytest.approx(g.intensity_width(), rel=1e-8)


def test_evolution_preserves_norm_and_composes():
    g = ComplexGaussian.normalized(0.5 - 0.1j, 0.3 + 0.1j)
    a = g.evolved(0.1).evolved(0.2)
    b = g.evolved(0.3)
    assert a.norm_sq() == pytest.approx(1.0, abs=1e-10)
    assert abs(a.sq_width - b.sq_width) < 1e-12
    assert abs(a.amplitude - b.amplitude) < 1e-12
    assert g.evolved(0.0) is g
    with pytest.raises(ParameterError):
        g.evolved(-1.0)


def test_fwhm_grows_by_sqrt2():
    eps = 0.25
    g = ComplexGaussian.slit_mode(0.0, eps)
    spread = eps**2 / 2  # 2 hbar t / (m eps^2) = 1
    assert g.evolved(spread).intensity_width() / g.intensity_width() == pytest.approx(math.sqrt(2), rel=1e-12)


def test_evolution_matches_schroedinger_numerically():
    # compare with the free propagator applied by FFT on a fine periodic grid
    g = ComplexGaussian.normalized(0.7, 0.2)
    n, L = 4096, 80.0
    y = (np.arange(n) - n / 2) * (L / n)
    k = 2 * np.pi * np.fft.fftfreq(n, L / n)
    tau = 0.4
    num = np.fft.ifft(np.fft.fft(g(y)) * np.exp(-0.5j * k**2 * tau))
    assert np.max(np.abs(num - g.evolved(tau)(y))) < 1e-10
