import math
from types import SimpleNamespace

import numpy as np
import pytest
from scipy.integrate import quad

from ghostsim import scan as scan_mod
from ghostsim.analytic import Experiment, which_way_overlap
from ghostsim.errors import ConfigError, FitUnavailableError, ParameterError, QuadratureError
from ghostsim.fringes import visibility
from ghostsim.physics import KinematicsConfig, SlitPair, SourceParams
from ghostsim.scan import (
    Particle,
    ScanRequest,
    erasure_report,
    fit_fringes,
    marginal_density,
    particle1_scan,
    read_csv,
    run_scan,
    write_csv,
)

HBAR = 1.054571817e-34
M_E = 9.1093837015e-31


def p2_scan(exp, y1, lo=-5e-3, hi=5e-3, count=2001):
    return run_scan(ScanRequest(Particle.P2, y1, lo, hi, count, exp))


def test_request_validation(fig2_exp):
    with pytest.raises(ParameterError):
        ScanRequest(2, 0.0, -1.0, 1.0, 63, fig2_exp)
    with pytest.raises(ParameterError):
        ScanRequest(2, 0.0, 1.0, 1.0, 100, fig2_exp)
    with pytest.raises(ParameterError):
        ScanRequest(3, 0.0, -1.0, 1.0, 100, fig2_exp)
    assert ScanRequest("p1", 0.0, -1.0, 1.0, 100, fig2_exp).particle is Particle.P1


def test_fig2_ghost_scan_is_even_with_central_maximum(fig2_exp):
    res = p2_scan(fig2_exp, 0.0)
    d = res.densities
    assert np.allclose(d, d[::-1], rtol=1e-12, atol=0)
    assert np.argmax(d) == 1000
    assert np.all(d >= 0)


def test_fig2_ghost_fringe_width(fig2_exp):
    fit = fit_fringes(p2_scan(fig2_exp, 0.0))
    assert fit.fringe_width == pytest.approx(1.884e-3, rel=0.01)
    assert fit.peaks_used >= 3


def test_fig2_shift(fig2_exp):
    a = fit_fringes(p2_scan(fig2_exp, 0.0))
    b = fit_fringes(p2_scan(fig2_exp, 0.2e-3))
    assert b.center_offset - a.center_offset == pytest.approx(-0.600e-3, rel=0.02)


def test_normalization_reported(fig2_exp):
    res = p2_scan(fig2_exp, 0.0)
    assert res.normalization > 0
    assert np.trapezoid(res.normalized(), res.positions) == pytest.approx(1.0)


def test_marginal_scans_have_no_fringes(fig2_exp):
    assert abs(which_way_overlap(fig2_exp.branched)) < 1e-6
    for particle in (Particle.P1, Particle.P2):
        res = run_scan(ScanRequest(particle, None, -6e-3, 6e-3, 801, fig2_exp))
        assert res.is_marginal
        assert visibility(res.positions, res.densities) < 1e-3
        with pytest.raises(FitUnavailableError):
            fit_fringes(res)


def test_marginal_matches_direct_quadrature(fig2_exp):
    ys = np.array([-2e-3, -0.3e-3, 0.0, 0.4e-3, 1.7e-3])
    got = marginal_density(fig2_exp, Particle.P1, ys)
    for y1, val in zip(ys, got):
        ref = quad(lambda y2: float(fig2_exp.density(y1, y2)), -0.05, 0.05,
                   points=[0.0], epsabs=0, epsrel=1e-10, limit=500)[0]
        assert val == pytest.approx(ref, rel=1e-7)


def test_marginal_is_sum_of_envelopes():
    exp = Experiment(SourceParams(10.0, 1e4), SlitPair(1.0, 0.25), KinematicsConfig.time_domain(0.05, 0.3))
    assert abs(which_way_overlap(exp.branched)) < 1e-6
    assert exp.slits.mode_overlap() < 1e-6
    y1 = np.linspace(-3, 3, 121)
    marg = marginal_density(exp, Particle.P1, y1)
    (pa, qa), (pb, qb) = exp.branched.branch_a, exp.branched.branch_b
    c2 = exp.branched.norm_c**2
    envelopes = (np.abs(pa(y1)) ** 2 * qa.norm_sq() + np.abs(pb(y1)) ** 2 * qb.norm_sq()) / c2
    assert np.max(np.abs(marg - envelopes)) <= 1e-6 * envelopes.max()


def test_quadrature_failure_names_window(fig2_exp, monkeypatch):
    def failing(f, a, b, **kw):
        return np.zeros(3), np.zeros(3), SimpleNamespace(success=False)
    monkeypatch.setattr(scan_mod, "quad_vec", failing)
    with pytest.raises(QuadratureError, match=r"\[.*\] m"):
        marginal_density(fig2_exp, Particle.P1, np.zeros(3))


def test_random_si_configs_fringe_width():
    rng = np.random.default_rng(7)
    for _ in range(20):
        lam = rng.uniform(100e-9, 600e-9)
        eps = rng.uniform(0.02e-3, 0.08e-3)
        exp = Experiment(
            SourceParams(HBAR / 1e-6, 0.01, HBAR, M_E),
            SlitPair(eps * rng.uniform(3, 8), eps),
            KinematicsConfig.distance_domain(lam, rng.uniform(0.5, 2.0), rng.uniform(0.2, 2.0)),
        )
        assert exp.regime().admissible
        fp = exp.fringe_params()
        half = 2.5 * exp.branched.branch_a[1].intensity_width()
        fit = fit_fringes(p2_scan(exp, 0.0, -half, half, 2001))
        assert fit.fringe_width == pytest.approx(fp.w2, rel=0.01)


@pytest.mark.parametrize("y1", [0.0, 5e-5, 1e-4, 2e-4, 3e-4])
def test_visibility_matches_cross_term(fig2_exp, y1):
    res = p2_scan(fig2_exp, y1, count=4001)
    a, b, _ = fig2_exp.terms(y1, res.positions)
    i = int(np.argmax(res.densities))
    predicted = 2 * math.sqrt(a[i] * b[i]) / (a[i] + b[i])
    assert abs(visibility(res.positions, res.densities) - predicted) < 0.02


def test_argmax_moves_linearly_for_small_steps(fig2_exp):
    y2 = np.linspace(-0.5e-3, 0.5e-3, 2001)
    dy = y2[1] - y2[0]
    fp = fig2_exp.fringe_params()
    base = y2[np.argmax(fig2_exp.density(0.0, y2))]
    for step in (0.5e-6, 1e-6, 2e-6, 3e-6):
        moved = y2[np.argmax(fig2_exp.density(step, y2))]
        assert abs((moved - base) + fp.theta1 / fp.theta2 * step) <= 0.5 * dy + 1e-15


def test_raw_argmax_carries_envelope_bias(fig2_exp):
    # away from the smallest steps the envelope pulls raw maxima ~2% toward its center,
    # which is why shifts are measured from the fringe phase
    y2 = np.linspace(-0.7e-3, 0.1e-3, 16001)
    moved = y2[np.argmax(fig2_exp.density(0.2e-3, y2))]
    ideal = -fig2_exp.fringe_params().theta1 / fig2_exp.fringe_params().theta2 * 0.2e-3
    assert moved / ideal - 1 == pytest.approx(-0.0205, abs=0.002)


def test_erasure_fig2(fig2_exp):
    w1 = fig2_exp.fringe_params().w1
    y1 = np.linspace(-1.5 * w1, 1.5 * w1, 64)
    rep = erasure_report(fig2_exp, y1, (-5e-3, 5e-3, 2001))
    assert rep.visibilities.min() > 0.9
    assert rep.summed_visibility < 0.05
    assert rep.slope == pytest.approx(-3.00, rel=0.02)
    assert rep.slope == pytest.approx(rep.predicted_slope, rel=0.01)
    weighted = erasure_report(fig2_exp, y1, (-5e-3, 5e-3, 2001), weighting="marginal")
    assert weighted.summed_visibility < 0.05


def test_erasure_single_point_is_conditional(fig2_exp):
    rep = erasure_report(fig2_exp, [0.1e-3], (-5e-3, 5e-3, 2001), check_sampling=False)
    cond = p2_scan(fig2_exp, 0.1e-3)
    assert np.allclose(rep.summed.densities, cond.densities, rtol=1e-14, atol=0)


def test_erasure_is_progressive(fig2_exp):
    w1 = fig2_exp.fringe_params().w1
    vis = []
    for span in (0.1, 0.25, 0.5, 0.75, 1.0, 2.0, 3.0):
        y1 = np.linspace(-span * w1 / 2, span * w1 / 2, 64)
        vis.append(erasure_report(fig2_exp, y1, (-5e-3, 5e-3, 2001), check_sampling=False).summed_visibility)
    assert all(b <= a for a, b in zip(vis, vis[1:]))
    assert vis[0] > 0.9 and vis[-1] < 0.05


def test_erasure_rejects_undersampled_grid(fig2_exp):
    w1 = fig2_exp.fringe_params().w1
    with pytest.raises(ParameterError):
        erasure_report(fig2_exp, np.linspace(-w1, w1, 10), (-5e-3, 5e-3, 2001))
    with pytest.raises(ParameterError):
        erasure_report(fig2_exp, np.linspace(-w1, w1, 64), (-5e-3, 5e-3, 2001))
    with pytest.raises(ParameterError):
        erasure_report(fig2_exp, np.linspace(-2 * w1, 2 * w1, 64), (-5e-3, 5e-3, 2001), weighting="odd")


def test_particle1_fringes(fig2_exp):
    fp = fig2_exp.fringe_params()
    res, fit = particle1_scan(fig2_exp, 0.0, -5e-3, 5e-3, 4001)
    assert fit.fringe_width == pytest.approx(0.628e-3, rel=0.01)
    # one particle-2 fringe moves the particle-1 pattern by exactly one fringe
    _, moved = particle1_scan(fig2_exp, fp.w2, -5e-3, 5e-3, 4001)
    assert abs(moved.center_offset - fit.center_offset) < 0.01 * fp.w1


def test_particle1_envelope_width(fig2_exp):
    eps = fig2_exp.slits.epsilon
    lam_l1 = 314e-9 * 1.0
    expected = math.sqrt(eps**2 + (lam_l1 / (math.pi * eps)) ** 2)
    assert fig2_exp.branched.branch_a[0].intensity_width() == pytest.approx(expected, rel=1e-9)


def test_csv_is_deterministic_and_round_trips(fig2_exp, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(p2_scan(fig2_exp, 0.1e-3), a)
    write_csv(p2_scan(fig2_exp, 0.1e-3), b)
    assert a.read_bytes() == b.read_bytes()
    raw = a.read_bytes()
    assert raw.startswith(b"# ghostsim v1\nposition_m,density\n") and b"\r" not in raw
    back = read_csv(a)
    orig = p2_scan(fig2_exp, 0.1e-3)
    assert np.array_equal(back.positions, orig.positions)
    assert np.array_equal(back.densities, orig.densities)


@pytest.mark.parametrize("body,line", [
    ("# other\nposition_m,density\n0,1\n", 1),
    ("# ghostsim v1\npos,dens\n0,1\n", 2),
    ("# ghostsim v1\nposition_m,density\n0,1\n1,2\nx,3\n", 5),
    ("# ghostsim v1\nposition_m,density\n0,1\n1,2,3\n", 4),
    ("# ghostsim v1\nposition_m,density\n0,1\n1,-2\n", 4),
])
def test_csv_errors_carry_line_numbers(tmp_path, body, line):
    p = tmp_path / "bad.csv"
    p.write_text(body)
    with pytest.raises(ConfigError) as info:
        read_csv(p)
    assert info.value.line == line
    assert f":{line}:" in str(info.value)


def test_csv_rejects_irregular_positions(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("# ghostsim v1\nposition_m,density\n0,1\n1,1\n3,1\n")
    with pytest.raises(ConfigError, match="uniform"):
        read_csv(p)
