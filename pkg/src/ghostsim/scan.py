"""Simulated detector scans: coincidence slices, marginals, erasure."""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import quad_vec, trapezoid

from .analytic import Experiment
from .errors import ConfigError, FitUnavailableError, ParameterError, QuadratureError
from .fringes import FringeFit, fit_profile, visibility

CSV_MAGIC = "# ghostsim v1"
CSV_HEADER = "position_m,density"
QUAD_RTOL = 1e-8
MIN_SCAN_POINTS = 64


class Particle(enum.Enum):
    P1 = 1
    P2 = 2

    @classmethod
    def parse(cls, value) -> "Particle":
        if isinstance(value, cls):
            return value
        text = str(value).strip().upper().lstrip("P")
        try:
            return cls(int(text))
        except ValueError:
            raise ParameterError("particle", value, "must be 1 or 2") from None


@dataclass(frozen=True)
class ScanRequest:
    particle: Particle
    fixed: Optional[float]  # None -> marginal scan
    y_min: float
    y_max: float
    count: int
    experiment: Experiment

    def __post_init__(self):
        object.__setattr__(self, "particle", Particle.parse(self.particle))
        if self.count < MIN_SCAN_POINTS:
            raise ParameterError("count", self.count, f"must be at least {MIN_SCAN_POINTS}")
        if not self.y_min < self.y_max:
            raise ParameterError("range", (self.y_min, self.y_max), "min must be below max")

    def positions(self) -> np.ndarray:
        return np.linspace(self.y_min, self.y_max, self.count)


@dataclass
class ScanResult:
    """Sampled detector scan.

    ``densities`` are coincidence densities (1/m^2) for conditional scans
    and single-particle densities (1/m) for marginal ones; they are left as
    computed. ``normalization`` is their trapezoidal integral over the scan.
    """

    particle: Optional[Particle]  # None when loaded from CSV
    fixed: Optional[float]
    positions: np.ndarray
    densities: np.ndarray
    config_snapshot: dict = field(default_factory=dict)

    @property
    def normalization(self) -> float:
        return float(trapezoid(self.densities, self.positions))

    @property
    def is_marginal(self) -> bool:
        return self.fixed is None

    def normalized(self) -> np.ndarray:
        """Densities rescaled to unit area over the scan window."""
        return self.densities / self.normalization


def experiment_snapshot(exp: Experiment) -> dict:
    kin = asdict(exp.kinematics)
    kin["mode"] = exp.kinematics.mode.value
    return {"source": asdict(exp.source), "slits": asdict(exp.slits), "kinematics": kin}


def _quad_window(packets) -> tuple[float, float, list]:
    centers = [g.peak() for g in packets]
    reach = 8.0 * max(g.intensity_width() for g in packets)
    return min(centers) - reach, max(centers) + reach, sorted(centers)


def marginal_density(exp: Experiment, particle: Particle, positions) -> np.ndarray:
    """Single-detector density, integrating out the partner adaptively."""
    particle = Particle.parse(particle)
    positions = np.asarray(positions, dtype=float)
    b = exp.branched
    other = 1 if particle is Particle.P1 else 0
    lo, hi, centers = _quad_window([b.branch_a[other], b.branch_b[other]])
    pts = [c for c in centers if lo < c < hi]

    if particle is Particle.P1:
        def f(y):
            return exp.density(positions, y)
    else:
        def f(y):
            return exp.density(y, positions)

    res, err, info = quad_vec(f, lo, hi, epsrel=QUAD_RTOL, epsabs=0.0, norm="max",
                              points=pts or None, full_output=True, limit=20000)
    if not info.success:
        raise QuadratureError(
            f"marginal quadrature over [{lo:.6g}, {hi:.6g}] m did not reach rtol={QUAD_RTOL}"
        )
    return np.maximum(res, 0.0)


marginal_pattern = marginal_density


def run_scan(r: ScanRequest) -> ScanResult:
    y = r.positions()
    exp = r.experiment
    if r.fixed is None:
        dens = marginal_density(exp, r.particle, y)
    elif r.particle is Particle.P2:
        dens = exp.density(r.fixed, y)
    else:
        dens = exp.density(y, r.fixed)
    snap = experiment_snapshot(exp)
    snap["scan"] = {"particle": r.particle.value, "fixed": r.fixed,
                    "min": r.y_min, "max": r.y_max, "count": r.count}
    return ScanResult(r.particle, r.fixed, y, np.asarray(dens, dtype=float), snap)


def fit_fringes(s: ScanResult, **kwargs) -> FringeFit:
    return fit_profile(s.positions, s.densities, **kwargs)


def particle1_scan(exp: Experiment, y2: float, y_min: float, y_max: float,
                   count: int = 2001) -> tuple[ScanResult, FringeFit]:
    """D1 scanned in coincidence with D2 held at ``y2``."""
    res = run_scan(ScanRequest(Particle.P1, y2, y_min, y_max, count, exp))
    return res, fit_fringes(res)


@dataclass
class ErasureReport:
    y1_grid: np.ndarray
    visibilities: np.ndarray
    centers: np.ndarray
    summed: ScanResult
    summed_visibility: float
    slope: float
    predicted_slope: float
    weighting: str


def erasure_report(exp: Experiment, y1_grid: Sequence[float], y2_range: tuple,
                   weighting: str = "uniform", check_sampling: bool = True) -> ErasureReport:
    """Conditional D2 scans at every D1 position, and their sum.

    ``weighting="uniform"`` adds the conditional patterns with equal weight;
    ``"marginal"`` weights each by the particle-1 marginal density, which is
    the singles pattern D2 would record with D1 removed.
    """
    y1 = np.asarray(y1_grid, dtype=float)
    fp = exp.fringe_params()
    if check_sampling:
        if len(y1) < 32:
            raise ParameterError("y1_grid", len(y1), "needs at least 32 points")
        span = float(y1.max() - y1.min())
        if span < 3.0 * fp.w1:
            raise ParameterError("y1_grid", span, f"must span at least 3 fringe widths ({3 * fp.w1:.6g} m)")
    if weighting not in ("uniform", "marginal"):
        raise ParameterError("weighting", weighting, "must be 'uniform' or 'marginal'")

    y2 = np.linspace(*y2_range[:2], int(y2_range[2]))
    rows = exp.density(y1[:, None], y2[None, :])
    vis = np.empty(len(y1))
    centers = np.full(len(y1), np.nan)
    widths = np.full(len(y1), np.nan)
    for i, row in enumerate(rows):
        try:
            fit = fit_profile(y2, row)
        except FitUnavailableError:
            vis[i] = visibility(y2, row)
            continue
        vis[i] = fit.visibility
        centers[i] = fit.center_offset
        widths[i] = fit.fringe_width

    if weighting == "uniform":
        weights = np.ones(len(y1))
    else:
        weights = marginal_density(exp, Particle.P1, y1)
    summed = weights @ rows / weights.sum()
    snap = experiment_snapshot(exp)
    snap["erasure"] = {"weighting": weighting, "y1_min": float(y1.min()),
                       "y1_max": float(y1.max()), "y1_count": len(y1)}
    summed_scan = ScanResult(Particle.P2, None, y2, summed, snap)

    ok = np.isfinite(centers)
    slope = float("nan")
    if ok.sum() >= 2:
        w = float(np.nanmedian(widths))
        phase = np.unwrap(2.0 * np.pi * centers[ok] / w)
        slope = float(np.polyfit(y1[ok], phase * w / (2.0 * np.pi), 1)[0])
    return ErasureReport(y1, vis, centers, summed_scan, visibility(y2, summed), slope,
                         -fp.theta1 / fp.theta2, weighting)


def format_float(x: float) -> str:
    return repr(float(x))


def write_csv(s: ScanResult, path) -> None:
    """Write the scan to ``path`` (a filename or an open text stream)."""
    lines = [CSV_MAGIC, CSV_HEADER]
    lines += [f"{format_float(y)},{format_float(d)}" for y, d in zip(s.positions, s.densities)]
    text = "\n".join(lines) + "\n"
    if hasattr(path, "write"):
        path.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def read_csv(path) -> ScanResult:
    """Parse a scan CSV; metadata other than the samples is not recovered."""
    ys, ds = [], []
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    if not lines or lines[0].strip() != CSV_MAGIC:
        raise ConfigError(f"first line must be '{CSV_MAGIC}'", path, 1)
    if len(lines) < 2 or lines[1].strip() != CSV_HEADER:
        raise ConfigError(f"second line must be '{CSV_HEADER}'", path, 2)
    for lineno, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ConfigError("expected two comma-separated values", path, lineno)
        try:
            y, d = float(parts[0]), float(parts[1])
        except ValueError:
            raise ConfigError(f"not a number: {line!r}", path, lineno) from None
        if not (math.isfinite(y) and math.isfinite(d)) or d < 0:
            raise ConfigError(f"invalid sample: {line!r}", path, lineno)
        ys.append(y)
        ds.append(d)
    if len(ys) < 3:
        raise ConfigError("too few samples", path)
    ys = np.array(ys)
    steps = np.diff(ys)
    if np.any(steps <= 0):
        raise ConfigError("positions must be strictly increasing", path)
    if np.max(np.abs(steps - steps.mean())) > 1e-6 * abs(steps.mean()):
        raise ConfigError("positions must be uniformly spaced", path)
    return ScanResult(None, None, ys, np.array(ds), {"source_file": str(path)})
