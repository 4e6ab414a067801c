"""Scenario files.

A scenario is an INI-style file of ``key = value`` lines grouped in sections.
Comments start with ``#`` or ``;`` on their own line; ``#`` also starts an
inline comment. Keys are case sensitive
and every key must be known; unknown sections or keys are errors, as are
duplicates. Values are plain decimal or exponent floats unless noted.

::

    [source]            # required
    sigma = ...         # momentum spread (kg m/s)
    omega = ...         # pair extent (m)
    hbar = ...          # optional, default 1
    mass = ...          # optional, default 1

    [slits]             # required
    y0 = ...
    epsilon = ...

    [kinematics]        # required
    mode = distance     # or: time
    lambda_d = ...      # distance mode: de Broglie wavelength,
    L1 = ...            #   slit-to-D1 and source-to-slit distances
    L2 = ...
    t0 = ...            # time mode: flight times, optional velocity
    t = ...
    velocity = ...

    [grid]              # optional, needed by oracle-compare
    n1 = 512
    n2 = 512
    extent1 = ...
    extent2 = ...
    boundary_floor = 1e-8

    [scan]              # optional defaults for the scan command
    particle = 2
    fixed = 0           # or: marginal
    min = ...
    max = ...
    count = 2001

Command-line overrides ``section.key=value`` take precedence over the file.
"""
from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .analytic import Experiment
from .errors import ConfigError, ParameterError
from .oracle import GridSpec
from .physics import KinematicsConfig, SlitPair, SourceParams

SCHEMA = {
    "source": {"sigma", "omega", "hbar", "mass"},
    "slits": {"y0", "epsilon"},
    "kinematics": {"mode", "lambda_d", "L1", "L2", "t0", "t", "velocity"},
    "grid": {"n1", "n2", "extent1", "extent2", "boundary_floor"},
    "scan": {"particle", "fixed", "min", "max", "count"},
}
REQUIRED_SECTIONS = ("source", "slits", "kinematics")
MODE_KEYS = {
    "time": ({"t0", "t"}, {"velocity"}),
    "distance": ({"lambda_d", "L1", "L2"}, set()),
}

_SECTION_RE = re.compile(r"^\s*\[([^\]]+)\]")
_KEY_RE = re.compile(r"^\s*([^=:#;\s][^=:]*?)\s*[=:]")


@dataclass(frozen=True)
class ScanDefaults:
    particle: int = 2
    fixed: Optional[float] = 0.0  # None means marginal
    y_min: Optional[float] = None
    y_max: Optional[float] = None
    count: int = 2001


@dataclass(frozen=True)
class Scenario:
    source: SourceParams
    slits: SlitPair
    kinematics: KinematicsConfig
    grid: Optional[GridSpec] = None
    scan: ScanDefaults = ScanDefaults()
    path: Optional[str] = None

    @property
    def experiment(self) -> Experiment:
        return Experiment(self.source, self.slits, self.kinematics)


def _line_index(text: str) -> dict:
    """Map (section, key) and (section, None) to 1-based line numbers."""
    index = {}
    section = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped[0] in "#;":
            continue
        m = _SECTION_RE.match(line)
        if m:
            section = m.group(1).strip()
            index.setdefault((section, None), lineno)
            continue
        m = _KEY_RE.match(line)
        if m and section is not None:
            index.setdefault((section, m.group(1)), lineno)
    return index


class _Reader:
    def __init__(self, values: dict, lines: dict, path):
        self.values = values
        self.lines = lines
        self.path = path

    def where(self, section, key=None):
        return self.lines.get((section, key), self.lines.get((section, None)))

    def error(self, message, section, key=None):
        return ConfigError(message, self.path, self.where(section, key))

    def has(self, section, key):
        return key in self.values.get(section, {})

    def raw(self, section, key):
        try:
            return self.values[section][key]
        except KeyError:
            raise self.error(f"missing key '{key}' in [{section}]", section) from None

    def number(self, section, key, default=None):
        if not self.has(section, key):
            if default is not None:
                return default
            raise self.error(f"missing key '{key}' in [{section}]", section)
        text = self.values[section][key]
        try:
            v = float(text)
        except ValueError:
            raise self.error(f"{section}.{key}: not a number: {text!r}", section, key) from None
        if not math.isfinite(v):
            raise self.error(f"{section}.{key}: must be finite", section, key)
        return v

    def integer(self, section, key, default=None):
        v = self.number(section, key, default)
        if v != int(v):
            raise self.error(f"{section}.{key}: must be an integer", section, key)
        return int(v)


def parse_override(item: str) -> tuple[str, str, str]:
    """Split ``section.key=value``."""
    target, sep, value = item.partition("=")
    section, dot, key = target.strip().partition(".")
    if not sep or not dot or not section or not key.strip():
        raise ConfigError(f"override {item!r} is not of the form section.key=value")
    return section, key.strip(), value.strip()


def _check_schema(values: dict, r: _Reader) -> None:
    for section, keys in values.items():
        if section not in SCHEMA:
            raise r.error(f"unknown section [{section}]", section)
        for key in keys:
            if key not in SCHEMA[section]:
                raise r.error(f"unknown key '{key}' in [{section}]", section, key)
    for section in REQUIRED_SECTIONS:
        if section not in values:
            raise ConfigError(f"missing section [{section}]", r.path)


def _build(values: dict, r: _Reader) -> Scenario:
    _check_schema(values, r)

    def validated(section, build):
        try:
            return build()
        except ParameterError as exc:
            key = exc.field if r.has(section, exc.field) else None
            raise r.error(str(exc), section, key) from None

    source = validated("source", lambda: SourceParams(
        r.number("source", "sigma"), r.number("source", "omega"),
        r.number("source", "hbar", 1.0), r.number("source", "mass", 1.0)))
    slits = validated("slits", lambda: SlitPair(r.number("slits", "y0"), r.number("slits", "epsilon")))

    mode = r.raw("kinematics", "mode").strip().lower()
    if mode not in MODE_KEYS:
        raise r.error(f"kinematics.mode must be 'time' or 'distance', got {mode!r}", "kinematics", "mode")
    required, optional = MODE_KEYS[mode]
    for key in values["kinematics"]:
        if key != "mode" and key not in required | optional:
            raise r.error(f"key '{key}' does not apply to {mode} mode", "kinematics", key)
    if mode == "time":
        velocity = r.number("kinematics", "velocity") if r.has("kinematics", "velocity") else None
        kin = validated("kinematics", lambda: KinematicsConfig.time_domain(
            r.number("kinematics", "t0"), r.number("kinematics", "t"), velocity))
    else:
        kin = validated("kinematics", lambda: KinematicsConfig.distance_domain(
            r.number("kinematics", "lambda_d"), r.number("kinematics", "L1"), r.number("kinematics", "L2")))

    grid = None
    if "grid" in values:
        grid = validated("grid", lambda: GridSpec(
            r.integer("grid", "n1"), r.integer("grid", "n2"),
            r.number("grid", "extent1"), r.number("grid", "extent2"),
            r.number("grid", "boundary_floor", 1e-8)))

    scan = ScanDefaults()
    if "scan" in values:
        particle = r.integer("scan", "particle", 2)
        if particle not in (1, 2):
            raise r.error("scan.particle must be 1 or 2", "scan", "particle")
        fixed: Optional[float] = 0.0
        if r.has("scan", "fixed"):
            if r.raw("scan", "fixed").strip().lower() == "marginal":
                fixed = None
            else:
                fixed = r.number("scan", "fixed")
        lo = r.number("scan", "min") if r.has("scan", "min") else None
        hi = r.number("scan", "max") if r.has("scan", "max") else None
        scan = ScanDefaults(particle, fixed, lo, hi, r.integer("scan", "count", 2001))

    return Scenario(source, slits, kin, grid, scan, None if r.path is None else str(r.path))


def parse_text(text: str, path=None, overrides: Iterable[str] = ()) -> Scenario:
    cp = configparser.ConfigParser(interpolation=None, strict=True,
                                   comment_prefixes=("#", ";"), inline_comment_prefixes=("#",),
                                   default_section="\0none")
    cp.optionxform = str
    try:
        cp.read_string(text, source=str(path) if path else "<string>")
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError("expected a [section] header", path, exc.lineno) from None
    except (configparser.DuplicateSectionError, configparser.DuplicateOptionError) as exc:
        raise ConfigError(exc.message.split(": ", 1)[-1], path, exc.lineno) from None
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else None
        raise ConfigError("cannot parse line", path, lineno) from None

    values = {s: dict(cp[s]) for s in cp.sections()}
    lines = _line_index(text)
    for item in overrides:
        section, key, value = parse_override(item)
        values.setdefault(section, {})[key] = value
        lines[(section, key)] = None
    return _build(values, _Reader(values, lines, path))


def load_scenario(path, overrides: Iterable[str] = ()) -> Scenario:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read scenario: {exc.strerror}", path) from None
    return parse_text(text, p, overrides)


def bundled_path(name: str) -> Path:
    """Path of a scenario shipped with the package (``fig2``, ``benchmark``, ``signature``)."""
    p = Path(__file__).parent / "data" / (name if name.endswith(".cfg") else name + ".cfg")
    if not p.is_file():
        raise ConfigError(f"no bundled scenario named {name!r}")
    return p
