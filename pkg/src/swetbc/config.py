"""Flat key=value run configuration.

One key per line, ``=`` separated, ``#`` starts a comment.  A ``preset``
key (at most one, applied first regardless of position) fills every
field from a named preset; remaining keys override field by field.
Example::

    preset = energy-study-v
    N = 500        # overrides the preset resolution; dt = 2h follows h

``dt`` accepts either a number or the literal ``2h`` (resolved against
the grid spacing when the run starts).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from .boundary import BOUNDARY_CASES
from .domain import InitialCondition, PhysicalParams, build_grid
from .errors import ConfigurationError

__all__ = ["RunConfig", "parse_config", "serialize_config"]


@dataclass(frozen=True)
class RunConfig:
    """Complete description of a single run (or of a sweep batch).

    Defaults correspond to the open-boundary energy study on the unit
    box (case v, N=400, dt=2h).
    """

    # grid and time
    L: float = 1.0
    N: int = 400
    dt: float | str = "2h"
    T: float = 100.0
    # physics
    rho: float = 1.0e12
    mu: float = 1.0e3
    g: float = 9.8e-3
    depth: float = 0.1
    c0: float = 0.9
    # initial condition
    c1: float = 1.0e-3
    width: float = 100.0
    center: tuple[float, float] = (0.5, 0.5)
    u0: tuple[float, float] = (0.0, 0.0)
    # boundary case
    case: str = "v"
    # outputs
    out: str | None = None
    snapshot_steps: tuple[int, ...] = ()
    energy_every: int = 1
    # checks and scheme options
    alpha: float = 0.01
    gravity_level: str = "new"
    extrema_include_initial: bool = False
    # sweep mode (None for single runs)
    sweep_c0: tuple[float, ...] | None = None
    sweep_cases: tuple[str, ...] | None = None

    def physical_params(self) -> PhysicalParams:
        return PhysicalParams(rho=self.rho, mu=self.mu, g=self.g, depth=self.depth, c0=self.c0)

    def initial_condition(self) -> InitialCondition:
        return InitialCondition(amplitude=self.c1, center=self.center, width=self.width, u0=self.u0)

    def resolve_dt(self, grid) -> float:
        if isinstance(self.dt, str):
            if self.dt.strip().lower() != "2h":
                raise ConfigurationError(f"dt must be a number or '2h', got {self.dt!r} (key 'dt')")
            return 2.0 * grid.h
        return float(self.dt)

    @property
    def is_sweep(self) -> bool:
        return self.sweep_c0 is not None and self.sweep_cases is not None

    def validate(self) -> "RunConfig":
        """Check every cross-field constraint; returns self for chaining."""
        build_grid(self.L, self.N)
        self.physical_params()
        if isinstance(self.dt, str):
            if self.dt.strip().lower() != "2h":
                raise ConfigurationError(f"dt must be a number or '2h', got {self.dt!r} (key 'dt')")
        elif not (self.dt > 0 and math.isfinite(self.dt)):
            raise ConfigurationError(f"dt must be positive, got {self.dt!r} (key 'dt')")
        if not (self.T >= 0 and math.isfinite(self.T)):
            raise ConfigurationError(f"T must be >= 0, got {self.T!r} (key 'T')")
        if self.case not in BOUNDARY_CASES:
            raise ConfigurationError(f"unknown boundary case {self.case!r} (key 'case')")
        if not self.c1 >= 0:
            raise ConfigurationError(f"c1 must be >= 0, got {self.c1!r} (key 'c1')")
        if not (self.width > 0 and math.isfinite(self.width)):
            raise ConfigurationError(f"width must be positive, got {self.width!r} (key 'width')")
        if self.energy_every < 0:
            raise ConfigurationError(f"energy_every must be >= 0, got {self.energy_every} (key 'energy_every')")
        if any(s < 0 for s in self.snapshot_steps):
            raise ConfigurationError("snapshot_steps must be >= 0 (key 'snapshot_steps')")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigurationError(f"alpha must lie in (0, 1), got {self.alpha!r} (key 'alpha')")
        if self.gravity_level not in ("new", "old"):
            raise ConfigurationError(
                f"gravity_level must be 'new' or 'old', got {self.gravity_level!r} (key 'gravity_level')"
            )
        if self.sweep_c0 is not None and any(c <= 0 for c in self.sweep_c0):
            raise ConfigurationError("sweep c0 values must be positive (key 'sweep_c0')")
        return self


def _parse_float(key, raw):
    try:
        v = float(raw)
    except ValueError:
        raise ConfigurationError(f"cannot parse {raw!r} as a number (key {key!r})") from None
    if not math.isfinite(v):
        raise ConfigurationError(f"value must be finite, got {raw!r} (key {key!r})")
    return v


def _parse_int(key, raw):
    try:
        return int(raw)
    except ValueError:
        raise ConfigurationError(f"cannot parse {raw!r} as an integer (key {key!r})") from None


def _parse_pair(key, raw):
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 2:
        raise ConfigurationError(f"expected two comma-separated numbers (key {key!r}): {raw!r}")
    return (_parse_float(key, parts[0]), _parse_float(key, parts[1]))


def _parse_float_list(key, raw):
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    if not parts:
        raise ConfigurationError(f"expected at least one value (key {key!r})")
    return tuple(_parse_float(key, p) for p in parts)


def _parse_int_list(key, raw):
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    return tuple(_parse_int(key, p) for p in parts)


def _parse_bool(key, raw):
    v = raw.strip().lower()
    if v in ("true", "yes", "1", "on"):
        return True
    if v in ("false", "no", "0", "off"):
        return False
    raise ConfigurationError(f"cannot parse {raw!r} as a boolean (key {key!r})")


def _apply_key(cfg: RunConfig, key: str, raw: str) -> RunConfig:
    if key == "L":
        return replace(cfg, L=_parse_float(key, raw))
    if key == "N":
        return replace(cfg, N=_parse_int(key, raw))
    if key == "dt":
        if raw.strip().lower() == "2h":
            return replace(cfg, dt="2h")
        return replace(cfg, dt=_parse_float(key, raw))
    if key == "T":
        return replace(cfg, T=_parse_float(key, raw))
    if key in ("rho", "mu", "g", "depth", "c1", "width", "alpha"):
        return replace(cfg, **{key: _parse_float(key, raw)})
    if key == "c0":
        values = _parse_float_list(key, raw)
        if len(values) == 1:
            cfg = replace(cfg, c0=values[0])
            if cfg.sweep_c0 is not None:
                cfg = replace(cfg, sweep_c0=values)
            return cfg
        return replace(cfg, sweep_c0=values)
    if key == "sweep_c0":
        return replace(cfg, sweep_c0=_parse_float_list(key, raw))
    if key in ("center", "u0"):
        return replace(cfg, **{key: _parse_pair(key, raw)})
    if key == "case":
        return replace(cfg, case=raw.strip().lower())
    if key == "ic":
        from .experiments import IC_CASES

        name = raw.strip().upper()
        if name not in IC_CASES:
            raise ConfigurationError(
                f"unknown initial-condition case {raw!r} (key 'ic'); have {', '.join(IC_CASES)}"
            )
        width, center, u0 = IC_CASES[name]
        return replace(cfg, width=width, center=center, u0=u0)
    if key == "cases":
        names = tuple(p.strip().upper() for p in raw.split(",") if p.strip())
        if not names:
            raise ConfigurationError("expected at least one case name (key 'cases')")
        return replace(cfg, sweep_cases=names)
    if key == "out":
        return replace(cfg, out=raw.strip())
    if key == "snapshot_steps":
        return replace(cfg, snapshot_steps=_parse_int_list(key, raw))
    if key == "energy_every":
        return replace(cfg, energy_every=_parse_int(key, raw))
    if key == "gravity_level":
        return replace(cfg, gravity_level=raw.strip().lower())
    if key == "extrema_include_initial":
        return replace(cfg, extrema_include_initial=_parse_bool(key, raw))
    raise ConfigurationError(f"unknown configuration key: {key!r}")


def parse_config(text: str) -> RunConfig:
    """Parse configuration text into a validated :class:`RunConfig`."""
    entries: list[tuple[str, str]] = []
    preset_name = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigurationError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = body.split("=", 1)
        key, raw = key.strip(), raw.strip()
        if key == "preset":
            if preset_name is not None:
                raise ConfigurationError(f"line {lineno}: duplicate 'preset' key")
            preset_name = raw
        else:
            entries.append((key, raw))

    if preset_name is not None:
        from .experiments import preset

        cfg = preset(preset_name)
    else:
        cfg = RunConfig()
    for key, raw in entries:
        cfg = _apply_key(cfg, key, raw)
    return cfg.validate()


def serialize_config(cfg: RunConfig) -> str:
    """Render a config as parseable text; parse(serialize(c)) == c."""
    lines = []

    def fmt(v):
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, float):
            return f"{v:.17g}"
        return str(v)

    for f in fields(cfg):
        v = getattr(cfg, f.name)
        if v is None:
            continue
        key = "cases" if f.name == "sweep_cases" else f.name
        if isinstance(v, tuple):
            if len(v) == 0:
                continue
            lines.append(f"{key} = {','.join(fmt(x) for x in v)}")
        else:
            lines.append(f"{key} = {fmt(v)}")
    return "\n".join(lines) + "\n"
