"""Preset experiment configurations, the c0 calibration sweep, and
comparison against the reference result tables.

Three preset families cover the shipped studies:

* ``fig3-<case>``: wave-propagation snapshots on the 10 km box
  (N=1000, dt=0.05, five snapshot times),
* ``energy-study-<case>[-N<n>]``: per-step energy diagnostics on the
  unit box with dt = 2h (default N=400),
* ``c0-sweep``: the transmission-coefficient calibration grid
  (13 c0 values x 6 initial-condition cases, N=400, dt=0.005).

``REFERENCE_EXTREMA`` and ``REFERENCE_SWEEP`` hold the published
reference values the comparison reports measure against (N=400
resolution, same presets).
"""

from __future__ import annotations

import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .config import RunConfig
from .domain import GridSpec, State
from .errors import BlowUpError, ConfigurationError, DryStateError, UsageError

__all__ = [
    "IC_CASES",
    "REFERENCE_EXTREMA",
    "REFERENCE_SWEEP",
    "SWEEP_C0_GRID",
    "preset",
    "available_presets",
    "s_norm",
    "time_accumulated_norm",
    "SweepSpec",
    "SweepResult",
    "run_sweep",
]

# initial-condition cases of the calibration study:
# name -> (gaussian width, center, initial velocity); amplitude is 1e-3
IC_CASES = {
    "I": (100.0, (0.5, 0.5), (0.0, 0.0)),
    "II": (200.0, (0.5, 0.5), (0.0, 0.0)),
    "III": (100.0, (0.0, 0.5), (0.0, 0.0)),
    "IV": (100.0, (0.0, 0.0), (0.0, 0.0)),
    "V": (100.0, (0.5, 0.5), (1.0e-4, 1.0e-4)),
    "VI": (100.0, (0.5, 0.5), (1.0e-4, -1.0e-4)),
}

SWEEP_C0_GRID = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.5)

# reference extrema (max, min) of the rate integrals over the open time
# interval, per boundary case, from the N=400 energy study
REFERENCE_EXTREMA = {
    "i": {
        "I_h1": (0.0, 0.0),
        "I_h2": (0.0, 0.0),
        "I_h3": (0.0, 0.0),
        "I_h4": (0.0, -8.59e-4),
    },
    "ii": {
        "I_h1": (1.10e-4, -2.59e-3),
        "I_h2": (0.0, -3.37),
        "I_h3": (1.44e-6, -1.25e-6),
        "I_h4": (0.0, -3.76e-4),
    },
    "iii": {
        "I_h1": (1.86e-4, -3.38e-3),
        "I_h2": (0.0, -6.27),
        "I_h3": (1.72e-6, -2.50e-6),
        "I_h4": (0.0, -2.29e-4),
    },
    "iv": {
        "I_h1": (1.43e-4, -5.06e-3),
        "I_h2": (0.0, -9.40),
        "I_h3": (2.58e-6, -3.75e-6),
        "I_h4": (0.0, -1.73e-4),
    },
    "v": {
        "I_h1": (2.87e-4, -6.75e-3),
        "I_h2": (0.0, -12.54),
        "I_h3": (3.47e-6, -5.01e-6),
        "I_h4": (0.0, -1.13e-4),
    },
}

# reference space-time elevation norms per (c0, case) from the N=400,
# dt=0.005 calibration runs; printed to 2 decimals except near the minima.
# The published numbers carry a constant reporting scale relative to the
# stated norm ({dt * sum_k h^2 * sum_x eta^2}^(1/2) evaluated on these
# settings); computed norms must be multiplied by REFERENCE_SWEEP_SCALE
# before comparing against the table.  The factor is empirical: it holds
# across the calibration grid to well under the table's own precision.
REFERENCE_SWEEP_SCALE = 2.0e4

REFERENCE_SWEEP = {
    "I": dict(zip(SWEEP_C0_GRID, (12.17, 9.88, 8.84, 8.27, 7.93, 7.71, 7.58, 7.51, 7.4792, 7.4795, 7.50, 7.55, 7.75))),
    "II": dict(zip(SWEEP_C0_GRID, (8.52, 6.96, 6.24, 5.84, 5.61, 5.46, 5.37, 5.32, 5.2951, 5.2959, 5.31, 5.34, 5.49))),
    "III": dict(zip(SWEEP_C0_GRID, (8.14, 6.35, 5.52, 5.08, 4.84, 4.71, 4.65, 4.63, 4.64, 4.68, 4.73, 4.79, 5.02))),
    "IV": dict(zip(SWEEP_C0_GRID, (5.47, 4.04, 3.35, 2.98, 2.79, 2.69, 2.66, 2.67, 2.70, 2.75, 2.82, 2.89, 3.12))),
    "V": dict(zip(SWEEP_C0_GRID, (44.48, 34.36, 28.74, 25.23, 22.82, 21.05, 19.69, 18.60, 17.71, 16.98, 16.36, 15.83, 14.66))),
    "VI": dict(zip(SWEEP_C0_GRID, (44.48, 34.37, 28.75, 25.24, 22.83, 21.06, 19.69, 18.61, 17.72, 16.98, 16.36, 15.84, 14.66))),
}

_PRESET_PATTERNS = (
    "fig3-<case>              wave snapshots, 10 km box, N=1000, dt=0.05",
    "energy-study-<case>      per-step energy diagnostics, unit box, dt=2h, N=400",
    "energy-study-<case>-N<n> same with an explicit grid resolution",
    "c0-sweep                 calibration grid: 13 c0 values x cases I-VI, N=400",
)


def available_presets() -> tuple[str, ...]:
    return _PRESET_PATTERNS


def preset(name: str) -> RunConfig:
    """Expand a preset name into a full :class:`RunConfig`."""
    token = name.strip().lower()

    m = re.fullmatch(r"fig3-(i|ii|iii|iv|v)", token)
    if m:
        return RunConfig(
            L=10.0, N=1000, dt=0.05, T=100.0,
            depth=1.0, c0=0.9,
            c1=0.01, width=100.0, center=(5.0, 5.0), u0=(0.0, 0.0),
            case=m.group(1),
            snapshot_steps=(0, 500, 1000, 1500, 2000),
            energy_every=10,
        )

    m = re.fullmatch(r"energy-study-(i|ii|iii|iv|v)(?:-n(\d+))?", token)
    if m:
        n = int(m.group(2)) if m.group(2) else 400
        return RunConfig(
            L=1.0, N=n, dt="2h", T=100.0,
            depth=0.1, c0=0.9,
            c1=1.0e-3, width=100.0, center=(0.5, 0.5), u0=(0.0, 0.0),
            case=m.group(1),
            energy_every=1,
        )

    if token == "c0-sweep":
        return RunConfig(
            L=1.0, N=400, dt=0.005, T=100.0,
            depth=0.1, c0=0.9,
            c1=1.0e-3, width=100.0, center=(0.5, 0.5), u0=(0.0, 0.0),
            case="v",
            energy_every=0,
            sweep_c0=SWEEP_C0_GRID,
            sweep_cases=tuple(IC_CASES),
        )

    available = "\n  ".join(_PRESET_PATTERNS)
    raise ConfigurationError(f"unknown preset {name!r}; available presets:\n  {available}")


def s_norm(state: State, grid: GridSpec) -> float:
    """Discrete L2 norm of the elevation over all nodes, h*sqrt(sum eta^2)."""
    # einsum keeps this single-threaded; BLAS dot pays thread-pool sync on
    # every call, which dominates at production step counts
    return grid.h * math.sqrt(float(np.einsum("ij,ij->", state.eta, state.eta)))


def time_accumulated_norm(s_series, dt: float, n_steps: int) -> float:
    """Space-time elevation norm sqrt(dt * sum_k s_k^2), k = 0..n_steps."""
    s = np.asarray(s_series, dtype=float)
    if s.ndim != 1 or len(s) != n_steps + 1:
        raise UsageError(
            f"series must cover steps 0..{n_steps} ({n_steps + 1} values), got {len(s)}"
        )
    return math.sqrt(dt * float(np.dot(s, s)))


@dataclass(frozen=True)
class SweepSpec:
    """Calibration sweep: a base run configuration crossed with a c0 grid
    and a list of initial-condition cases."""

    base: RunConfig
    c0_values: tuple[float, ...]
    cases: tuple[str, ...]

    def __post_init__(self):
        if not self.c0_values:
            raise ConfigurationError("sweep needs at least one c0 value")
        if any(c <= 0 for c in self.c0_values):
            raise ConfigurationError(f"sweep c0 values must be positive: {self.c0_values}")
        unknown = [c for c in self.cases if c not in IC_CASES]
        if unknown:
            raise ConfigurationError(f"unknown initial-condition case(s): {unknown}")

    @classmethod
    def from_config(cls, cfg: RunConfig) -> "SweepSpec":
        if cfg.sweep_c0 is None or cfg.sweep_cases is None:
            raise ConfigurationError(
                "configuration has no sweep settings; use the c0-sweep preset "
                "or set the sweep_c0 and cases keys"
            )
        return cls(base=cfg, c0_values=tuple(cfg.sweep_c0), cases=tuple(cfg.sweep_cases))

    def cell_config(self, case: str, c0: float) -> RunConfig:
        width, center, u0 = IC_CASES[case]
        return replace(
            self.base,
            c0=float(c0),
            width=width,
            center=center,
            u0=u0,
            energy_every=0,
            snapshot_steps=(),
            out=None,
            sweep_c0=None,
            sweep_cases=None,
        )


def _run_cell(args):
    """One sweep cell; module-level so process pools can pickle it."""
    from .solver import run

    spec, case, c0 = args
    cfg = spec.cell_config(case, c0)
    try:
        result = run(cfg)
    except (BlowUpError, DryStateError) as exc:
        return case, c0, float("nan"), f"failed:{type(exc).__name__}@{exc.step}"
    value = time_accumulated_norm(result.s_series, result.dt, result.n_steps)
    return case, c0, value, "ok"


@dataclass
class SweepResult:
    """Space-time norms indexed by (case, c0), plus per-case minimizers."""

    cases: tuple[str, ...]
    c0_values: tuple[float, ...]
    values: dict
    status: dict

    def value(self, case: str, c0: float) -> float:
        return self.values[(case, c0)]

    def argmin(self, case: str):
        """c0 minimizing the norm for this case, or None if every cell failed."""
        best, best_c0 = math.inf, None
        for c0 in self.c0_values:
            v = self.values[(case, c0)]
            if math.isfinite(v) and v < best:
                best, best_c0 = v, c0
        return best_c0

    @property
    def n_failed(self) -> int:
        return sum(1 for s in self.status.values() if s != "ok")

    def to_csv(self, path):
        path = Path(path)
        with path.open("w") as f:
            f.write("case,c0,S_total,status\n")
            for case in self.cases:
                for c0 in self.c0_values:
                    v = self.values[(case, c0)]
                    f.write(f"{case},{c0:.17g},{v:.17g},{self.status[(case, c0)]}\n")

    def comparison_report(self, reference=None, scale: float = REFERENCE_SWEEP_SCALE) -> str:
        """Plain-text comparison against the reference norms (where known).

        ``scale`` converts computed norms to the reference table's
        reporting units before taking relative errors.
        """
        reference = REFERENCE_SWEEP if reference is None else reference
        lines = [f"computed norms shown twice: raw, and scaled by {scale:g} (reference units)"]
        lines.append("case      c0        raw      scaled   reference   rel_error")
        for case in self.cases:
            for c0 in self.c0_values:
                v = self.values[(case, c0)]
                sv = v * scale
                ref = reference.get(case, {}).get(c0)
                if ref is None:
                    lines.append(f"{case:<6} {c0:5.2f} {v:10.4e} {sv:11.4f}           -           -")
                else:
                    rel = abs(sv - ref) / abs(ref) if math.isfinite(v) else math.inf
                    lines.append(f"{case:<6} {c0:5.2f} {v:10.4e} {sv:11.4f} {ref:11.4f}   {rel:9.2e}")
        for case in self.cases:
            lines.append(f"argmin[{case}] = {self.argmin(case)}")
        return "\n".join(lines) + "\n"


def run_sweep(spec: SweepSpec, jobs: int = 1) -> SweepResult:
    """Run every (case, c0) cell; failures are recorded, not fatal.

    Cells are independent; ``jobs`` > 1 distributes them over worker
    processes.  Results are merged deterministically by (case, c0).
    """
    cells = [(spec, case, c0) for case in spec.cases for c0 in spec.c0_values]
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run_cell, cells))
    else:
        outcomes = [_run_cell(c) for c in cells]
    values, status = {}, {}
    for case, c0, value, st in outcomes:
        values[(case, c0)] = value
        status[(case, c0)] = st
    return SweepResult(
        cases=tuple(spec.cases),
        c0_values=tuple(spec.c0_values),
        values=values,
        status=status,
    )
