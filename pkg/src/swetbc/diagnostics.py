"""Discrete energy diagnostics.

The total energy is the interior sum

    E = (rho/2) h^2 sum phi |u|^2  +  (rho g/2) h^2 sum eta^2,

and its rate of change decomposes into three boundary line integrals and
one interior dissipation integral:

    I1 = -(rho/2)  int_G  phi |u|^2 (u . n) ds      (advected kinetic flux)
    I2 = -(rho g)  int_G  phi eta (u . n) ds        (pressure-work flux)
    I3 = +(2 mu)   int_G  phi (D(u) n) . u ds       (viscous boundary work)
    I4 = -(2 mu)   int_O  phi |D(u)|^2 dx           (interior dissipation, <= 0)

so that I1 + I2 + I3 + I4 approximates dE/dt.  The line integrals are
evaluated on the bilinear interpolants of the nodal fields: restricted
to a boundary segment every interpolated factor is linear in arc length,
the integrands are polynomials of degree at most four, and the 3-point
Gauss rule used per segment integrates them exactly.  The strain rate on
a boundary segment is the gradient of the single adjacent cell's
bilinear patch evaluated on the edge (its normal derivative is
one-sided by construction).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .boundary import SIDES, BoundaryLayout
from .domain import GridSpec, PhysicalParams, State
from .errors import UsageError
from .kernels import get_backend

__all__ = [
    "EnergyRecord",
    "Theorem2Report",
    "compute_energy",
    "boundary_integrals",
    "boundary_integrals_by_side",
    "dissipation_integral",
    "energy_identity_residual",
    "theorem2_check",
    "transmission_coefficient_bound",
    "extrema_table",
    "write_energy_csv",
    "read_energy_csv",
]

# 3-point Gauss-Legendre rule mapped to [0, 1]; exact through degree 5
GAUSS3_T = np.array([0.5 - math.sqrt(15.0) / 10.0, 0.5, 0.5 + math.sqrt(15.0) / 10.0])
GAUSS3_W = np.array([5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0])

ENERGY_CSV_COLUMNS = ("k", "t", "E_h", "I_h1", "I_h2", "I_h3", "I_h4", "sum_I")


@dataclass(frozen=True)
class EnergyRecord:
    """Energy and rate integrals at one time level."""

    k: int
    t: float
    E_h: float
    I_h1: float
    I_h2: float
    I_h3: float
    I_h4: float
    sum_I: float

    @classmethod
    def build(cls, k, t, E_h, I_h1, I_h2, I_h3, I_h4):
        return cls(k, t, E_h, I_h1, I_h2, I_h3, I_h4, I_h1 + I_h2 + I_h3 + I_h4)


def compute_energy(state: State, grid: GridSpec, params: PhysicalParams, backend=None) -> float:
    """Total discrete energy (kinetic + potential), interior nodes only."""
    kern = get_backend(backend)
    kin, pot = kern.energy_sums(state.phi, state.u1, state.u2, state.eta)
    h2 = grid.h * grid.h
    return 0.5 * params.rho * h2 * kin + 0.5 * params.rho * params.g * h2 * pot


def _gauss_eval(nodal: np.ndarray) -> np.ndarray:
    """Linear interpolant of consecutive nodal values at the Gauss points.

    nodal has length N+1; the result has shape (N, 3), one row per
    boundary segment.
    """
    return nodal[:-1, None] * (1.0 - GAUSS3_T) + nodal[1:, None] * GAUSS3_T


def _side_lines(field: np.ndarray, side: str):
    """Nodal values on a boundary side and on the adjacent parallel line."""
    if side == "bottom":
        return field[:, 0], field[:, 1]
    if side == "top":
        return field[:, -1], field[:, -2]
    if side == "left":
        return field[0, :], field[1, :]
    return field[-1, :], field[-2, :]


_SIDE_NORMAL = {
    "bottom": (0.0, -1.0),
    "top": (0.0, 1.0),
    "left": (-1.0, 0.0),
    "right": (1.0, 0.0),
}


def boundary_integrals_by_side(state: State, grid: GridSpec, params: PhysicalParams) -> np.ndarray:
    """The three line integrals split per boundary side.

    Returns an array of shape (3, 4): rows are (I1, I2, I3),
    columns follow :data:`swetbc.boundary.SIDES` order.
    """
    h = grid.h
    out = np.zeros((3, 4))
    for col, side in enumerate(SIDES):
        n1, n2 = _SIDE_NORMAL[side]
        phi_l, phi_in = _side_lines(state.phi, side)
        eta_l, _ = _side_lines(state.eta, side)
        u1_l, u1_in = _side_lines(state.u1, side)
        u2_l, u2_in = _side_lines(state.u2, side)

        phiq = _gauss_eval(phi_l)
        etaq = _gauss_eval(eta_l)
        u1q = _gauss_eval(u1_l)
        u2q = _gauss_eval(u2_l)
        unq = n1 * u1q + n2 * u2q

        w = GAUSS3_W * h
        i1 = -0.5 * params.rho * float(np.sum(w * phiq * (u1q**2 + u2q**2) * unq))
        i2 = -params.rho * params.g * float(np.sum(w * phiq * etaq * unq))

        # strain rate of the adjacent cell's bilinear patch on the edge:
        # the tangential derivative is constant per segment, the normal
        # derivative is the linear interpolant of nodal one-sided
        # differences (oriented along the positive axis).
        tang_u1 = ((u1_l[1:] - u1_l[:-1]) / h)[:, None]
        tang_u2 = ((u2_l[1:] - u2_l[:-1]) / h)[:, None]
        sgn = 1.0 if side in ("top", "right") else -1.0
        norm_u1 = _gauss_eval(sgn * (u1_l - u1_in) / h)
        norm_u2 = _gauss_eval(sgn * (u2_l - u2_in) / h)
        if side in ("bottom", "top"):
            d11, dx2 = tang_u1, tang_u2
            dy1, d22 = norm_u1, norm_u2
        else:
            dy1, d22 = tang_u1, tang_u2
            d11, dx2 = norm_u1, norm_u2
        d12 = 0.5 * (dy1 + dx2)
        dn1 = d11 * n1 + d12 * n2
        dn2 = d12 * n1 + d22 * n2
        i3 = 2.0 * params.mu * float(np.sum(w * phiq * (dn1 * u1q + dn2 * u2q)))

        out[0, col] = i1
        out[1, col] = i2
        out[2, col] = i3
    return out


def boundary_integrals(
    state: State, grid: GridSpec, params: PhysicalParams, sides=None
) -> tuple[float, float, float]:
    """(I1, I2, I3) over the whole boundary, or over selected sides.

    ``sides`` may be a boolean mask in :data:`SIDES` order or an
    iterable of side names.
    """
    by_side = boundary_integrals_by_side(state, grid, params)
    if sides is None:
        mask = np.ones(4, dtype=bool)
    elif isinstance(sides, np.ndarray) and sides.dtype == bool:
        mask = sides
    else:
        names = set(sides)
        unknown = names - set(SIDES)
        if unknown:
            raise UsageError(f"unknown boundary side(s): {sorted(unknown)}")
        mask = np.array([s in names for s in SIDES])
    i1, i2, i3 = by_side[:, mask].sum(axis=1)
    return float(i1), float(i2), float(i3)


def dissipation_integral(
    state: State,
    grid: GridSpec,
    params: PhysicalParams,
    backend=None,
    shear_weight: str = "voigt",
) -> float:
    """Cell-centered interior dissipation integral; always <= 0.

    ``shear_weight="voigt"`` (default) weights the shear component with
    the engineering convention (2*d12)^2, which is what the published
    reference extrema use; ``"tensor"`` selects the plain Frobenius norm
    of the strain-rate tensor (d11^2 + d22^2 + 2*d12^2).
    """
    if shear_weight not in ("voigt", "tensor"):
        raise UsageError(f"shear_weight must be 'voigt' or 'tensor', got {shear_weight!r}")
    kern = get_backend(backend)
    raw = kern.dissipation_cell_sum(state.phi, state.u1, state.u2, grid.h, shear_weight == "voigt")
    return -2.0 * params.mu * grid.h * grid.h * raw


def energy_identity_residual(records, dt: float) -> np.ndarray:
    """Forward-difference residual of the energy balance.

    r[k] = (E[k+1] - E[k]) / dt - sum_I[k] for consecutive records.  The
    residual is a consistency measure: it shrinks under grid/time
    refinement but is not zero at finite resolution.
    """
    if len(records) < 2:
        raise UsageError("need at least two records to form a residual")
    ks = np.array([r.k for r in records])
    if np.any(np.diff(ks) != 1):
        raise UsageError("records must be at consecutive time steps (cadence 1)")
    E = np.array([r.E_h for r in records])
    sumI = np.array([r.sum_I for r in records])
    return (E[1:] - E[:-1]) / dt - sumI[:-1]


def transmission_coefficient_bound(alpha: float) -> float:
    """Largest admissible transmission constant, sqrt(2/alpha)*(1-alpha)."""
    if not 0.0 < alpha < 1.0:
        raise UsageError(f"alpha must lie in (0, 1), got {alpha!r}")
    return math.sqrt(2.0 / alpha) * (1.0 - alpha)


@dataclass(frozen=True)
class Theorem2Report:
    """Conditions and conclusion of the open-boundary energy inequality.

    When phi stays positive on the closed transmission boundary, the
    elevation stays above -alpha*depth there, and c0 does not exceed
    sqrt(2/alpha)*(1-alpha), the sum of the two leading boundary
    integrals restricted to the transmission part is non-positive.
    """

    alpha: float
    c0_bound: float
    eta_floor_ok: bool
    phi_positive_ok: bool
    c0_ok: bool
    I12_sum: float
    conclusion_holds: bool

    @property
    def conditions_hold(self) -> bool:
        return self.eta_floor_ok and self.phi_positive_ok and self.c0_ok


def theorem2_check(
    state: State,
    grid: GridSpec,
    params: PhysicalParams,
    layout: BoundaryLayout,
    alpha: float,
    tol: float = 0.0,
) -> Theorem2Report:
    """Evaluate the energy-inequality conditions and conclusion at one state.

    ``tol`` is the non-positivity slack granted to ``I12_sum`` (set it
    from the run's integral scale to absorb quadrature round-off).
    """
    bound = transmission_coefficient_bound(alpha)
    ci, cj = layout.transmission_closure_idx()
    eta_b = state.eta[ci, cj]
    phi_b = state.phi[ci, cj]
    eta_floor_ok = bool(np.all(eta_b >= -alpha * params.depth))
    phi_positive_ok = bool(np.all(phi_b > 0.0))
    c0_ok = params.c0 <= bound
    i1, i2, _ = boundary_integrals(state, grid, params, sides=layout.side_transmission)
    i12 = i1 + i2
    conds = eta_floor_ok and phi_positive_ok and c0_ok
    return Theorem2Report(
        alpha=alpha,
        c0_bound=bound,
        eta_floor_ok=eta_floor_ok,
        phi_positive_ok=phi_positive_ok,
        c0_ok=c0_ok,
        I12_sum=i12,
        conclusion_holds=(not conds) or (i12 <= tol),
    )


def extrema_table(records, include_initial: bool = False) -> dict[str, tuple[float, float]]:
    """(max, min) of each rate integral over the recorded steps.

    The initial record (k = 0) is excluded by default; the reference
    extrema are taken over the open time interval.
    """
    recs = [r for r in records if include_initial or r.k > 0]
    if not recs:
        raise UsageError("no records to take extrema over")
    out = {}
    for name in ("I_h1", "I_h2", "I_h3", "I_h4"):
        vals = np.array([getattr(r, name) for r in recs])
        out[name] = (float(vals.max()), float(vals.min()))
    return out


def write_energy_csv(records, path):
    """Write the record series with the fixed column schema."""
    path = Path(path)
    with path.open("w") as f:
        f.write(",".join(ENERGY_CSV_COLUMNS) + "\n")
        for r in records:
            f.write(
                f"{r.k},{r.t:.17g},{r.E_h:.17g},{r.I_h1:.17g},{r.I_h2:.17g},"
                f"{r.I_h3:.17g},{r.I_h4:.17g},{r.sum_I:.17g}\n"
            )


def read_energy_csv(path) -> list[EnergyRecord]:
    path = Path(path)
    records = []
    with path.open() as f:
        header = f.readline().strip()
        if header != ",".join(ENERGY_CSV_COLUMNS):
            raise UsageError(f"unexpected energy CSV header in {path}: {header!r}")
        for line in f:
            parts = line.strip().split(",")
            if not parts or parts == [""]:
                continue
            k = int(parts[0])
            vals = [float(p) for p in parts[1:]]
            records.append(EnergyRecord(k, *vals))
    return records
