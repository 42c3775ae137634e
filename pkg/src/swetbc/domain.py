"""Grid, physical parameters, initial conditions, and the discrete field state.

Conventions used throughout the package:

* the domain is the square (0, L)^2, discretized by (N+1)^2 nodes
  x[i, j] = (i*h, j*h) with h = L/N,
* field arrays have shape (N+1, N+1) and are indexed [i, j] with i along
  the x1 axis and j along the x2 axis (C order, float64),
* units follow the km / kg / s convention of the shipped experiment
  presets; no unit conversion is performed anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BlowUpError, ConfigurationError

__all__ = [
    "GridSpec",
    "PhysicalParams",
    "InitialCondition",
    "State",
    "build_grid",
    "init_state",
]


@dataclass(frozen=True)
class GridSpec:
    """Uniform square grid: side length ``L``, ``N`` cells per side.

    Nodes are x[i, j] = (i*h, j*h) for 0 <= i, j <= N with h = L/N.
    Interior nodes have 0 < i, j < N; the remaining 4N nodes lie on the
    boundary.
    """

    side_length: float
    node_count: int

    @property
    def L(self) -> float:
        return self.side_length

    @property
    def N(self) -> int:
        return self.node_count

    @property
    def spacing(self) -> float:
        return self.side_length / self.node_count

    @property
    def h(self) -> float:
        return self.spacing

    @property
    def shape(self) -> tuple[int, int]:
        return (self.node_count + 1, self.node_count + 1)

    def axis_coords(self) -> np.ndarray:
        """Node coordinates along one axis (length N+1)."""
        return np.arange(self.node_count + 1) * self.spacing

    def node_coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Meshgrid arrays (X1, X2), each of shape (N+1, N+1)."""
        x = self.axis_coords()
        return np.meshgrid(x, x, indexing="ij")

    def interior(self) -> tuple[slice, slice]:
        """Slices selecting the interior node block."""
        return (slice(1, -1), slice(1, -1))


def build_grid(L: float, N: int) -> GridSpec:
    """Validate and build a :class:`GridSpec`.

    Parameters
    ----------
    L : float
        Side length of the square domain (> 0).
    N : int
        Number of grid cells per side (>= 2, so the grid has at least
        one interior node).
    """
    if not (isinstance(N, (int, np.integer)) and not isinstance(N, bool)):
        raise ConfigurationError(f"node count N must be an integer, got {N!r}")
    if N < 2:
        raise ConfigurationError(f"node count N must be >= 2, got {N}")
    if not (L > 0 and math.isfinite(L)):
        raise ConfigurationError(f"side length L must be positive and finite, got {L!r}")
    return GridSpec(side_length=float(L), node_count=int(N))


@dataclass(frozen=True)
class PhysicalParams:
    """Physical constants of the model.

    ``depth`` is the constant still-water depth (the depth function is
    restricted to a constant in all shipped experiments).  The
    transmission boundary speed is c = c0 * sqrt(g * depth).
    """

    rho: float = 1.0e12
    mu: float = 1.0e3
    g: float = 9.8e-3
    depth: float = 0.1
    c0: float = 0.9

    def __post_init__(self):
        for name in ("rho", "mu", "g", "depth", "c0"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ConfigurationError(f"physical parameter {name} must be positive, got {v!r}")

    @property
    def transmission_speed(self) -> float:
        """c = c0 * sqrt(g * depth), the outflow speed of the open boundary."""
        return self.c0 * math.sqrt(self.g * self.depth)


@dataclass(frozen=True)
class InitialCondition:
    """Gaussian bump elevation plus a constant initial velocity.

    eta0(x) = amplitude * exp(-width * |x - center|^2), u0 constant.
    """

    amplitude: float = 1.0e-3
    center: tuple[float, float] = (0.5, 0.5)
    width: float = 100.0
    u0: tuple[float, float] = (0.0, 0.0)

    def elevation(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        r2 = (x1 - self.center[0]) ** 2 + (x2 - self.center[1]) ** 2
        return self.amplitude * np.exp(-self.width * r2)


@dataclass
class State:
    """Discrete fields at one time level.

    ``phi`` is the total wave height, ``eta = phi - depth`` the surface
    elevation, ``(u1, u2)`` the velocity.  All arrays share the grid
    shape (N+1, N+1).
    """

    k: int
    phi: np.ndarray
    u1: np.ndarray
    u2: np.ndarray
    eta: np.ndarray = field(repr=False)

    def copy(self) -> "State":
        return State(self.k, self.phi.copy(), self.u1.copy(), self.u2.copy(), self.eta.copy())

    def all_finite(self) -> bool:
        return bool(
            np.isfinite(self.phi).all()
            and np.isfinite(self.u1).all()
            and np.isfinite(self.u2).all()
        )

    def validate(self, params: PhysicalParams, atol: float = 1e-12):
        """Check the structural invariants (finiteness, phi = eta + depth)."""
        if not self.all_finite():
            raise BlowUpError(self.k)
        err = np.max(np.abs(self.phi - self.eta - params.depth))
        if err > atol * max(1.0, params.depth):
            raise ValueError(f"phi - eta - depth deviates by {err:.3e}")


def init_state(grid: GridSpec, params: PhysicalParams, ic: InitialCondition, layout=None) -> State:
    """Build the time-level-0 state.

    The elevation is the Gaussian bump, phi = eta + depth, and the
    velocity is the constant ``ic.u0`` everywhere except on classified
    boundary nodes: Dirichlet nodes take the wall value and transmission
    nodes take the outflow relation evaluated from phi at level 0.
    ``layout`` may be None for a layout-free field initialization (all
    nodes get u0).
    """
    x1, x2 = grid.node_coords()
    eta = ic.elevation(x1, x2)
    phi = eta + params.depth
    u1 = np.full(grid.shape, float(ic.u0[0]))
    u2 = np.full(grid.shape, float(ic.u0[1]))
    if layout is not None:
        from .boundary import apply_velocity_bc

        apply_velocity_bc(u1, u2, phi, layout, params, step=0)
    return State(k=0, phi=phi, u1=u1, u2=u2, eta=eta)
