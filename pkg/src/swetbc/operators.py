"""Finite-difference building blocks on the uniform node grid.

Two layers are provided:

* nodewise functions (``central_diff``, ``upwind_diff``, ...) that
  evaluate one stencil at one node; these are the readable reference
  definitions and are used directly by the tests,
* whole-array functions (``central_diff_field``, ...) that apply the
  same stencils to every node at once; the solver backends are built on
  these.

Stencil rules:

* central differences use (f[i+1] - f[i-1]) / (2h); where a neighbor
  falls outside the grid the two-point one-sided difference toward the
  interior is used instead,
* upwind differences are backward for positive advecting velocity,
  forward for negative, and fall back to the central convention for a
  zero velocity; the one-sided boundary fallback applies here too (at a
  wall node every branch degenerates to the same one-sided difference).

axis=1 differentiates along the first array index (x1), axis=2 along the
second (x2).
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "central_diff",
    "upwind_diff",
    "strain_rate_at_node",
    "strain_rate_at_cell_center",
    "central_diff_field",
    "upwind_diff_field",
    "cell_center_mean",
    "cell_center_gradient",
]


def _shifted(f: np.ndarray, axis: int, i: int, j: int, off: int):
    if axis == 1:
        return f[i + off, j]
    return f[i, j + off]


def central_diff(f: np.ndarray, h: float, axis: int, i: int, j: int) -> float:
    """Central difference of ``f`` at node (i, j) along ``axis``.

    Exact for linear fields everywhere, including the one-sided boundary
    fallback.
    """
    n = f.shape[axis - 1] - 1
    pos = i if axis == 1 else j
    if pos == 0:
        return (_shifted(f, axis, i, j, 1) - f[i, j]) * (1.0 / h)
    if pos == n:
        return (f[i, j] - _shifted(f, axis, i, j, -1)) * (1.0 / h)
    return (_shifted(f, axis, i, j, 1) - _shifted(f, axis, i, j, -1)) * (1.0 / (2.0 * h))


def upwind_diff(f: np.ndarray, h: float, velocity: float, axis: int, i: int, j: int) -> float:
    """Upwind difference of ``f`` at node (i, j) with respect to ``velocity``."""
    n = f.shape[axis - 1] - 1
    pos = i if axis == 1 else j
    if pos == 0 or pos == n:
        # every branch collapses to the one-sided difference at a wall
        return central_diff(f, h, axis, i, j)
    if velocity > 0.0:
        return (f[i, j] - _shifted(f, axis, i, j, -1)) * (1.0 / h)
    if velocity < 0.0:
        return (_shifted(f, axis, i, j, 1) - f[i, j]) * (1.0 / h)
    return central_diff(f, h, axis, i, j)


def strain_rate_at_node(u1: np.ndarray, u2: np.ndarray, h: float, i: int, j: int) -> np.ndarray:
    """Symmetric velocity-gradient tensor at a node.

    Built from central differences (one-sided at the boundary); the
    result is exactly symmetric by construction.
    """
    d11 = central_diff(u1, h, 1, i, j)
    d22 = central_diff(u2, h, 2, i, j)
    d12 = 0.5 * (central_diff(u1, h, 2, i, j) + central_diff(u2, h, 1, i, j))
    return np.array([[d11, d12], [d12, d22]])


def strain_rate_at_cell_center(u1: np.ndarray, u2: np.ndarray, h: float, ci: int, cj: int) -> np.ndarray:
    """Symmetric gradient of the bilinear interpolant at a cell center.

    Cell (ci, cj), 1-based, has corner nodes (ci-1..ci, cj-1..cj).  The
    x1-derivative of the bilinear patch at the center is the difference
    of the right- and left-edge mean values over h (and analogously for
    x2).
    """
    def ddx(f):
        return ((f[ci, cj - 1] + f[ci, cj]) - (f[ci - 1, cj - 1] + f[ci - 1, cj])) * (1.0 / (2.0 * h))

    def ddy(f):
        return ((f[ci - 1, cj] + f[ci, cj]) - (f[ci - 1, cj - 1] + f[ci, cj - 1])) * (1.0 / (2.0 * h))

    d11 = ddx(u1)
    d22 = ddy(u2)
    d12 = 0.5 * (ddy(u1) + ddx(u2))
    return np.array([[d11, d12], [d12, d22]])


# ---------------------------------------------------------------------------
# whole-array versions


def central_diff_field(f: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Central difference applied at every node (one-sided at the edges)."""
    inv_h = 1.0 / h
    inv_2h = 1.0 / (2.0 * h)
    out = np.empty_like(f)
    if axis == 1:
        out[1:-1, :] = (f[2:, :] - f[:-2, :]) * inv_2h
        out[0, :] = (f[1, :] - f[0, :]) * inv_h
        out[-1, :] = (f[-1, :] - f[-2, :]) * inv_h
    else:
        out[:, 1:-1] = (f[:, 2:] - f[:, :-2]) * inv_2h
        out[:, 0] = (f[:, 1] - f[:, 0]) * inv_h
        out[:, -1] = (f[:, -1] - f[:, -2]) * inv_h
    return out


def upwind_diff_field(f: np.ndarray, h: float, velocity: np.ndarray, axis: int) -> np.ndarray:
    """Upwind difference at every node, switching on ``velocity``'s sign."""
    inv_h = 1.0 / h
    backward = np.empty_like(f)
    forward = np.empty_like(f)
    if axis == 1:
        backward[1:, :] = (f[1:, :] - f[:-1, :]) * inv_h
        backward[0, :] = (f[1, :] - f[0, :]) * inv_h
        forward[:-1, :] = (f[1:, :] - f[:-1, :]) * inv_h
        forward[-1, :] = (f[-1, :] - f[-2, :]) * inv_h
    else:
        backward[:, 1:] = (f[:, 1:] - f[:, :-1]) * inv_h
        backward[:, 0] = (f[:, 1] - f[:, 0]) * inv_h
        forward[:, :-1] = (f[:, 1:] - f[:, :-1]) * inv_h
        forward[:, -1] = (f[:, -1] - f[:, -2]) * inv_h
    central = central_diff_field(f, h, axis)
    return np.where(velocity > 0.0, backward, np.where(velocity < 0.0, forward, central))


def cell_center_mean(f: np.ndarray) -> np.ndarray:
    """Bilinear interpolant evaluated at all N x N cell centers."""
    return 0.25 * (f[:-1, :-1] + f[1:, :-1] + f[:-1, 1:] + f[1:, 1:])


def cell_center_gradient(f: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Gradient of the bilinear interpolant at all cell centers."""
    inv_2h = 1.0 / (2.0 * h)
    ddx = ((f[1:, :-1] + f[1:, 1:]) - (f[:-1, :-1] + f[:-1, 1:])) * inv_2h
    ddy = ((f[:-1, 1:] + f[1:, 1:]) - (f[:-1, :-1] + f[1:, :-1])) * inv_2h
    return ddx, ddy
