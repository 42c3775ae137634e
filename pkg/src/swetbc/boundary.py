"""Boundary node classification and boundary-condition application.

Every one of the 4N boundary nodes is classified as either Dirichlet
(prescribed wall velocity, zero in the shipped experiments) or
transmission (outflow relation u = c * eta/phi * n).  Five preset
layouts are provided, parameterized by which of the four sides carry the
open (transmission) condition:

=======  =====================================================
case     transmission part of the boundary
=======  =====================================================
``i``    empty (all Dirichlet)
``ii``   top edge interior
``iii``  top + right edge interiors + corner (L, L)
``iv``   top + right + left interiors + corners (L, L), (0, L)
``v``    the whole boundary, corners included
=======  =====================================================

Edge-interior nodes carry the axis-aligned outward normal of their side.
A transmission corner node carries the normalized sum of the two
adjacent side normals, e.g. (1, 1)/sqrt(2) at (L, L).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .domain import GridSpec, PhysicalParams
from .errors import ConfigurationError, DryStateError

__all__ = [
    "BoundaryLayout",
    "make_boundary_case",
    "apply_velocity_bc",
    "BOUNDARY_CASES",
    "SIDES",
]

# side order used for all per-side arrays: bottom (j=0), top (j=N),
# left (i=0), right (i=N)
SIDES = ("bottom", "top", "left", "right")

SIDE_NORMALS = {
    "bottom": (0.0, -1.0),
    "top": (0.0, 1.0),
    "left": (-1.0, 0.0),
    "right": (1.0, 0.0),
}

BOUNDARY_CASES = ("i", "ii", "iii", "iv", "v")

# transmission sides and transmission corners per preset case;
# corners are (i, j) in units of N
_CASE_SIDES = {
    "i": (),
    "ii": ("top",),
    "iii": ("top", "right"),
    "iv": ("top", "right", "left"),
    "v": ("bottom", "top", "left", "right"),
}
_CASE_CORNERS = {
    "i": (),
    "ii": (),
    "iii": ((1, 1),),
    "iv": ((1, 1), (0, 1)),
    "v": ((0, 0), (1, 0), (0, 1), (1, 1)),
}

_CORNER_NORMALS = {
    (0, 0): (-1.0, -1.0),
    (1, 0): (1.0, -1.0),
    (0, 1): (-1.0, 1.0),
    (1, 1): (1.0, 1.0),
}


@dataclass
class BoundaryLayout:
    """Classification of all boundary nodes plus outward normals.

    ``transmission_idx`` / ``dirichlet_idx`` are (i, j) index arrays that
    together partition the 4N boundary nodes.  ``transmission_normals``
    holds the unit outward normal per transmission node, aligned with
    ``transmission_idx``.  ``side_transmission`` flags whole sides (in
    :data:`SIDES` order) whose open segments belong to the transmission
    part; it drives the restriction of boundary line integrals.
    """

    case_id: str
    N: int
    transmission_idx: tuple[np.ndarray, np.ndarray]
    dirichlet_idx: tuple[np.ndarray, np.ndarray]
    transmission_normals: np.ndarray  # shape (n_trans, 2)
    side_transmission: np.ndarray  # shape (4,), bool, SIDES order
    u_dirichlet: tuple[float, float] = (0.0, 0.0)
    _normal_lookup: dict = field(default_factory=dict, repr=False)

    @property
    def n_transmission(self) -> int:
        return len(self.transmission_idx[0])

    @property
    def n_dirichlet(self) -> int:
        return len(self.dirichlet_idx[0])

    def classification(self, i: int, j: int) -> str:
        """Return 'dirichlet' or 'transmission' for a boundary node."""
        N = self.N
        if not (i in (0, N) or j in (0, N)):
            raise ValueError(f"({i}, {j}) is not a boundary node")
        if (i, j) in self._normal_lookup:
            return "transmission"
        return "dirichlet"

    def normal(self, i: int, j: int) -> np.ndarray:
        """Outward unit normal at a transmission node."""
        try:
            return self._normal_lookup[(i, j)]
        except KeyError:
            raise ValueError(f"({i}, {j}) is not a transmission node") from None

    def transmission_closure_idx(self) -> tuple[np.ndarray, np.ndarray]:
        """Nodes of the closure of the transmission sides.

        Used by the energy-inequality condition checks, which are stated
        on the closed transmission boundary (segment endpoints included
        even where a corner node itself is classified Dirichlet).
        """
        N = self.N
        ii, jj = [], []
        rng = np.arange(N + 1)
        zeros = np.zeros(N + 1, dtype=int)
        ends = np.full(N + 1, N, dtype=int)
        side_nodes = {"bottom": (rng, zeros), "top": (rng, ends), "left": (zeros, rng), "right": (ends, rng)}
        for s, on in zip(SIDES, self.side_transmission):
            if on:
                ii.append(side_nodes[s][0])
                jj.append(side_nodes[s][1])
        # isolated transmission corners (case iii/iv) are in the closure too
        ti, tj = self.transmission_idx
        if len(ti):
            ii.append(ti), jj.append(tj)
        if not ii:
            empty = np.zeros(0, dtype=int)
            return empty, empty
        flat = np.concatenate(ii) * (N + 1) + np.concatenate(jj)
        flat = np.unique(flat)
        return flat // (N + 1), flat % (N + 1)


def _boundary_nodes(N: int):
    """All 4N boundary (i, j) pairs, each exactly once."""
    nodes = []
    for i in range(N + 1):
        nodes.append((i, 0))
        nodes.append((i, N))
    for j in range(1, N):
        nodes.append((0, j))
        nodes.append((N, j))
    return nodes


def make_boundary_case(case_id: str, grid: GridSpec) -> BoundaryLayout:
    """Build one of the five preset boundary layouts for ``grid``."""
    case = str(case_id).strip().lower()
    if case not in BOUNDARY_CASES:
        raise ConfigurationError(
            f"unknown boundary case {case_id!r}; expected one of {', '.join(BOUNDARY_CASES)}"
        )
    N = grid.N
    trans: dict[tuple[int, int], np.ndarray] = {}

    for side in _CASE_SIDES[case]:
        n = np.array(SIDE_NORMALS[side])
        for m in range(1, N):  # edge interiors only; corners handled below
            if side == "bottom":
                trans[(m, 0)] = n
            elif side == "top":
                trans[(m, N)] = n
            elif side == "left":
                trans[(0, m)] = n
            else:
                trans[(N, m)] = n
    for ci, cj in _CASE_CORNERS[case]:
        n = np.array(_CORNER_NORMALS[(ci, cj)]) / np.sqrt(2.0)
        trans[(ci * N, cj * N)] = n

    t_nodes = sorted(trans)
    d_nodes = [p for p in _boundary_nodes(N) if p not in trans]
    d_nodes.sort()

    def as_idx(nodes):
        if not nodes:
            z = np.zeros(0, dtype=np.int32)
            return (z, z.copy())
        arr = np.array(nodes, dtype=np.int32)
        return (np.ascontiguousarray(arr[:, 0]), np.ascontiguousarray(arr[:, 1]))

    normals = (
        np.array([trans[p] for p in t_nodes], dtype=float)
        if t_nodes
        else np.zeros((0, 2))
    )
    layout = BoundaryLayout(
        case_id=case,
        N=N,
        transmission_idx=as_idx(t_nodes),
        dirichlet_idx=as_idx(d_nodes),
        transmission_normals=normals,
        side_transmission=np.array([s in _CASE_SIDES[case] for s in SIDES]),
        _normal_lookup={p: trans[p] for p in t_nodes},
    )
    assert layout.n_transmission + layout.n_dirichlet == 4 * N
    return layout


def apply_velocity_bc(u1, u2, phi, layout: BoundaryLayout, params: PhysicalParams, step: int):
    """Overwrite boundary velocity in place from the boundary conditions.

    Dirichlet nodes take the constant wall value; transmission nodes take
    u = c * (phi - depth)/phi * n with phi at the same (new) time level.
    Raises :class:`DryStateError` when phi <= 0 on a transmission node.
    """
    di, dj = layout.dirichlet_idx
    u1[di, dj] = layout.u_dirichlet[0]
    u2[di, dj] = layout.u_dirichlet[1]

    ti, tj = layout.transmission_idx
    if len(ti) == 0:
        return
    phi_b = phi[ti, tj]
    if np.any(phi_b <= 0.0):
        raise DryStateError(step, "transmission boundary")
    speed = params.transmission_speed * (phi_b - params.depth) / phi_b
    u1[ti, tj] = speed * layout.transmission_normals[:, 0]
    u2[ti, tj] = speed * layout.transmission_normals[:, 1]
