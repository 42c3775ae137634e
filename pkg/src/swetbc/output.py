"""Field snapshot persistence (CSV, full double precision)."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .domain import GridSpec, State
from .errors import UsageError

__all__ = ["write_snapshot", "read_snapshot", "SNAPSHOT_COLUMNS"]

SNAPSHOT_COLUMNS = ("i", "j", "x1", "x2", "eta", "phi", "u1", "u2")


def write_snapshot(state: State, grid: GridSpec, path):
    """Write all fields row-major over the node grid.

    Floats use 17 significant digits, so a written snapshot reads back
    bitwise identical.
    """
    path = Path(path)
    n1 = grid.N + 1
    ii, jj = np.meshgrid(np.arange(n1), np.arange(n1), indexing="ij")
    x1, x2 = grid.node_coords()
    data = np.column_stack(
        [
            ii.ravel(), jj.ravel(), x1.ravel(), x2.ravel(),
            state.eta.ravel(), state.phi.ravel(), state.u1.ravel(), state.u2.ravel(),
        ]
    )
    with path.open("w") as f:
        f.write(",".join(SNAPSHOT_COLUMNS) + "\n")
        np.savetxt(f, data, fmt="%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g")


def read_snapshot(path) -> dict[str, np.ndarray]:
    """Read a snapshot back into (N+1, N+1) arrays keyed by column name."""
    path = Path(path)
    raw = np.genfromtxt(path, delimiter=",", names=True)
    n_rows = raw.shape[0]
    n1 = int(round(np.sqrt(n_rows)))
    if n1 * n1 != n_rows:
        raise UsageError(f"snapshot {path} has {n_rows} rows, not a square grid")
    out = {}
    for name in SNAPSHOT_COLUMNS:
        arr = np.asarray(raw[name]).reshape(n1, n1)
        out[name] = arr.astype(int) if name in ("i", "j") else arr
    return out
