"""Backend selection for the per-step kernels.

The compiled extension (``swetbc._kernels_cy``) is preferred when it
imported successfully; otherwise the NumPy fallback is used.  Force a
choice with the environment variable ``SWETBC_BACKEND=numpy|cython`` or
per call site via :func:`get_backend`.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_np
from .errors import ConfigurationError

try:
    from . import _kernels_cy
except ImportError:  # pure-Python install; fall back silently
    _kernels_cy = None

_BACKENDS = {"numpy": _kernels_np}
if _kernels_cy is not None:
    _BACKENDS["cython"] = _kernels_cy


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def default_backend_name() -> str:
    env = os.environ.get("SWETBC_BACKEND", "").strip().lower()
    if env:
        if env not in _BACKENDS:
            raise ConfigurationError(
                f"SWETBC_BACKEND={env!r} not available; have {available_backends()}"
            )
        return env
    return "cython" if "cython" in _BACKENDS else "numpy"


def get_backend(name: str | None = None):
    """Return the kernel module for ``name`` (default: best available)."""
    if name is None:
        name = default_backend_name()
    try:
        return _BACKENDS[name.strip().lower()]
    except KeyError:
        raise ConfigurationError(
            f"unknown backend {name!r}; have {available_backends()}"
        ) from None


class BoundaryData:
    """Layout flattened into the plain arrays the kernels consume."""

    __slots__ = ("dir_i", "dir_j", "ud1", "ud2", "trn_i", "trn_j", "trn_n1", "trn_n2")

    def __init__(self, layout):
        self.dir_i, self.dir_j = layout.dirichlet_idx
        self.trn_i, self.trn_j = layout.transmission_idx
        self.trn_n1 = np.ascontiguousarray(layout.transmission_normals[:, 0])
        self.trn_n2 = np.ascontiguousarray(layout.transmission_normals[:, 1])
        self.ud1 = float(layout.u_dirichlet[0])
        self.ud2 = float(layout.u_dirichlet[1])
