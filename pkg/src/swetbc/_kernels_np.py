"""Pure-NumPy implementation of the hot per-step kernels.

This is the fallback backend used when the compiled extension is not
available, and the reference the compiled kernels are tested against.
Both backends evaluate the same arithmetic expressions node for node
(the extension is compiled without FP contraction), so their outputs
agree bitwise.

Status codes returned by :func:`step_fields`:

====  =======================================================
0     step completed
1     phi <= 0 at an interior node (momentum divides by phi)
2     phi <= 0 at a transmission boundary node
3     a non-finite value appeared in the updated fields
====  =======================================================
"""

from __future__ import annotations

import numpy as np

from .operators import (
    cell_center_gradient,
    cell_center_mean,
    central_diff_field,
    upwind_diff_field,
)

NAME = "numpy"

STATUS_OK = 0
STATUS_DRY_INTERIOR = 1
STATUS_DRY_TRANSMISSION = 2
STATUS_NONFINITE = 3


def continuity_update(phi, u1, u2, h, dt, out=None):
    """phi - dt * [(div u) phi + u . upwind-grad phi] on every node."""
    div = central_diff_field(u1, h, 1) + central_diff_field(u2, h, 2)
    adv = u1 * upwind_diff_field(phi, h, u1, 1) + u2 * upwind_diff_field(phi, h, u2, 2)
    if out is None:
        out = np.empty_like(phi)
    np.copyto(out, phi - dt * (div * phi + adv))
    return out


def momentum_rhs(phi, u1, u2, phi_grav, h, g, visc):
    """Right-hand side of the interior velocity update (full arrays).

    ``visc`` is 2*mu/rho.  The gravity gradient is taken from
    ``phi_grav`` (the depth constant drops out of the differences).
    Returns the two acceleration arrays; only their interior entries
    are meaningful.
    """
    d11 = central_diff_field(u1, h, 1)
    d22 = central_diff_field(u2, h, 2)
    d12 = 0.5 * (central_diff_field(u1, h, 2) + central_diff_field(u2, h, 1))
    t11 = phi * d11
    t12 = phi * d12
    t22 = phi * d22
    visc1 = central_diff_field(t11, h, 1) + central_diff_field(t12, h, 2)
    visc2 = central_diff_field(t12, h, 1) + central_diff_field(t22, h, 2)
    adv1 = u1 * central_diff_field(u1, h, 1) + u2 * central_diff_field(u1, h, 2)
    adv2 = u1 * central_diff_field(u2, h, 1) + u2 * central_diff_field(u2, h, 2)
    gx = central_diff_field(phi_grav, h, 1)
    gy = central_diff_field(phi_grav, h, 2)
    vp = visc / phi
    rhs1 = adv1 + g * gx - vp * visc1
    rhs2 = adv2 + g * gy - vp * visc2
    return rhs1, rhs2


def step_fields(
    phi, u1, u2,
    phi_new, u1_new, u2_new,
    h, dt, depth, g, visc, gravity_new,
    dir_i, dir_j, ud1, ud2,
    trn_i, trn_j, trn_n1, trn_n2, c_speed,
    work=None,
):
    """One full time step: continuity, interior momentum, boundary values.

    Writes the level k+1 fields into the ``*_new`` arrays and returns a
    status code (see module docstring).  ``work`` exists for signature
    parity with the compiled backend and is unused here.
    """
    with np.errstate(invalid="ignore", over="ignore"):
        return _step_fields_impl(
            phi, u1, u2, phi_new, u1_new, u2_new,
            h, dt, depth, g, visc, gravity_new,
            dir_i, dir_j, ud1, ud2,
            trn_i, trn_j, trn_n1, trn_n2, c_speed,
        )


def _step_fields_impl(
    phi, u1, u2,
    phi_new, u1_new, u2_new,
    h, dt, depth, g, visc, gravity_new,
    dir_i, dir_j, ud1, ud2,
    trn_i, trn_j, trn_n1, trn_n2, c_speed,
):
    continuity_update(phi, u1, u2, h, dt, out=phi_new)

    inner = (slice(1, -1), slice(1, -1))
    if np.min(phi[inner]) <= 0.0:
        return STATUS_DRY_INTERIOR

    phi_grav = phi_new if gravity_new else phi
    rhs1, rhs2 = momentum_rhs(phi, u1, u2, phi_grav, h, g, visc)
    u1_new[inner] = u1[inner] - dt * rhs1[inner]
    u2_new[inner] = u2[inner] - dt * rhs2[inner]

    u1_new[dir_i, dir_j] = ud1
    u2_new[dir_i, dir_j] = ud2
    if len(trn_i):
        phi_b = phi_new[trn_i, trn_j]
        if not np.isfinite(phi_b).all():
            return STATUS_NONFINITE
        if np.min(phi_b) <= 0.0:
            return STATUS_DRY_TRANSMISSION
        speed = c_speed * (phi_b - depth) / phi_b
        u1_new[trn_i, trn_j] = speed * trn_n1
        u2_new[trn_i, trn_j] = speed * trn_n2

    total = phi_new.sum() + u1_new.sum() + u2_new.sum()
    if not np.isfinite(total):
        return STATUS_NONFINITE
    return STATUS_OK


def dissipation_cell_sum(phi, u1, u2, h, voigt=True):
    """Sum over cells of (interpolated phi at center) * squared strain rate.

    Unscaled; the caller multiplies by -2 * mu * h^2.  With ``voigt``
    (the default) the shear term enters with the engineering weight
    (2*d12)^2, matching the published reference diagnostics; otherwise
    the tensor Frobenius norm d11^2 + d22^2 + 2*d12^2 is used.
    """
    phic = cell_center_mean(phi)
    d11, dy1 = cell_center_gradient(u1, h)
    dx2, d22 = cell_center_gradient(u2, h)
    d12 = 0.5 * (dy1 + dx2)
    w = 4.0 if voigt else 2.0
    mag2 = d11 * d11 + d22 * d22 + w * (d12 * d12)
    return float(np.sum(phic * mag2))


def energy_sums(phi, u1, u2, eta):
    """Interior sums (phi*|u|^2, eta^2); caller applies rho/2, rho*g/2, h^2."""
    inner = (slice(1, -1), slice(1, -1))
    kin = float(np.sum(phi[inner] * (u1[inner] ** 2 + u2[inner] ** 2)))
    pot = float(np.sum(eta[inner] ** 2))
    return kin, pot
