# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled per-step kernels (Cython).

Same contract and the same arithmetic, node for node, as the NumPy
fallback in ``_kernels_np`` (see its docstring for the status codes).
The extension is compiled with FP contraction disabled so results match
the fallback bitwise.
"""

from libc.math cimport isfinite
from libc.stdint cimport int32_t

import numpy as np

NAME = "cython"

cdef enum:
    _OK = 0
    _DRY_INTERIOR = 1
    _DRY_TRANSMISSION = 2
    _NONFINITE = 3

STATUS_OK = _OK
STATUS_DRY_INTERIOR = _DRY_INTERIOR
STATUS_DRY_TRANSMISSION = _DRY_TRANSMISSION
STATUS_NONFINITE = _NONFINITE


cdef inline double _cdx(const double[:, ::1] f, Py_ssize_t i, Py_ssize_t j,
                        Py_ssize_t n, double inv_h, double inv_2h) noexcept nogil:
    # central difference along axis 1, one-sided at the walls
    if i == 0:
        return (f[1, j] - f[0, j]) * inv_h
    if i == n:
        return (f[n, j] - f[n - 1, j]) * inv_h
    return (f[i + 1, j] - f[i - 1, j]) * inv_2h


cdef inline double _cdy(const double[:, ::1] f, Py_ssize_t i, Py_ssize_t j,
                        Py_ssize_t n, double inv_h, double inv_2h) noexcept nogil:
    if j == 0:
        return (f[i, 1] - f[i, 0]) * inv_h
    if j == n:
        return (f[i, n] - f[i, n - 1]) * inv_h
    return (f[i, j + 1] - f[i, j - 1]) * inv_2h


cdef inline double _upx(const double[:, ::1] f, double vel, Py_ssize_t i,
                        Py_ssize_t j, Py_ssize_t n, double inv_h, double inv_2h) noexcept nogil:
    # upwind along axis 1; every branch collapses to one-sided at a wall
    if i == 0:
        return (f[1, j] - f[0, j]) * inv_h
    if i == n:
        return (f[n, j] - f[n - 1, j]) * inv_h
    if vel > 0.0:
        return (f[i, j] - f[i - 1, j]) * inv_h
    if vel < 0.0:
        return (f[i + 1, j] - f[i, j]) * inv_h
    return (f[i + 1, j] - f[i - 1, j]) * inv_2h


cdef inline double _upy(const double[:, ::1] f, double vel, Py_ssize_t i,
                        Py_ssize_t j, Py_ssize_t n, double inv_h, double inv_2h) noexcept nogil:
    if j == 0:
        return (f[i, 1] - f[i, 0]) * inv_h
    if j == n:
        return (f[i, n] - f[i, n - 1]) * inv_h
    if vel > 0.0:
        return (f[i, j] - f[i, j - 1]) * inv_h
    if vel < 0.0:
        return (f[i, j + 1] - f[i, j]) * inv_h
    return (f[i, j + 1] - f[i, j - 1]) * inv_2h


def step_fields(
    const double[:, ::1] phi, const double[:, ::1] u1, const double[:, ::1] u2,
    double[:, ::1] phi_new, double[:, ::1] u1_new, double[:, ::1] u2_new,
    double h, double dt, double depth, double g, double visc, bint gravity_new,
    const int32_t[::1] dir_i, const int32_t[::1] dir_j, double ud1, double ud2,
    const int32_t[::1] trn_i, const int32_t[::1] trn_j,
    const double[::1] trn_n1, const double[::1] trn_n2, double c_speed,
    work=None,
):
    """One full time step (continuity, interior momentum, boundary values).

    ``work`` is optional scratch of shape (3, N+1, N+1) for the stress
    tensor; pass it when stepping in a loop to avoid per-step allocation.
    """
    cdef Py_ssize_t n = phi.shape[0] - 1
    cdef Py_ssize_t i, j, m
    cdef double div, adv, p, d11, d22, d12, vp
    cdef double a1, a2, v1, v2, gx, gy, r1, r2, pb, speed
    cdef double inv_h = 1.0 / h
    cdef double inv_2h = 1.0 / (2.0 * h)
    cdef double total = 0.0
    cdef int status = _OK

    if work is None:
        work = np.empty((3, n + 1, n + 1))
    cdef double[:, :, ::1] tt = work

    with nogil:
        # continuity on every node
        for i in range(n + 1):
            for j in range(n + 1):
                div = _cdx(u1, i, j, n, inv_h, inv_2h) + _cdy(u2, i, j, n, inv_h, inv_2h)
                adv = u1[i, j] * _upx(phi, u1[i, j], i, j, n, inv_h, inv_2h) \
                    + u2[i, j] * _upy(phi, u2[i, j], i, j, n, inv_h, inv_2h)
                phi_new[i, j] = phi[i, j] - dt * (div * phi[i, j] + adv)

        # dry check on the level-k interior before dividing by phi
        for i in range(1, n):
            if status != _OK:
                break
            for j in range(1, n):
                if phi[i, j] <= 0.0:
                    status = _DRY_INTERIOR
                    break

        if status == _OK:
            # stress tensor phi * D(u) on every node (one-sided at walls)
            for i in range(n + 1):
                for j in range(n + 1):
                    p = phi[i, j]
                    d11 = _cdx(u1, i, j, n, inv_h, inv_2h)
                    d22 = _cdy(u2, i, j, n, inv_h, inv_2h)
                    d12 = 0.5 * (_cdy(u1, i, j, n, inv_h, inv_2h) + _cdx(u2, i, j, n, inv_h, inv_2h))
                    tt[0, i, j] = p * d11
                    tt[1, i, j] = p * d12
                    tt[2, i, j] = p * d22

            # interior momentum update; all stencil neighbors exist
            for i in range(1, n):
                for j in range(1, n):
                    p = phi[i, j]
                    a1 = u1[i, j] * ((u1[i + 1, j] - u1[i - 1, j]) * inv_2h) \
                        + u2[i, j] * ((u1[i, j + 1] - u1[i, j - 1]) * inv_2h)
                    a2 = u1[i, j] * ((u2[i + 1, j] - u2[i - 1, j]) * inv_2h) \
                        + u2[i, j] * ((u2[i, j + 1] - u2[i, j - 1]) * inv_2h)
                    v1 = (tt[0, i + 1, j] - tt[0, i - 1, j]) * inv_2h \
                        + (tt[1, i, j + 1] - tt[1, i, j - 1]) * inv_2h
                    v2 = (tt[1, i + 1, j] - tt[1, i - 1, j]) * inv_2h \
                        + (tt[2, i, j + 1] - tt[2, i, j - 1]) * inv_2h
                    if gravity_new:
                        gx = (phi_new[i + 1, j] - phi_new[i - 1, j]) * inv_2h
                        gy = (phi_new[i, j + 1] - phi_new[i, j - 1]) * inv_2h
                    else:
                        gx = (phi[i + 1, j] - phi[i - 1, j]) * inv_2h
                        gy = (phi[i, j + 1] - phi[i, j - 1]) * inv_2h
                    vp = visc / p
                    r1 = a1 + g * gx - vp * v1
                    r2 = a2 + g * gy - vp * v2
                    u1_new[i, j] = u1[i, j] - dt * r1
                    u2_new[i, j] = u2[i, j] - dt * r2

            # boundary values: Dirichlet walls then transmission outflow
            for m in range(dir_i.shape[0]):
                u1_new[dir_i[m], dir_j[m]] = ud1
                u2_new[dir_i[m], dir_j[m]] = ud2

            for m in range(trn_i.shape[0]):
                pb = phi_new[trn_i[m], trn_j[m]]
                if not isfinite(pb):
                    status = _NONFINITE
                    break
            if status == _OK:
                for m in range(trn_i.shape[0]):
                    pb = phi_new[trn_i[m], trn_j[m]]
                    if pb <= 0.0:
                        status = _DRY_TRANSMISSION
                        break
            if status == _OK:
                for m in range(trn_i.shape[0]):
                    pb = phi_new[trn_i[m], trn_j[m]]
                    speed = c_speed * (pb - depth) / pb
                    u1_new[trn_i[m], trn_j[m]] = speed * trn_n1[m]
                    u2_new[trn_i[m], trn_j[m]] = speed * trn_n2[m]

        if status == _OK:
            for i in range(n + 1):
                for j in range(n + 1):
                    total += phi_new[i, j] + u1_new[i, j] + u2_new[i, j]
            if not isfinite(total):
                status = _NONFINITE

    return status


def dissipation_cell_sum(const double[:, ::1] phi, const double[:, ::1] u1,
                         const double[:, ::1] u2, double h, bint voigt=True):
    """Sum over cells of (interpolated phi at center) * squared strain rate.

    ``voigt`` selects the engineering shear weight (2*d12)^2 used by the
    published reference diagnostics; otherwise the tensor Frobenius norm.
    """
    cdef Py_ssize_t n = phi.shape[0] - 1
    cdef Py_ssize_t i, j
    cdef double phic, d11, d22, d12, dy1, dx2, acc = 0.0
    cdef double w = 4.0 if voigt else 2.0
    cdef double inv_2h = 1.0 / (2.0 * h)
    with nogil:
        for i in range(n):
            for j in range(n):
                phic = 0.25 * (phi[i, j] + phi[i + 1, j] + phi[i, j + 1] + phi[i + 1, j + 1])
                d11 = ((u1[i + 1, j] + u1[i + 1, j + 1]) - (u1[i, j] + u1[i, j + 1])) * inv_2h
                dy1 = ((u1[i, j + 1] + u1[i + 1, j + 1]) - (u1[i, j] + u1[i + 1, j])) * inv_2h
                dx2 = ((u2[i + 1, j] + u2[i + 1, j + 1]) - (u2[i, j] + u2[i, j + 1])) * inv_2h
                d22 = ((u2[i, j + 1] + u2[i + 1, j + 1]) - (u2[i, j] + u2[i + 1, j])) * inv_2h
                d12 = 0.5 * (dy1 + dx2)
                acc += phic * (d11 * d11 + d22 * d22 + w * (d12 * d12))
    return acc


def energy_sums(const double[:, ::1] phi, const double[:, ::1] u1,
                const double[:, ::1] u2, const double[:, ::1] eta):
    """Interior sums (phi*|u|^2, eta^2); caller applies the prefactors."""
    cdef Py_ssize_t n = phi.shape[0] - 1
    cdef Py_ssize_t i, j
    cdef double kin = 0.0, pot = 0.0
    with nogil:
        for i in range(1, n):
            for j in range(1, n):
                kin += phi[i, j] * (u1[i, j] * u1[i, j] + u2[i, j] * u2[i, j])
                pot += eta[i, j] * eta[i, j]
    return kin, pot
