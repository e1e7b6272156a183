"""Numba-compiled grid kernels (same contracts as _kernels_numpy).

Each function mirrors its numpy twin point for point: per grid point
the diagonal band comes first, then ascending upper-index bands, with
the in-band Laguerre recurrence running over n.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def wigner_sym(weights, x2, u):
    kmax = weights.shape[0] - 1
    npts = x2.shape[0]
    out = np.empty(npts)
    for i in range(npts):
        xv = x2[i]
        uv = u[i]
        total = 0.0
        upow = 1.0 + 0.0j
        for k in range(kmax + 1):
            nmax = kmax - k
            band = _band_sum_point(weights, k, nmax, xv)
            if k == 0:
                total += band.real
            else:
                upow = upow * uv
                total += 2.0 * (upow * band).real
        out[i] = 2.0 * np.exp(-0.5 * xv) * total
    return out


@njit(cache=True)
def wigner_naive(weights, x2, u):
    kmax = weights.shape[0] - 1
    npts = x2.shape[0]
    out = np.empty(npts, dtype=np.complex128)
    for i in range(npts):
        xv = x2[i]
        uv = u[i]
        total = 0.0 + 0.0j
        upow = 1.0 + 0.0j
        x2pow = 1.0
        for k in range(kmax + 1):
            nmax = kmax - k
            band = _band_sum_point(weights, k, nmax, xv)
            if k == 0:
                total += band
                continue
            upow = upow * uv
            x2pow = x2pow * xv
            total += upow * band
            if uv != 0:
                total += (x2pow / upow) * np.conj(band)
        out[i] = 2.0 * np.exp(-0.5 * xv) * total
    return out


@njit(cache=True)
def _band_sum_point(weights, k, nmax, xv):
    acc = weights[k, 0] + 0.0j
    if nmax == 0:
        return acc
    lm1 = 1.0
    lcur = 1.0 + k - xv
    acc += weights[k, 1] * lcur
    for n in range(1, nmax):
        lnew = ((2 * n + k + 1 - xv) * lcur - (n + k) * lm1) / (n + 1)
        lm1 = lcur
        lcur = lnew
        acc += weights[k, n + 1] * lcur
    return acc


@njit(cache=True)
def husimi_abs2(d, zr, zi):
    npts = zr.shape[0]
    out = np.empty(npts)
    nd = d.shape[0]
    for i in range(npts):
        zc = zr[i] - 1j * zi[i]
        acc = d[nd - 1] + 0.0j
        for n in range(nd - 2, -1, -1):
            acc = acc * zc + d[n]
        out[i] = np.exp(-(zr[i] * zr[i] + zi[i] * zi[i])) * (
            acc.real * acc.real + acc.imag * acc.imag
        )
    return out


@njit(cache=True)
def wavefunction(c, x):
    npts = x.shape[0]
    nc = c.shape[0]
    out = np.empty(npts, dtype=np.complex128)
    for i in range(npts):
        xv = x[i]
        p0 = np.pi**-0.25 * np.exp(-0.5 * xv * xv)
        acc = c[0] * p0
        if nc > 1:
            p1 = np.sqrt(2.0) * xv * p0
            acc += c[1] * p1
            for n in range(2, nc):
                pn = np.sqrt(2.0 / n) * xv * p1 - np.sqrt((n - 1.0) / n) * p0
                p0 = p1
                p1 = pn
                acc += c[n] * p1
        out[i] = acc
    return out


@njit(cache=True)
def rk4_q_bracket(x0, y0, lam_over_sinh, sinh2, dt, n_steps):
    out = np.empty((n_steps + 1, 2))
    out[0, 0] = x0
    out[0, 1] = y0
    x = x0
    y = y0
    for i in range(1, n_steps + 1):
        k1x, k1y = _q_field(x, y, lam_over_sinh, sinh2)
        k2x, k2y = _q_field(x + 0.5 * dt * k1x, y + 0.5 * dt * k1y,
                            lam_over_sinh, sinh2)
        k3x, k3y = _q_field(x + 0.5 * dt * k2x, y + 0.5 * dt * k2y,
                            lam_over_sinh, sinh2)
        k4x, k4y = _q_field(x + dt * k3x, y + dt * k3y, lam_over_sinh, sinh2)
        x = x + dt * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0
        y = y + dt * (k1y + 2.0 * k2y + 2.0 * k3y + k4y) / 6.0
        out[i, 0] = x
        out[i, 1] = y
    return out


@njit(cache=True)
def _q_field(px, py, lam_over_sinh, sinh2):
    w = 0.5 * (px * px + py * py)
    om = lam_over_sinh * np.sqrt(1.0 + w * w * sinh2)
    return om * py, -om * px
