"""Pure-numpy implementations of the hot grid kernels.

Selected when numba is unavailable or FOSC_DISABLE_NUMBA is set. The
per-point summation order matches the numba backend (diagonal first,
then upper-index bands ascending), so both produce the same values up
to roundoff.
"""

from __future__ import annotations

import numpy as np


def wigner_sym(weights: np.ndarray, x2: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Symmetrized Wigner evaluation; real by construction.

    ``weights[k, n]`` carries c_{n+k} c_n^* (-1)^n sqrt(n!/(n+k)!) and
    is zero for n + k past the truncation. The band sum

        W = 2 e^{-x2/2} [ A_0 + sum_k 2 Re(u^k A_k) ],
        A_k = sum_n weights[k, n] L_n^k(x2),

    with u = sqrt(2)(x - i p) and x2 = 2(x^2 + p^2), pairs each (m, n)
    term with the conjugate of its mirror, halving the work.
    """
    kmax = weights.shape[0] - 1
    total = np.zeros(x2.shape)
    upow = np.ones(u.shape, dtype=np.complex128)
    for k in range(kmax + 1):
        nmax = kmax - k
        band = _band_sum(weights[k, : nmax + 1], k, x2)
        if k == 0:
            total += band.real
        else:
            upow = upow * u
            total += 2.0 * (upow * band).real
    return 2.0 * np.exp(-0.5 * x2) * total


def wigner_naive(weights: np.ndarray, x2: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Plain double sum over both triangles, complex result.

    The lower triangle goes through the negative-upper-index identity
    L_n^{-k}(x) = (-x)^k ((n-k)!/n!) L_{n-k}^k(x), which lands on
    (x2/u)^k band factors; its rounding differs from the conjugate
    shortcut, so the imaginary residue of the result is a live check of
    the special-function path.
    """
    kmax = weights.shape[0] - 1
    total = np.zeros(x2.shape, dtype=np.complex128)
    upow = np.ones(u.shape, dtype=np.complex128)
    safe_u = np.where(u == 0, 1.0, u)
    zero_u = u == 0
    x2pow = np.ones(x2.shape)
    for k in range(kmax + 1):
        nmax = kmax - k
        band = _band_sum(weights[k, : nmax + 1], k, x2)
        if k == 0:
            total += band
            continue
        upow = upow * u
        x2pow = x2pow * x2
        total += upow * band
        lower = np.where(zero_u, 0.0, x2pow / np.where(zero_u, 1.0, upow))
        total += lower * np.conj(band)
    return 2.0 * np.exp(-0.5 * x2) * total


def _band_sum(w: np.ndarray, k: int, x2: np.ndarray) -> np.ndarray:
    """sum_n w[n] L_n^k(x2) by the three-term Laguerre recurrence in n."""
    acc = np.full(x2.shape, w[0], dtype=np.complex128)
    if w.size == 1:
        return acc
    lm1 = np.ones(x2.shape)
    lcur = 1.0 + k - x2
    acc += w[1] * lcur
    for n in range(1, w.size - 1):
        lm1, lcur = lcur, ((2 * n + k + 1 - x2) * lcur - (n + k) * lm1) / (n + 1)
        acc += w[n + 1] * lcur
    return acc


def husimi_abs2(d: np.ndarray, zr: np.ndarray, zi: np.ndarray) -> np.ndarray:
    """e^{-|z|^2} |sum_n d_n conj(z)^n|^2 by Horner evaluation."""
    zc = zr - 1j * zi
    acc = np.full(zc.shape, d[-1], dtype=np.complex128)
    for n in range(d.size - 2, -1, -1):
        acc = acc * zc + d[n]
    return np.exp(-(zr * zr + zi * zi)) * (acc.real**2 + acc.imag**2)


def wavefunction(c: np.ndarray, x: np.ndarray) -> np.ndarray:
    """sum_n c_n phi_n(x) with the oscillator eigenfunction recurrence

    phi_0 = pi^{-1/4} e^{-x^2/2}, phi_{n} = sqrt(2/n) x phi_{n-1}
            - sqrt((n-1)/n) phi_{n-2}.
    """
    p0 = np.pi**-0.25 * np.exp(-0.5 * x * x)
    acc = c[0] * p0
    if c.size == 1:
        return acc.astype(np.complex128)
    p1 = np.sqrt(2.0) * x * p0
    acc = acc + c[1] * p1
    for n in range(2, c.size):
        p0, p1 = p1, np.sqrt(2.0 / n) * x * p1 - np.sqrt((n - 1.0) / n) * p0
        acc = acc + c[n] * p1
    return acc.astype(np.complex128)


def rk4_q_bracket(x0: float, y0: float, lam_over_sinh: float, sinh2: float,
                  dt: float, n_steps: int) -> np.ndarray:
    """Fixed-step RK4 for the q-bracket rotation field.

    State (x, y) with xi = (x + i y)/sqrt(2); the field rotates at
    Omega = lam_over_sinh * sqrt(1 + |xi|^4 sinh2), re-evaluated at
    every stage. Returns the (n_steps+1, 2) path.
    """
    out = np.empty((n_steps + 1, 2))
    out[0, 0] = x0
    out[0, 1] = y0
    x, y = x0, y0

    def deriv(px, py):
        w = 0.5 * (px * px + py * py)  # |xi|^2
        om = lam_over_sinh * np.sqrt(1.0 + w * w * sinh2)
        return om * py, -om * px

    for i in range(1, n_steps + 1):
        k1x, k1y = deriv(x, y)
        k2x, k2y = deriv(x + 0.5 * dt * k1x, y + 0.5 * dt * k1y)
        k3x, k3y = deriv(x + 0.5 * dt * k2x, y + 0.5 * dt * k2y)
        k4x, k4y = deriv(x + dt * k3x, y + dt * k3y)
        x = x + dt * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0
        y = y + dt * (k1y + 2.0 * k2y + 2.0 * k3y + k4y) / 6.0
        out[i, 0] = x
        out[i, 1] = y
    return out
