"""Coordinate wavefunctions, Bargmann overlaps, Wigner and Husimi fields.

Everything is evaluated from the state's Fock coefficients (the
unambiguous density-matrix route), so built, evolved and zero-sector
states all go through the same code. Conventions, fixed by the vacuum
and coherent-state oracles rather than assumed:

* Wigner: ``W(x, p) = 2 e^{-(x^2+p^2)} sum_{m,n} c_m c_n^* (-1)^n
  sqrt(n!/m!) [sqrt(2)(x - i p)]^{m-n} L_n^{m-n}(2(x^2+p^2))``
  with the negative upper index handled through
  ``L_n^{-k}(x) = (-x)^k ((n-k)!/n!) L_{n-k}^k(x)``; the vacuum gives
  ``2 e^{-(x^2+p^2)}`` and ``(1/2pi) \\iint W dx dp = 1``.
* Husimi: the grid is read as the plane z = (x + i p)/sqrt(2);
  ``Q = |<z|state>|^2`` with ``(1/pi) \\iint Q d^2z = 1``.

The production Wigner path sums the m >= n triangle and adds conjugates
(real by construction); the naive double sum over both triangles stays
available as an oracle and is where the reality check lives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from ._numutil import simpson_weights
from .errors import RealityViolation
from .state import FCoherentState

WAVEFUNCTION = "wavefunction"
WIGNER = "wigner"
HUSIMI = "husimi"

#: imaginary residue above this signals a special-function bug
REALITY_BOUND = 1e-9


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Uniform rectangular (x, p) grid; nx, np >= 2 points per axis."""

    x_min: float
    x_max: float
    nx: int
    p_min: float
    p_max: float
    np: int

    def __post_init__(self):
        if self.nx < 2 or self.np < 2:
            raise ValueError("grid needs at least 2 points per axis")
        if not (self.x_max > self.x_min and self.p_max > self.p_min):
            raise ValueError("grid extents must satisfy max > min")

    def x_values(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    def p_values(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.np)

    def mesh(self):
        """(X, P) arrays of shape (nx, np), x varying along axis 0."""
        return np.meshgrid(self.x_values(), self.p_values(), indexing="ij")


@dataclass(frozen=True, eq=False)
class FieldOnGrid:
    """Real field sampled on a grid, plus its imaginary-residue record."""

    grid: PhaseSpaceGrid
    values: np.ndarray
    kind: str
    max_imag: float = 0.0


def coordinate_wavefunction(
    state: FCoherentState, x_values: Sequence[float]
) -> np.ndarray:
    """psi(x) = sum_n c_n phi_n(x), Hermite by three-term recurrence.

    phi_n are the oscillator eigenfunctions pi^{-1/4} e^{-x^2/2}
    H_n(x)/sqrt(2^n n!); for freshly built states this equals the
    closed-form series in (alpha/sqrt(2))^n / (n! [f(n)]!) exactly.
    """
    x = np.ascontiguousarray(x_values, dtype=float)
    return _kernels.wavefunction(np.ascontiguousarray(state.coeffs), x)


def bargmann_overlap(state: FCoherentState, z: complex) -> complex:
    """<z|state> against the coherent-state basis a|z> = z|z>."""
    z = complex(z)
    acc = 0.0 + 0.0j
    zpow = 1.0 + 0.0j
    for n in range(state.n_top + 1):
        acc += state.coeffs[n] * zpow * math.exp(-0.5 * math.lgamma(n + 1))
        zpow *= z.conjugate()
    return complex(math.exp(-0.5 * abs(z) ** 2) * acc)


def _wigner_weights(coeffs: np.ndarray) -> np.ndarray:
    """Band weights w[k, n] = c_{n+k} c_n^* (-1)^n sqrt(n!/(n+k)!)."""
    m = coeffs.size
    lgam = np.array([math.lgamma(n + 1) for n in range(m)])
    signs = np.where(np.arange(m) % 2 == 0, 1.0, -1.0)
    w = np.zeros((m, m), dtype=np.complex128)
    for k in range(m):
        n = np.arange(m - k)
        w[k, : m - k] = (
            coeffs[k:] * np.conj(coeffs[: m - k]) * signs[: m - k]
            * np.exp(0.5 * (lgam[: m - k] - lgam[k:]))
        )
    return w


def wigner(
    state: FCoherentState, grid: PhaseSpaceGrid, method: str = "symmetrized"
) -> FieldOnGrid:
    """Wigner field on the grid.

    ``method="symmetrized"`` (production) folds each m < n term into the
    conjugate of its mirror and is real by construction;
    ``method="naive"`` evaluates both triangles independently (the lower
    one through the negative-index Laguerre identity) and raises
    RealityViolation if the imaginary residue exceeds 1e-9.
    """
    xg, pg = grid.mesh()
    x = xg.ravel()
    p = pg.ravel()
    x2 = np.ascontiguousarray(2.0 * (x * x + p * p))
    u = np.ascontiguousarray(math.sqrt(2.0) * (x - 1j * p))
    weights = _wigner_weights(np.ascontiguousarray(state.coeffs))
    if method == "symmetrized":
        vals = _kernels.wigner_sym(weights, x2, u)
        return FieldOnGrid(grid, vals.reshape(xg.shape), WIGNER, 0.0)
    if method == "naive":
        cvals = _kernels.wigner_naive(weights, x2, u)
        resid = float(np.max(np.abs(cvals.imag)))
        if resid > REALITY_BOUND:
            raise RealityViolation(
                f"Wigner imaginary residue {resid:.3e} exceeds {REALITY_BOUND:g}"
            )
        return FieldOnGrid(grid, cvals.real.reshape(xg.shape), WIGNER, resid)
    raise ValueError(f"unknown wigner method {method!r}")


def husimi(state: FCoherentState, grid: PhaseSpaceGrid) -> FieldOnGrid:
    """Husimi field; the grid is the plane z = (x + i p)/sqrt(2).

    Q(z) = e^{-|z|^2} |sum_m c_m conj(z)^m / sqrt(m!)|^2, i.e. exactly
    |bargmann_overlap|^2: the double sum collapses to a squared modulus.
    """
    xg, pg = grid.mesh()
    zr = np.ascontiguousarray(xg.ravel() / math.sqrt(2.0))
    zi = np.ascontiguousarray(pg.ravel() / math.sqrt(2.0))
    m = np.arange(state.coeffs.size)
    d = np.ascontiguousarray(
        state.coeffs * np.exp(-0.5 * np.array([math.lgamma(k + 1) for k in m]))
    )
    vals = _kernels.husimi_abs2(d, zr, zi)
    return FieldOnGrid(grid, vals.reshape(xg.shape), HUSIMI, 0.0)


def normalization_residual(field: FieldOnGrid) -> float:
    """Grid-quadrature departure of the field's normalization from 1.

    Wigner integrates to 2 pi over (x, p); Husimi to pi over z, i.e.
    2 pi over the (x, p) parametrization. Composite Simpson on both
    axes.
    """
    g = field.grid
    wx = simpson_weights(g.nx) * (g.x_values()[1] - g.x_values()[0])
    wp = simpson_weights(g.np) * (g.p_values()[1] - g.p_values()[0])
    integral = float(wx @ field.values @ wp)
    return integral / (2.0 * math.pi) - 1.0


# ----------------------------------------------------------------------
# closed-coefficient specializations (independent evaluation routes)
# ----------------------------------------------------------------------

def _ln_q_bracket_factorial(lam: float, n_max: int) -> np.ndarray:
    """ln [n]! with [j] = sinh(lam j)/sinh(lam), cumulative over n."""
    from .deformation import _lnsinh, _lnsinh_arr  # shared stable log-sinh

    a = abs(lam)
    j = np.arange(1, n_max + 1, dtype=float)
    steps = _lnsinh_arr(a * j) - _lnsinh(a)
    out = np.empty(n_max + 1)
    out[0] = 0.0
    np.cumsum(steps, out=out[1:])
    return out


def _q_coeffs(lam: float, alpha: complex, n_top: int) -> np.ndarray:
    """q-state coefficients alpha^n / sqrt([n]!), normalized directly."""
    lnb = _ln_q_bracket_factorial(lam, n_top)
    n = np.arange(n_top + 1)
    raw = np.power(complex(alpha), n) * np.exp(-0.5 * lnb)
    return raw / math.sqrt(float(np.sum(raw.real**2 + raw.imag**2)))


def _harmonious_coeffs(alpha: complex, n_top: int) -> np.ndarray:
    """Geometric coefficients sqrt(1 - |alpha|^2) alpha^n."""
    alpha = complex(alpha)
    if abs(alpha) >= 1.0:
        raise ValueError("harmonious closed form needs |alpha| < 1")
    n = np.arange(n_top + 1)
    return math.sqrt(1.0 - abs(alpha) ** 2) * np.power(alpha, n)


def _field_from_coeffs(coeffs, grid, kind):
    xg, pg = grid.mesh()
    if kind == WIGNER:
        x = xg.ravel()
        p = pg.ravel()
        x2 = np.ascontiguousarray(2.0 * (x * x + p * p))
        u = np.ascontiguousarray(math.sqrt(2.0) * (x - 1j * p))
        vals = _kernels.wigner_sym(_wigner_weights(coeffs), x2, u)
        return FieldOnGrid(grid, vals.reshape(xg.shape), WIGNER, 0.0)
    zr = np.ascontiguousarray(xg.ravel() / math.sqrt(2.0))
    zi = np.ascontiguousarray(pg.ravel() / math.sqrt(2.0))
    lg = np.array([math.lgamma(k + 1) for k in range(coeffs.size)])
    d = np.ascontiguousarray(coeffs * np.exp(-0.5 * lg))
    vals = _kernels.husimi_abs2(d, zr, zi)
    return FieldOnGrid(grid, vals.reshape(xg.shape), HUSIMI, 0.0)


def wigner_q_form(lam: float, alpha: complex, grid: PhaseSpaceGrid,
                  n_top: int) -> FieldOnGrid:
    """q-oscillator Wigner via the bracket factorial [n]! route.

    Uses coefficients alpha^n / sqrt([n]!) and their own normalization
    sum, bypassing the deformation-spec machinery entirely.
    """
    return _field_from_coeffs(_q_coeffs(lam, alpha, n_top), grid, WIGNER)


def husimi_q_form(lam: float, alpha: complex, grid: PhaseSpaceGrid,
                  n_top: int) -> FieldOnGrid:
    """q-oscillator Husimi: e^{-|z|^2} N_q^2 |sum (conj(z) alpha)^m / sqrt(m! [m]!)|^2."""
    return _field_from_coeffs(_q_coeffs(lam, alpha, n_top), grid, HUSIMI)


def wigner_harmonious_form(alpha: complex, grid: PhaseSpaceGrid,
                           n_top: int) -> FieldOnGrid:
    """Harmonious Wigner from the geometric closed-form coefficients."""
    return _field_from_coeffs(_harmonious_coeffs(alpha, n_top), grid, WIGNER)


def husimi_harmonious_form(alpha: complex, grid: PhaseSpaceGrid,
                           n_top: int) -> FieldOnGrid:
    """Harmonious Husimi: e^{-|z|^2} (1 - |alpha|^2) |sum (conj(z) alpha)^m / sqrt(m!)|^2."""
    return _field_from_coeffs(_harmonious_coeffs(alpha, n_top), grid, HUSIMI)
