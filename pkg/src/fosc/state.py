"""Nonlinear coherent states as truncated Fock coefficient sequences.

A state is built from the one-step recurrence
``c_{n+1} sqrt(n+1) f(n+1) = alpha c_n`` and normalized so the
coefficient at the lowest populated level is real positive. Builders
grow the truncation adaptively: the level count stops once the next
term's contribution to the normalization series stays below
``tol * partial_sum`` for eight consecutive terms, and the reported
tail bound comes from a geometric-ratio majorant of the last term.

Zero-sector states (deformations vanishing through a level n0) live on
levels above n0 with truncated factorials; two-mode states couple the
modes through the total occupation number or factorize exactly as a
tensor product. Summation is ascending in n throughout, so repeated
builds are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _serialize
from ._numutil import simpson_weights
from .deformation import (
    DeformationSpec,
    convergence_radius,
    energy_levels,
    eval_f,
    f_log_factorial_array,
    spec_from_json,
    spec_to_json,
)
from .errors import (
    DegenerateAmplitude,
    NonconvergentNormalization,
    OutsideConvergenceRadius,
    SpecMismatch,
    TruncationCapExceeded,
    ZeroCoefficient,
    ZeroInRange,
    ZeroSectorMisuse,
)

DEFAULT_TOL = 1e-12
DEFAULT_N_CAP = 4096
DEFAULT_RADIUS_MARGIN = 1e-3
_STREAK = 8  # consecutive negligible terms required to stop


@dataclass(frozen=True)
class Truncation:
    """Adaptive truncation report: highest level kept, relative tail."""

    n_top: int
    tail_bound: float
    tol: float
    converged: bool

    def to_json(self) -> dict:
        return {
            "N": self.n_top,
            "tail_bound": self.tail_bound,
            "tol": self.tol,
            "converged": self.converged,
        }

    @staticmethod
    def from_json(obj: dict) -> "Truncation":
        return Truncation(
            int(obj["N"]), float(obj["tail_bound"]), float(obj["tol"]),
            bool(obj["converged"]),
        )


@dataclass(frozen=True, eq=False)
class FCoherentState:
    """Normalized single-mode state: amplitude, spec and c_0..c_N.

    ``norm_const`` is the positive normalization constant (equal to c_0
    for non-sector states). For evolved states the stored alpha labels
    the state the evolution started from; the coefficients carry the
    acquired phases.
    """

    alpha: complex
    spec: DeformationSpec
    coeffs: np.ndarray
    norm_const: float
    truncation: Truncation

    @property
    def n_top(self) -> int:
        return self.truncation.n_top


@dataclass(frozen=True, eq=False)
class TwoModeFCoherentState:
    """Two-mode state: joint (total-number-coupled) or exact product."""

    alpha1: complex
    alpha2: complex
    mode: str  # "joint" | "product"
    coeffs: np.ndarray  # c[n1, n2]
    c00: float
    truncation: Truncation
    spec: Optional[DeformationSpec] = None  # joint
    spec1: Optional[DeformationSpec] = None  # product
    spec2: Optional[DeformationSpec] = None


def _check_tol(tol: float) -> None:
    if not (0.0 < tol <= 1e-2):
        raise ValueError(f"tol must lie in (0, 1e-2], got {tol}")


def _check_radius(spec: DeformationSpec, rho: float, margin: float) -> None:
    radius = convergence_radius(spec)
    if math.isfinite(radius) and rho >= (1.0 - margin) * radius:
        raise OutsideConvergenceRadius(
            f"|alpha| = {rho:.6g} is not below (1 - {margin:g}) * radius = "
            f"{(1.0 - margin) * radius:.6g}"
        )


def _tail_bound(t_last: float, t_prev: float, total: float):
    # geometric majorant: remaining terms bounded by t_last * r/(1-r)
    if t_last == 0.0:
        return 0.0
    r = t_last / t_prev if t_prev > 0.0 else 1.0
    if r >= 1.0:
        return math.inf
    return t_last * r / (1.0 - r) / total


def build_state(
    spec: DeformationSpec,
    alpha: complex,
    tol: float = DEFAULT_TOL,
    n_cap: int = DEFAULT_N_CAP,
    radius_margin: float = DEFAULT_RADIUS_MARGIN,
) -> FCoherentState:
    """Build the normalized eigenstate of A = a f(n̂) with eigenvalue alpha.

    Raises OutsideConvergenceRadius for amplitudes at or past
    ``(1 - radius_margin) * radius``, TruncationCapExceeded when the
    adaptive level count would pass ``n_cap``, and ZeroSectorMisuse for
    zero-sector specs (use :func:`build_sector_state`).
    """
    _check_tol(tol)
    if spec.has_zero_sector():
        raise ZeroSectorMisuse(
            "spec has a zero sector; build_sector_state handles those states"
        )
    alpha = complex(alpha)
    _check_radius(spec, abs(alpha), radius_margin)

    coeffs = [1.0 + 0.0j]
    terms = [1.0]
    total = 1.0
    streak = 0
    n = 0
    while streak < _STREAK:
        n += 1
        if n > n_cap:
            raise TruncationCapExceeded(
                f"normalization series still converging at the cap N = {n_cap}"
            )
        f = eval_f(spec, n)
        if f == 0.0:
            raise ZeroInRange(f"f({n}) = 0 without a declared zero sector")
        c = coeffs[-1] * alpha / (math.sqrt(n) * f)
        t = c.real * c.real + c.imag * c.imag
        coeffs.append(c)
        terms.append(t)
        total += t
        streak = streak + 1 if t < tol * total else 0

    tail = _tail_bound(terms[-1], terms[-2], total)
    arr = np.asarray(coeffs) / math.sqrt(total)
    trunc = Truncation(n_top=n, tail_bound=tail, tol=tol, converged=tail <= tol)
    return FCoherentState(alpha, spec, arr, 1.0 / math.sqrt(total), trunc)


def build_sector_state(
    spec: DeformationSpec,
    alpha: complex,
    tol: float = DEFAULT_TOL,
    n_cap: int = DEFAULT_N_CAP,
    radius_margin: float = DEFAULT_RADIUS_MARGIN,
) -> FCoherentState:
    """State living on the levels above a zero sector ending at n0.

    Coefficients use the truncated factorials n (n-1) ... (n0+1) and
    f(n) ... f(n0+1); levels 0..n0 are exactly zero.
    """
    _check_tol(tol)
    if not spec.has_zero_sector():
        raise ZeroSectorMisuse("build_sector_state needs a zero_sector spec")
    alpha = complex(alpha)
    if alpha == 0:
        raise DegenerateAmplitude(
            "alpha = 0 leaves no surviving term above the zero sector"
        )
    _check_radius(spec, abs(alpha), radius_margin)

    n0 = spec.sector_start
    first = n0 + 1
    f1 = eval_f(spec, first)
    b = alpha**first / (math.sqrt(first) * f1)
    coeffs = [0.0 + 0.0j] * first + [b]
    t0 = b.real * b.real + b.imag * b.imag
    terms = [t0]
    total = t0
    streak = 0
    n = first
    while streak < _STREAK:
        n += 1
        if n > n_cap + first:
            raise TruncationCapExceeded(
                f"sector series still converging at the cap N = {n_cap + first}"
            )
        f = eval_f(spec, n)
        c = coeffs[-1] * alpha / (math.sqrt(n) * f)
        t = c.real * c.real + c.imag * c.imag
        coeffs.append(c)
        terms.append(t)
        total += t
        streak = streak + 1 if t < tol * total else 0

    tail = _tail_bound(terms[-1], terms[-2], total)
    arr = np.asarray(coeffs) / math.sqrt(total)
    trunc = Truncation(n_top=n, tail_bound=tail, tol=tol, converged=tail <= tol)
    return FCoherentState(alpha, spec, arr, 1.0 / math.sqrt(total), trunc)


def inner_product(a: FCoherentState, b: FCoherentState) -> complex:
    """<a|b> summed ascending over the common truncation."""
    if a.spec != b.spec:
        raise SpecMismatch("inner product needs states with one shared spec")
    m = min(len(a.coeffs), len(b.coeffs))
    acc = 0.0 + 0.0j
    for n in range(m):
        acc += a.coeffs[n].conjugate() * b.coeffs[n]
    return complex(acc)


def f_from_coefficients(C: Sequence[float]) -> np.ndarray:
    """Deformation recovered from positive coefficients C_n of sum C_n alpha^n |n>.

    Returns an array aligned with n; entry 0 carries the conventional
    f(0) = 1 (not determined by the coefficients).
    """
    C = np.asarray(C, dtype=float)
    if C.size < 2:
        raise ValueError("need at least C_0 and C_1")
    if np.any(C == 0.0):
        raise ZeroCoefficient("coefficient inversion undefined where C_n = 0")
    out = np.empty(C.size)
    out[0] = 1.0
    n = np.arange(1, C.size)
    out[1:] = C[:-1] / (C[1:] * np.sqrt(n))
    return out


def evolve(state: FCoherentState, t: float) -> FCoherentState:
    """Phase-only Schroedinger evolution under H(n) = [n f(n)^2 + (n+1) f(n+1)^2]/2.

    Every |c_n| is preserved; only phases rotate.
    """
    energies = energy_levels(state.spec, 1.0, state.n_top)
    phases = np.exp(-1j * t * energies)
    return FCoherentState(
        state.alpha, state.spec, state.coeffs * phases, state.norm_const,
        state.truncation,
    )


# ----------------------------------------------------------------------
# two-mode states
# ----------------------------------------------------------------------

def _series_truncation(spec, rho, tol, n_cap):
    """Adaptive N for the normalization series at radial amplitude rho."""
    term = 1.0
    total = 1.0
    streak = 0
    n = 0
    prev = term
    while streak < _STREAK:
        n += 1
        if n > n_cap:
            raise TruncationCapExceeded(
                f"normalization series still converging at the cap N = {n_cap}"
            )
        f = eval_f(spec, n)
        if f == 0.0:
            raise ZeroInRange(f"f({n}) = 0 without a declared zero sector")
        prev = term
        term = term * (rho * rho) / (n * f * f)
        total += term
        streak = streak + 1 if term < tol * total else 0
    tail = _tail_bound(term, prev, total)
    return n, tail, tail <= tol


def build_two_mode_joint(
    spec: DeformationSpec,
    alpha1: complex,
    alpha2: complex,
    tol: float = DEFAULT_TOL,
    n_cap: int = DEFAULT_N_CAP,
    radius_margin: float = DEFAULT_RADIUS_MARGIN,
) -> TwoModeFCoherentState:
    """Joint state with f evaluated at the total occupation n1 + n2.

    The normalization double series collapses (binomial identity) to
    the single-mode series at sqrt(|alpha1|^2 + |alpha2|^2), which sets
    both the convergence requirement and the truncation.
    """
    _check_tol(tol)
    if spec.has_zero_sector():
        raise ZeroSectorMisuse("two-mode builder supports regular specs only")
    alpha1 = complex(alpha1)
    alpha2 = complex(alpha2)
    rho_eff = math.hypot(abs(alpha1), abs(alpha2))
    _check_radius(spec, rho_eff, radius_margin)
    n_top, tail, conv = _series_truncation(spec, rho_eff, tol, n_cap)

    n = np.arange(n_top + 1)
    lgam = np.array([math.lgamma(k + 1) for k in n])
    lff = f_log_factorial_array(spec, 2 * n_top)
    log_w = -0.5 * np.add.outer(lgam, lgam) - lff[np.add.outer(n, n)]
    amps = np.power(alpha1, n)[:, None] * np.power(alpha2, n)[None, :]
    raw = amps * np.exp(log_w)
    total = float(np.sum(raw.real**2 + raw.imag**2))
    coeffs = raw / math.sqrt(total)
    trunc = Truncation(n_top=n_top, tail_bound=tail, tol=tol, converged=conv)
    return TwoModeFCoherentState(
        alpha1, alpha2, "joint", coeffs, float(coeffs[0, 0].real), trunc, spec=spec,
    )


def build_two_mode_product(
    spec1: DeformationSpec,
    spec2: DeformationSpec,
    alpha1: complex,
    alpha2: complex,
    tol: float = DEFAULT_TOL,
    n_cap: int = DEFAULT_N_CAP,
    radius_margin: float = DEFAULT_RADIUS_MARGIN,
) -> TwoModeFCoherentState:
    """Exact tensor product of two single-mode states."""
    s1 = build_state(spec1, alpha1, tol, n_cap, radius_margin)
    s2 = build_state(spec2, alpha2, tol, n_cap, radius_margin)
    coeffs = np.outer(s1.coeffs, s2.coeffs)
    trunc = Truncation(
        n_top=max(s1.n_top, s2.n_top),
        tail_bound=s1.truncation.tail_bound + s2.truncation.tail_bound,
        tol=tol,
        converged=s1.truncation.converged and s2.truncation.converged,
    )
    return TwoModeFCoherentState(
        complex(alpha1), complex(alpha2), "product", coeffs,
        float(coeffs[0, 0].real), trunc, spec1=spec1, spec2=spec2,
    )


# ----------------------------------------------------------------------
# diagonal-measure moment equations
# ----------------------------------------------------------------------

_MOMENT_TERM_CAP = 200_000


def moment_residuals(
    spec: DeformationSpec,
    rho: Sequence[float],
    mu: Sequence[float],
    n_max: int,
) -> np.ndarray:
    """Relative residuals of the diagonal-measure moment equations.

    For each n <= n_max compares
    2 pi * integral rho^(2n+1) N(rho)^2 mu(rho) d rho against
    n! ([f(n)]!)^2 by composite Simpson quadrature on the supplied
    uniform samples; returns (integral - target) / target. Diagnostic
    only: no pass/fail judgement is made here.
    """
    rho = np.asarray(rho, dtype=float)
    mu = np.asarray(mu, dtype=float)
    if rho.ndim != 1 or rho.size < 3 or rho.shape != mu.shape:
        raise ValueError("need matching 1-D rho and mu samples, at least 3 points")
    h = rho[1] - rho[0]
    if h <= 0 or not np.allclose(np.diff(rho), h, rtol=1e-9, atol=1e-12):
        raise ValueError("rho samples must form a uniform ascending grid")

    ln_norm2 = _log_norm_series(spec, rho)
    weights = simpson_weights(rho.size) * h
    lff = f_log_factorial_array(spec, n_max)
    out = np.empty(n_max + 1)
    for n in range(n_max + 1):
        integrand = rho ** (2 * n + 1) * np.exp(-ln_norm2) * mu
        integral = 2.0 * math.pi * float(np.dot(weights, integrand))
        target = math.exp(math.lgamma(n + 1) + 2.0 * lff[n])
        out[n] = (integral - target) / target
    return out


def _log_norm_series(spec, rho):
    """log sum_j rho^(2j) / (j! ([f(j)]!)^2) per sample, adaptively."""
    total = np.ones_like(rho)  # j = 0 term
    term = np.ones_like(rho)
    j = 0
    while True:
        j += 1
        if j > _MOMENT_TERM_CAP:
            raise NonconvergentNormalization(
                "normalization series did not converge on the given support"
            )
        f = eval_f(spec, j)
        if f == 0.0:
            raise ZeroInRange(f"f({j}) = 0 without a declared zero sector")
        term = term * rho * rho / (j * f * f)
        total += term
        if np.max(term / total) < 1e-18:
            break
    return np.log(total)


# ----------------------------------------------------------------------
# state files
# ----------------------------------------------------------------------

def state_to_json(state: FCoherentState) -> dict:
    return {
        "alpha": _serialize.complex_to_json(state.alpha),
        "spec": spec_to_json(state.spec),
        "coeffs": [[float(c.real), float(c.imag)] for c in state.coeffs],
        "norm_const": float(state.norm_const),
        "truncation": state.truncation.to_json(),
    }


def state_from_json(obj: dict, radius_margin: float = DEFAULT_RADIUS_MARGIN) -> FCoherentState:
    """Rebuild a state from its file form, re-validating the radius rule."""
    alpha = _serialize.complex_from_json(obj["alpha"])
    spec = spec_from_json(obj["spec"])
    _check_radius(spec, abs(alpha), radius_margin)
    coeffs = np.array([complex(re, im) for re, im in obj["coeffs"]])
    return FCoherentState(
        alpha, spec, coeffs, float(obj["norm_const"]),
        Truncation.from_json(obj["truncation"]),
    )


def two_mode_to_json(state: TwoModeFCoherentState) -> dict:
    out = {
        "mode": state.mode,
        "alpha1": _serialize.complex_to_json(state.alpha1),
        "alpha2": _serialize.complex_to_json(state.alpha2),
    }
    if state.mode == "joint":
        out["spec"] = spec_to_json(state.spec)
    else:
        out["spec1"] = spec_to_json(state.spec1)
        out["spec2"] = spec_to_json(state.spec2)
    out["coeffs"] = [
        [[float(c.real), float(c.imag)] for c in row] for row in state.coeffs
    ]
    out["c00"] = float(state.c00)
    out["truncation"] = state.truncation.to_json()
    return out


def two_mode_from_json(obj: dict) -> TwoModeFCoherentState:
    mode = obj["mode"]
    coeffs = np.array(
        [[complex(re, im) for re, im in row] for row in obj["coeffs"]]
    )
    kw = {}
    if mode == "joint":
        kw["spec"] = spec_from_json(obj["spec"])
    else:
        kw["spec1"] = spec_from_json(obj["spec1"])
        kw["spec2"] = spec_from_json(obj["spec2"])
    return TwoModeFCoherentState(
        _serialize.complex_from_json(obj["alpha1"]),
        _serialize.complex_from_json(obj["alpha2"]),
        mode, coeffs, float(obj["c00"]),
        Truncation.from_json(obj["truncation"]), **kw,
    )
