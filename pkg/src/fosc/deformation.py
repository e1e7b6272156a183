"""Deformation functions f(n) and the pointwise algebra built on them.

A deformation function is a nonnegative function on the nonnegative
integers; it distorts the oscillator ladder operators into A = a f(n̂).
This module defines the supported families (identity, q-deformed,
harmonious, tabulated, zero-sector), their ladder factorials, the
commutator functions F and G with their inversions, energy levels,
amplitude-dependent transition frequencies, evolution phase factors and
amplitude convergence radii.

All quantities are pure functions of an immutable
:class:`DeformationSpec`; factorial-like products accumulate in log
space so levels past n ~ 170 do not overflow.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DomainError,
    NegativePartialSum,
    TabulatedOutOfRange,
    ZeroInRange,
)

_LN2 = math.log(2.0)

#: kinds accepted by :class:`DeformationSpec`
KINDS = ("identity", "q", "harmonious", "table", "zero_sector")

#: window length and blow-up cutoff for the numeric ratio-test radius
RATIO_TEST_TERMS = 512
RATIO_TEST_CUTOFF = 1e6


def _lnsinh(x: float) -> float:
    """log(sinh(x)) for x > 0, stable for both tiny and huge x."""
    return x - _LN2 + math.log(-math.expm1(-2.0 * x))


def _lnsinh_arr(x: np.ndarray) -> np.ndarray:
    return x - _LN2 + np.log(-np.expm1(-2.0 * x))


@dataclass(frozen=True)
class DeformationSpec:
    """A declared deformation function.

    Fields other than ``kind`` are meaningful only for the kinds that
    use them: ``lam`` (= ln q, any nonzero real) for ``"q"``, ``table``
    for ``"table"``, ``sector_start``/``base`` for ``"zero_sector"``.
    The amplitude convergence radius is computed once at construction
    and cached in ``radius``.
    """

    kind: str
    lam: float = 0.0
    table: Optional[Tuple[float, ...]] = None
    sector_start: int = 0
    base: Optional["DeformationSpec"] = None
    radius: float = field(default=math.inf, init=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown deformation kind {self.kind!r}")
        if self.kind == "q":
            if self.lam == 0.0 or not math.isfinite(self.lam):
                raise ValueError("q deformation needs a nonzero finite lambda")
        if self.kind == "table":
            if not self.table:
                raise ValueError("tabulated deformation needs at least f(0)")
            tab = tuple(float(v) for v in self.table)
            if tab[0] < 0.0 or any(v <= 0.0 for v in tab[1:]):
                # zeros are only legal as a declared zero sector
                raise ValueError("table values must be positive for n >= 1")
            object.__setattr__(self, "table", tab)
        if self.kind == "zero_sector":
            if self.base is None:
                raise ValueError("zero_sector needs a base deformation")
            if self.base.kind == "zero_sector":
                raise ValueError("zero_sector base cannot itself be a zero_sector")
            if self.sector_start < 0:
                raise ValueError("sector_start must be a nonnegative integer")
        object.__setattr__(self, "radius", _radius(self))

    def has_zero_sector(self) -> bool:
        return self.kind == "zero_sector"


def identity() -> DeformationSpec:
    return DeformationSpec("identity")


def q_deform(lam: float) -> DeformationSpec:
    return DeformationSpec("q", lam=float(lam))


def harmonious() -> DeformationSpec:
    return DeformationSpec("harmonious")


def tabulated(values: Sequence[float]) -> DeformationSpec:
    return DeformationSpec("table", table=tuple(float(v) for v in values))


def zero_sector(n0: int, base: DeformationSpec) -> DeformationSpec:
    return DeformationSpec("zero_sector", sector_start=int(n0), base=base)


# ----------------------------------------------------------------------
# pointwise evaluation
# ----------------------------------------------------------------------

def eval_f(spec: DeformationSpec, n: int) -> float:
    """Value of the deformation function at Fock level n.

    f(0) is fixed to 1 for the analytic kinds (it never enters a ladder
    factorial and is otherwise arbitrary); a zero-sector spec returns 0
    for every n <= sector_start and its base function above.
    """
    if n < 0:
        raise DomainError("deformation functions are defined for n >= 0")
    kind = spec.kind
    if kind == "identity":
        return 1.0
    if kind == "q":
        if n == 0:
            return 1.0
        a = abs(spec.lam)
        return math.exp(0.5 * (_lnsinh(a * n) - math.log(n) - _lnsinh(a)))
    if kind == "harmonious":
        return 1.0 if n == 0 else 1.0 / math.sqrt(n)
    if kind == "table":
        if n >= len(spec.table):
            raise TabulatedOutOfRange(
                f"tabulated deformation has {len(spec.table)} values, n={n} requested"
            )
        return spec.table[n]
    # zero sector
    if n <= spec.sector_start:
        return 0.0
    return eval_f(spec.base, n)


def nf2(spec: DeformationSpec, n: int) -> float:
    """n * f(n)^2, the building block of every spectral quantity."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    kind = spec.kind
    if kind == "identity":
        return float(n)
    if kind == "q":
        if n == 0:
            return 0.0
        a = abs(spec.lam)
        return math.exp(_lnsinh(a * n) - _lnsinh(a))
    if kind == "harmonious":
        return 0.0 if n == 0 else 1.0
    if kind == "table":
        return n * eval_f(spec, n) ** 2
    if n <= spec.sector_start:
        return 0.0
    return nf2(spec.base, n)


def nf2_array(spec: DeformationSpec, n: np.ndarray) -> np.ndarray:
    """Vectorized ``nf2`` over an integer array (used by thermal sums)."""
    n = np.asarray(n)
    kind = spec.kind
    if kind == "identity":
        return n.astype(float)
    if kind == "q":
        a = abs(spec.lam)
        pos = np.maximum(n, 1).astype(float)
        vals = np.exp(_lnsinh_arr(a * pos) - _lnsinh(a))
        return np.where(n == 0, 0.0, vals)
    if kind == "harmonious":
        return np.where(n == 0, 0.0, 1.0)
    if kind == "table":
        if n.size and n.max() >= len(spec.table):
            raise TabulatedOutOfRange(
                f"tabulated deformation has {len(spec.table)} values, "
                f"n={int(n.max())} requested"
            )
        tab = np.asarray(spec.table)
        return n * tab[n] ** 2
    return np.where(n <= spec.sector_start, 0.0, nf2_array(spec.base, n))


def _lnf_values(spec: DeformationSpec, n_max: int) -> np.ndarray:
    """ln f(j) for j = 1..n_max (index 0 unused, set to 0); -inf marks zeros."""
    out = np.zeros(n_max + 1)
    kind = spec.kind
    j = np.arange(1, n_max + 1, dtype=float)
    if kind == "identity":
        return out
    if kind == "q":
        a = abs(spec.lam)
        out[1:] = 0.5 * (_lnsinh_arr(a * j) - np.log(j) - _lnsinh(a))
        return out
    if kind == "harmonious":
        out[1:] = -0.5 * np.log(j)
        return out
    if kind == "table":
        if n_max >= len(spec.table):
            raise TabulatedOutOfRange(
                f"tabulated deformation has {len(spec.table)} values, "
                f"n={n_max} requested"
            )
        out[1:] = np.log(np.asarray(spec.table[1 : n_max + 1]))
        return out
    base = _lnf_values(spec.base, n_max) if n_max >= 1 else out
    out[1:] = np.where(np.arange(1, n_max + 1) <= spec.sector_start, -np.inf, base[1:])
    return out


def f_log_factorial(spec: DeformationSpec, n: int) -> float:
    """Natural log of the ladder factorial [f(n)]! = f(1) f(2) ... f(n).

    The empty product at n = 0 gives 0. f(0) deliberately does not
    contribute: the coefficient recurrence only ever divides by
    f(1)..f(n), and this convention keeps the closed-form coefficients
    exact solutions of it for every kind.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    if n == 0:
        return 0.0
    vals = _lnf_values(spec, n)[1:]
    if np.any(np.isneginf(vals)):
        j = int(np.where(np.isneginf(vals))[0][0]) + 1
        raise ZeroInRange(f"f({j}) = 0 inside the factorial range 1..{n}")
    return float(np.sum(vals))


def f_log_factorial_array(spec: DeformationSpec, n_max: int) -> np.ndarray:
    """ln [f(n)]! for n = 0..n_max as one cumulative array."""
    vals = _lnf_values(spec, n_max)
    if np.any(np.isneginf(vals[1:])):
        j = int(np.where(np.isneginf(vals[1:]))[0][0]) + 1
        raise ZeroInRange(f"f({j}) = 0 inside the factorial range 1..{n_max}")
    out = np.empty(n_max + 1)
    out[0] = 0.0
    np.cumsum(vals[1:], out=out[1:])
    return out


# ----------------------------------------------------------------------
# commutator functions and their inversions
# ----------------------------------------------------------------------

def commutator_F(spec: DeformationSpec, n: int) -> float:
    """[A, A†] eigenvalue at level n: (n+1) f(n+1)^2 - n f(n)^2."""
    return nf2(spec, n + 1) - nf2(spec, n)


def q_commutator_G(spec: DeformationSpec, n: int, q: float) -> float:
    """q-commutator A A† - q A† A at level n, q > 0."""
    if q <= 0.0:
        raise DomainError("q must be positive")
    return nf2(spec, n + 1) - q * nf2(spec, n)


def f_from_F(F: Sequence[float], n: int) -> float:
    """Recover f(n) from commutator values F(0)..F(n-1).

    f(0) is not recoverable (it is arbitrary); n must be >= 1.
    """
    if n < 1:
        raise DomainError("inversion defined for n >= 1")
    if len(F) < n:
        raise DomainError(f"need F(0)..F({n - 1}), got {len(F)} values")
    s = math.fsum(float(F[j]) for j in range(n))
    if s < 0.0:
        raise NegativePartialSum(f"sum of F(0..{n - 1}) = {s} is negative")
    return math.sqrt(s / n)


def f_from_G(G: Sequence[float], q: float, n: int) -> float:
    """Recover f(n) from q-commutator values G(0)..G(n-1)."""
    if n < 1:
        raise DomainError("inversion defined for n >= 1")
    if q <= 0.0:
        raise DomainError("q must be positive")
    if len(G) < n:
        raise DomainError(f"need G(0)..G({n - 1}), got {len(G)} values")
    s = math.fsum(q**j * float(G[n - j - 1]) for j in range(n))
    if s < 0.0:
        raise NegativePartialSum(f"weighted sum of G values = {s} is negative")
    return math.sqrt(s / n)


# ----------------------------------------------------------------------
# spectrum, transition frequencies, evolution phases
# ----------------------------------------------------------------------

def energy_level(spec: DeformationSpec, omega: float, n: int) -> float:
    """E_n = (omega/2) [(n+1) f(n+1)^2 + n f(n)^2]."""
    return 0.5 * omega * (nf2(spec, n + 1) + nf2(spec, n))


def energy_levels(spec: DeformationSpec, omega: float, n_max: int) -> np.ndarray:
    """E_0..E_n_max as one vectorized sweep."""
    v = nf2_array(spec, np.arange(n_max + 2))
    return 0.5 * omega * (v[1:] + v[:-1])


def transition_frequency(spec: DeformationSpec, n: int) -> float:
    """Amplitude-dependent vibration frequency at level n >= 1.

    omega(n) = [(n+1) f(n+1)^2 - (n-1) f(n-1)^2] / 2. Level 0 has no
    (n-1) neighbour; evolution covers it through the Hamiltonian phase
    instead (see :func:`evolution_phase`).
    """
    if n < 1:
        raise DomainError("transition frequency is defined for n >= 1")
    return 0.5 * (nf2(spec, n + 1) - nf2(spec, n - 1))


def evolution_phase(spec: DeformationSpec, n: int, t: float) -> complex:
    """Unit-modulus deformation factor acquired at level n after time t.

    For n >= 1 this is exp(-i t omega(n)); at n = 0 the Hamiltonian
    phase exp(-i t E_0) (omega = 1) is used, matching the Schroedinger
    evolution convention.
    """
    if n == 0:
        return complex(np.exp(-1j * t * energy_level(spec, 1.0, 0)))
    return complex(np.exp(-1j * t * transition_frequency(spec, n)))


# ----------------------------------------------------------------------
# convergence radius
# ----------------------------------------------------------------------

def ratio_test_radius(
    spec: DeformationSpec,
    n_terms: int = RATIO_TEST_TERMS,
    cutoff: float = RATIO_TEST_CUTOFF,
) -> float:
    """Numeric estimate of liminf sqrt(n+1) f(n+1) over a tail window.

    Takes the minimum of sqrt(n+1) f(n+1) for n in [n_terms/2, n_terms]
    and reports +inf when that minimum exceeds ``cutoff``. Robust for
    monotone term ratios; tabulated specs are clipped to their table.
    """
    hi = n_terms
    if spec.kind == "table":
        hi = min(hi, len(spec.table) - 2)
        if hi < 1:
            return math.inf  # table too short to see a finite tail
    lo = max(1, hi // 2)
    m = min(
        math.sqrt(n + 1) * eval_f(spec, n + 1) for n in range(lo, hi + 1)
    )
    return math.inf if m > cutoff else m


def _radius(spec: DeformationSpec) -> float:
    # Analytic radii for the built-in families (the coefficient series
    # are entire for identity/q and geometric for harmonious); the
    # numeric ratio test only decides tabulated data.
    kind = spec.kind
    if kind in ("identity", "q"):
        return math.inf
    if kind == "harmonious":
        return 1.0
    if kind == "zero_sector":
        return spec.base.radius
    return ratio_test_radius(spec)


def convergence_radius(spec: DeformationSpec) -> float:
    """Amplitude convergence radius rho; states need |alpha| < rho."""
    return spec.radius


# ----------------------------------------------------------------------
# JSON wire format
# ----------------------------------------------------------------------

def spec_to_json(spec: DeformationSpec) -> dict:
    """Serializable dict: the wire format shared with the CLI."""
    if spec.kind == "identity":
        return {"kind": "identity"}
    if spec.kind == "q":
        return {"kind": "q", "lambda": spec.lam}
    if spec.kind == "harmonious":
        return {"kind": "harmonious"}
    if spec.kind == "table":
        return {"kind": "table", "values": list(spec.table)}
    return {
        "kind": "zero_sector",
        "n0": spec.sector_start,
        "base": spec_to_json(spec.base),
    }


def spec_from_json(obj) -> DeformationSpec:
    """Parse the wire format (a dict or a JSON string)."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("deformation spec must be an object with a 'kind'")
    kind = obj["kind"]
    if kind == "identity":
        return identity()
    if kind == "q":
        return q_deform(float(obj["lambda"]))
    if kind == "harmonious":
        return harmonious()
    if kind == "table":
        return tabulated(obj["values"])
    if kind == "zero_sector":
        return zero_sector(int(obj["n0"]), spec_from_json(obj["base"]))
    raise ValueError(f"unknown deformation kind {kind!r}")
