"""Quadrature means, variances, squeezing and cross-correlation.

The ladder expectation values of a nonlinear coherent state reduce to
radial series with 1/f(n+1)-type denominators; the report assembles the
x and p variances, their correlation and the Schroedinger uncertainty
invariant sigma_x sigma_p - sigma_xp^2 (>= 1/4 for physical states)
from those series. Quadrature convention: x = (a + a†)/sqrt(2),
p = (a - a†)/(i sqrt(2)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .deformation import eval_f, f_log_factorial_array
from .errors import ZeroDeformationValue
from .state import FCoherentState

#: strict threshold so the exact-1/2 identity case is never flagged
SQUEEZING_THRESHOLD = 0.5 - 1e-12


@dataclass(frozen=True)
class LadderMeans:
    """<a>, <a^2> and <a† a> of one state."""

    mean_a: complex
    mean_a2: complex
    mean_n: float


@dataclass(frozen=True)
class QuadratureReport:
    mean_x: float
    mean_p: float
    sigma_x: float
    sigma_p: float
    sigma_xp: float
    r: float
    schrodinger_invariant: float
    squeezed_x: bool
    squeezed_p: bool


def _radial_sums(state: FCoherentState):
    """The three series S0, S1, S2 with denominators f(n+1), f(n+1)^2,
    f(n+1) f(n+2), summed ascending over the state's truncation.

    f is re-evaluated pointwise (not read from the coefficient table),
    so zero-sector misuse surfaces as ZeroDeformationValue here.
    """
    spec = state.spec
    if spec.has_zero_sector():
        # the series assume coefficients over the full Fock range; a
        # sector state starts above n0 and its f vanishes below
        raise ZeroDeformationValue(
            "quadrature series need 1/f(n+1) over the full range; the "
            "deformation has a zero sector"
        )
    n_top = state.n_top
    rho2 = abs(state.alpha) ** 2
    lff = f_log_factorial_array(spec, n_top)
    s0 = s1 = s2 = 0.0
    ln_rho2 = math.log(rho2) if rho2 > 0.0 else -math.inf
    for n in range(n_top + 1):
        f1 = eval_f(spec, n + 1)
        f2 = eval_f(spec, n + 2)
        if f1 == 0.0 or f2 == 0.0:
            raise ZeroDeformationValue(
                f"series needs 1/f({n + 1}) and 1/f({n + 2}); the deformation "
                "vanishes there"
            )
        if rho2 == 0.0:
            w = 1.0 if n == 0 else 0.0
        else:
            w = math.exp(n * ln_rho2 - math.lgamma(n + 1) - 2.0 * lff[n])
        s0 += w / f1
        s1 += w / (f1 * f1)
        s2 += w / (f1 * f2)
    return s0, s1, s2


def ladder_means(state: FCoherentState) -> LadderMeans:
    """Ladder expectation values from the radial series."""
    s0, s1, s2 = _radial_sums(state)
    n2 = state.norm_const**2
    alpha = state.alpha
    return LadderMeans(
        mean_a=alpha * n2 * s0,
        mean_a2=alpha * alpha * n2 * s2,
        mean_n=abs(alpha) ** 2 * n2 * s1,
    )


def quadrature_report(state: FCoherentState) -> QuadratureReport:
    """Variances, correlation coefficient and uncertainty invariant.

    sigma_x = 1/2 + mu (alpha^2 + alpha*^2) + nu |alpha|^2 with
    mu = N^2 (S2 - N^2 S0^2)/2 and nu = N^2 (S1 - N^2 S0^2); the p
    variance carries -mu and the same nu, and the cross term is
    sigma_xp = 2 mu Im(alpha^2).
    """
    s0, s1, s2 = _radial_sums(state)
    n2 = state.norm_const**2
    alpha = state.alpha
    mu = 0.5 * n2 * (s2 - n2 * s0 * s0)
    nu = n2 * (s1 - n2 * s0 * s0)
    a2 = alpha * alpha
    rho2 = abs(alpha) ** 2

    sigma_x = 0.5 + 2.0 * mu * a2.real + nu * rho2
    sigma_p = 0.5 - 2.0 * mu * a2.real + nu * rho2
    sigma_xp = 2.0 * mu * a2.imag
    mean_a = alpha * n2 * s0
    r = sigma_xp / math.sqrt(sigma_x * sigma_p)
    return QuadratureReport(
        mean_x=math.sqrt(2.0) * mean_a.real,
        mean_p=math.sqrt(2.0) * mean_a.imag,
        sigma_x=sigma_x,
        sigma_p=sigma_p,
        sigma_xp=sigma_xp,
        r=r,
        schrodinger_invariant=sigma_x * sigma_p - sigma_xp * sigma_xp,
        squeezed_x=sigma_x < SQUEEZING_THRESHOLD,
        squeezed_p=sigma_p < SQUEEZING_THRESHOLD,
    )
