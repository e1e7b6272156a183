"""Classical reparametrized oscillators.

A mode (x, y) of the bare isotropic oscillator rotates at unit
frequency; replacing the frequency by any function of the conserved
intensities H_j = x_j^2 + y_j^2 keeps every orbit a circle traversed at
an energy-dependent speed. Exact orbits apply the rotation with the
frequencies frozen at the initial invariants (legitimate, since they
are constants of motion); the fixed-step RK4 integrator re-evaluates
them at every stage as a consistency stressor.

The q-deformed variable xi = f_q(|alpha|^2) alpha obeys the deformed
bracket {xi, xi*} = -i (lam/sinh lam) sqrt(1 + |xi|^4 sinh^2 lam) and
rotates at that same rate, with the closed-form orbit available for
cross-checks. The factorial-type deformation f = Gamma(n+1)^{-1/2}
contributes its bracket through the digamma function, implemented here
via a Lanczos approximation (no dependency on scipy).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import _kernels
from .errors import NonfiniteFrequency, StepTooLarge

#: below this |lam| the prefactor lam/sinh(lam) switches to its limit 1
LAM_EPS = 1e-8

INVARIANT_DRIFT_LIMIT = 1e-3

EXACT = "exact"
RK4 = "rk4"


def lam_over_sinh(lam: float) -> float:
    """lam / sinh(lam), continued through lam = 0."""
    if abs(lam) < LAM_EPS:
        return 1.0
    return lam / math.sinh(lam)


# ----------------------------------------------------------------------
# systems and orbits
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ClassicalSystem:
    """m oscillator modes with reparametrized frequencies.

    ``frequencies`` maps the invariant vector (H_1..H_m) to the m mode
    frequencies. A set ``q_lambda`` selects the q-bracket vectorfield
    instead: every mode rotates at
    (lam/sinh lam) sqrt(1 + |xi_i|^4 sinh^2 lam) with |xi_i|^2 = H_i/2.
    """

    modes: int
    frequencies: Optional[Callable[[np.ndarray], np.ndarray]] = None
    q_lambda: Optional[float] = None

    def __post_init__(self):
        if self.modes < 1:
            raise ValueError("need at least one mode")
        if (self.frequencies is None) == (self.q_lambda is None):
            raise ValueError("give either frequency functions or q_lambda")

    def omega_at(self, state: np.ndarray) -> np.ndarray:
        h = state[0::2] ** 2 + state[1::2] ** 2
        if self.q_lambda is not None:
            lam = self.q_lambda
            w = h / 2.0
            return lam_over_sinh(lam) * np.sqrt(1.0 + w * w * math.sinh(lam) ** 2)
        om = np.asarray(self.frequencies(h), dtype=float)
        if om.shape != (self.modes,):
            raise ValueError("frequency function must return one value per mode")
        return om


@dataclass(frozen=True, eq=False)
class ClassicalOrbit:
    """Sampled orbit: monotone times, states of shape (len(times), 2m)."""

    times: np.ndarray
    states: np.ndarray
    method: str

    def invariants(self) -> np.ndarray:
        """H_i(t) = x_i^2 + y_i^2 along the orbit, shape (nt, m)."""
        return self.states[:, 0::2] ** 2 + self.states[:, 1::2] ** 2


def exact_orbit(
    system: ClassicalSystem, initial: Sequence[float], times: Sequence[float]
) -> ClassicalOrbit:
    """Rotation solution with frequencies frozen at the initial invariants."""
    x0 = np.asarray(initial, dtype=float)
    if x0.shape != (2 * system.modes,):
        raise ValueError(f"initial state must have {2 * system.modes} components")
    om = system.omega_at(x0)
    if not np.all(np.isfinite(om)):
        raise NonfiniteFrequency(
            f"mode frequencies {om} are not finite at the initial invariants"
        )
    t = np.asarray(times, dtype=float)
    states = np.empty((t.size, x0.size))
    for i in range(system.modes):
        xi, yi = x0[2 * i], x0[2 * i + 1]
        c = np.cos(om[i] * t)
        s = np.sin(om[i] * t)
        states[:, 2 * i] = c * xi + s * yi
        states[:, 2 * i + 1] = -s * xi + c * yi
    return ClassicalOrbit(t, states, EXACT)


def _rk4_python(system: ClassicalSystem, x0: np.ndarray, dt: float, n_steps: int):
    def deriv(s):
        om = system.omega_at(s)
        d = np.empty_like(s)
        d[0::2] = om * s[1::2]
        d[1::2] = -om * s[0::2]
        return d

    out = np.empty((n_steps + 1, x0.size))
    out[0] = x0
    s = x0.astype(float)
    for i in range(1, n_steps + 1):
        k1 = deriv(s)
        k2 = deriv(s + 0.5 * dt * k1)
        k3 = deriv(s + 0.5 * dt * k2)
        k4 = deriv(s + dt * k3)
        s = s + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        out[i] = s
    return out


def rk4_orbit(
    system: ClassicalSystem,
    initial: Sequence[float],
    dt: float,
    t_max: float,
    drift_limit: float = INVARIANT_DRIFT_LIMIT,
) -> ClassicalOrbit:
    """Classic fixed-step fourth-order integration of the selected field.

    Frequencies are re-evaluated at every stage. After the run the
    relative drift of each H_i is checked; drift beyond ``drift_limit``
    raises StepTooLarge.
    """
    if dt <= 0 or t_max <= 0:
        raise ValueError("dt and t_max must be positive")
    x0 = np.asarray(initial, dtype=float)
    if x0.shape != (2 * system.modes,):
        raise ValueError(f"initial state must have {2 * system.modes} components")
    om0 = system.omega_at(x0)
    if not np.all(np.isfinite(om0)):
        raise NonfiniteFrequency(
            f"mode frequencies {om0} are not finite at the initial invariants"
        )
    n_steps = int(round(t_max / dt))
    if system.q_lambda is not None and system.modes == 1:
        lam = system.q_lambda
        states = _kernels.rk4_q_bracket(
            x0[0], x0[1], lam_over_sinh(lam), math.sinh(lam) ** 2, dt, n_steps
        )
    else:
        states = _rk4_python(system, x0, dt, n_steps)
    times = dt * np.arange(n_steps + 1)
    orbit = ClassicalOrbit(times, states, RK4)

    h = orbit.invariants()
    scale = np.maximum(np.abs(h[0]), 1e-30)
    drift = float(np.max(np.abs(h - h[0]) / scale))
    if drift > drift_limit:
        raise StepTooLarge(
            f"invariant drift {drift:.3e} exceeds {drift_limit:g}; reduce dt"
        )
    return orbit


# ----------------------------------------------------------------------
# q-bracket closed forms
# ----------------------------------------------------------------------

def q_closed_form(lam: float, xi0: complex, t):
    """xi(t) = xi0 exp[-i t (lam/sinh lam) sqrt(1 + |xi0|^4 sinh^2 lam)]."""
    xi0 = complex(xi0)
    rate = lam_over_sinh(lam) * math.sqrt(
        1.0 + abs(xi0) ** 4 * math.sinh(lam) ** 2
    )
    return xi0 * np.exp(-1j * rate * np.asarray(t, dtype=float))


def deformed_bracket(lam: float, xi: complex) -> float:
    """{xi, xi*}/i = -(lam/sinh lam) sqrt(1 + |xi|^4 sinh^2 lam)."""
    return -lam_over_sinh(lam) * math.sqrt(
        1.0 + abs(complex(xi)) ** 4 * math.sinh(lam) ** 2
    )


def classical_frequency(lam: float, intensity: float) -> float:
    """(lam/sinh lam) cosh(lam * intensity), the d/dn of the q energy."""
    if intensity < 0:
        raise ValueError("intensity must be nonnegative")
    return lam_over_sinh(lam) * math.cosh(lam * intensity)


def gamma_factorial_bracket(n: float) -> float:
    """d/dn [ n / Gamma(n+1) ] = (1 - n psi(n+1)) / Gamma(n+1), n >= 0."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return (1.0 - n * digamma(n + 1.0)) * math.exp(-lanczos_lgamma(n + 1.0))


# ----------------------------------------------------------------------
# in-module Gamma / digamma (positive real line, ~1e-12 accurate)
# ----------------------------------------------------------------------

_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def lanczos_lgamma(x: float) -> float:
    """log Gamma(x) for x > 0 by the Lanczos series (g = 7, 9 terms)."""
    if x <= 0.0:
        raise ValueError("lanczos_lgamma needs x > 0")
    z = x - 1.0
    acc = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return (
        0.5 * math.log(2.0 * math.pi)
        + (z + 0.5) * math.log(t)
        - t
        + math.log(acc)
    )


# asymptotic psi(x) ~ ln x - 1/(2x) - sum B_2k / (2k x^2k)
_DIGAMMA_TAIL = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


def digamma(x: float) -> float:
    """psi(x) for x > 0: recurrence below 10, asymptotic series above."""
    if x <= 0.0:
        raise ValueError("digamma needs x > 0")
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    tail = 0.0
    power = inv2
    for coef in _DIGAMMA_TAIL:
        tail += coef * power
        power *= inv2
    return acc + math.log(x) - 0.5 / x - tail


# ----------------------------------------------------------------------
# frequency-expression grammar (CLI system files)
# ----------------------------------------------------------------------

class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def expect(self, ch: str) -> None:
        got = self.take()
        if got != ch:
            raise ValueError(
                f"expected {ch!r} at position {self.pos} of {self.text!r}"
            )


def parse_frequency_expr(text: str, modes: int) -> Callable[[np.ndarray], float]:
    """Compile one frequency expression over the invariants H1..Hm.

    Grammar (documented in the README):
        expr   := term (("+" | "-") term)*
        term   := unary ("*" unary)*
        unary  := "-" unary | power
        power  := atom ("^" INTEGER)?
        atom   := NUMBER | "H" INTEGER | "cosh(" expr ")"
                | "sinh(" expr ")" | "(" expr ")"

    which covers polynomials in the invariants plus cosh/sinh of linear
    combinations. Unknown names and out-of-range H indices are
    ValueErrors (usage errors at the CLI).
    """
    toks = _Tokens(text)
    fn = _parse_expr(toks, modes)
    if toks.peek():
        raise ValueError(f"trailing input at position {toks.pos} of {text!r}")
    return fn


def _parse_expr(toks, modes):
    fn = _parse_term(toks, modes)
    while toks.peek() in ("+", "-"):
        op = toks.take()
        rhs = _parse_term(toks, modes)
        fn = (lambda a, b: (lambda h: a(h) + b(h)))(fn, rhs) if op == "+" else \
             (lambda a, b: (lambda h: a(h) - b(h)))(fn, rhs)
    return fn


def _parse_term(toks, modes):
    fn = _parse_unary(toks, modes)
    while toks.peek() == "*":
        toks.take()
        rhs = _parse_unary(toks, modes)
        fn = (lambda a, b: (lambda h: a(h) * b(h)))(fn, rhs)
    return fn


def _parse_unary(toks, modes):
    if toks.peek() == "-":
        toks.take()
        inner = _parse_unary(toks, modes)
        return lambda h: -inner(h)
    return _parse_power(toks, modes)


def _parse_power(toks, modes):
    base = _parse_atom(toks, modes)
    if toks.peek() == "^":
        toks.take()
        exp = _parse_int(toks)
        return lambda h: base(h) ** exp
    return base


def _parse_int(toks) -> int:
    digits = ""
    while toks.peek().isdigit():
        digits += toks.take()
    if not digits:
        raise ValueError(f"expected an integer at position {toks.pos}")
    return int(digits)


def _parse_atom(toks, modes):
    ch = toks.peek()
    if ch == "(":
        toks.take()
        inner = _parse_expr(toks, modes)
        toks.expect(")")
        return inner
    if ch.isdigit() or ch == ".":
        return _parse_number(toks)
    if ch in ("H", "h"):
        toks.take()
        idx = _parse_int(toks)
        if not (1 <= idx <= modes):
            raise ValueError(f"H{idx} out of range for {modes} mode(s)")
        return lambda h, i=idx - 1: h[i]
    for name, fun in (("cosh", math.cosh), ("sinh", math.sinh)):
        if toks.text[toks.pos:].startswith(name):
            toks.pos += len(name)
            toks.expect("(")
            inner = _parse_expr(toks, modes)
            toks.expect(")")
            return (lambda f, g: (lambda h: f(g(h))))(fun, inner)
    raise ValueError(f"unexpected input at position {toks.pos} of {toks.text!r}")


def _parse_number(toks):
    start = toks.pos
    text = toks.text
    i = toks.pos
    while i < len(text) and (text[i].isdigit() or text[i] == "."):
        i += 1
    if i < len(text) and text[i] in "eE":
        j = i + 1
        if j < len(text) and text[j] in "+-":
            j += 1
        if j < len(text) and text[j].isdigit():
            i = j
            while i < len(text) and text[i].isdigit():
                i += 1
    value = float(text[start:i])
    toks.pos = i
    return lambda h: value


def system_from_exprs(exprs: Sequence[str]) -> ClassicalSystem:
    """System whose mode frequencies are parsed expressions in H1..Hm."""
    m = len(exprs)
    fns = [parse_frequency_expr(e, m) for e in exprs]

    def freq(h: np.ndarray) -> np.ndarray:
        return np.array([f(h) for f in fns])

    return ClassicalSystem(modes=m, frequencies=freq)
