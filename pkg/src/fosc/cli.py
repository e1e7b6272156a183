"""Command-line surface.

Subcommands: state, photon-stats, quadratures, wigner, husimi, evolve,
two-mode, thermo, planck, classical, moments, deform-info. All output
files are deterministic (17-significant-digit floats, fixed row order,
'\\n' newlines): identical argv + config give byte-identical files.

Exit codes: 0 success, 1 usage errors (bad flags, unparsable input),
2 domain errors (violated preconditions, named in the message).
FOSC_N_MAX overrides the truncation cap; flags beat the environment,
the environment beats defaults.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import classical as cl
from . import phasespace as ps
from . import quadrature as qd
from . import statistics as st
from . import state as sm
from . import thermo as th
from ._serialize import (
    complex_to_json,
    fmt,
    parse_complex,
    write_csv,
    write_json,
)
from .deformation import (
    commutator_F,
    energy_level,
    eval_f,
    f_log_factorial_array,
    spec_from_json,
    transition_frequency,
)
from .errors import FoscError

MAX_N_CAP = 65536


class UsageError(Exception):
    """Bad invocation; exits 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; usage errors exit 1
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    tol: float = 1e-12
    n_max: int = 4096
    radius_margin: float = 1e-3

    def __post_init__(self):
        if not (0.0 < self.tol <= 1e-2):
            raise UsageError(f"--tol must lie in (0, 1e-2], got {self.tol}")
        if not (1 <= self.n_max <= MAX_N_CAP):
            raise UsageError(f"--n-max must lie in [1, {MAX_N_CAP}]")
        if not (0.0 < self.radius_margin < 1.0):
            raise UsageError("--radius-margin must lie in (0, 1)")


def _config(args) -> RunConfig:
    n_max = args.n_max
    if n_max is None:
        env = os.environ.get("FOSC_N_MAX", "").strip()
        if env:
            try:
                n_max = int(env)
            except ValueError as exc:
                raise UsageError(f"FOSC_N_MAX={env!r} is not an integer") from exc
        else:
            n_max = 4096
    return RunConfig(tol=args.tol, n_max=n_max, radius_margin=args.radius_margin)


def _add_common(p):
    p.add_argument("--tol", type=float, default=1e-12,
                   help="relative truncation tolerance, in (0, 1e-2]")
    p.add_argument("--n-max", type=int, default=None,
                   help="truncation cap (default 4096; env FOSC_N_MAX)")
    p.add_argument("--radius-margin", type=float, default=1e-3,
                   help="reject |alpha| >= (1 - margin) * radius")


def _spec_arg(text: str):
    try:
        return spec_from_json(json.loads(text))
    except (json.JSONDecodeError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad --deformation value: {exc}") from exc


def _alpha_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _load_state(path: str) -> sm.FCoherentState:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read state file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"state file {path} is not valid JSON: {exc}") from exc
    return sm.state_from_json(obj)


def _build_any(spec, alpha, cfg: RunConfig) -> sm.FCoherentState:
    builder = sm.build_sector_state if spec.has_zero_sector() else sm.build_state
    return builder(spec, alpha, tol=cfg.tol, n_cap=cfg.n_max,
                   radius_margin=cfg.radius_margin)


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def cmd_state(args) -> None:
    cfg = _config(args)
    state = _build_any(_spec_arg(args.deformation), _alpha_arg(args.alpha), cfg)
    write_json(args.out, sm.state_to_json(state))


def cmd_photon_stats(args) -> None:
    state = _load_state(args.state)
    stats = st.photon_stats(state)
    if args.out:
        write_json(args.out, {
            "mean": stats.mean,
            "dispersion": stats.dispersion,
            "fano": stats.fano if not stats.degenerate else None,
            "classification": stats.classification,
            "degenerate_vacuum": stats.degenerate,
            "tail_bound": stats.tail_bound,
        })
    if args.csv:
        write_csv(args.csv, "n,p",
                  ((str(n), p) for n, p in enumerate(stats.distribution)))
    if not args.out and not args.csv:
        raise UsageError("photon-stats needs --out and/or --csv")


def cmd_quadratures(args) -> None:
    cfg = _config(args)
    if args.scan:
        spec = _spec_arg(args.deformation)
        rows = []
        radii = np.linspace(args.rmin, args.rmax, args.nr)
        thetas = np.linspace(0.0, 2.0 * math.pi, args.ntheta, endpoint=False)
        for rr in radii:
            for tt in thetas:
                alpha = rr * math.cos(tt) + 1j * rr * math.sin(tt)
                rep = qd.quadrature_report(_build_any(spec, alpha, cfg))
                rows.append((alpha.real, alpha.imag, rep.sigma_x, rep.sigma_p,
                             rep.sigma_xp, rep.r, rep.schrodinger_invariant))
        write_csv(args.out, "re_alpha,im_alpha,sigma_x,sigma_p,sigma_xp,r,invariant",
                  rows)
        return
    if not args.state:
        raise UsageError("quadratures needs --state (or --scan with --deformation)")
    rep = qd.quadrature_report(_load_state(args.state))
    write_json(args.out, {
        "mean_x": rep.mean_x,
        "mean_p": rep.mean_p,
        "sigma_x": rep.sigma_x,
        "sigma_p": rep.sigma_p,
        "sigma_xp": rep.sigma_xp,
        "r": rep.r,
        "schrodinger_invariant": rep.schrodinger_invariant,
        "squeezed_x": rep.squeezed_x,
        "squeezed_p": rep.squeezed_p,
    })


def _grid_from_args(args) -> ps.PhaseSpaceGrid:
    try:
        return ps.PhaseSpaceGrid(args.xmin, args.xmax, args.nx,
                                 args.pmin, args.pmax, getattr(args, "np"))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _write_field(field: ps.FieldOnGrid, out: str, header: str, scale: float):
    xs = field.grid.x_values() * scale
    ps_ = field.grid.p_values() * scale
    rows = []
    for i, xv in enumerate(xs):
        for j, pv in enumerate(ps_):
            rows.append((xv, pv, field.values[i, j]))
    write_csv(out, header, rows)
    write_json(out + ".meta.json", {
        "kind": field.kind,
        "x_min": field.grid.x_min, "x_max": field.grid.x_max, "nx": field.grid.nx,
        "p_min": field.grid.p_min, "p_max": field.grid.p_max, "np": field.grid.np,
        "normalization_residual": ps.normalization_residual(field),
        "max_imag": field.max_imag,
    })


def cmd_wigner(args) -> None:
    state = _load_state(args.state)
    field = ps.wigner(state, _grid_from_args(args), method=args.method)
    _write_field(field, args.out, "x,p,value", 1.0)


def cmd_husimi(args) -> None:
    state = _load_state(args.state)
    field = ps.husimi(state, _grid_from_args(args))
    # grid columns are the z plane samples: z = (x + i p)/sqrt(2)
    _write_field(field, args.out, "re_z,im_z,value", 1.0 / math.sqrt(2.0))


def cmd_evolve(args) -> None:
    state = _load_state(args.state)
    write_json(args.out, sm.state_to_json(sm.evolve(state, args.t)))


def cmd_two_mode(args) -> None:
    cfg = _config(args)
    a1 = _alpha_arg(args.alpha1)
    a2 = _alpha_arg(args.alpha2)
    if args.mode == "joint":
        state2 = sm.build_two_mode_joint(_spec_arg(args.deformation), a1, a2,
                                         tol=cfg.tol, n_cap=cfg.n_max,
                                         radius_margin=cfg.radius_margin)
    else:
        if not args.deformation2:
            raise UsageError("product mode needs --deformation2")
        state2 = sm.build_two_mode_product(
            _spec_arg(args.deformation), _spec_arg(args.deformation2), a1, a2,
            tol=cfg.tol, n_cap=cfg.n_max, radius_margin=cfg.radius_margin)
    write_json(args.out, sm.two_mode_to_json(state2))
    if args.dist_out:
        dist = st.two_mode_distribution(state2)
        write_json(args.dist_out, {
            "mean1": dist.mean1,
            "mean2": dist.mean2,
            "covariance": dist.covariance,
            "marginal1": [float(v) for v in dist.marginal1],
            "marginal2": [float(v) for v in dist.marginal2],
        })


def cmd_thermo(args) -> None:
    spec = _spec_arg(args.deformation)
    lam = spec.lam if spec.kind == "q" else 0.0
    temps = (np.geomspace(args.tmin, args.tmax, args.nt) if args.log
             else np.linspace(args.tmin, args.tmax, args.nt))
    rows = []
    for T in temps:
        pt = th.thermo_point(spec, args.omega, float(T))
        rows.append((pt.temperature, pt.Z, pt.lnZ, pt.specific_heat,
                     pt.mean_n_exact,
                     th.q_planck_perturbative(lam, args.omega, float(T))))
    write_csv(args.out, "T,Z,lnZ,C,mean_n_exact,mean_n_perturbative", rows)


def cmd_planck(args) -> None:
    temps = (np.geomspace(args.tmin, args.tmax, args.nt) if args.log
             else np.linspace(args.tmin, args.tmax, args.nt))
    rows = []
    for T in temps:
        T = float(T)
        rows.append((
            T,
            th.q_planck_perturbative(0.0, args.omega, T),
            th.q_planck_perturbative(args.lam, args.omega, T),
            th.deformed_bose_perturbative(args.lam, args.omega / T),
        ))
    write_csv(args.out, "T,mean_n_bose,mean_n_q_planck,mean_n_deformed_bose", rows)


def cmd_classical(args) -> None:
    try:
        with open(args.system) as fh:
            sysobj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read system file {args.system}: {exc}") from exc
    try:
        modes = int(sysobj["modes"])
        initial = [float(v) for v in sysobj["initial"]]
        dt = float(sysobj["dt"])
        t_max = float(sysobj["t_max"])
        if "q_lambda" in sysobj:
            system = cl.ClassicalSystem(modes=modes,
                                        q_lambda=float(sysobj["q_lambda"]))
        else:
            exprs = list(sysobj["omega_exprs"])
            if len(exprs) != modes:
                raise ValueError("omega_exprs must list one expression per mode")
            system = cl.system_from_exprs(exprs)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"bad system file: {exc}") from exc

    if args.method == "exact":
        times = dt * np.arange(int(round(t_max / dt)) + 1)
        orbit = cl.exact_orbit(system, initial, times)
    else:
        orbit = cl.rk4_orbit(system, initial, dt, t_max)
    header = "t," + ",".join(f"x{i+1},y{i+1}" for i in range(modes))
    rows = ((orbit.times[i], *orbit.states[i]) for i in range(orbit.times.size))
    write_csv(args.out, header, rows)


def cmd_moments(args) -> None:
    spec = _spec_arg(args.deformation)
    try:
        data = np.loadtxt(args.measure, delimiter=",", skiprows=args.skip_rows)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read measure file {args.measure}: {exc}") from exc
    if data.ndim != 2 or data.shape[1] != 2:
        raise UsageError("measure file must have two columns: rho,mu")
    try:
        res = sm.moment_residuals(spec, data[:, 0], data[:, 1], args.nmax)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    write_csv(args.out, "n,residual", ((str(n), r) for n, r in enumerate(res)))


def cmd_deform_info(args) -> None:
    spec = _spec_arg(args.deformation)
    if spec.has_zero_sector():
        # the plain product (zeros included) stays printable
        ffact = [1.0]
        for n in range(1, args.kmax + 1):
            ffact.append(ffact[-1] * eval_f(spec, n))
    else:
        lff = f_log_factorial_array(spec, args.kmax)
        ffact = [math.exp(v) for v in lff]
    rows = []
    for n in range(args.kmax + 1):
        omega_n = transition_frequency(spec, n) if n >= 1 else math.nan
        rows.append((
            str(n),
            eval_f(spec, n),
            ffact[n],
            commutator_F(spec, n),
            energy_level(spec, args.omega, n),
            "nan" if math.isnan(omega_n) else fmt(omega_n),
        ))
    write_csv(args.out, "n,f,f_factorial,F,E,omega", rows)


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="fosc", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("state", help="build a nonlinear coherent state file")
    p.add_argument("--deformation", required=True, help="deformation spec JSON")
    p.add_argument("--alpha", required=True, help="complex amplitude, 'a+bi'")
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("photon-stats", help="photon statistics of a state file")
    p.add_argument("--state", required=True)
    p.add_argument("--out", help="JSON stats output")
    p.add_argument("--csv", help="two-column n,p distribution CSV")
    p.set_defaults(func=cmd_photon_stats)

    p = sub.add_parser("quadratures", help="quadrature report or polar scan")
    p.add_argument("--state")
    p.add_argument("--out", required=True)
    p.add_argument("--scan", action="store_true",
                   help="sweep alpha over a polar grid (needs --deformation)")
    p.add_argument("--deformation")
    p.add_argument("--rmin", type=float, default=0.1)
    p.add_argument("--rmax", type=float, default=1.0)
    p.add_argument("--nr", type=int, default=4)
    p.add_argument("--ntheta", type=int, default=8)
    _add_common(p)
    p.set_defaults(func=cmd_quadratures)

    for name, fn, hlp in (("wigner", cmd_wigner, "Wigner field CSV + sidecar"),
                          ("husimi", cmd_husimi, "Husimi field CSV + sidecar")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("--state", required=True)
        p.add_argument("--xmin", type=float, default=-6.0)
        p.add_argument("--xmax", type=float, default=6.0)
        p.add_argument("--nx", type=int, default=121)
        p.add_argument("--pmin", type=float, default=-6.0)
        p.add_argument("--pmax", type=float, default=6.0)
        p.add_argument("--np", type=int, default=121)
        p.add_argument("--out", required=True)
        if name == "wigner":
            p.add_argument("--method", choices=("symmetrized", "naive"),
                           default="symmetrized")
        p.set_defaults(func=fn)

    p = sub.add_parser("evolve", help="apply phase evolution to a state file")
    p.add_argument("--state", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("two-mode", help="build a joint or product two-mode state")
    p.add_argument("--mode", choices=("joint", "product"), required=True)
    p.add_argument("--deformation", required=True)
    p.add_argument("--deformation2", help="second-mode spec (product mode)")
    p.add_argument("--alpha1", required=True)
    p.add_argument("--alpha2", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dist-out", help="joint distribution summary JSON")
    _add_common(p)
    p.set_defaults(func=cmd_two_mode)

    p = sub.add_parser("thermo", help="temperature sweep CSV")
    p.add_argument("--deformation", required=True)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--tmin", type=float, required=True)
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--nt", type=int, default=16)
    p.add_argument("--log", action="store_true", help="geometric T spacing")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_thermo)

    p = sub.add_parser("planck", help="perturbative occupation formulas CSV")
    p.add_argument("--lam", "--lambda", dest="lam", type=float, required=True)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--tmin", type=float, required=True)
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--nt", type=int, default=16)
    p.add_argument("--log", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_planck)

    p = sub.add_parser("classical", help="integrate or solve a classical system")
    p.add_argument("--system", required=True, help="system JSON file")
    p.add_argument("--method", choices=("exact", "rk4"), default="exact")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("moments", help="diagonal-measure moment residuals")
    p.add_argument("--deformation", required=True)
    p.add_argument("--measure", required=True, help="CSV samples: rho,mu")
    p.add_argument("--skip-rows", type=int, default=0)
    p.add_argument("--nmax", type=int, default=10)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("deform-info", help="f, factorial, F, E, omega table")
    p.add_argument("--deformation", required=True)
    p.add_argument("--kmax", type=int, default=20)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_deform_info)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("a subcommand is required (see --help)")
        args.func(args)
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except FoscError as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
