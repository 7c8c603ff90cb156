"""Command-line entry point tying the numerical modules together.

Subcommands cover special-function evaluation, the far-field branch, the
untwisted core profile, the selection formula, the twisted boundary value
solve and sweeps, reduced-to-physical parameter maps, field export, and a
self-check that prints the margin of every standing invariant.

Every run writes a ``<command>_manifest.json`` into the output directory
echoing the fully resolved configuration, so any emitted file can be
reproduced from its manifest alone.  Outputs carry no timestamps and use
17-significant-digit decimal formatting throughout: identical
configuration gives byte-identical files.

Exit codes: 0 success, 1 domain or configuration error, 2 numerical
non-convergence.
"""

import argparse
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import core, field, outer, physical, solver, specfun, wavenumber


class CliError(Exception):
    """Configuration or domain problem; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad flags; the contract wants usage
    # text with exit 1 for configuration mistakes
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _json_text(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _write_text(path, text):
    with open(path, "w") as fh:
        fh.write(text)


def _write_manifest(args, command, config, outputs):
    out_dir = args.out_dir
    path = out_dir / f"{command.replace('-', '_')}_manifest.json"
    doc = {"command": command, "config": config,
           "outputs": [p.name for p in outputs]}
    _write_text(path, _json_text(doc))
    return path


def _emit(args, doc):
    sys.stdout.write(_json_text(doc))


def _note(args, message):
    if not args.quiet:
        sys.stdout.write(message + "\n")


def _resolve(args, key, default):
    """Layer a value: command line beats config file beats default."""
    val = getattr(args, key, None)
    if val is None:
        val = args.config_values.get(key)
    if val is None:
        val = default
    return val


def _parse_grid_spec(spec):
    parts = spec.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "lin"):
        raise CliError(
            f"grid spec {spec!r} must look like lo:hi:count or lo:hi:count:lin")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise CliError(f"bad grid spec {spec!r}: {exc}") from exc
    if lo <= 0 or hi <= lo or count < 2:
        raise CliError(f"grid spec {spec!r} needs 0 < lo < hi and count >= 2")
    if len(parts) == 4:
        return np.linspace(lo, hi, count)
    return np.geomspace(lo, hi, count)


def _save_csv(path, header, columns):
    data = np.column_stack(columns)
    np.savetxt(path, data, fmt="%.17g", delimiter=",", header=header,
               comments="")


# ---------------------------------------------------------------- commands

def _cmd_bessel_eval(args):
    method = {"auto": None, "series": "series", "asym": "asymptotic",
              "quad": "quadrature"}[args.method]
    if args.kind == "Kinu":
        if args.nu is None:
            raise CliError("--nu is required for kind Kinu")
        ev = specfun.k_imag(args.nu, args.x, method=method)
        doc = {"kind": "Kinu", "nu": ev.nu, "x": ev.x, "value": ev.value,
               "derivative": ev.derivative, "method": ev.method,
               "err_estimate": ev.err_estimate}
    else:
        if args.n is None:
            raise CliError(f"--n is required for kind {args.kind}")
        if method is not None:
            raise CliError(
                "integer orders have a single evaluation path; --method "
                "only applies to kind Kinu")
        ev = specfun.bessel_integer(args.kind[0], int(args.n), args.x)
        doc = {"kind": args.kind, "n": ev.n, "x": ev.x, "value": ev.value,
               "derivative": ev.derivative, "method": "log-recurrence",
               "err_estimate": 1e-14,
               "log_abs_value": ev.log_abs_value,
               "log_abs_derivative": ev.log_abs_derivative}
    config = {k: doc.get(k) for k in ("kind", "nu", "n", "x") if k in doc}
    config["method"] = args.method
    _write_manifest(args, "bessel-eval", config, [])
    _emit(args, doc)
    return 0


def _cmd_outer_eval(args):
    params = outer.OuterParams(n=int(args.n), q=args.q, k=args.k)
    r = _parse_grid_spec(args.r_grid)
    R = params.eps * r
    V0 = np.empty_like(R)
    dV0 = np.empty_like(R)
    F0 = np.empty_like(R)
    for i, Ri in enumerate(R):
        V0[i], dV0[i] = outer.decay_slope(params.nu, float(Ri))
        F0[i], _ = outer.amplitude_factor(params, float(Ri))
    v = params.chirality * params.k * V0
    resid = dV0 - (1.0 - params.nu ** 2 / R ** 2 - V0 / R - V0 ** 2)
    out = args.out_dir / _resolve(args, "out", "outer_eval.csv")
    _save_csv(out, "r,R,V0,F0,v_out,f_out,riccati_residual",
              [r, R, V0, F0, v, F0, resid])
    config = {"n": int(args.n), "q": args.q, "k": args.k,
              "r_grid": args.r_grid, "out": out.name}
    _write_manifest(args, "outer-eval", config, [out])
    _note(args, f"wrote {out}")
    return 0


def _cmd_inner_solve(args):
    n = int(args.n)
    r_max = _resolve(args, "r_max", 400.0)
    tol = _resolve(args, "tol", 1e-11)
    profile = core.solve_profile(n, r_max=r_max, tol=tol)
    tail = core.tail_constant(profile)
    r = np.geomspace(profile.r_start, profile.r_max, 1500)
    f = profile.f(r)
    df = profile.df(r)
    integrand = r * f * f * (1.0 - f * f)
    out = args.out_dir / _resolve(args, "out", "inner_profile.csv")
    _save_csv(out, "r,f0,df0,v0_integrand", [r, f, df, integrand])
    config = {"n": n, "r_max": r_max, "tol": tol, "out": out.name}
    _write_manifest(args, "inner-solve", config, [out])
    _emit(args, {"c_f": profile.c_f, "C_n": tail.value,
                 "convergence_gap": tail.halving_gap})
    return 0


def _resolve_cn(args, n):
    if args.cn == "auto":
        return wavenumber.matching_constant(n)
    try:
        return float(args.cn)
    except ValueError as exc:
        raise CliError(f"--cn must be a number or 'auto', got {args.cn!r}") \
            from exc


def _cmd_kappa(args):
    n = int(args.n)
    cn = _resolve_cn(args, n)
    kap = wavenumber.kappa_asym(n, args.q, cn=cn)
    doc = {"kappa": kap.value, "log_kappa": kap.log_value,
           "mu_bar": wavenumber.mu_bar(n, cn=cn), "underflowed": kap.underflowed}
    try:
        geom = wavenumber.matching_geometry(n, args.q, cn=cn)
        doc.update(rho=geom.rho, log_r0=geom.log_r0,
                   alpha=geom.alpha_measured, alpha_design=geom.alpha_design)
    except ValueError:
        # the matching window degenerates for q >= 1; the formula value
        # is still reported
        doc.update(rho=None, log_r0=None, alpha=None, alpha_design=None)
    config = {"n": n, "q": args.q, "cn": args.cn, "cn_resolved": cn}
    _write_manifest(args, "kappa", config, [])
    _emit(args, doc)
    return 0


def _report_doc(rep, profile, tol):
    return {
        "n": rep.n, "q": rep.q, "k_numeric": rep.k_numeric,
        "log_k_numeric":
            math.log(rep.k_numeric) if rep.k_numeric > 0 else None,
        "k_asymptotic": rep.k_asymptotic, "ratio": rep.ratio,
        "abs_ratio_minus_1_times_logq": rep.abs_ratio_minus_1_times_logq,
        "boundary_residual_f": rep.boundary_residuals[0],
        "boundary_residual_v": rep.boundary_residuals[1],
        "newton_iterations": rep.newton_iterations, "residual": rep.residual,
        "r_max": rep.r_max, "r_start": profile.r_start, "mu": rep.mu,
        "c_f": rep.c_f, "tol": tol, "status": rep.status,
        "message": rep.message, "properties": rep.properties,
        "first_integral_gap": profile.first_integral_gap(),
    }


def _cmd_solve(args):
    n = int(args.n)
    tol = _resolve(args, "tol", 1e-10)
    r_max = None if args.r_max in (None, "auto") else float(args.r_max)
    init = None
    if args.k_init not in (None, "auto"):
        init = (core.solve_profile(n).c_f, float(args.k_init))
    profile, rep = solver.solve_spiral(n, args.q, init=init, tol=tol,
                                       r_max=r_max)
    doc = _report_doc(rep, profile, tol)
    report_path = args.out_dir / _resolve(args, "out", "solve_report.json")
    _write_text(report_path, _json_text(doc))
    csv_path = args.out_dir / (report_path.stem.replace("_report", "")
                               + "_profile.csv")
    _save_csv(csv_path, "r,f,df,v,w,first_integral",
              [profile.r_grid, profile.f, profile.df, profile.v, profile.w,
               profile.integral])
    config = {"n": n, "q": args.q, "tol": tol,
              "r_max": args.r_max or "auto", "k_init": args.k_init or "auto",
              "out": report_path.name}
    _write_manifest(args, "solve", config, [report_path, csv_path])
    _emit(args, doc)
    return 0


def _cmd_sweep(args):
    n = int(args.n)
    tol = _resolve(args, "tol", 1e-10)
    try:
        q_list = [float(tok) for tok in args.q_list.split(",") if tok]
    except ValueError as exc:
        raise CliError(f"bad --q-list {args.q_list!r}: {exc}") from exc
    if len(q_list) < 1:
        raise CliError("--q-list needs at least one twist")
    reports = solver.wavenumber_sweep(n, q_list, tol=tol)
    rows = []
    failed = []
    for rep in reports:
        logk = math.log(rep.k_numeric) if rep.k_numeric > 0 else math.nan
        rows.append([rep.q, rep.k_numeric, logk, rep.k_asymptotic, rep.ratio,
                     rep.abs_ratio_minus_1_times_logq,
                     rep.newton_iterations, rep.residual])
        if rep.status != 0:
            failed.append((rep.q, rep.message))
    out = args.out_dir / _resolve(args, "out", "sweep_report.csv")
    _save_csv(out, "q,k_numeric,log_k_numeric,k_asym,ratio,"
                   "abs_ratio_minus_1_times_logq,iters,residual",
              [np.array(col) for col in zip(*rows)])
    config = {"n": n, "q_list": q_list, "tol": tol, "out": out.name}
    _write_manifest(args, "sweep", config, [out])
    _note(args, f"wrote {out}")
    if failed:
        for q, msg in failed:
            sys.stderr.write(f"sweep: q={q} did not converge: {msg}\n")
        return 2
    return 0


def _cmd_physical(args):
    if args.from_solve is not None:
        try:
            with open(args.from_solve) as fh:
                rep = json.load(fh)
            q, k = rep["q"], rep["k_numeric"]
        except (OSError, KeyError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read solve report "
                           f"{args.from_solve!r}: {exc}") from exc
    else:
        if args.q is None or args.k is None:
            raise CliError("pass --q and --k, or --from-solve report.json")
        q, k = args.q, args.k
    alpha = _resolve(args, "alpha", 0.0)
    trip = physical.physical_from_reduced(alpha, q, k)
    doc = {"alpha": trip.alpha, "beta": trip.beta, "Omega": trip.Omega,
           "k_star": trip.k_star, "a": trip.a, "delta": trip.delta,
           "q": trip.q, "k": trip.k, "Omega_hat": trip.Omega_hat}
    res1, res2 = physical.dispersion_check(trip.alpha, trip.beta, trip.Omega,
                                           trip.k_star)
    doc["dispersion_residual"] = res1
    doc["amplitude_residual"] = res2
    config = {"alpha": alpha, "q": q, "k": k, "from_solve": args.from_solve}
    _write_manifest(args, "physical", config, [])
    _emit(args, doc)
    return 0


def _cmd_field(args):
    try:
        with open(args.solve_report) as fh:
            rep = json.load(fh)
        n, q = int(rep["n"]), float(rep["q"])
        k, c_f = float(rep["k_numeric"]), float(rep["c_f"])
        rep_rmax, tol = float(rep["r_max"]), float(rep["tol"])
    except (OSError, KeyError, json.JSONDecodeError, TypeError) as exc:
        raise CliError(f"cannot read solve report {args.solve_report!r}: "
                       f"{exc}") from exc
    if args.extent <= 0:
        raise CliError(f"--extent must be positive, got {args.extent!r}")
    # rebuild the profile from the report's warm start, enlarging the
    # domain when the requested window extends past the reported one
    r_max = max(rep_rmax, float(args.extent))
    profile, rep2 = solver.solve_spiral(n, q, init=(c_f, k), tol=tol,
                                        r_max=r_max)
    table = field.theta_of_r(profile)
    omega = _resolve(args, "omega", q * (1.0 - rep2.k_numeric ** 2))
    grid = field.sample_field(profile, table, n, omega, args.t,
                              (args.nx, args.ny, args.extent),
                              chirality=args.chirality)
    out = args.out_dir / _resolve(args, "out", "field.csv")
    fmt = "json" if str(out).endswith(".json") else "csv"
    field.export(grid, out, fmt)
    config = {"solve_report": args.solve_report, "nx": args.nx,
              "ny": args.ny, "extent": args.extent, "t": args.t,
              "chirality": args.chirality, "omega": omega, "out": out.name}
    _write_manifest(args, "field", config, [out])
    _note(args, f"wrote {out}")
    return 0


def _selfcheck_rows():
    rows = []

    def add(name, value, bound):
        rows.append((name, float(value), float(bound)))

    # special function branches against the quadrature oracle
    for nu, x in ((0.05, 0.5), (0.3, 1.0)):
        ref = specfun.k_imag(nu, x, method="quadrature")
        got = specfun.k_imag(nu, x)
        add(f"series vs quadrature nu={nu}",
            abs(got.value / ref.value - 1.0), 1e-9)
    ref = specfun.k_imag(0.1, 12.0, method="quadrature")
    got = specfun.k_imag(0.1, 12.0)
    add("asymptotic vs quadrature", abs(got.value / ref.value - 1.0), 1e-6)

    scan = outer.property_scan(0.1, R_max=100.0, points=120)
    add("far-field slope equation residual", scan["riccati_worst"], 1e-8)
    # margins are "pass when positive"; report the negated margin so the
    # shared value <= bound convention applies, bounded by 0
    add("far-field slope sign margin", -scan["sign_margin"], 0.0)
    add("far-field slope monotone margin", -scan["monotone_margin"], 0.0)

    prof = core.solve_profile(1)
    add("core boundary residual", prof.bc_residual, 1e-8)
    tail = core.tail_constant(prof)
    add("tail constant halving gap", tail.halving_gap, 1e-6)

    rng = np.random.default_rng(1234)
    worst = 0.0
    for _ in range(200):
        alpha = rng.uniform(-1.5, 1.5)
        q = rng.uniform(-0.9, 0.9)
        k = rng.uniform(0.0, 0.85)
        if 1.0 - alpha * q < 0.05 or 1.0 - alpha * q * (1 - k * k) < 0.05:
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            t = physical.physical_from_reduced(alpha, q, k)
        r1, r2 = physical.dispersion_check(alpha, t.beta, t.Omega, t.k_star)
        worst = max(worst, abs(r1), abs(r2))
    add("parameter-map dispersion residual", worst, 1e-12)

    cn = wavenumber.matching_constant(1)
    kap = wavenumber.kappa_asym(1, 0.5, cn=cn)
    recon = kap.log_value + math.log(0.5) + math.pi / (2 * 0.5) \
        + cn + wavenumber.EULER_GAMMA - math.log(2.0)
    add("selection formula composition", abs(recon), 1e-12)

    profile, rep = solver.solve_spiral(1, 0.5)
    add("twisted solve first integral gap", profile.first_integral_gap(), 1e-9)
    add("twisted solve boundary mismatch",
        max(abs(rep.boundary_residuals[0]), abs(rep.boundary_residuals[1])),
        1e-6)
    add("twisted solve iterations", rep.newton_iterations, 50)
    return rows


def _cmd_selfcheck(args):
    rows = _selfcheck_rows()
    ok = all(value <= bound for _, value, bound in rows)
    if args.as_json:
        doc = [{"check": name, "value": value, "bound": bound,
                "ok": value <= bound} for name, value, bound in rows]
        _emit(args, doc)
    else:
        width = max(len(name) for name, _, _ in rows)
        lines = [f"{'check':<{width}}  {'value':>12}  {'bound':>9}  "
                 f"{'margin':>9}  status"]
        for name, value, bound in rows:
            margin = bound / value if value > 0 else math.inf
            status = "OK" if value <= bound else "FAIL"
            lines.append(f"{name:<{width}}  {value:>12.3e}  {bound:>9.1e}  "
                         f"{margin:>8.1f}x  {status}")
        sys.stdout.write("\n".join(lines) + "\n")
    config = {}
    _write_manifest(args, "selfcheck", config, [])
    return 0 if ok else 2


# ----------------------------------------------------------------- parser

def _add_global_options(parser, suppress):
    # the same options live on the main parser (with real defaults) and on
    # every subparser (defaulting to SUPPRESS so they do not clobber values
    # given before the subcommand)
    d = argparse.SUPPRESS if suppress else None
    flag_d = argparse.SUPPRESS if suppress else False
    parser.add_argument("--config", default=d,
                        help="JSON file with default option values; "
                             "explicit flags win")
    parser.add_argument("--tol", type=float, default=d,
                        help="numerical tolerance for solver commands")
    parser.add_argument("--out-dir", dest="out_dir", default=d,
                        help="directory for output files and manifests "
                             "(default: current directory)")
    parser.add_argument("--quiet", action="store_true", default=flag_d,
                        help="suppress status notes (results still print)")
    parser.add_argument("--json", dest="as_json", action="store_true",
                        default=flag_d,
                        help="machine-readable output where a table is the "
                             "default")


def build_parser():
    parser = _Parser(prog="cglspiral",
                     description="spiral-wave profiles, selected wavenumbers "
                                 "and their asymptotics")
    _add_global_options(parser, suppress=False)
    common = _Parser(add_help=False)
    _add_global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("bessel-eval", parents=[common], help="evaluate one modified Bessel value")
    p.add_argument("--kind", required=True, choices=("Kinu", "Kn", "In"))
    p.add_argument("--nu", type=float, default=None)
    p.add_argument("--n", type=float, default=None)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--method", default="auto",
                   choices=("auto", "series", "asym", "quad"))
    p.set_defaults(handler=_cmd_bessel_eval)

    p = sub.add_parser("outer-eval", parents=[common], help="tabulate the far-field branch")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--r-grid", required=True,
                   help="radial grid as lo:hi:count (geometric) or "
                        "lo:hi:count:lin")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_outer_eval)

    p = sub.add_parser("inner-solve", parents=[common], help="solve the untwisted core profile")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r-max", dest="r_max", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_inner_solve)

    p = sub.add_parser("kappa", parents=[common], help="selected-wavenumber asymptotics")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--cn", default="auto",
                   help="matching constant: a number, or 'auto' to compute "
                        "it from the core profile")
    p.set_defaults(handler=_cmd_kappa)

    p = sub.add_parser("solve", parents=[common], help="twisted profile and wavenumber solve")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--k-init", dest="k_init", default="auto")
    p.add_argument("--r-max", dest="r_max", default="auto")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_solve)

    p = sub.add_parser("sweep", parents=[common], help="descending-twist wavenumber sweep")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q-list", dest="q_list", required=True,
                   help="comma-separated strictly descending twists")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("physical", parents=[common], help="map reduced parameters to physical")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--from-solve", dest="from_solve", default=None,
                   help="pull q and k from a solve report JSON")
    p.set_defaults(handler=_cmd_physical)

    p = sub.add_parser("field", parents=[common], help="sample and export the planar field")
    p.add_argument("--solve-report", dest="solve_report", required=True)
    p.add_argument("--nx", type=int, default=512)
    p.add_argument("--ny", type=int, default=512)
    p.add_argument("--extent", type=float, required=True)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--chirality", type=int, default=1, choices=(1, -1))
    p.add_argument("--omega", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_field)

    p = sub.add_parser("selfcheck", parents=[common], help="run the invariant suite and print "
                                         "margins")
    p.set_defaults(handler=_cmd_selfcheck)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    args.config_values = {}
    if args.config is not None:
        try:
            with open(args.config) as fh:
                args.config_values = json.load(fh)
            if not isinstance(args.config_values, dict):
                raise CliError(f"config {args.config!r} must hold a JSON "
                               "object")
        except (OSError, json.JSONDecodeError) as exc:
            sys.stderr.write(f"cglspiral: bad config: {exc}\n")
            return 1
    args.out_dir = Path(_resolve(args, "out_dir", "."))
    try:
        args.out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        sys.stderr.write(f"cglspiral: cannot create {args.out_dir}: {exc}\n")
        return 1
    try:
        return args.handler(args)
    except CliError as exc:
        sys.stderr.write(f"cglspiral: {exc}\n")
        return 1
    except ValueError as exc:
        sys.stderr.write(f"cglspiral: {exc}\n")
        return 1
    except RuntimeError as exc:
        sys.stderr.write(f"cglspiral: did not converge: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
