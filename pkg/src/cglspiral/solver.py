"""Full nonlinear solve for a rotating n-armed solution at twist q.

Unknowns are the radial amplitude f, its phase gradient v, the core
slope coefficient c_f, and the selected wavenumber k.  The working
variables are (f, g = f', w = r f^2 v): w obeys the exact first
integral w' = -q r f^2 (1 - f^2 - k^2), which keeps the phase equation
regular through the origin where dividing by f would not be.

The two-point problem runs from a series start at r_start to an outer
matching radius r_max chosen so that k|q| r_max is order one, where f
and v are tied to the decaying far-field pair built from the imaginary
order Bessel cone (see :mod:`cglspiral.outer`).  A damped-Newton
collocation scheme (scipy's solve_bvp) carries (c_f, log k) as unknown
parameters; log k because k spans many orders of magnitude across a
twist sweep.  Plain origin shooting is kept as a diagnostic
(:func:`integrate_from_origin`) but cannot reach the far boundary at
tolerance: the growing mode amplifies initial rounding by e^{sqrt(2) r}.

Negative twist is solved natively (the mirror solution with v negated);
zero twist returns the untwisted core profile with k = 0 exactly.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson, solve_bvp, solve_ivp

from . import core, outer, wavenumber

__all__ = [
    "SpiralParams", "RadialProfile", "WavenumberReport",
    "system_residual", "lambda_omega_residual", "cgl_lambda_omega",
    "integrate_from_origin", "outer_mismatch", "solve_spiral",
    "wavenumber_sweep",
]

_TINY = 1e-300
R_START_DEFAULT = 1e-3
# target for k|q|*r_max; the outer-dominant model error shrinks with R,
# the domain (and node count) grows, and [0.5, 2] is the validated window
R_MATCH_TARGET = 1.6
R_MATCH_WINDOW = (0.5, 2.0)


@dataclass(frozen=True)
class SpiralParams:
    """Arm count, twist, and wavenumber bundle."""

    n: int
    q: float
    k: float

    def __post_init__(self):
        if self.n < 1 or int(self.n) != self.n:
            raise ValueError(f"arm count must be a positive integer, got {self.n!r}")
        if self.k < 0.0 or self.k >= 1.0:
            raise ValueError(f"wavenumber must lie in [0, 1), got {self.k!r}")

    @property
    def eps(self):
        return self.k * abs(self.q)

    @property
    def nu(self):
        return self.n * abs(self.q)

    @property
    def mu(self):
        """Prefactor k |q| e^{pi/(2 n |q|)}, composed in log space."""
        if self.q == 0.0 or self.k == 0.0:
            return 0.0
        log_mu = math.log(self.k) + math.log(abs(self.q)) \
            + math.pi / (2.0 * self.n * abs(self.q))
        return math.exp(log_mu) if log_mu < 709.0 else math.inf


@dataclass
class RadialProfile:
    """Converged (or diagnostic) radial solution on a grid.

    ``integral`` holds I(r) = int_0^r xi f^2 (1 - f^2 - k^2) dxi computed
    by independent quadrature over the dense interpolant, so comparing
    r f^2 v against -q I is a real consistency check, not a tautology.
    """

    n: int
    q: float
    k: float
    c_f: float
    r_grid: np.ndarray
    f: np.ndarray
    df: np.ndarray
    v: np.ndarray
    integral: np.ndarray
    w: np.ndarray
    interpolant: object = None
    escaped: bool = False
    escape_radius: float = math.nan

    @property
    def r_start(self):
        return float(self.r_grid[0])

    @property
    def r_max(self):
        return float(self.r_grid[-1])

    def first_integral_gap(self):
        """sup |r f^2 v + q I| over the grid (exact identity on solutions)."""
        return float(np.max(np.abs(self.w + self.q * self.integral)))

    def f_at(self, r):
        """Amplitude at radii r: series below r_start, interpolant above."""
        scalar = np.isscalar(r)
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.empty_like(r)
        low = r < self.r_start
        if np.any(low):
            out[low] = core.core_series(self.n, self.c_f, r[low])[0]
        if np.any(~low):
            out[~low] = self.interpolant(r[~low])[0]
        return out[0] if scalar else out

    def v_at(self, r):
        """Phase gradient at radii r, origin-regular below r_start."""
        scalar = np.isscalar(r)
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.empty_like(r)
        low = r < self.r_start
        if np.any(low):
            k2 = self.k * self.k
            out[low] = -self.q * (1.0 - k2) * r[low] / (2 * self.n + 2)
        if np.any(~low):
            y = self.interpolant(r[~low])
            out[~low] = y[2] / (r[~low] * y[0] * y[0] + _TINY)
        return out[0] if scalar else out


@dataclass
class WavenumberReport:
    """Outcome of one full solve, with the asymptotic comparison."""

    n: int
    q: float
    k_numeric: float
    k_asymptotic: float
    ratio: float
    boundary_residuals: tuple
    newton_iterations: int
    residual: float
    r_max: float
    mu: float
    c_f: float
    properties: dict = field(default_factory=dict)
    status: int = 0
    message: str = "converged"

    @property
    def abs_ratio_minus_1_times_logq(self):
        if not math.isfinite(self.ratio):
            return math.nan
        return abs(self.ratio - 1.0) * abs(math.log(abs(self.q)))


def system_residual(r, f, df, ddf, v, dv, params):
    """Residuals of the reduced amplitude/phase system at given states.

    res_f = f'' + f'/r - f n^2/r^2 + f (1 - f^2 - v^2)
    res_v = f v' + f v / r + 2 f' v + q f (1 - f^2 - k^2)

    Both vanish on exact rotating solutions.
    """
    n, q, k = params.n, params.q, params.k
    res_f = ddf + df / r - f * n * n / (r * r) + f * (1.0 - f * f - v * v)
    res_v = f * dv + f * v / r + 2.0 * df * v + q * f * (1.0 - f * f - k * k)
    return res_f, res_v


def lambda_omega_residual(r, f, df, ddf, chi_d, chi_dd, lambda_fn, omega_fn,
                          Omega, n=1):
    """Residuals of the general modulus/phase reaction-diffusion reduction.

    res_f   = f'' + f'/r - f n^2/r^2 + f (lambda(f) - chi'^2)
    res_chi = f chi'' + f chi'/r + 2 f' chi' + f (omega(f) - Omega)

    With lambda(z) = 1 - z^2 and omega(z) = Omega + q(1 - k^2 - z^2) these
    coincide with :func:`system_residual` identically.
    """
    lam = lambda_fn(f)
    om = omega_fn(f)
    res_f = ddf + df / r - f * n * n / (r * r) + f * (lam - chi_d * chi_d)
    res_chi = f * chi_dd + f * chi_d / r + 2.0 * df * chi_d + f * (om - Omega)
    return res_f, res_chi


def cgl_lambda_omega(q, k, Omega):
    """The modulus/frequency pair that specializes the general reduction."""
    k2 = k * k
    lam = lambda z: 1.0 - z * z
    om = lambda z: Omega + q * (1.0 - k2 - z * z)
    return lam, om


def _series_start(n, q, c, k2, r_start):
    fs, dfs = core.core_series(n, c, r_start)
    w0 = -q * c * c * (1.0 - k2) * r_start ** (2 * n + 2) / (2 * n + 2)
    return fs, dfs, w0


def integrate_from_origin(params, c_f_guess, r_max, rtol=1e-10, atol=1e-13,
                          n_out=2000, r_start=R_START_DEFAULT):
    """March the profile outward from a series start at given (c_f, k).

    The phase gradient is advanced through its running integral
    I' = r f^2 (1 - f^2 - k^2) with v = -q I/(r f^2), which is regular at
    the origin.  Marching stops early when f escapes the physical strip
    (crosses zero or runs past 1.05); the escape radius is recorded for
    bracketing diagnostics.  Not a boundary-tolerance route: the growing
    mode amplifies rounding by e^{sqrt(2) r}.
    """
    if c_f_guess <= 0.0:
        raise ValueError(f"core slope must be positive, got {c_f_guess!r}")
    n, q, k = params.n, params.q, params.k
    k2 = k * k

    def rhs(r, y):
        f, g, I = y
        v = -q * I / (r * f * f + _TINY)
        return [g,
                -g / r + n * n * f / (r * r) - f * (1.0 - f * f - v * v),
                r * f * f * (1.0 - f * f - k2)]

    def escape(r, y):
        return min(y[0] - (-0.02), 1.05 - y[0])
    escape.terminal = True
    escape.direction = -1

    fs, dfs, w0 = _series_start(n, q, c_f_guess, k2, r_start)
    I0 = c_f_guess ** 2 * (1.0 - k2) * r_start ** (2 * n + 2) / (2 * n + 2)
    grid = np.geomspace(r_start, r_max, n_out)
    sol = solve_ivp(rhs, (r_start, r_max), [fs, dfs, I0], method="DOP853",
                    rtol=rtol, atol=atol, dense_output=True, events=escape,
                    t_eval=grid)
    if not sol.success and sol.status != 1:
        raise RuntimeError(f"outward march failed: {sol.message}")
    escaped = sol.status == 1
    r_esc = float(sol.t_events[0][0]) if escaped else math.nan
    r = sol.t
    f, g, I = sol.y
    v = -q * I / (r * f * f + _TINY)
    return RadialProfile(n=n, q=q, k=k, c_f=c_f_guess, r_grid=r, f=f, df=g,
                         v=v, integral=I, w=-q * I, interpolant=sol.sol,
                         escaped=escaped, escape_radius=r_esc)


def _outer_pair(params, r):
    """Far-field dominant (f, v) at radius r for the given parameters."""
    sgn = 1.0 if params.q >= 0 else -1.0
    R = params.eps * r
    V0, _ = outer.decay_slope(params.nu, R)
    k2 = params.k * params.k
    rad = 1.0 - k2 * V0 * V0 - (params.eps * params.n / R) ** 2
    if rad <= 0.0:
        raise ValueError(
            f"far-field amplitude undefined at R={R:.4g} (core region)")
    return math.sqrt(rad), sgn * params.k * V0


def outer_mismatch(f_end, v_end, params, r_max):
    """How far the profile's endpoint sits from the far-field dominants.

    Raises when k|q| r_max is outside the window where the decaying
    branch is validated (below the oscillation floor, or far past the
    checked range).
    """
    R = params.eps * r_max
    floor = outer.validity_floor(params.nu)
    if not (floor <= R <= 1e3):
        raise ValueError(
            f"matching radius R={R:.4g} outside validated window "
            f"[{floor:.4g}, 1e3] for nu={params.nu:.4g}")
    f_o, v_o = _outer_pair(params, r_max)
    return float(f_end - f_o), float(v_end - v_o)


def _collocation_solve(n, q, k0, c0, r_max, tol, n_mesh, max_nodes,
                       r_start, warm=None):
    nu = n * abs(q)
    sgn = 1.0 if q > 0 else -1.0

    def fun(r, y, p):
        f, g, w = y
        k = np.exp(p[1])
        v = w / (r * f * f + _TINY)
        return np.vstack([
            g,
            -g / r + n * n * f / (r * r) - f * (1.0 - f * f - v * v),
            -q * r * f * f * (1.0 - f * f - k * k),
        ])

    def bc(ya, yb, p):
        c, logk = p
        k = np.exp(logk)
        k2 = min(k * k, 0.98)
        fs, dfs, w0 = _series_start(n, q, c, k2, r_start)
        eps = k * abs(q)
        R = eps * r_max
        try:
            V0, _ = outer.decay_slope(nu, R)
            rad = 1.0 - k2 * V0 * V0 - (eps * n / R) ** 2
            f_o = math.sqrt(max(rad, 1e-12))
            v_o = sgn * k * V0
        except Exception:
            f_o = math.sqrt(1.0 - k2)
            v_o = -sgn * k
        v_end = yb[2] / (r_max * yb[0] * yb[0] + _TINY)
        return np.array([ya[0] - fs, ya[1] - dfs, ya[2] - w0,
                         yb[0] - f_o, v_end - v_o])

    if warm is not None:
        r = warm["r"]
        y = warm["y"]
    else:
        r = np.geomspace(r_start, r_max, n_mesh)
        prof0 = core.solve_profile(n)
        f0 = prof0.f(r)
        rb = k0 * (2 * n + 2) / (abs(q) * (1.0 - k0 * k0))
        v0 = -sgn * k0 * r / np.sqrt(r * r + rb * rb)
        y = np.vstack([f0, prof0.df(r), r * f0 * f0 * v0])
    return solve_bvp(fun, bc, r, y, p=[c0, math.log(k0)], tol=tol,
                     max_nodes=max_nodes, verbose=0), bc


def _profile_from_collocation(n, q, sol, r_start):
    c = float(sol.p[0])
    k = float(np.exp(sol.p[1]))
    r = sol.x
    f, g, w = sol.y
    v = w / (r * f * f)
    # independent quadrature of the first-integral right-hand side:
    # per-interval Simpson with interpolant midpoints, cumulated exactly
    # at the solver nodes (no resample-and-interpolate error)
    k2 = k * k
    g_node = r * f * f * (1.0 - f * f - k2)
    mid = 0.5 * (r[:-1] + r[1:])
    fm = sol.sol(mid)[0]
    g_mid = mid * fm * fm * (1.0 - fm * fm - k2)
    seg = np.diff(r) / 6.0 * (g_node[:-1] + 4.0 * g_mid + g_node[1:])
    head = c * c * (1.0 - k2) * r_start ** (2 * n + 2) / (2 * n + 2)
    I = head + np.concatenate([[0.0], np.cumsum(seg)])
    return RadialProfile(n=n, q=q, k=k, c_f=c, r_grid=r, f=f, df=g, v=v,
                         integral=I, w=w, interpolant=sol.sol)


def _check_properties(profile, report):
    """Pointwise structure checks; violations mark the solve suspect."""
    k2 = profile.k * profile.k
    cap = math.sqrt(1.0 - k2)
    f, v = profile.f, profile.v
    props = {
        "f_increasing": bool(np.all(np.diff(f) > -1e-12)),
        "f_in_range": bool(np.all((f > 0.0) & (f < cap + 1e-12))),
        "v_negative": bool(np.all((v < 0.0) if profile.q > 0 else (v > 0.0))) if profile.q != 0 else True,
        "far_slope_small": bool(abs(profile.df[-1]) <=
                                100.0 * (profile.n ** 2 / profile.r_max ** 3
                                         + profile.k * k2 * abs(profile.q))),
    }
    props["suspect"] = not all(props.values())
    report.properties = props
    if props["suspect"]:
        report.message = "converged but structure checks failed: " + ", ".join(
            name for name, ok in props.items() if name != "suspect" and not ok)


def _q0_solve(n, tol):
    prof0 = core.solve_profile(n)
    r = np.geomspace(R_START_DEFAULT, prof0.r_max, 4001)
    f = prof0.f(r)
    df = prof0.df(r)
    zero = np.zeros_like(r)
    integrand = r * f * f * (1.0 - f * f)
    head = prof0.c_f ** 2 * r[0] ** (2 * n + 2) / (2 * n + 2)
    I = cumulative_simpson(integrand, x=r, initial=0.0) + head
    interp = lambda rr: np.vstack([prof0.f(rr), prof0.df(rr),
                                   np.zeros_like(np.asarray(rr, float))])
    profile = RadialProfile(n=n, q=0.0, k=0.0, c_f=prof0.c_f, r_grid=r, f=f,
                            df=df, v=zero, integral=I, w=zero,
                            interpolant=interp)
    report = WavenumberReport(n=n, q=0.0, k_numeric=0.0, k_asymptotic=0.0,
                              ratio=math.nan, boundary_residuals=(0.0, 0.0),
                              newton_iterations=0, residual=prof0.rms_residual,
                              r_max=prof0.r_max, mu=0.0, c_f=prof0.c_f)
    _check_properties(profile, report)
    return profile, report


def solve_spiral(n, q, init=None, tol=1e-10, r_max=None, n_mesh=1400,
                 max_nodes=200000, max_domain=1e5, r_start=R_START_DEFAULT):
    """Solve for the rotating profile and selected wavenumber at twist q.

    ``init`` optionally supplies (c_f, k) starting values; by default the
    untwisted core slope and the asymptotic wavenumber seed the solve.
    The matching radius (unless given) targets k|q| r_max ~ 1.6 and is
    re-adapted once if the converged k lands outside the validated
    window.  Twists requiring a domain beyond ``max_domain`` are refused
    with the log-scale requirement spelled out rather than thrashing.
    """
    if q == 0.0:
        return _q0_solve(n, tol)
    ka = wavenumber.kappa_asym(n, abs(q))
    if init is not None:
        c0, k0 = init
        if not (0.0 < k0 < 1.0) or c0 <= 0.0:
            raise ValueError(f"initial (c_f, k)=({c0!r}, {k0!r}) out of range")
    else:
        c0 = core.solve_profile(n).c_f
        k0 = min(ka.value, 0.3) if not ka.underflowed else 0.0
    if k0 == 0.0:
        raise ValueError(
            f"twist q={q} is below the tractable window: the selected "
            f"wavenumber has log k = {ka.log_value:.1f}, far beyond "
            "double-precision dynamic range")
    chosen_r_max = r_max
    if chosen_r_max is None:
        chosen_r_max = R_MATCH_TARGET / (k0 * abs(q))
        if chosen_r_max > max_domain:
            raise ValueError(
                f"twist q={q} needs a matching radius ~{chosen_r_max:.3g} "
                f"(log k = {ka.log_value:.2f}), beyond the domain budget "
                f"{max_domain:.3g}; raise max_domain to attempt it anyway")

    sol = None
    for attempt in range(3):
        sol, bc_fn = _collocation_solve(n, q, k0, c0, chosen_r_max, tol,
                                        n_mesh, max_nodes, r_start)
        if sol.status != 0:
            raise RuntimeError(
                f"collocation failed at n={n}, q={q} (r_max={chosen_r_max:.4g}): "
                f"{sol.message}")
        k = float(np.exp(sol.p[1]))
        R_actual = k * abs(q) * chosen_r_max
        if r_max is not None or R_MATCH_WINDOW[0] <= R_actual <= R_MATCH_WINDOW[1]:
            break
        # re-adapt the domain around the solved k and warm-start
        chosen_r_max = R_MATCH_TARGET / (k * abs(q))
        if chosen_r_max > max_domain:
            raise ValueError(
                f"twist q={q}: converged k={k:.4g} pushes the matching "
                f"radius to {chosen_r_max:.3g}, beyond the domain budget")
        c0, k0 = float(sol.p[0]), k

    k = float(np.exp(sol.p[1]))
    profile = _profile_from_collocation(n, q, sol, r_start)
    params = SpiralParams(n=n, q=q, k=k)
    try:
        m_f, m_v = outer_mismatch(profile.f[-1], profile.v[-1], params,
                                  profile.r_max)
    except ValueError:
        m_f, m_v = math.nan, math.nan
    ratio = k / ka.value if ka.value > 0 else math.inf
    report = WavenumberReport(
        n=n, q=q, k_numeric=k, k_asymptotic=ka.value, ratio=ratio,
        boundary_residuals=(m_f, m_v), newton_iterations=int(sol.niter),
        residual=float(np.max(sol.rms_residuals)), r_max=profile.r_max,
        mu=params.mu, c_f=profile.c_f)
    _check_properties(profile, report)
    return profile, report


def wavenumber_sweep(n, q_list, tol=1e-10, **kwargs):
    """Descending-twist sweep with asymptotically warm-started seeds.

    Each solve seeds the next through the asymptotic transfer
    log k(q_next) ~ log k(q_prev) + [log kappa(q_next) - log kappa(q_prev)].
    Per-twist failures are isolated: the report row carries the error
    message and the sweep continues.
    """
    qs = list(q_list)
    if any(b >= a for a, b in zip(qs, qs[1:])):
        raise ValueError(f"sweep twists must be strictly descending, got {qs}")
    reports = []
    k_prev = c_prev = q_prev = None
    for q in qs:
        try:
            if k_prev is None:
                init = None
            else:
                lk = math.log(k_prev) \
                    + wavenumber.kappa_asym(n, abs(q)).log_value \
                    - wavenumber.kappa_asym(n, abs(q_prev)).log_value
                init = (c_prev, math.exp(lk))
            profile, report = solve_spiral(n, q, init=init, tol=tol, **kwargs)
            k_prev, c_prev, q_prev = report.k_numeric, report.c_f, q
        except (ValueError, RuntimeError) as exc:
            report = WavenumberReport(
                n=n, q=q, k_numeric=math.nan, k_asymptotic=math.nan,
                ratio=math.nan, boundary_residuals=(math.nan, math.nan),
                newton_iterations=0, residual=math.nan, r_max=math.nan,
                mu=math.nan, c_f=math.nan, status=2, message=str(exc))
        reports.append(report)
    return reports
