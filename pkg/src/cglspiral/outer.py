"""Far-field description of the rotating spiral in the stretched radius.

Beyond the core the phase gradient locks onto the decaying solution of the
stretched linear problem: with R = eps r, eps = k |q|, the reduced slope

    V0(R) = K'_{i nu}(R) / K_{i nu}(R),     nu = n |q|,

obeys the Riccati equation V0' = 1 - nu^2/R^2 - V0/R - V0^2 and rises
monotonically from large negative values toward -1 - 1/(2R).  The physical
phase gradient and amplitude follow as

    v(r) = sgn(q) k V0(eps r),
    f(r) = sqrt(1 - k^2 V0^2 - eps^2 n^2 / R^2).

K_{i nu} oscillates for very small argument, so the slope only has its
single-signed meaning above a floor ~ 2 e^{-pi/(2 nu)}; calls below it are
refused unless explicitly overridden.  Above the slightly higher floor
2 e^2 e^{-pi/(2 nu)} the slope is provably negative and increasing, which
is what the scan here measures.

Ratios K'/K and K''/K are formed scale-free in the large-argument branch
(the e^{-R} envelope cancels analytically), so slopes remain finite far
past the argument where K itself underflows float64.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .specfun import X_SPLIT_DEFAULT, MAX_TERMS_DEFAULT

__all__ = [
    "OuterParams", "validity_floor", "sign_floor", "decay_slope",
    "slope_cotangent", "amplitude_factor", "v_out", "f_out",
    "property_scan",
]


def validity_floor(nu):
    """Smallest stretched radius with a single-signed decaying slope."""
    if nu <= 0.0:
        return 0.0
    return 2.0 * math.exp(-math.pi / (2.0 * nu))


def sign_floor(nu):
    """Floor above which the slope is guaranteed negative and increasing."""
    return specfun.sign_validity_floor(nu)


@dataclass(frozen=True)
class OuterParams:
    """Arm count, twist and spatial wavenumber of one far-field branch."""

    n: int
    q: float
    k: float

    def __post_init__(self):
        if self.n < 1 or int(self.n) != self.n:
            raise ValueError(f"arm count must be a positive integer, got {self.n!r}")
        if self.q == 0.0:
            raise ValueError("the far-field branch needs a nonzero twist")
        if self.k <= 0.0:
            raise ValueError(f"wavenumber must be positive, got {self.k!r}")

    @property
    def nu(self):
        return self.n * abs(self.q)

    @property
    def eps(self):
        return self.k * abs(self.q)

    @property
    def chirality(self):
        return 1.0 if self.q > 0.0 else -1.0


def decay_slope(nu, R, allow_oscillatory=False, x_split=X_SPLIT_DEFAULT,
                max_terms=MAX_TERMS_DEFAULT):
    """(V0, V0') of the decaying branch at stretched radius R.

    The derivative comes from the independently summed second derivative
    (series branch) or the scale-free expansion ratios (large argument),
    never from the Riccati equation itself, so residual tests against that
    equation stay meaningful.

    Below the oscillation floor the ratio has poles and sign flips; such
    calls raise unless ``allow_oscillatory`` is set.
    """
    if R <= 0.0:
        raise ValueError(f"stretched radius must be positive, got R={R!r}")
    if R < validity_floor(nu) and not allow_oscillatory:
        raise ValueError(
            f"stretched radius {R!r} is below the oscillation floor "
            f"{validity_floor(nu):.3e} for nu={nu!r}; the decaying slope "
            "is not single-signed there (pass allow_oscillatory=True to "
            "evaluate anyway)"
        )
    if R < x_split:
        K, K1, K2 = specfun.k_imag_triple(nu, R, x_split=x_split,
                                          max_terms=max_terms)
        if K == 0.0:
            raise ZeroDivisionError(
                f"K vanishes at R={R!r} (oscillatory regime)")
        V0 = K1 / K
        return V0, K2 / K - V0 * V0
    S, Sp, Spp, _ = specfun._asym_sums(nu, R, max_terms=max_terms)
    w = -1.0 - 1.0 / (2.0 * R) + Sp / S
    wp = 1.0 / (2.0 * R * R) + Spp / S - (Sp / S) ** 2
    return w, wp


def slope_cotangent(nu, R):
    """Leading small-argument form of the slope, (nu/R) cot(nu log(R/2) - theta0).

    Valid to relative O(R^2) between the oscillation poles; used to place
    the matching window and as an independent cross-check of
    :func:`decay_slope` at small stretched radius.
    """
    if R <= 0.0:
        raise ValueError(f"stretched radius must be positive, got R={R!r}")
    theta0 = specfun.gamma_arg(0, nu).theta
    return (nu / R) / math.tan(nu * math.log(0.5 * R) - theta0)


def amplitude_factor(params, R, x_split=X_SPLIT_DEFAULT):
    """(F0, F0') of the far-field amplitude at stretched radius R.

    F0 = sqrt(1 - k^2 V0^2 - eps^2 n^2 / R^2); decays to sqrt(1 - k^2) as
    R grows.  Raises when the radicand is not positive, which happens when
    the evaluation point is pushed into the core region where this
    description does not apply.
    """
    V0, dV0 = decay_slope(params.nu, R, x_split=x_split)
    k2 = params.k * params.k
    cent = (params.eps * params.n / R) ** 2
    rad = 1.0 - k2 * V0 * V0 - cent
    if rad <= 0.0:
        raise ValueError(
            f"amplitude radicand {rad:.3e} is not positive at R={R!r}; "
            "the far-field form does not extend this far inward"
        )
    F0 = math.sqrt(rad)
    dF0 = (-k2 * V0 * dV0 + cent / R) / F0
    return F0, dF0


def _stretched_radius(params, r, log_r):
    if (r is None) == (log_r is None):
        raise ValueError("pass exactly one of r or log_r")
    if r is not None:
        if r <= 0.0:
            raise ValueError(f"radius must be positive, got r={r!r}")
        return params.eps * r
    # exponentially large radii enter through their logarithm so the
    # stretched product forms without overflow
    return math.exp(math.log(params.eps) + log_r)


def v_out(params, r=None, log_r=None, allow_oscillatory=False):
    """Far-field phase gradient at physical radius r (or its log).

    Negative-twist branches are the mirror images of positive ones: the
    gradient flips sign with the chirality.
    """
    R = _stretched_radius(params, r, log_r)
    V0, _ = decay_slope(params.nu, R, allow_oscillatory=allow_oscillatory)
    return params.chirality * params.k * V0


def f_out(params, r=None, log_r=None):
    """Far-field amplitude at physical radius r (or its log)."""
    R = _stretched_radius(params, r, log_r)
    F0, _ = amplitude_factor(params, R)
    return F0


def property_scan(nu, R_max=1000.0, points=200):
    """Measure the slope's guaranteed shape on its certified window.

    Scans [sign floor, R_max]: the worst Riccati residual (with the
    independent second derivative), the sign and monotonicity margins, and
    the fitted constant of the far law |V0 + 1 + 1/(2R)| <= c / R^2.
    """
    lo = sign_floor(nu)
    grid = np.geomspace(max(lo, 1e-300), R_max, points)
    V = np.empty_like(grid)
    dV = np.empty_like(grid)
    worst_resid = 0.0
    for i, R in enumerate(grid):
        R = float(R)
        V[i], dV[i] = decay_slope(nu, R)
        rhs = 1.0 - nu * nu / (R * R) - V[i] / R - V[i] * V[i]
        scale = max(1.0, V[i] * V[i], nu * nu / (R * R), abs(V[i]) / R)
        worst_resid = max(worst_resid, abs(dV[i] - rhs) / scale)
    far = grid >= 10.0
    far_fit = float(np.max(
        np.abs(V[far] + 1.0 + 1.0 / (2.0 * grid[far])) * grid[far] ** 2))
    return {
        "window": (float(grid[0]), float(grid[-1])),
        "riccati_worst": worst_resid,
        "sign_margin": float(np.min(-V)),
        "monotone_margin": float(np.min(np.diff(V))),
        "slope_margin": float(np.min(dV)),
        "far_law_constant": far_fit,
    }
