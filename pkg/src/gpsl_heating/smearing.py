"""Radial smearing-distribution algebra.

A profile is a normalized radial probability density g(r) on 3-space,
4*pi*int r^2 g dr = 1, with the variance convention

    scale^2 = (1/3) * int d^3x |x|^2 g(|x|)  <=>  4*pi*int r^4 g dr = 3*scale^2.

Families: isotropic Gaussian, sub-Gaussian exp(-(r/alpha_p scale)^p), the
compact quartic bump [(3s)^2-r^2]_+^2, the uniform ball of radius sqrt(5)*scale,
the increasing compact-support feedback optimum, and tabulated knots.

derive() exposes the objects every functional is built from: the enclosed-mass
fraction Q(r) = 4*pi*int_0^r mu^2 g dmu, the Newtonian potential kernel of the
smeared unit mass f_pot(r) = Q(r)/r + 4*pi*int_r^inf mu g dmu, and its gradient
f_pot_grad(r) = -Q(r)/r^2.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, interpolate, special

from .numerics import DomainError, QuadratureSpec, integrate_radial

KINDS = ("gaussian", "sub_gaussian", "compact_quartic", "optimal_feedback",
         "uniform_ball", "tabulated")


class SingularProfile(ValueError):
    """Profile shape makes the requested functional non-integrable."""


@dataclass(frozen=True)
class RadialProfile:
    """Immutable radial density; g and g_prime are vectorized in r."""

    kind: str
    scale: float
    support_radius: float | None
    params: dict = field(default_factory=dict)

    def g(self, r):
        return _FAMILY_G[self.kind](self, np.asarray(r, dtype=float))

    def g_prime(self, r):
        return _FAMILY_GPRIME[self.kind](self, np.asarray(r, dtype=float))


@dataclass(frozen=True)
class ProfileDerived:
    """Cached derived objects of a profile (all vectorized in r)."""

    Q: Callable
    f_pot: Callable
    f_pot_grad: Callable


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not value > 0 or not math.isfinite(value):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")
    return value


# ---------------------------------------------------------------- gaussian

def make_gaussian(scale: float) -> RadialProfile:
    """g(r) = (2 pi scale^2)^{-3/2} exp(-r^2 / 2 scale^2)."""
    scale = _require_positive("scale", scale)
    return RadialProfile("gaussian", scale, None)

def _gauss_g(p: RadialProfile, r):
    s2 = p.scale ** 2
    return (2 * np.pi * s2) ** -1.5 * np.exp(-r * r / (2 * s2))

def _gauss_gprime(p: RadialProfile, r):
    return -(r / p.scale ** 2) * _gauss_g(p, r)

def _gauss_Q(p: RadialProfile, r):
    x = np.asarray(r, dtype=float) / (math.sqrt(2) * p.scale)
    c = 2.0 / math.sqrt(math.pi)
    small = x < 1e-2
    # series for small x: the erf and exp terms cancel to O(x^3)
    xs = np.where(small, x, 0.0)
    series = c * (2 * xs**3 / 3 - 2 * xs**5 / 5 + xs**7 / 7 - xs**9 / 27)
    direct = special.erf(x) - c * x * np.exp(-x * x)
    return np.where(small, series, direct)

def _gauss_T(p: RadialProfile, r):
    # 4 pi int_r^inf mu g dmu
    return math.sqrt(2 / math.pi) / p.scale * np.exp(-r * r / (2 * p.scale ** 2))


# ------------------------------------------------------------ sub-gaussian

def sub_gaussian_alpha(p: float) -> float:
    """alpha_p = sqrt(3 Gamma(3/p) / Gamma(5/p)); alpha_2 = sqrt(2)."""
    return math.sqrt(3 * special.gamma(3 / p) / special.gamma(5 / p))

def make_sub_gaussian(p: float, scale: float) -> RadialProfile:
    """g(r) = C_p exp(-(r/alpha_p scale)^p) with the variance convention built in."""
    p = _require_positive("p", p)
    scale = _require_positive("scale", scale)
    beta = sub_gaussian_alpha(p) * scale
    cp = p / (4 * np.pi * special.gamma(3 / p) * beta ** 3)
    return RadialProfile("sub_gaussian", scale, None, {"p": p, "beta": beta, "cp": cp})

def _subg_g(prof: RadialProfile, r):
    p, beta, cp = prof.params["p"], prof.params["beta"], prof.params["cp"]
    return cp * np.exp(-((r / beta) ** p))

def _subg_gprime(prof: RadialProfile, r):
    p, beta = prof.params["p"], prof.params["beta"]
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        pwr = np.where(r > 0, (r / beta) ** (p - 1), 0.0 if p > 1 else np.nan)
    return -(p / beta) * pwr * _subg_g(prof, r)

def _subg_Q(prof: RadialProfile, r):
    p, beta = prof.params["p"], prof.params["beta"]
    return special.gammainc(3 / p, (np.asarray(r, dtype=float) / beta) ** p)

def _subg_T(prof: RadialProfile, r):
    p, beta = prof.params["p"], prof.params["beta"]
    front = special.gamma(2 / p) / (special.gamma(3 / p) * beta)
    return front * special.gammaincc(2 / p, (np.asarray(r, dtype=float) / beta) ** p)


# --------------------------------------------------------- compact quartic

def make_compact_quartic(scale: float) -> RadialProfile:
    """g(r) = 105/(32 pi a^7) * [a^2 - r^2]_+^2 with a = 3*scale."""
    scale = _require_positive("scale", scale)
    a = 3.0 * scale
    return RadialProfile("compact_quartic", scale, a, {"a": a})

def _quartic_g(prof: RadialProfile, r):
    a = prof.params["a"]
    w = np.maximum(a * a - r * r, 0.0)
    return 105.0 / (32 * np.pi * a ** 7) * w * w

def _quartic_gprime(prof: RadialProfile, r):
    a = prof.params["a"]
    w = np.maximum(a * a - r * r, 0.0)
    return -105.0 / (8 * np.pi * a ** 7) * r * w

def _quartic_Q(prof: RadialProfile, r):
    a = prof.params["a"]
    rc = np.minimum(np.asarray(r, dtype=float), a)
    return (105.0 / (8 * a ** 7)) * (a ** 4 * rc ** 3 / 3
                                     - 2 * a ** 2 * rc ** 5 / 5 + rc ** 7 / 7)

def _quartic_T(prof: RadialProfile, r):
    a = prof.params["a"]
    w = np.maximum(a * a - np.asarray(r, dtype=float) ** 2, 0.0)
    return (105.0 / (48 * a ** 7)) * w ** 3


# ------------------------------------------------------------ uniform ball

def make_uniform_ball(scale: float) -> RadialProfile:
    """Constant density on the ball of radius R = sqrt(5)*scale."""
    scale = _require_positive("scale", scale)
    R = math.sqrt(5) * scale
    return RadialProfile("uniform_ball", scale, R, {"R": R})

def _ball_g(prof: RadialProfile, r):
    R = prof.params["R"]
    return np.where(np.asarray(r, dtype=float) <= R, 3.0 / (4 * np.pi * R ** 3), 0.0)

def _ball_gprime(prof: RadialProfile, r):
    return np.zeros_like(np.asarray(r, dtype=float))

def _ball_Q(prof: RadialProfile, r):
    R = prof.params["R"]
    x = np.minimum(np.asarray(r, dtype=float) / R, 1.0)
    return x ** 3

def _ball_T(prof: RadialProfile, r):
    R = prof.params["R"]
    w = np.maximum(R * R - np.asarray(r, dtype=float) ** 2, 0.0)
    return 3.0 * w / (2 * R ** 3)


# -------------------------------------------------------- optimal feedback

def make_optimal_feedback(r_c_ref: float, support_radius: float,
                          scale: float) -> RadialProfile:
    """Increasing compact-support feedback optimum for a Gaussian collapse profile.

    g(r) = (exp(-R^2/2 rc^2)/R^3) * ((r^2+3 rc^2)/4 pi rc^2) * exp(r^2/2 rc^2)
    on [0, R); the caller (optimal_profiles) supplies the support radius R that
    enforces the variance constraint for the requested scale r_G.
    """
    r_c_ref = _require_positive("r_c_ref", r_c_ref)
    support_radius = _require_positive("support_radius", support_radius)
    scale = _require_positive("scale", scale)
    return RadialProfile("optimal_feedback", scale, support_radius,
                         {"r_c_ref": r_c_ref, "R": support_radius})

def _optf_exp_factor(prof: RadialProfile, r):
    # exp((r^2 - R^2)/(2 rc^2)) inside the support, 0 outside; fused so the
    # separate exp(R^2/2rc^2) never overflows at large supports
    rc, R = prof.params["r_c_ref"], prof.params["R"]
    r = np.asarray(r, dtype=float)
    expo = np.where(r <= R, (r * r - R * R) / (2 * rc * rc), -np.inf)
    return np.exp(expo)

def _optf_g(prof: RadialProfile, r):
    rc, R = prof.params["r_c_ref"], prof.params["R"]
    r = np.asarray(r, dtype=float)
    return (r * r + 3 * rc * rc) / (4 * np.pi * rc * rc * R ** 3) * _optf_exp_factor(prof, r)

def _optf_gprime(prof: RadialProfile, r):
    # derivative of the interior branch; the jump at R is not represented
    rc, R = prof.params["r_c_ref"], prof.params["R"]
    r = np.asarray(r, dtype=float)
    return r * (r * r + 5 * rc * rc) / (4 * np.pi * rc ** 4 * R ** 3) * _optf_exp_factor(prof, r)

def _optf_Q(prof: RadialProfile, r):
    R = prof.params["R"]
    r = np.asarray(r, dtype=float)
    q = (r / R) ** 3 * _optf_exp_factor(prof, r)
    return np.where(r <= R, q, 1.0)

def _optf_T(prof: RadialProfile, r):
    rc, R = prof.params["r_c_ref"], prof.params["R"]
    r = np.asarray(r, dtype=float)
    inside = (R * R + rc * rc) / R ** 3 - (r * r + rc * rc) / R ** 3 * _optf_exp_factor(prof, r)
    return np.where(r <= R, inside, 0.0)


# --------------------------------------------------------------- tabulated

_DENSE_PER_KNOT = 33


def make_tabulated(radii, values) -> RadialProfile:
    """Profile from (r, g) knots; monotone cubic between knots, zero beyond the
    last knot, constant continuation below the first. scale is inferred from
    the tabulated variance."""
    radii = np.asarray(radii, dtype=float)
    values = np.asarray(values, dtype=float)
    if radii.ndim != 1 or radii.size < 4 or radii.shape != values.shape:
        raise DomainError("tabulated profile needs >= 4 matched (r, g) knots")
    if np.any(np.diff(radii) <= 0) or radii[0] < 0:
        raise DomainError("tabulated radii must be strictly increasing and >= 0")
    if np.any(values < 0):
        raise DomainError("tabulated densities must be non-negative")

    interp = interpolate.PchipInterpolator(radii, values, extrapolate=False)
    # dense cumulative integrals for Q, the potential tail, and the variance
    dense = np.unique(np.concatenate(
        [np.linspace(radii[i], radii[i + 1], _DENSE_PER_KNOT)
         for i in range(radii.size - 1)]))
    gd = interp(dense)

    def cum(power):
        y = 4 * np.pi * dense ** power * gd
        if hasattr(integrate, "cumulative_simpson"):
            return integrate.cumulative_simpson(y, x=dense, initial=0.0)
        return integrate.cumulative_trapezoid(y, dense, initial=0.0)

    q_cum, t_cum, v_cum = cum(2), cum(1), cum(4)
    # flat continuation below the first knot
    r0, g0 = radii[0], values[0]
    q_cum = q_cum + 4 * np.pi * g0 * r0 ** 3 / 3
    t_cum = t_cum + 2 * np.pi * g0 * r0 ** 2
    v_cum = v_cum + 4 * np.pi * g0 * r0 ** 5 / 5
    variance = float(v_cum[-1])
    if variance <= 0:
        raise DomainError("tabulated profile has zero variance")
    scale = math.sqrt(variance / 3.0)
    params = {
        "radii": radii, "values": values, "interp": interp,
        "dense": dense, "q_cum": q_cum, "t_cum": t_cum,
        "q_total": float(q_cum[-1]), "t_total": float(t_cum[-1]),
        "v_total": variance,
    }
    return RadialProfile("tabulated", scale, float(radii[-1]), params)


def load_tabulated_csv(path: str) -> RadialProfile:
    """Two-column CSV (r [m], g [m^-3]) with a header row; '#' comments allowed."""
    radii, values = [], []
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh)
                if row and not row[0].lstrip().startswith("#")]
    if not rows:
        raise DomainError(f"no data rows in {path}")
    for row in rows[1:]:  # first non-comment row is the header
        if len(row) < 2:
            raise DomainError(f"expected two columns in {path}, got {row!r}")
        radii.append(float(row[0]))
        values.append(float(row[1]))
    return make_tabulated(radii, values)


def _tab_g(prof: RadialProfile, r):
    r = np.asarray(r, dtype=float)
    radii = prof.params["radii"]
    out = prof.params["interp"](np.clip(r, radii[0], radii[-1]))
    out = np.where(r > radii[-1], 0.0, out)
    return np.where(r < radii[0], prof.params["values"][0], out)

def _tab_gprime(prof: RadialProfile, r):
    r = np.asarray(r, dtype=float)
    radii = prof.params["radii"]
    deriv = prof.params["interp"].derivative()(np.clip(r, radii[0], radii[-1]))
    return np.where((r < radii[0]) | (r > radii[-1]), 0.0, deriv)

def _tab_cum(prof: RadialProfile, r, key: str, below_coeff: float, below_pow: int):
    r = np.asarray(r, dtype=float)
    dense, cum = prof.params["dense"], prof.params[key]
    out = np.interp(r, dense, cum)
    g0, r0 = prof.params["values"][0], prof.params["radii"][0]
    below = below_coeff * g0 * np.minimum(r, r0) ** below_pow
    return np.where(r < r0, below, out)

def _tab_Q(prof: RadialProfile, r):
    # renormalized so Q -> 1 even if the table is only approximately normalized
    q = _tab_cum(prof, r, "q_cum", 4 * np.pi / 3, 3)
    return np.clip(q / prof.params["q_total"], 0.0, 1.0)

def _tab_T(prof: RadialProfile, r):
    t = _tab_cum(prof, r, "t_cum", 2 * np.pi, 2)
    return (prof.params["t_total"] - t) / prof.params["q_total"]


# ------------------------------------------------------------ dispatch maps

_FAMILY_G = {
    "gaussian": _gauss_g, "sub_gaussian": _subg_g, "compact_quartic": _quartic_g,
    "optimal_feedback": _optf_g, "uniform_ball": _ball_g, "tabulated": _tab_g,
}
_FAMILY_GPRIME = {
    "gaussian": _gauss_gprime, "sub_gaussian": _subg_gprime,
    "compact_quartic": _quartic_gprime, "optimal_feedback": _optf_gprime,
    "uniform_ball": _ball_gprime, "tabulated": _tab_gprime,
}
_FAMILY_Q = {
    "gaussian": _gauss_Q, "sub_gaussian": _subg_Q, "compact_quartic": _quartic_Q,
    "optimal_feedback": _optf_Q, "uniform_ball": _ball_Q, "tabulated": _tab_Q,
}
_FAMILY_T = {
    "gaussian": _gauss_T, "sub_gaussian": _subg_T, "compact_quartic": _quartic_T,
    "optimal_feedback": _optf_T, "uniform_ball": _ball_T, "tabulated": _tab_T,
}

def derive(profile: RadialProfile) -> ProfileDerived:
    """Enclosed-mass fraction Q, potential kernel f_pot, and f_pot' = -Q/r^2."""
    q_fn = _FAMILY_Q[profile.kind]
    t_fn = _FAMILY_T[profile.kind]

    def Q(r):
        return q_fn(profile, np.asarray(r, dtype=float))

    def f_pot(r):
        r = np.asarray(r, dtype=float)
        tails = t_fn(profile, r)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(r > 0, q_fn(profile, r) / np.where(r > 0, r, 1.0), 0.0)
        return ratio + tails

    def f_pot_grad(r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(r > 0, -q_fn(profile, r) / np.where(r > 0, r, 1.0) ** 2, 0.0)

    return ProfileDerived(Q=Q, f_pot=f_pot, f_pot_grad=f_pot_grad)


def with_scale(profile: RadialProfile, new_scale: float) -> RadialProfile:
    """Same family and shape parameters, rescaled to new_scale."""
    new_scale = _require_positive("new_scale", new_scale)
    k = new_scale / profile.scale
    if profile.kind == "gaussian":
        return make_gaussian(new_scale)
    if profile.kind == "sub_gaussian":
        return make_sub_gaussian(profile.params["p"], new_scale)
    if profile.kind == "compact_quartic":
        return make_compact_quartic(new_scale)
    if profile.kind == "uniform_ball":
        return make_uniform_ball(new_scale)
    if profile.kind == "optimal_feedback":
        return make_optimal_feedback(profile.params["r_c_ref"] * k,
                                     profile.params["R"] * k, new_scale)
    if profile.kind == "tabulated":
        return make_tabulated(profile.params["radii"] * k,
                              profile.params["values"] / k ** 3)
    raise DomainError(f"unknown profile kind {profile.kind!r}")


def _check_spec(profile: RadialProfile) -> QuadratureSpec:
    # integrands here decay like g itself (exponentially or with compact
    # support), so the exp map keeps the tail panel resolvable at any scale
    return QuadratureSpec(abs_tol=0.0, transform="semi_infinite_exp_map",
                          transform_scale=profile.scale)


def normalization(profile: RadialProfile,
                  spec: QuadratureSpec | None = None) -> float:
    """Check of 4 pi int r^2 g dr (quadrature; dense panel sums for tabulated)."""
    if profile.kind == "tabulated":
        return profile.params["q_total"]
    spec = spec or _check_spec(profile)
    splits = [profile.support_radius] if profile.support_radius else []
    val, _ = integrate_radial(lambda r: 4 * np.pi * r * r * float(profile.g(r)),
                              spec, split_points=splits)
    return val


def variance(profile: RadialProfile,
             spec: QuadratureSpec | None = None) -> float:
    """Check of 4 pi int r^4 g dr (should equal 3*scale^2)."""
    if profile.kind == "tabulated":
        return profile.params["v_total"]
    spec = spec or _check_spec(profile)
    splits = [profile.support_radius] if profile.support_radius else []
    val, _ = integrate_radial(lambda r: 4 * np.pi * r ** 4 * float(profile.g(r)),
                              spec, split_points=splits)
    return val
