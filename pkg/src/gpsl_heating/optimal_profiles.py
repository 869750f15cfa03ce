"""Variationally optimal smearing profiles and counter-example searches.

For a Gaussian collapse profile the feedback profile minimizing the
gravitational heating functional under the variance constraint is the
increasing compact-support density of make_optimal_feedback; its support
radius follows from a scalar root equation in y = R^2/(2 r_C^2). The same
construction generalizes to any strictly positive collapse profile, and two
counter-example searches probe where the single-profile optima stop being
optimal (sub-Gaussian exponents for two-particle collapse heating, and a
separation-aware feedback optimum for a pair of masses).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import (DomainError, NotBracketed, QuadratureSpec, RootSpec,
                       dawson, find_root, integrate_interval, integrate_radial)
from .smearing import (RadialProfile, SingularProfile, derive, make_gaussian,
                       make_optimal_feedback, make_sub_gaussian, make_tabulated)
from .functionals import (i0_gauss_gauss_log, i0_gauss_optimal_log,
                          two_particle_psl)


@dataclass(frozen=True)
class OptimalFeedbackSolution:
    """Optimal feedback profile together with its support-radius root."""

    profile: RadialProfile
    support_radius: float
    y: float
    residual: float


@dataclass(frozen=True)
class RatioPoint:
    """Gaussian-to-optimal heating ratio at one r_G/r_C."""

    r_g_over_r_c: float
    log10_ratio: float
    ratio: float  # overflows to inf above r_G/r_C ~ 20; log10 stays exact


def support_radius_equation_lhs(y: float) -> float:
    """h(y) = 2y - 2 + 3/y - 3 dawson(sqrt(y))/y^(3/2).

    The support radius solves h(y) = 3 (r_G/r_C)^2. A power series takes
    over below y = 0.01 where the 3/y terms cancel catastrophically.
    """
    if not y > 0:
        raise DomainError("y must be > 0")
    if y < 0.01:
        return 1.2 * y + (8.0 / 35.0) * y * y - (16.0 / 315.0) * y ** 3 \
            + (32.0 / 3465.0) * y ** 4
    return 2 * y - 2 + 3 / y - 3 * dawson(math.sqrt(y)) / y ** 1.5


def solve_support_radius(r_g: float, r_c: float) -> tuple[float, float]:
    """Smallest positive y with h(y) = 3 (r_G/r_C)^2; returns (y, R=r_C sqrt(2y)).

    Auto-brackets geometrically around the asymptotic guesses
    y ~ (5/2)(r_G/r_C)^2 (small ratios) and (3/2)(r_G/r_C)^2 (large).
    """
    if r_g <= 0 or r_c <= 0:
        raise DomainError("r_g and r_c must be positive")
    rho2 = (r_g / r_c) ** 2
    target = 3.0 * rho2
    g_small, g_large = 2.5 * rho2, 1.5 * rho2 + 1.0
    lo_cap = min(1e-6, 1.25 * rho2)
    hi_cap = 1e3 * rho2 + 10.0

    f = lambda y: support_radius_equation_lhs(y) - target
    lo, hi = 0.5 * min(g_small, g_large), 2.0 * max(g_small, g_large)
    lo, hi = max(lo, lo_cap), min(hi, hi_cap)
    while f(lo) > 0 or f(hi) < 0:
        moved = False
        if f(lo) > 0 and lo > lo_cap:
            lo, moved = max(lo / 4.0, lo_cap), True
        if f(hi) < 0 and hi < hi_cap:
            hi, moved = min(hi * 4.0, hi_cap), True
        if not moved:
            raise NotBracketed(
                f"no support-radius root in [{lo_cap:g}, {hi_cap:g}] "
                f"for r_G/r_C = {math.sqrt(rho2):g}")
    y = find_root(f, RootSpec(lo, hi, tol=1e-13 * max(1.0, hi)))
    return y, r_c * math.sqrt(2.0 * y)


def optimal_feedback_gaussian_case(r_c: float, r_g: float) -> OptimalFeedbackSolution:
    """Closed-form optimal feedback profile for a Gaussian collapse profile."""
    y, big_r = solve_support_radius(r_g, r_c)
    profile = make_optimal_feedback(r_c, big_r, r_g)
    residual = abs(support_radius_equation_lhs(y) - 3.0 * (r_g / r_c) ** 2)
    return OptimalFeedbackSolution(profile, big_r, y, residual)


_GENERAL_GRID = 4097


def optimal_feedback_general(g_c: RadialProfile, r_g: float) -> OptimalFeedbackSolution:
    """Optimal feedback profile for any collapse profile positive on the support.

    Q(r) = (g_C(R)/R^3) r^3/g_C(r) on [0, R], with R enforcing the variance
    constraint R^2 - 2(g_C(R)/R^3) int_0^R r^4/g_C(r) dr = 3 r_G^2. The
    result is returned as a tabulated profile; for a Gaussian g_C it matches
    optimal_feedback_gaussian_case pointwise.
    """
    if r_g <= 0:
        raise DomainError("r_g must be positive")
    quad = QuadratureSpec(abs_tol=0.0, transform_scale=r_g)

    def density_ratio(r: float, big_r: float) -> float:
        # g_C(R)/g_C(r), guarded against a vanishing collapse density
        g_r = float(g_c.g(r))
        g_edge = float(g_c.g(big_r))
        if g_r <= 0.0 or g_edge <= 0.0:
            raise SingularProfile(
                "collapse profile vanishes inside the candidate support")
        return g_edge / g_r

    def constraint(big_r: float) -> float:
        val, _ = integrate_interval(
            lambda r: (r / big_r) ** 3 * r * density_ratio(r, big_r),
            0.0, big_r, quad)
        return big_r ** 2 - 2.0 * val - 3.0 * r_g ** 2

    lo, hi = 1.5 * r_g, 2.5 * r_g
    lo_cap, hi_cap = 1e-3 * r_g, 1e3 * r_g
    while constraint(lo) > 0 or constraint(hi) < 0:
        moved = False
        if constraint(lo) > 0 and lo > lo_cap:
            lo, moved = max(lo / 2.0, lo_cap), True
        if constraint(hi) < 0 and hi < hi_cap:
            hi, moved = min(hi * 2.0, hi_cap), True
        if not moved:
            raise NotBracketed("no support radius satisfies the variance constraint")
    big_r = find_root(constraint, RootSpec(lo, hi, tol=1e-13 * max(1.0, hi)))
    residual = abs(constraint(big_r))

    # g(r) = (1/4 pi R^3) (g_C(R)/g_C(r)) [3 - r g_C'(r)/g_C(r)], fused so the
    # density ratio never overflows for strongly decaying collapse profiles
    radii = np.linspace(0.0, big_r, _GENERAL_GRID)
    ratio = np.array([density_ratio(float(r), big_r) for r in radii])
    g_vals = np.asarray(g_c.g(radii), dtype=float)
    gp_vals = np.asarray(g_c.g_prime(radii), dtype=float)
    bracket = 3.0 - radii * gp_vals / g_vals
    values = ratio * bracket / (4.0 * math.pi * big_r ** 3)
    profile = make_tabulated(radii, values)
    y = big_r ** 2 / (2.0 * g_c.scale ** 2)
    return OptimalFeedbackSolution(profile, big_r, y, residual)


def ratio_curve(r_g_over_r_c: np.ndarray) -> list[RatioPoint]:
    """Gaussian-feedback to optimal-feedback heating ratio along a grid.

    Computed in the log domain: the optimal-profile functional falls off as
    e^{-y} and underflows long before the ratio stops being meaningful.
    """
    points = []
    for rho in np.asarray(r_g_over_r_c, dtype=float):
        if rho <= 0:
            raise DomainError("r_G/r_C grid must be positive")
        y, _ = solve_support_radius(rho, 1.0)
        log_ratio = i0_gauss_gauss_log(1.0 / rho) - i0_gauss_optimal_log(y)
        log10_ratio = log_ratio / math.log(10.0)
        ratio = math.exp(log_ratio) if log_ratio < 709.0 else math.inf
        points.append(RatioPoint(float(rho), log10_ratio, ratio))
    return points


def psl_counterexample_search(m1: float, m2: float, d: float,
                              p_grid: np.ndarray, scale: float = 1.0
                              ) -> tuple[list[tuple[float, float]], float]:
    """Two-particle collapse heating across sub-Gaussian exponents.

    Returns ([(p, I)], argmin p). A minimum away from p=2 shows no single
    profile is optimal for every mass configuration.
    """
    rows = []
    for p in np.asarray(p_grid, dtype=float):
        prof = make_sub_gaussian(float(p), scale)
        rows.append((float(p), two_particle_psl(prof, m1, m2, d).value))
    argmin_p = min(rows, key=lambda t: t[1])[0]
    return rows, argmin_p


# ------------------------------------------- separation-aware counter-example

def _pair_weight(g_c: RadialProfile, z: float):
    """w_z(r) = (pi/r^2) int_0^pi sin(t) g_C(sqrt(z^2+r^2-2zr cos t)) dt."""
    if z == 0.0:
        def w(r: float) -> float:
            return 2.0 * math.pi * float(g_c.g(r)) / (r * r)
        return w
    if g_c.kind == "gaussian":
        s2 = g_c.scale ** 2

        def w(r: float) -> float:
            return math.pi * s2 / (z * r ** 3) * (float(g_c.g(abs(z - r)))
                                                  - float(g_c.g(z + r)))
        return w

    spec = QuadratureSpec(rel_tol=1e-11, abs_tol=0.0)

    def w(r: float) -> float:
        val, _ = integrate_interval(
            lambda t: math.sin(t) * float(g_c.g(
                math.sqrt(z * z + r * r - 2 * z * r * math.cos(t)))),
            0.0, math.pi, spec)
        return math.pi / (r * r) * val
    return w


def gpsl_counterexample(g_c: RadialProfile, r_g: float, z: float
                        ) -> tuple[float, float]:
    """Feedback heating I0 + I(z) for the z-aware and the z=0 optimal profiles.

    The z-aware optimum minimizes J[Q] = int (w_0 + w_z) Q^2 dr under the same
    endpoint and variance constraints, giving Q(r) proportional to
    r/(w_0(r)+w_z(r)) up to a support radius fixed by the constraint. At z=0
    the two returned values coincide; at z of order the collapse scale the
    z-aware value is strictly smaller.
    """
    if z < 0:
        raise DomainError("z must be >= 0")
    w0 = _pair_weight(g_c, 0.0)
    wz = _pair_weight(g_c, z)

    def w(r: float) -> float:
        return w0(r) + wz(r)

    def phi(r: float) -> float:
        return r / w(r)

    quad = QuadratureSpec(abs_tol=0.0, transform_scale=max(g_c.scale, r_g))
    inner_splits = [s for s in (z, g_c.support_radius) if s]

    def constraint(big_r: float) -> float:
        val, _ = integrate_interval(lambda r: r * phi(r), 0.0, big_r, quad,
                                    split_points=inner_splits)
        return big_r ** 2 - 2.0 * val / phi(big_r) - 3.0 * r_g ** 2

    lo, hi = 1.5 * r_g, 2.5 * r_g
    lo_cap, hi_cap = 1e-3 * r_g, 1e3 * r_g
    while constraint(lo) > 0 or constraint(hi) < 0:
        moved = False
        if constraint(lo) > 0 and lo > lo_cap:
            lo, moved = max(lo / 2.0, lo_cap), True
        if constraint(hi) < 0 and hi < hi_cap:
            hi, moved = min(hi * 2.0, hi_cap), True
        if not moved:
            raise NotBracketed("no support radius satisfies the variance constraint")
    big_r_z = find_root(constraint, RootSpec(lo, hi, tol=1e-13 * max(1.0, hi)))

    def objective(q_of_r, big_r: float) -> float:
        inside, _ = integrate_interval(lambda r: w(r) * q_of_r(r) ** 2,
                                       0.0, big_r, quad,
                                       split_points=inner_splits)
        tail, _ = integrate_radial(lambda r: w(r) if r > big_r else 0.0,
                                   quad, split_points=[big_r, *inner_splits])
        return inside + tail

    phi_edge = phi(big_r_z)
    value_z = objective(lambda r: phi(r) / phi_edge, big_r_z)

    base = optimal_feedback_general(g_c, r_g) if g_c.kind != "gaussian" \
        else optimal_feedback_gaussian_case(g_c.scale, r_g)
    q_base = derive(base.profile).Q
    value_base = objective(lambda r: float(q_base(r)), base.support_radius)
    return value_z, value_base


def optimality_perturbation(r_c: float = 1.0, r_g: float = 1.0,
                            n_perturbations: int = 10, seed: int = 0,
                            eps: float = 1e-3) -> list[float]:
    """First-order optimality spot-check of the Gaussian-case optimum.

    Perturbs Q by random cubic bumps b(r) = r(R-r)(a0 + a1 r + a2 r^2)
    projected onto the admissible set (b(0)=b(R)=0 and int r b dr = 0, which
    preserves the variance to first order), and returns the heating increase
    for each; every entry should be positive at order eps^2.
    """
    sol = optimal_feedback_gaussian_case(r_c, r_g)
    big_r = sol.support_radius
    g_c = make_gaussian(r_c)
    w0 = _pair_weight(g_c, 0.0)
    q0 = derive(sol.profile).Q
    quad = QuadratureSpec(abs_tol=0.0)

    def moment(fn) -> float:
        val, _ = integrate_interval(fn, 0.0, big_r, quad)
        return val

    psi = lambda r: r * (big_r - r)
    psi_moment = moment(lambda r: r * psi(r))
    base = moment(lambda r: w0(r) * float(q0(r)) ** 2)

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    deltas = []
    for _ in range(n_perturbations):
        a0, a1, a2 = rng.uniform(-1.0, 1.0, size=3)
        raw = lambda r: r * (big_r - r) * (a0 + a1 * r + a2 * r * r)
        shift = moment(lambda r: r * raw(r)) / psi_moment
        bump = lambda r: raw(r) - shift * psi(r)
        perturbed = moment(
            lambda r: w0(r) * (float(q0(r)) + eps * bump(r)) ** 2)
        deltas.append(perturbed - base)
    return deltas
