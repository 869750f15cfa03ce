"""Heating-rate functionals over smearing profiles.

Every functional returns a FunctionalResult tagging how the number was
obtained (adaptive quadrature or a closed form) together with an error
estimate. The physical units of each value are powers of the length unit
carried by the profile scales; they are recorded in the docstrings.

Monte Carlo estimators (point_config_heating) are seeded and deterministic;
their error_estimate is the standard error of the mean.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .numerics import (DomainError, QuadratureSpec, integrate_interval,
                       integrate_polar, integrate_radial)
from .smearing import RadialProfile, SingularProfile, derive

NEWTON_G = 6.67430e-11  # m^3 kg^-1 s^-2, CODATA 2018

# profile families whose density drops discontinuously to zero at the
# support edge; |grad sqrt(g)|^2 and |grad g|^2 pick up a non-integrable
# surface term there
_EDGE_DISCONTINUOUS = ("uniform_ball", "optimal_feedback")

_TABULATED_EDGE_RATIO = 1e-9


@dataclass(frozen=True)
class FunctionalResult:
    """Scalar functional value with the evaluation route that produced it."""

    value: float
    method: str  # "quadrature" | "closed_form"
    error_estimate: float = 0.0

    def __post_init__(self):
        if self.method not in ("quadrature", "closed_form"):
            raise DomainError(f"unknown method {self.method!r}")
        if not self.error_estimate >= 0:
            raise DomainError("error_estimate must be >= 0")


class DegenerateConfig(ValueError):
    """Point configuration with non-positive masses or malformed arrays."""


class CoincidentPoints(ValueError):
    """Two point masses share a position where pairwise forces are needed."""


@dataclass(frozen=True)
class PointConfig:
    """N point masses; positions in the profile's length unit.

    velocities are optional and only needed by newtonian_work_flux.
    """

    masses: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray | None = None

    def __post_init__(self):
        m = np.atleast_1d(np.asarray(self.masses, dtype=float))
        x = np.asarray(self.positions, dtype=float)
        if x.ndim == 1:
            x = x.reshape(1, -1)
        if x.shape != (m.size, 3):
            raise DegenerateConfig(
                f"positions must be ({m.size}, 3), got {x.shape}")
        if np.any(m <= 0) or not np.all(np.isfinite(m)) or not np.all(np.isfinite(x)):
            raise DegenerateConfig("masses must be positive and entries finite")
        v = self.velocities
        if v is not None:
            v = np.asarray(v, dtype=float)
            if v.shape != x.shape or not np.all(np.isfinite(v)):
                raise DegenerateConfig("velocities must match positions shape")
        object.__setattr__(self, "masses", m)
        object.__setattr__(self, "positions", x)
        object.__setattr__(self, "velocities", v)

    @property
    def n(self) -> int:
        return self.masses.size


def _default_spec(scale: float) -> QuadratureSpec:
    # abs_tol=0 keeps panels honest when the integral itself is tiny
    # (deep-suppression feedback integrands fall 60+ decades below 1);
    # the exp map keeps the tail panel sampled at the profile's own scale,
    # which matters when that scale is many decades away from 1 m
    return QuadratureSpec(abs_tol=0.0, transform="semi_infinite_exp_map",
                          transform_scale=scale)


def _splits(*profiles: RadialProfile, extra: tuple = ()) -> list:
    pts = [p.support_radius for p in profiles if p.support_radius]
    pts.extend(x for x in extra if x and x > 0)
    return sorted(set(pts))


def _check_edge_continuity(g: RadialProfile, functional: str) -> None:
    if g.kind in _EDGE_DISCONTINUOUS:
        raise SingularProfile(
            f"{functional} diverges for {g.kind}: density jumps at the support edge")
    if g.kind == "tabulated":
        vals = g.params["values"]
        if vals[-1] > _TABULATED_EDGE_RATIO * vals.max():
            raise SingularProfile(
                f"{functional} diverges: tabulated density does not decay to "
                "zero at the last knot")


def dirichlet_energy(g: RadialProfile,
                     spec: QuadratureSpec | None = None) -> FunctionalResult:
    """I[sqrt(g)] = (1/2) int |grad sqrt(g)|^2 = 2 pi int r^2 g'^2/(4g) dr.

    Units: length^-2. Closed forms for the Gaussian (3/8 scale^-2),
    sub-Gaussian, and compact quartic (7/12 scale^-2) families.
    """
    _check_edge_continuity(g, "dirichlet_energy")
    if g.kind == "gaussian":
        return FunctionalResult(0.375 / g.scale ** 2, "closed_form")
    if g.kind == "sub_gaussian":
        p, beta = g.params["p"], g.params["beta"]
        val = p * p * special.gamma(2 + 1 / p) / (8 * special.gamma(3 / p) * beta ** 2)
        return FunctionalResult(val, "closed_form")
    if g.kind == "compact_quartic":
        return FunctionalResult(7.0 / (12 * g.scale ** 2), "closed_form")

    def integrand(r: float) -> float:
        gv = float(g.g(r))
        if gv <= 0.0:
            return 0.0
        gp = float(g.g_prime(r))
        return 2 * math.pi * r * r * gp * gp / (4 * gv)

    spec = spec or _default_spec(g.scale)
    value, err = integrate_radial(integrand, spec, split_points=_splits(g))
    return FunctionalResult(value, "quadrature", err)


def grad_sq_functional(g: RadialProfile,
                       spec: QuadratureSpec | None = None) -> FunctionalResult:
    """I_coll = (1/8) int |grad g|^2 = (pi/2) int r^2 g'(r)^2 dr.

    Units: length^-5. Closed forms for Gaussian and compact quartic.
    """
    _check_edge_continuity(g, "grad_sq_functional")
    if g.kind == "gaussian":
        return FunctionalResult(3.0 / (128 * math.pi ** 1.5 * g.scale ** 5),
                                "closed_form")
    if g.kind == "compact_quartic":
        return FunctionalResult(35.0 / (3888 * math.pi * g.scale ** 5),
                                "closed_form")

    def integrand(r: float) -> float:
        gp = float(g.g_prime(r))
        return 0.5 * math.pi * r * r * gp * gp

    spec = spec or _default_spec(g.scale)
    value, err = integrate_radial(integrand, spec, split_points=_splits(g))
    return FunctionalResult(value, "quadrature", err)


def grav_functional_i0(g_c: RadialProfile, g_g: RadialProfile,
                       spec: QuadratureSpec | None = None) -> FunctionalResult:
    """I0 = (1/2) int g_C |grad f_G|^2 = 2 pi int (g_C(r)/r^2) Q_G(r)^2 dr.

    Units: length^-4. g_c smears the collapse noise, g_g the feedback field.
    """
    q_g = derive(g_g).Q

    def integrand(r: float) -> float:
        if r <= 0.0:
            return 0.0
        q = float(q_g(r))
        return 2 * math.pi * float(g_c.g(r)) / (r * r) * q * q

    spec = spec or _default_spec(max(g_c.scale, g_g.scale))
    value, err = integrate_radial(integrand, spec,
                                  split_points=_splits(g_c, g_g))
    return FunctionalResult(value, "quadrature", err)


# ------------------------------------------------- closed forms for I0

_GG_SERIES = (2.0 / 3.0, -2.0, 23.0 / 5.0, -29.0 / 3.0, 547.0 / 28.0)


def i0_gauss_gauss_closed(eta: float) -> float:
    """I0 for Gaussian collapse and Gaussian feedback, in units r_C^-4.

    eta = r_C/r_G. Exact bracket for moderate eta; the eta^6 series takes
    over below eta = 0.08 where the bracket cancels catastrophically.
    """
    if eta < 0:
        raise DomainError("eta must be >= 0")
    e2 = eta * eta
    if eta < 0.08:
        acc = 0.0
        for k, c in enumerate(_GG_SERIES):
            acc += c * e2 ** (3 + k)
        return acc / (2 * math.pi)
    s = math.sqrt(1 + 2 * e2)
    return 0.5 * (1 + (2 / math.pi) * (e2 / s) - (4 / math.pi) * math.atan(s))


def i0_gauss_gauss_log(eta: float) -> float:
    """log of i0_gauss_gauss_closed (finite for any eta > 0)."""
    return math.log(i0_gauss_gauss_closed(eta))


def _i0_optimal_bracket(y: float) -> float:
    # B(y) with I0 = (1/2) e^{-y} B(y); three regimes keep it stable:
    # a power series for small y, the erfcx/dawson form in the middle, and
    # the large-y asymptote where the special functions cancel to O(1/y)
    if y < 0.02:
        ry = math.sqrt(y)
        tail = (1.2 / ry - (2.0 / 35.0) * ry + (4.0 / 315.0) * ry ** 3
                - (8.0 / 3465.0) * ry ** 5) / math.sqrt(math.pi)
        return -special.erfcx(ry) + tail
    if y > 1e6:
        return (y ** -1.5 - 1.5 * y ** -2.5 + 2.25 * y ** -3.5) / math.sqrt(math.pi)
    ry = math.sqrt(y)
    return (-special.erfcx(ry)
            + 3 * special.dawsn(ry) / (4 * math.sqrt(math.pi) * y ** 3)
            + (-0.75 / y ** 2.5 + 0.5 / y ** 1.5 + 1.0 / ry) / math.sqrt(math.pi))


def i0_gauss_optimal_closed(y: float) -> float:
    """I0 for Gaussian collapse and the optimal compact feedback profile.

    Units r_C^-4; y = R^2/(2 r_C^2) with R the feedback support radius.
    Finite for all y > 0 (underflows to 0 for y above ~700).
    """
    if not y > 0:
        raise DomainError("y must be > 0")
    return 0.5 * math.exp(-y) * _i0_optimal_bracket(y)


def i0_gauss_optimal_log(y: float) -> float:
    """log of i0_gauss_optimal_closed, exact even where e^{-y} underflows."""
    if not y > 0:
        raise DomainError("y must be > 0")
    return -y + math.log(0.5 * _i0_optimal_bracket(y))


def macro_feedback_functional(g_g: RadialProfile,
                              spec: QuadratureSpec | None = None) -> FunctionalResult:
    """I_fb = 2 pi int Q(r)^2 / r^2 dr, units length^-1.

    The macroscopic feedback heating rate per unit G^2 m0 rho^2 V / lambda.
    """
    q = derive(g_g).Q

    def integrand(r: float) -> float:
        if r <= 0.0:
            return 0.0
        qv = float(q(r))
        return 2 * math.pi * qv * qv / (r * r)

    # Q -> 1 at large r, so the tail is asymptotically an exact 1/r^2 power
    # law; neither the exp map nor scipy's native substitution resolves that
    # knee when the scale is many decades from 1. The reciprocal map
    # r = lo/u turns the tail into a bounded smooth integrand on (0, 1].
    spec = spec or QuadratureSpec(abs_tol=0.0)
    lo = max(g_g.support_radius or 0.0, 8.0 * g_g.scale)
    inside, e_in = integrate_interval(integrand, 0.0, lo, spec,
                                      split_points=_splits(g_g, extra=(g_g.scale,)))

    def tail_mapped(u: float) -> float:
        r = lo / u
        return integrand(r) * lo / (u * u)

    tail, e_tail = integrate_interval(tail_mapped, 0.0, 1.0, spec)
    return FunctionalResult(inside + tail, "quadrature", e_in + e_tail)


def two_particle_psl(g: RadialProfile, m1: float, m2: float, d: float,
                     spec: QuadratureSpec | None = None) -> FunctionalResult:
    """Collapse heating functional for two point masses at separation d.

    I = (pi/4) int dr dtheta sin(theta) r^2 g'(r)^2
        [ m1/(m1 g(r) + m2 g(rt)) + m2/(m2 g(r) + m1 g(rt)) ],
    rt = sqrt(r^2 + d^2 + 2 r d cos(theta)). Units length^-2.
    Limits: d=0 gives I[sqrt(g)], d >> scale gives 2 I[sqrt(g)].
    """
    if m1 <= 0 or m2 <= 0:
        raise DomainError("masses must be positive")
    if d < 0:
        raise DomainError("separation must be >= 0")

    def f(r: float, th: float) -> float:
        gp = float(g.g_prime(r))
        gpsq = gp * gp
        if gpsq == 0.0:
            # also shields the denominators: gpsq underflows to zero many
            # decades before m/(m g) can overflow
            return 0.0
        gr = float(g.g(r))
        rt = math.sqrt(r * r + d * d + 2 * r * d * math.cos(th))
        gt = float(g.g(rt))
        den1 = m1 * gr + m2 * gt
        den2 = m2 * gr + m1 * gt
        total = (m1 / den1 if den1 > 0 else 0.0) + (m2 / den2 if den2 > 0 else 0.0)
        return 0.25 * math.pi * math.sin(th) * r * r * gpsq * total

    spec = spec or _default_spec(max(g.scale, d) if d > 0 else g.scale)
    value, err = integrate_polar(f, spec, split_points=_splits(g, extra=(d,)),
                                 with_error=True)
    return FunctionalResult(value, "quadrature", err)


def pair_grav_functional(g_c: RadialProfile, g_g: RadialProfile, d: float,
                         spec: QuadratureSpec | None = None) -> FunctionalResult:
    """Feedback heating cross-term for two points at separation d.

    I(d) = int_0^inf w_d(r) Q_G(r)^2 dr with the spherical average
    w_d(r) = (pi/r^2) int_0^pi sin(theta) g_C(sqrt(d^2+r^2-2dr cos theta)) dtheta.
    Units length^-4; I(0) equals grav_functional_i0.
    """
    if d < 0:
        raise DomainError("separation must be >= 0")
    if d == 0.0:
        return grav_functional_i0(g_c, g_g, spec)
    q_g = derive(g_g).Q
    spec = spec or _default_spec(max(g_c.scale, g_g.scale, d))
    splits = _splits(g_c, g_g, extra=(d,))

    if g_c.kind == "gaussian":
        # angular average in closed form: int s g(s) ds = sigma^2 (g(lo)-g(hi))
        s2 = g_c.scale ** 2

        def integrand(r: float) -> float:
            if r <= 0.0:
                return 0.0
            q = float(q_g(r))
            w = math.pi * s2 / (d * r ** 3) * (float(g_c.g(abs(d - r)))
                                               - float(g_c.g(d + r)))
            return w * q * q

        value, err = integrate_radial(integrand, spec, split_points=splits)
        return FunctionalResult(value, "quadrature", err)

    def f(r: float, th: float) -> float:
        if r <= 0.0:
            return 0.0
        s = math.sqrt(d * d + r * r - 2 * d * r * math.cos(th))
        q = float(q_g(r))
        return math.pi / (r * r) * math.sin(th) * float(g_c.g(s)) * q * q

    value, err = integrate_polar(f, spec, split_points=splits, with_error=True)
    return FunctionalResult(value, "quadrature", err)


# ------------------------------------------------ point-configuration MC

def _merge_coincident(config: PointConfig) -> PointConfig:
    # exactly coincident points carry one merged mass (clustered limit)
    pos = config.positions
    masses = config.masses.copy()
    keep = np.ones(config.n, dtype=bool)
    for i in range(config.n):
        if not keep[i]:
            continue
        for j in range(i + 1, config.n):
            if keep[j] and np.array_equal(pos[i], pos[j]):
                masses[i] += masses[j]
                keep[j] = False
    if np.all(keep):
        return config
    return PointConfig(masses[keep], pos[keep])


def _radial_sampler(g: RadialProfile, rng: np.random.Generator):
    """Draw radii from 4 pi r^2 g(r); exact for the Gaussian family."""
    if g.kind == "gaussian":
        def draw(n):
            return None  # signals direct 3D normal sampling
        return draw
    if g.support_radius:
        rmax = g.support_radius
    else:
        rmax = 10 * g.scale
        q = derive(g).Q
        while float(q(rmax)) < 1 - 1e-13:
            rmax *= 2
    grid = np.linspace(0.0, rmax, 4097)
    cdf = np.asarray(derive(g).Q(grid), dtype=float)
    cdf[-1] = max(cdf[-1], 1.0)

    def draw(n):
        # grid inverse of the radial CDF; the interpolation error only
        # perturbs the proposal, orders below the MC standard error
        return np.interp(rng.random(n), cdf, grid)
    return draw


def point_config_heating(g: RadialProfile, config: PointConfig,
                         mc_samples: int = 200_000, seed: int = 0
                         ) -> tuple[FunctionalResult, FunctionalResult, FunctionalResult]:
    """Monte Carlo triple (I_N, I_CoM, N*I[sqrt(g)]) for delta-localized masses.

    I_N  = sum_j (m_j/8) int |grad g(x - y_j)|^2 / mu(x) dx,
    I_CoM = (1/8M) int |sum_k m_k grad g(x - y_k)|^2 / mu(x) dx,
    mu(x) = sum_k m_k g(x - y_k). Units length^-2. The proposal density is
    the equal-weight mixture of the per-particle smeared densities.
    Deterministic given the seed; N=1 (after merging coincident points)
    returns the analytic triple.
    """
    if mc_samples < 1:
        raise DomainError("mc_samples must be >= 1")
    config = _merge_coincident(config)
    n_body = config.n
    base = dirichlet_energy(g)
    if n_body == 1:
        return (FunctionalResult(base.value, base.method, base.error_estimate),
                FunctionalResult(base.value, base.method, base.error_estimate),
                FunctionalResult(base.value, base.method, base.error_estimate))

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    masses = config.masses
    pos = config.positions
    total_mass = masses.sum()

    comp = rng.integers(0, n_body, size=mc_samples)
    draw = _radial_sampler(g, rng)
    radii = draw(mc_samples)
    if radii is None:
        offsets = g.scale * rng.standard_normal((mc_samples, 3))
    else:
        direc = rng.standard_normal((mc_samples, 3))
        direc /= np.linalg.norm(direc, axis=1, keepdims=True)
        offsets = radii[:, None] * direc
    x = pos[comp] + offsets

    sep = x[:, None, :] - pos[None, :, :]          # (n, N, 3)
    dist = np.linalg.norm(sep, axis=2)             # (n, N)
    gvals = np.asarray(g.g(dist), dtype=float)
    gprim = np.asarray(g.g_prime(dist), dtype=float)
    mu = gvals @ masses
    proposal = gvals.sum(axis=1) / n_body
    good = (mu > 0) & (proposal > 0)

    inv = np.where(good, 1.0 / np.where(good, mu * proposal, 1.0), 0.0)
    phi_n = ((gprim ** 2) @ masses) / 8.0 * inv

    with np.errstate(invalid="ignore", divide="ignore"):
        unit = np.where(dist[:, :, None] > 0, sep / np.where(
            dist[:, :, None] > 0, dist[:, :, None], 1.0), 0.0)
    vec = np.einsum("nk,nkd->nd", masses[None, :] * gprim, unit)
    phi_com = (vec ** 2).sum(axis=1) / (8.0 * total_mass) * inv

    i_n = float(phi_n.mean())
    i_n_se = float(phi_n.std(ddof=1) / math.sqrt(mc_samples))
    i_com = float(phi_com.mean())
    i_com_se = float(phi_com.std(ddof=1) / math.sqrt(mc_samples))

    return (FunctionalResult(i_n, "quadrature", i_n_se),
            FunctionalResult(i_com, "quadrature", i_com_se),
            FunctionalResult(n_body * base.value, base.method,
                             n_body * base.error_estimate))


def newtonian_work_flux(config: PointConfig, g_newton: float = NEWTON_G) -> float:
    """Sum_j F_j . v_j with F_j the Newtonian force on particle j, in watts.

    Equals -dV/dt along the trajectory of the point-mass potential
    V = -G sum_{j<k} m_j m_k / |x_j - x_k|.
    """
    if config.velocities is None:
        raise DomainError("newtonian_work_flux needs velocities")
    if config.n == 1:
        return 0.0
    pos = config.positions
    masses = config.masses
    sep = pos[None, :, :] - pos[:, None, :]        # sep[j,k] = x_k - x_j
    dist = np.linalg.norm(sep, axis=2)
    off = ~np.eye(config.n, dtype=bool)
    if np.any(dist[off] == 0.0):
        raise CoincidentPoints("two point masses share a position")
    np.fill_diagonal(dist, np.inf)
    force = g_newton * masses[:, None, None] * masses[None, :, None] \
        * sep / dist[:, :, None] ** 3
    return float(np.einsum("jkd,jd->", force, config.velocities))
