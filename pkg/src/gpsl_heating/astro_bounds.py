"""Neutron-star exclusion bounds on the collapse rate.

A star of radius L, mass M and surface temperature T radiates
P = 4 pi L^2 sigma T^4. Spontaneous heating adds a lambda-linear collapse
term and a lambda-inverse feedback term; demanding heating <= radiation
gives a quadratic inequality whose roots bracket the allowed lambda range
at each (r_C, r_G). Grids of those roots over one length with the other
held fixed are the exclusion curves, and external upper-bound curves can
be merged in by pointwise minimum.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .numerics import DomainError
from .smearing import make_compact_quartic, make_gaussian, make_uniform_ball
from .functionals import grad_sq_functional, macro_feedback_functional
from .regimes import DEFAULT_CONSTANTS, NEWTON_LENGTH_CAP, PhysicalConstants

# printed closed-approximation prefactors: 4 pi / 0.012 and 0.80 / (4 pi)
_APPROX_UPPER_PREFACTOR = 1047.2
_APPROX_LOWER_PREFACTOR = 0.064

_PRINTED_A_PREFACTOR = 0.012
_PRINTED_C_PREFACTOR = 0.80


class MalformedOverlay(ValueError):
    """External bound file violates the (r_C, lambda_upper, label) format."""


@dataclass(frozen=True)
class NeutronStar:
    """Observational inputs: radius [m], mass [kg], surface temperature [K].

    radiation_power_override replaces the Stefan-Boltzmann estimate when a
    direct luminosity is available.
    """

    name: str
    radius: float
    mass: float
    temperature: float
    radiation_power_override: float | None = None

    def __post_init__(self):
        for label, val in (("radius", self.radius), ("mass", self.mass),
                           ("temperature", self.temperature)):
            if not val > 0:
                raise DomainError(f"{self.name or 'star'}: {label} must be > 0")
        if self.radiation_power_override is not None \
                and not self.radiation_power_override > 0:
            raise DomainError("radiation_power_override must be > 0 when set")


@dataclass(frozen=True)
class DensityProfile:
    """Interior mass-density model normalized to total mass m_n in radius l."""

    kind: str
    m_n: float
    l: float

    def __post_init__(self):
        if self.kind not in ("uniform", "tolman_vii"):
            raise DomainError(f"unknown density profile kind {self.kind!r}")
        if self.m_n <= 0 or self.l <= 0:
            raise DomainError("m_n and l must be positive")


@dataclass(frozen=True)
class ExcludedEverywhere:
    """No collapse rate is consistent with the star at this (r_C, r_G)."""


@dataclass(frozen=True)
class LambdaBounds:
    """Allowed collapse-rate window for one star at one (r_C, r_G).

    exact is the (lambda_minus, lambda_plus) root pair of
    a lambda^2 - P lambda + c = 0, or ExcludedEverywhere when the
    discriminant is negative. approx_minus/approx_plus are the printed
    closed approximations. a, c and radiated carry the quadratic's
    coefficients for residual checks.
    """

    exact: tuple[float, float] | ExcludedEverywhere
    approx_minus: float
    approx_plus: float
    a: float
    c: float
    radiated: float

    @property
    def excluded(self) -> bool:
        return isinstance(self.exact, ExcludedEverywhere)


@dataclass(frozen=True)
class ExclusionGrid:
    """Rows of (exact lower, exact upper, approx lower, approx upper) over a
    sweep of one smearing length with the other fixed. Fully excluded cells
    carry (+inf, -inf) in the exact columns."""

    axis: str
    grid: tuple
    fixed: float
    rows: tuple
    star: str

    def __post_init__(self):
        if self.axis not in ("r_C", "r_G"):
            raise DomainError(f"axis must be r_C or r_G, got {self.axis!r}")
        for row in self.rows:
            lo, hi = row[0], row[1]
            if math.isfinite(lo) and math.isfinite(hi) and lo > hi:
                raise DomainError("exact interval inverted in grid row")


@dataclass(frozen=True)
class MergedBounds:
    """Pointwise minimum of a model upper-bound curve and external curves.

    overlay_upper is +inf where no external curve constrains; limiting names
    the curve that sets each merged value ("model" or an overlay label).
    lambda_lower carries the model's lower-bound horizontals unchanged.
    """

    r_c: tuple
    model_upper: tuple
    overlay_upper: tuple
    merged_upper: tuple
    limiting: tuple
    lambda_lower: tuple
    star: str
    fixed_r_g: float


def radiated_power(star: NeutronStar,
                   constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Stefan-Boltzmann surface power 4 pi L^2 sigma T^4, or the override."""
    if star.radiation_power_override is not None:
        return star.radiation_power_override
    return 4 * math.pi * star.radius ** 2 * constants.sigma_sb \
        * star.temperature ** 4


def density_sq_integral(profile: DensityProfile) -> float:
    """int mu^2 dV in kg^2/m^3.

    uniform: M^2/V_L. tolman_vii, mu(x) = (5/2) mu_bar (1 - x^2/L^2):
    exactly (10/7) M^2/V_L, about 1.43 times the uniform value.
    """
    v_l = 4.0 / 3.0 * math.pi * profile.l ** 3
    base = profile.m_n ** 2 / v_l
    if profile.kind == "tolman_vii":
        return 10.0 / 7.0 * base
    return base


@lru_cache(maxsize=None)
def _profile_prefactors(profiles: str) -> tuple[float, float]:
    """(collapse, feedback) dimensionless prefactors at unit lengths.

    collapse: (4 pi / 3) I_coll[g_C] r_C^5, the per-volume heating integral;
    feedback: (3 / 4 pi) I_fb[g_G] r_G, the uniform-density feedback integral.
    Computed from the functionals so the bound tracks the actual profiles.
    """
    if profiles == "optimal":
        g_c, g_g = make_compact_quartic(1.0), make_uniform_ball(1.0)
    elif profiles == "gaussian":
        g_c, g_g = make_gaussian(1.0), make_gaussian(1.0)
    else:
        raise DomainError(f"profiles must be optimal or gaussian, got {profiles!r}")
    a_pref = 4.0 * math.pi / 3.0 * grad_sq_functional(g_c).value
    c_pref = 3.0 / (4.0 * math.pi) * macro_feedback_functional(g_g).value
    return a_pref, c_pref


def lambda_bounds(star: NeutronStar, r_c: float, r_g: float,
                  profiles: str = "optimal",
                  density: str = "uniform",
                  strict_printed_coeffs: bool = False,
                  constants: PhysicalConstants = DEFAULT_CONSTANTS) -> LambdaBounds:
    """Allowed collapse-rate window [lambda-, lambda+] for one star.

    Heating a*lambda + c/lambda <= radiated power P gives
    a lambda^2 - P lambda + c <= 0 with
    a = pref_a (hbar^2/m0) L^3 / r_C^5 and
    c = pref_c G^2 m0 M^2 / (L^3 r_G) (times 10/7 for tolman_vii density).
    strict_printed_coeffs pins pref_a, pref_c to the printed 0.012 and 0.80
    instead of the runtime functional values (optimal profiles only).
    The approx fields always use the printed one-term forms
    lambda+ ~ 1047.2 m0 sigma T^4 r_C^5/(hbar^2 L) and
    lambda- ~ 0.064 G^2 m0 M^2/(sigma T^4 L^5 r_G).
    """
    if r_c <= 0 or r_g <= 0:
        raise DomainError("r_c and r_g must be positive")
    if strict_printed_coeffs:
        if profiles != "optimal":
            raise DomainError("printed coefficients correspond to the optimal "
                              "profiles; use profiles='optimal'")
        a_pref, c_pref = _PRINTED_A_PREFACTOR, _PRINTED_C_PREFACTOR
    else:
        a_pref, c_pref = _profile_prefactors(profiles)

    cst = constants
    l, m = star.radius, star.mass
    density_factor = density_sq_integral(DensityProfile(density, m, l)) \
        / (m ** 2 / (4.0 / 3.0 * math.pi * l ** 3))

    a = a_pref * cst.hbar ** 2 / cst.m0 * l ** 3 / r_c ** 5
    c = c_pref * cst.G ** 2 * cst.m0 * m ** 2 / (l ** 3 * r_g) * density_factor
    p_rad = radiated_power(star, cst)

    disc = p_rad * p_rad - 4.0 * a * c
    if disc < 0.0:
        exact: tuple[float, float] | ExcludedEverywhere = ExcludedEverywhere()
    else:
        # stable root pair: the quadratic is dominated by P, so the small
        # root comes from c/(a * large_root) rather than cancellation
        q = p_rad + math.sqrt(disc)
        exact = (2.0 * c / q, q / (2.0 * a))

    t4 = star.temperature ** 4
    approx_plus = _APPROX_UPPER_PREFACTOR * cst.m0 * cst.sigma_sb * t4 \
        * r_c ** 5 / (cst.hbar ** 2 * l)
    approx_minus = _APPROX_LOWER_PREFACTOR * cst.G ** 2 * cst.m0 * m ** 2 \
        / (cst.sigma_sb * t4 * l ** 5 * r_g) * density_factor
    return LambdaBounds(exact, approx_minus, approx_plus, a, c, p_rad)


def exclusion_grid(star: NeutronStar, axis: str, grid, fixed_length: float,
                   profiles: str = "optimal",
                   density: str = "uniform",
                   strict_printed_coeffs: bool = False,
                   constants: PhysicalConstants = DEFAULT_CONSTANTS) -> ExclusionGrid:
    """Sweep lambda_bounds over one length; the other is held at fixed_length.

    Grid points and the fixed length must lie in (0, 1e-4] m, the range where
    the model leaves tested Newtonian gravity unmodified.
    """
    pts = [float(x) for x in grid]
    if not pts:
        raise DomainError("grid must contain at least one point")
    for val in (*pts, fixed_length):
        if not 0 < val <= NEWTON_LENGTH_CAP:
            raise DomainError(
                f"lengths must lie in (0, {NEWTON_LENGTH_CAP:g}] m, got {val:g}")
    rows = []
    for x in pts:
        r_c, r_g = (x, fixed_length) if axis == "r_C" else (fixed_length, x)
        b = lambda_bounds(star, r_c, r_g, profiles=profiles, density=density,
                          strict_printed_coeffs=strict_printed_coeffs,
                          constants=constants)
        exact = (math.inf, -math.inf) if b.excluded else b.exact
        rows.append((exact[0], exact[1], b.approx_minus, b.approx_plus))
    return ExclusionGrid(axis=axis, grid=tuple(pts), fixed=float(fixed_length),
                         rows=tuple(rows), star=star.name)


# ------------------------------------------------------- external overlays

def load_overlay(path) -> list:
    """Parse an external upper-bound file: CSV rows r_C [m], lambda_upper
    [1/s], label; '#' comments allowed; an optional header row is skipped.
    Returns [(r_c, lam, label), ...]."""
    rows = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedOverlay(f"cannot read overlay: {exc}") from exc
    first_data = True
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 3:
            raise MalformedOverlay(
                f"line {ln}: expected 3 fields (r_C_m, lambda_upper_hz, label), "
                f"got {len(parts)}")
        try:
            r_c = float(parts[0])
        except ValueError:
            if first_data:
                first_data = False
                continue  # header row names its columns
            raise MalformedOverlay(f"line {ln}: non-numeric r_C value")
        try:
            lam = float(parts[1])
        except ValueError:
            raise MalformedOverlay(f"line {ln}: non-numeric bound value")
        first_data = False
        if not (math.isfinite(r_c) and math.isfinite(lam)) or r_c <= 0 or lam <= 0:
            raise MalformedOverlay(f"line {ln}: bounds must be finite and positive")
        rows.append((r_c, lam, parts[2] or "external"))
    return rows


def _overlay_on_grid(rows: list, grid) -> tuple[np.ndarray, list]:
    """Per-grid-point minimum over the overlay curves, +inf off-range.

    Each label forms one curve, interpolated log-log inside its own r_C
    span; single-point curves constrain only a matching grid point.
    """
    grid = np.asarray(grid, dtype=float)
    best = np.full(grid.size, np.inf)
    which = [""] * grid.size
    by_label: dict = {}
    for r_c, lam, label in rows:
        by_label.setdefault(label, []).append((r_c, lam))
    logx = np.log10(grid)
    for label, pts in by_label.items():
        pts.sort()
        xs = np.log10([p[0] for p in pts])
        ys = np.log10([p[1] for p in pts])
        if len(pts) == 1:
            mask = np.isclose(logx, xs[0], rtol=0, atol=1e-12)
            vals = np.where(mask, 10.0 ** ys[0], np.inf)
        else:
            inside = (logx >= xs[0]) & (logx <= xs[-1])
            vals = np.where(inside, 10.0 ** np.interp(logx, xs, ys), np.inf)
        take = vals < best
        best = np.where(take, vals, best)
        for i in np.nonzero(take)[0]:
            which[i] = label
    return best, which


def merge_external_bounds(grid: ExclusionGrid, overlay) -> MergedBounds:
    """Tighten a model r_C exclusion grid with external upper-bound curves.

    overlay is a file path or pre-parsed [(r_c, lam, label), ...] rows. The
    merged upper bound is the pointwise minimum; the model lower-bound
    column rides along unchanged.
    """
    if grid.axis != "r_C":
        raise DomainError("external overlays are r_C curves; sweep axis r_C")
    rows = overlay if isinstance(overlay, list) else load_overlay(overlay)
    model_upper = np.array([row[1] for row in grid.rows])
    lower = tuple(row[0] for row in grid.rows)
    over, which = _overlay_on_grid(rows, grid.grid)
    merged = np.minimum(model_upper, over)
    limiting = tuple(which[i] if over[i] < model_upper[i] else "model"
                     for i in range(len(grid.grid)))
    return MergedBounds(r_c=grid.grid, model_upper=tuple(model_upper),
                        overlay_upper=tuple(over), merged_upper=tuple(merged),
                        limiting=limiting, lambda_lower=lower,
                        star=grid.star, fixed_r_g=grid.fixed)


# ----------------------------------------------------------- star catalog

def load_star_catalog(path=None) -> list:
    """Stars from a JSON array of {name, radius_m, mass_kg, temperature_K};
    defaults to the packaged table."""
    if path is None:
        text = resources.files("gpsl_heating").joinpath(
            "data/neutron_stars.json").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    try:
        entries = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"star catalog is not valid JSON: {exc}") from exc
    if not isinstance(entries, list):
        raise DomainError("star catalog must be a JSON array")
    stars = []
    for e in entries:
        try:
            stars.append(NeutronStar(
                name=str(e["name"]), radius=float(e["radius_m"]),
                mass=float(e["mass_kg"]), temperature=float(e["temperature_K"]),
                radiation_power_override=(
                    float(e["radiation_power_w"])
                    if e.get("radiation_power_w") is not None else None)))
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"bad star catalog entry {e!r}: {exc}") from exc
    return stars


def get_star(name: str, catalog: list | None = None) -> NeutronStar:
    stars = catalog if catalog is not None else load_star_catalog()
    for star in stars:
        if star.name == name:
            return star
    known = ", ".join(s.name for s in stars)
    raise DomainError(f"unknown star {name!r}; catalog has: {known}")
