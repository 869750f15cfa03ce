"""Physical heating rates in the limit regimes, and comparison quantities.

Unit conventions: all lengths in metres, masses in kg, rates in 1/s, powers
in watts. The collapse noise couples through m/m0 with m0 the proton mass, so
every rate carries one explicit factor of m0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

import numpy as np

from .numerics import DomainError
from .smearing import RadialProfile
from .functionals import (PointConfig, dirichlet_energy, grad_sq_functional,
                          grav_functional_i0, macro_feedback_functional,
                          point_config_heating)

_CODATA_SIGMA_SB = 5.670374419e-8


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA 2018 values; sigma_sb defaults to the rounded 5.6e-8 W/m^2/K^4
    used by the source tables (switch with with_codata_sigma)."""

    G: float = 6.67430e-11            # m^3 kg^-1 s^-2
    hbar: float = 1.054571817e-34     # J s
    m0: float = 1.67262192369e-27     # proton mass, kg
    m_neutron: float = 1.67492749804e-27  # kg
    k_B: float = 1.380649e-23         # J/K
    sigma_sb: float = 5.6e-8          # W m^-2 K^-4
    M_sun: float = 1.988e30           # kg
    c: float = 2.99792458e8           # m/s
    e_charge: float = 1.602176634e-19  # C (J per eV)

    def __post_init__(self):
        for f in fields(self):
            if not getattr(self, f.name) > 0:
                raise DomainError(f"constant {f.name} must be positive")

    def with_codata_sigma(self) -> "PhysicalConstants":
        return replace(self, sigma_sb=_CODATA_SIGMA_SB)

    def with_overrides(self, overrides: dict) -> "PhysicalConstants":
        names = {f.name for f in fields(self)}
        unknown = set(overrides) - names
        if unknown:
            raise DomainError(f"unknown constants: {sorted(unknown)}")
        return replace(self, **{k: float(v) for k, v in overrides.items()})

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT_CONSTANTS = PhysicalConstants()

# localization lengths above ~1e-4 m would modify tested Newtonian gravity
NEWTON_LENGTH_CAP = 1e-4


@dataclass(frozen=True)
class ModelParams:
    """Model point (lambda_rate, r_c, r_g) with its two smearing profiles."""

    lambda_rate: float
    r_c: float
    r_g: float
    g_c: RadialProfile
    g_g: RadialProfile
    length_cap: float = NEWTON_LENGTH_CAP

    def __post_init__(self):
        if not self.lambda_rate > 0:
            raise DomainError("lambda_rate must be > 0")
        for name, val in (("r_c", self.r_c), ("r_g", self.r_g)):
            if not 0 < val <= self.length_cap:
                raise DomainError(
                    f"{name} = {val:g} outside (0, {self.length_cap:g}] m")


def isolated_particle_rate(params: ModelParams, m: float,
                           constants: PhysicalConstants = DEFAULT_CONSTANTS
                           ) -> tuple[float, float]:
    """(collapse term, feedback term) in watts for one delta-localized mass m.

    collapse = (lambda hbar^2 / m0) I[sqrt(g_C)];
    feedback = (G^2 m0 / lambda) m^2 I0(g_C, g_G).
    For a rigid composite the feedback term scales with M^2 when clustered
    within r_G and with sum(m_k^2) when dispersed.
    """
    if m <= 0:
        raise DomainError("mass must be positive")
    c = constants
    psl = params.lambda_rate * c.hbar ** 2 / c.m0 * dirichlet_energy(params.g_c).value
    grav = c.G ** 2 * c.m0 / params.lambda_rate * m * m \
        * grav_functional_i0(params.g_c, params.g_g).value
    return psl, grav


def contributions_ratio(params: ModelParams, m: float,
                        constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Order-of-magnitude collapse/feedback ratio lambda^2 r_C^2 hbar^2/(m0^2 G^2 m^2).

    The bare ratio without the order-one profile functionals.
    """
    if m <= 0:
        raise DomainError("mass must be positive")
    c = constants
    return (params.lambda_rate * params.r_c * c.hbar) ** 2 \
        / (c.m0 ** 2 * c.G ** 2 * m ** 2)


def macro_body_rate(params: ModelParams, volume: float,
                    mass_density_sq_integral: float,
                    constants: PhysicalConstants = DEFAULT_CONSTANTS
                    ) -> tuple[float, float]:
    """(collapse term, feedback term) in watts for a macroscopic body.

    collapse = (lambda hbar^2/m0) V_M I_coll[g_C], extensive in the volume;
    feedback = (G^2 m0/lambda) I_fb[g_G] int mu^2, with int mu^2 the squared
    mass-density integral over the body.
    """
    if volume <= 0:
        raise DomainError("volume must be positive")
    if mass_density_sq_integral < 0:
        raise DomainError("mass_density_sq_integral must be >= 0")
    c = constants
    psl = params.lambda_rate * c.hbar ** 2 / c.m0 * volume \
        * grad_sq_functional(params.g_c).value
    grav = c.G ** 2 * c.m0 / params.lambda_rate \
        * macro_feedback_functional(params.g_g).value * mass_density_sq_integral
    return psl, grav


def collective_attenuation(number_density: float, r_c: float) -> float:
    """Suppression 16 pi^(3/2) n_M r_C^3 of the collapse heating of a dense
    body against the same number of isolated particles (Gaussian profile)."""
    if number_density <= 0 or r_c <= 0:
        raise DomainError("number_density and r_c must be positive")
    return 16 * math.pi ** 1.5 * number_density * r_c ** 3


def dark_matter_min_mass(rho_dm: float, d_min: float,
                         constants: PhysicalConstants = DEFAULT_CONSTANTS
                         ) -> tuple[float, float]:
    """Smallest single-particle mass rho * d^3 whose mean spacing exceeds d_min.

    Returns (kg, eV/c^2). Below this mass the dark-matter particles sit
    closer than d_min and the dispersed-heating estimate does not apply.
    """
    if rho_dm <= 0 or d_min <= 0:
        raise DomainError("rho_dm and d_min must be positive")
    mass_kg = rho_dm * d_min ** 3
    mass_ev = mass_kg * constants.c ** 2 / constants.e_charge
    return mass_kg, mass_ev


def mean_interparticle_distance(number_density: float) -> float:
    """d = n^(-1/3) for number density n in m^-3."""
    if number_density <= 0:
        raise DomainError("number_density must be positive")
    return number_density ** (-1.0 / 3.0)


def thermal_de_broglie(m: float, temperature: float,
                       constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """lambda_th = sqrt(2 pi hbar^2 / (m k_B T)) in metres."""
    if m <= 0 or temperature <= 0:
        raise DomainError("mass and temperature must be positive")
    c = constants
    return math.sqrt(2 * math.pi * c.hbar ** 2 / (m * c.k_B * temperature))


# ----------------------------------------------------- sandwich inequality

@dataclass(frozen=True)
class SandwichRow:
    """One configuration's Monte Carlo verdicts at 3 standard errors."""

    index: int
    n_particles: int
    i_n: float
    i_n_se: float
    i_com: float
    i_com_se: float
    n_times_single: float
    upper_holds: bool   # I_N <= N I[sqrt(g)]
    lower_holds: bool   # I_CoM <= I_N
    com_holds: bool     # I_CoM <= I[sqrt(g)]
    conjecture_holds: bool  # I_N >= I[sqrt(g)], reported only

    @property
    def passed(self) -> bool:
        return self.upper_holds and self.lower_holds and self.com_holds


@dataclass(frozen=True)
class SandwichReport:
    rows: list
    all_pass: bool
    conjecture_fraction: float


def random_point_configs(n_configs: int, scale: float, seed: int,
                         max_particles: int = 4,
                         mass_range: tuple[float, float] = (1.0, 10.0),
                         box_half_width: float | None = None) -> list[PointConfig]:
    """Random mass configurations for the sandwich suite: N in [1, max],
    masses uniform in mass_range, positions uniform within 5*scale."""
    if n_configs < 1:
        raise DomainError("n_configs must be >= 1")
    half = box_half_width if box_half_width is not None else 5.0 * scale
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    configs = []
    for _ in range(n_configs):
        n = int(rng.integers(1, max_particles + 1))
        masses = rng.uniform(mass_range[0], mass_range[1], size=n)
        positions = rng.uniform(-half, half, size=(n, 3))
        configs.append(PointConfig(masses, positions))
    return configs


def sandwich_report(g: RadialProfile, configs: list[PointConfig],
                    mc_samples: int = 200_000, seed: int = 0) -> SandwichReport:
    """Check I_CoM <= I_N <= N I[sqrt(g)] and I_CoM <= I[sqrt(g)] per config.

    Each inequality is granted 3 combined standard errors of slack. Each
    config gets an independent child stream of the master seed, so the
    report is deterministic and per-config results don't depend on list
    order beyond position.
    """
    single = dirichlet_energy(g).value
    children = np.random.SeedSequence(seed).spawn(len(configs))
    rows = []
    for idx, (config, child) in enumerate(zip(configs, children)):
        child_seed = int(child.generate_state(1, dtype=np.uint64)[0])
        r_n, r_com, r_ni = point_config_heating(g, config, mc_samples, child_seed)
        tol_upper = 3.0 * r_n.error_estimate
        tol_cross = 3.0 * (r_n.error_estimate + r_com.error_estimate)
        rows.append(SandwichRow(
            index=idx,
            n_particles=config.n,
            i_n=r_n.value, i_n_se=r_n.error_estimate,
            i_com=r_com.value, i_com_se=r_com.error_estimate,
            n_times_single=r_ni.value,
            upper_holds=r_n.value <= r_ni.value + tol_upper,
            lower_holds=r_com.value <= r_n.value + tol_cross,
            com_holds=r_com.value <= single + 3.0 * r_com.error_estimate,
            conjecture_holds=r_n.value >= single - 3.0 * r_n.error_estimate,
        ))
    all_pass = all(r.passed for r in rows)
    frac = sum(r.conjecture_holds for r in rows) / len(rows) if rows else 1.0
    return SandwichReport(rows=rows, all_pass=all_pass, conjecture_fraction=frac)
