"""Heating functionals, optimal smearing profiles, and astrophysical exclusion
bounds for Poissonian spontaneous-localization models with gravitational
feedback."""

__version__ = "0.1.0"

from .numerics import (DomainError, NonConvergence, NotBracketed,
                       QuadratureSpec, RootSpec)
from .smearing import (KINDS, ProfileDerived, RadialProfile, SingularProfile,
                       derive, load_tabulated_csv, make_compact_quartic,
                       make_gaussian, make_optimal_feedback, make_sub_gaussian,
                       make_tabulated, make_uniform_ball, normalization,
                       variance, with_scale)
from .functionals import (CoincidentPoints, DegenerateConfig, FunctionalResult,
                          PointConfig, dirichlet_energy, grad_sq_functional,
                          grav_functional_i0, i0_gauss_gauss_closed,
                          i0_gauss_gauss_log, i0_gauss_optimal_closed,
                          i0_gauss_optimal_log, macro_feedback_functional,
                          newtonian_work_flux, pair_grav_functional,
                          point_config_heating, two_particle_psl)
from .optimal_profiles import (OptimalFeedbackSolution, RatioPoint,
                               gpsl_counterexample, optimal_feedback_gaussian_case,
                               optimal_feedback_general, optimality_perturbation,
                               psl_counterexample_search, ratio_curve,
                               solve_support_radius,
                               support_radius_equation_lhs)
from .regimes import (DEFAULT_CONSTANTS, NEWTON_LENGTH_CAP, ModelParams,
                      PhysicalConstants, SandwichReport, SandwichRow,
                      collective_attenuation, contributions_ratio,
                      dark_matter_min_mass, isolated_particle_rate,
                      macro_body_rate, mean_interparticle_distance,
                      random_point_configs, sandwich_report,
                      thermal_de_broglie)
from .astro_bounds import (DensityProfile, ExcludedEverywhere, ExclusionGrid,
                           LambdaBounds, MalformedOverlay, MergedBounds,
                           NeutronStar, density_sq_integral, exclusion_grid,
                           get_star, lambda_bounds, load_overlay,
                           load_star_catalog, merge_external_bounds,
                           radiated_power)
