"""Metric-free electrodynamics: field constructions, residual checks, solution catalog."""

from .autoparallel import (CANONICAL_LOWERING, NULL, TIMELIKE, autoparallel_residuals,
                           lowered, null_transport, self_transport)
from .catalog import (CATALOG, AutoparallelField, CatalogEntry, catalog, catalog_names,
                      random_config, random_polynomial, running_wave)
from .fields import (EMConfig, SpacetimePair, StressTensor, build_spacetime, default_chart,
                     eigen_defects, eigen_scalars, energy_flux, energy_postulate_defect,
                     helicity, stress_bilinear,
                     stress_prerel, stress_spacetime, theta_form)
from .oracle import FamilyValidationError, nonlinear_residuals_fd, validate_nonlinear_solution
from .residuals import (ResidualSet, conservation_residual, cross_helicity_residual,
                        divergence_flows, integrability_residual, linear_spacetime_residuals,
                        nonlinear_flows, null_condition_check, prerel_linear_residuals,
                        spacetime_balance_residual, static_balance_residual,
                        static_balance_vee, time_balance_residual, time_vector)
