"""Metric-free exterior calculus and residual checks for pre-relativistic and nonlinear electrodynamics."""

from .calculus import div, exterior_derivative, lie_derivative, spatial_volume, time_derivative
from .exterior import (CONTRAVARIANT, COVARIANT, ContractViolation, GradedTensor, MultiIndex,
                       basis_indices, dual_volume, interior, interior_form,
                       interior_multivector, interior_vector, pairing, volume_form, wedge)
from .field_expr import (Chart, EvaluationError, Expr, ParseError, ScalarField, compile_exprs,
                         differentiate, evaluate, evaluate_many, parse, to_text)
from .kernels import available_backends, use_backend
from .poincare import (VolumeContext, delta, dual_inverse_check, dual_of_form,
                       dual_of_multivector, form_of_multivector, multivector_of_form)
from .report import ResidualEntry, ResidualReport, SamplePlan, ValidationError
from .vvalued import (SymValuedTensor, VValuedTensor, appendix_flow, vee, vee_interior,
                      vee_lie)

__version__ = "0.1.0"
