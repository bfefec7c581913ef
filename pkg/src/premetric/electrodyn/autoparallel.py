"""Self-transport of vector fields in flat canonical coordinates (vanishing connection)."""

from __future__ import annotations

from ..exterior import COVARIANT, CONTRAVARIANT, ContractViolation, GradedTensor, interior_multivector
from ..calculus import exterior_derivative
from ..field_expr import as_expr, differentiate, mul, sum_exprs
from ..report import DEFAULT_TOL
from .fields import default_chart
from .residuals import ResidualSet, run_set

TIMELIKE = "timelike"
NULL = "null"
# the canonical-chart lowering used for the null mode; (1, 1, 1, 1) gives the
# identical-components reading
CANONICAL_LOWERING = (-1, -1, -1, 1)


def _check(u):
    if u.n != 4 or u.degree != 1 or u.variance != CONTRAVARIANT:
        raise ContractViolation(f"expected a vector field on R^4, got {u.describe()}")


def self_transport(u, chart=None):
    """Components u^n d_n u^m."""
    _check(u)
    chart = chart or default_chart()
    comps = {}
    for m in range(1, 5):
        um = as_expr(u[(m,)])
        comps[(m,)] = sum_exprs(
            mul(as_expr(u[(k,)]), differentiate(um, chart.name(k))) for k in range(1, 5)
        )
    return GradedTensor(4, 1, CONTRAVARIANT, comps)


def lowered(u, lowering=CANONICAL_LOWERING):
    """The 1-form whose components are u's, times the fixed chart signs."""
    _check(u)
    if len(lowering) != 4 or any(s not in (1, -1) for s in lowering):
        raise ContractViolation(f"lowering signs must be four entries of +-1, got {lowering}")
    return GradedTensor(4, 1, COVARIANT,
                        {(k,): u[(k,)] if s > 0 else -as_expr(u[(k,)])
                         for k, s in zip(range(1, 5), lowering)})


def null_transport(u, chart=None, lowering=CANONICAL_LOWERING):
    """i_u d(u lowered)."""
    chart = chart or default_chart()
    return interior_multivector(u, exterior_derivative(lowered(u, lowering), chart))


def autoparallel_residuals(u, mode, chart=None, lowering=CANONICAL_LOWERING,
                           plan=None, tol=DEFAULT_TOL, points=None):
    chart = chart or default_chart()
    if mode == TIMELIKE:
        t = self_transport(u, chart)
    elif mode == NULL:
        t = null_transport(u, chart, lowering)
    else:
        raise ContractViolation(f"mode must be {TIMELIKE!r} or {NULL!r}, got {mode!r}")
    rs = ResidualSet(f"autoparallel_{mode}", chart)
    rs.add(f"autoparallel_{mode}", t)
    return run_set(rs, [as_expr(u[(k,)]) for k in range(1, 5)], plan, tol, points)
