"""Differential operators on forms and multivectors with expression coefficients."""

from __future__ import annotations

from . import kernels
from .exterior import (CONTRAVARIANT, COVARIANT, ContractViolation, GradedTensor,
                       interior_multivector, volume_form)
from .field_expr import differentiate


def _diff_axes(chart, spatial):
    axes = range(1, chart.n + 1)
    if spatial:
        if chart.time_axis is None:
            raise ContractViolation("spatial derivative requested on a chart without time axis")
        axes = [k for k in axes if k != chart.time_axis]
    return list(axes)


def exterior_derivative(phi, chart, spatial=False):
    """d of a form field; ``spatial=True`` treats the time coordinate as a parameter."""
    if phi.variance != COVARIANT:
        raise ContractViolation(f"exterior derivative of {phi.describe()}")
    if phi.n != chart.n:
        raise ContractViolation(f"{phi.describe()} on a {chart.n}-dimensional chart")
    if phi.degree == phi.n:
        return GradedTensor.zero(phi.n, phi.n, COVARIANT)
    acc = {}
    for k in _diff_axes(chart, spatial):
        var = chart.name(k)
        memo = {}
        for axes, f in phi.items():
            sign, key = kernels.wedge_basis((k,), axes)
            if not sign:
                continue
            df = differentiate(f, var, memo)
            if sign < 0:
                df = -df
            acc[key] = acc[key] + df if key in acc else df
    return GradedTensor(phi.n, phi.degree + 1, COVARIANT, acc, _trusted=True)


def spatial_volume(chart):
    """Wedge of the spatial coordinate differentials (the time axis left out)."""
    axes = tuple(_diff_axes(chart, True))
    return GradedTensor(chart.n, len(axes), COVARIANT, {axes: 1}, _trusted=True)


def div(X, chart, vol=None, spatial=False):
    """Scalar g with d(i_X omega) = g omega."""
    if X.variance != CONTRAVARIANT or X.degree != 1:
        raise ContractViolation(f"divergence of {X.describe()}")
    if spatial:
        omega = spatial_volume(chart)
    else:
        omega = vol.omega if vol is not None else volume_form(X.n)
    top = exterior_derivative(interior_multivector(X, omega), chart, spatial=spatial)
    (key,) = omega.coeffs
    return top[key]


def lie_derivative(T, phi, chart, spatial=False):
    """L_T phi = d(i_T phi) - (-1)^deg(T) i_T(d phi), T a multivector field."""
    if T.degree > phi.degree:
        raise ContractViolation(
            f"Lie derivative along a degree-{T.degree} field of a {phi.degree}-form"
        )
    first = exterior_derivative(interior_multivector(T, phi), chart, spatial=spatial)
    if phi.degree == phi.n:
        return first
    second = interior_multivector(T, exterior_derivative(phi, chart, spatial=spatial))
    return first - second if T.degree % 2 == 0 else first + second


def time_derivative(t, chart):
    """Coefficientwise derivative along the time coordinate; indices untouched."""
    if chart.time_axis is None:
        raise ContractViolation(f"chart {chart.names} has no time coordinate")
    var = chart.time_name
    memo = {}
    return t.map(lambda c: differentiate(c, var, memo))
