"""Field configurations on the (x, y, z, xi) chart and the objects built from them.

Spatial fields are stored as 4-dimensional tensors with no time components,
so one chart and one set of kernels serve both the 3-space and the
space-time constructions.  Coordinate order is (x, y, z, xi) with
omega = dx^dy^dz^dxi; xi = ct absorbs the speed of light.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..calculus import exterior_derivative, spatial_volume
from ..exterior import (CONTRAVARIANT, COVARIANT, ContractViolation, GradedTensor,
                        basis_indices, interior_form, interior_multivector, pairing,
                        volume_form, wedge)
from ..field_expr import Chart, as_expr, evaluate_many, mul, neg, parse, sum_exprs, to_text
from ..poincare import multivector_of_form
from ..report import SamplePlan

SPACE_AXES = (1, 2, 3)
TIME_AXIS = 4


def default_chart():
    return Chart.default(4)


def _field(values, variance, chart):
    if isinstance(values, GradedTensor):
        t = values
        if t.variance != variance:
            raise ContractViolation(f"expected a {variance} field, got {t.describe()}")
        if t.n == 3:
            t = t.embed(4)
        return t
    values = list(values)
    if len(values) == 4:
        if not _zero_like(values[3]):
            raise ContractViolation("spatial fields must not have a time component")
        values = values[:3]
    if len(values) != 3:
        raise ContractViolation(f"expected 3 spatial components, got {len(values)}")
    coeffs = {}
    for k, v in enumerate(values, 1):
        coeffs[(k,)] = parse(v, chart) if isinstance(v, str) else as_expr(v)
    return GradedTensor(4, 1, variance, coeffs)


def _zero_like(v):
    if isinstance(v, str):
        return v.strip() in ("0", "0.0")
    try:
        return as_expr(v) == as_expr(0)
    except TypeError:
        return False


def _flip(t, variance):
    return GradedTensor(t.n, t.degree, variance, dict(t.items()), _trusted=True)


@dataclass(frozen=True, eq=False)
class EMConfig:
    """E, B (vector fields) and alpha, beta (1-forms), all spatial, possibly xi-dependent."""

    E: GradedTensor
    B: GradedTensor
    alpha: GradedTensor
    beta: GradedTensor
    chart: Chart
    identify_alpha_with_E: bool = False

    def __post_init__(self):
        if self.chart.n != 4 or self.chart.time_axis != TIME_AXIS:
            raise ContractViolation(
                f"electrodynamics needs a 4-D chart with time last, got {self.chart.names}"
            )
        for name, t, var in (("E", self.E, CONTRAVARIANT), ("B", self.B, CONTRAVARIANT),
                             ("alpha", self.alpha, COVARIANT), ("beta", self.beta, COVARIANT)):
            if t.n != 4 or t.degree != 1 or t.variance != var:
                raise ContractViolation(f"{name} must be a {var} 1-field on R^4, got {t.describe()}")
            if t[(TIME_AXIS,)] != 0:
                raise ContractViolation(f"{name} has a time component")

    @classmethod
    def from_components(cls, E, B, alpha=None, beta=None, chart=None,
                        identify_alpha_with_E=False):
        """Build from 3-component lists of expressions, strings or numbers.

        With ``identify_alpha_with_E`` the 1-forms take the component arrays of E
        and B, and ``alpha``/``beta`` must be omitted.
        """
        chart = chart or default_chart()
        E = _field(E, CONTRAVARIANT, chart)
        B = _field(B, CONTRAVARIANT, chart)
        if identify_alpha_with_E:
            if alpha is not None or beta is not None:
                raise ContractViolation("alpha/beta given although they are identified with E/B")
            alpha, beta = _flip(E, COVARIANT), _flip(B, COVARIANT)
        else:
            if alpha is None or beta is None:
                raise ContractViolation("alpha and beta are required unless identified with E/B")
            alpha = _field(alpha, COVARIANT, chart)
            beta = _field(beta, COVARIANT, chart)
        return cls(E, B, alpha, beta, chart, identify_alpha_with_E)

    def fields(self):
        return (self.E, self.B, self.alpha, self.beta)

    def component_exprs(self):
        return [as_expr(t[(k,)]) for t in self.fields() for k in SPACE_AXES]

    def to_dict(self):
        def comps(t):
            return [to_text(as_expr(t[(k,)])) for k in SPACE_AXES]

        out = {"E": comps(self.E), "B": comps(self.B)}
        if not self.identify_alpha_with_E:
            out["alpha"] = comps(self.alpha)
            out["beta"] = comps(self.beta)
        out["identify_alpha_with_E"] = self.identify_alpha_with_E
        return out

    @property
    def omega3(self):
        return spatial_volume(self.chart)

    @property
    def Hbar(self):
        """Bivector with alpha = i_Hbar omega3."""
        return multivector_of_form(self.alpha.restrict(3)).embed(4)

    @property
    def Kbar(self):
        """Bivector with beta = i_Kbar omega3."""
        return multivector_of_form(self.beta.restrict(3)).embed(4)


def pair_scalar(a, b):
    """<a, b> of a 1-form and a vector as an expression."""
    return as_expr(pairing(a, b))


def spatial_d(t, chart):
    return exterior_derivative(t, chart, spatial=True)


@dataclass(frozen=True, eq=False)
class SpacetimePair:
    """F, G (2-forms on R^4) with their bivector partners, F = i_Gbar w, G = -i_Fbar w."""

    F: GradedTensor
    G: GradedTensor
    Fbar: GradedTensor
    Gbar: GradedTensor
    chart: Chart
    config: EMConfig = None

    @classmethod
    def from_forms(cls, F, G, chart=None, config=None):
        chart = chart or default_chart()
        for name, t in (("F", F), ("G", G)):
            if t.n != 4 or t.degree != 2 or t.variance != COVARIANT:
                raise ContractViolation(f"{name} must be a 2-form on R^4, got {t.describe()}")
        Gbar = multivector_of_form(F)
        Fbar = -multivector_of_form(G)
        return cls(F, G, Fbar, Gbar, chart, config)

    def check(self, points=None, tol=1e-12):
        """Sampled check of F = i_Gbar w and G = -i_Fbar w."""
        omega = volume_form(4)
        d1 = interior_multivector(self.Gbar, omega) - self.F
        d2 = interior_multivector(self.Fbar, omega) + self.G
        exprs = [as_expr(c) for t in (d1, d2) for _, c in t.items()]
        if not exprs:
            return True
        if points is None:
            points = SamplePlan(count=64).points(4)
        vals = evaluate_many(exprs, points, self.chart)
        scale = max(1.0, float(np.max(np.abs(evaluate_many(self.component_exprs(), points,
                                                           self.chart)))))
        return bool(np.max(np.abs(vals)) <= tol * scale)

    def component_exprs(self):
        return [as_expr(t[k]) for t in (self.F, self.G) for k in basis_indices(4, 2)]


def build_spacetime(cfg):
    """F = i_B w3 + alpha ^ dxi, G = i_E w3 - beta ^ dxi, plus dual bivectors."""
    w3 = cfg.omega3
    dxi = GradedTensor.basis(4, (TIME_AXIS,), COVARIANT)
    F = interior_multivector(cfg.B, w3) + wedge(cfg.alpha, dxi)
    G = interior_multivector(cfg.E, w3) - wedge(cfg.beta, dxi)
    return SpacetimePair.from_forms(F, G, cfg.chart, cfg)


def dense(t):
    """Antisymmetric component array (nested lists of expressions) of a 2-tensor."""
    n = t.n
    out = [[as_expr(0)] * n for _ in range(n)]
    for (i, j), c in t.items():
        c = as_expr(c)
        out[i - 1][j - 1] = c
        out[j - 1][i - 1] = neg(c)
    return out


class StressTensor:
    """Mixed (1,1) tensor; component (i, j) has covariant slot i and contravariant slot j."""

    def __init__(self, n, components, chart):
        self.n = n
        self.chart = chart
        self._c = {k: as_expr(v) for k, v in components.items() if as_expr(v) != as_expr(0)}

    def __getitem__(self, key):
        return self._c.get(tuple(key), as_expr(0))

    def items(self):
        return self._c.items()

    def trace(self):
        return sum_exprs(self[(i, i)] for i in range(1, self.n + 1))

    def contract_vector(self, X):
        """i_X T: the vector with components X^i T(i, j)."""
        coeffs = {}
        for j in range(1, self.n + 1):
            coeffs[(j,)] = sum_exprs(mul(as_expr(X[(i,)]), self[(i, j)])
                                     for i in range(1, self.n + 1))
        return GradedTensor(X.n, 1, CONTRAVARIANT, coeffs)

    def contract_form(self, theta):
        """The 1-form with components T(i, j) theta_j."""
        coeffs = {}
        for i in range(1, self.n + 1):
            coeffs[(i,)] = sum_exprs(mul(self[(i, j)], as_expr(theta[(j,)]))
                                     for j in range(1, self.n + 1))
        return GradedTensor(theta.n, 1, COVARIANT, coeffs)

    def apply(self, X, theta):
        """T(X, theta) = X^i T(i, j) theta_j."""
        return sum_exprs(
            mul(mul(as_expr(X[(i,)]), self[(i, j)]), as_expr(theta[(j,)]))
            for (i, j) in self._c
        )

    def is_zero(self):
        return not self._c


def stress_prerel(cfg):
    """alpha (x) E + beta (x) B - 1/2 (<alpha,E> + <beta,B>) id on the spatial axes."""
    half = mul(0.5, pair_scalar(cfg.alpha, cfg.E) + pair_scalar(cfg.beta, cfg.B))
    comps = {}
    for i in SPACE_AXES:
        for j in SPACE_AXES:
            c = (mul(as_expr(cfg.alpha[(i,)]), as_expr(cfg.E[(j,)]))
                 + mul(as_expr(cfg.beta[(i,)]), as_expr(cfg.B[(j,)])))
            if i == j:
                c = c - half
            comps[(i, j)] = c
    return StressTensor(3, comps, cfg.chart)


def eigen_scalars(cfg):
    """(lambda1, lambda2): i_E T = lambda1 E + <beta,E> B and i_B T = <alpha,B> E + lambda2 B."""
    half = mul(0.5, pair_scalar(cfg.alpha, cfg.E) + pair_scalar(cfg.beta, cfg.B))
    return pair_scalar(cfg.alpha, cfg.E) - half, pair_scalar(cfg.beta, cfg.B) - half


def _spatial(v):
    return v.restrict(3) if v.n == 4 else v


def eigen_defects(cfg):
    """i_E T - lambda1 E and i_B T - lambda2 B as 3-vectors."""
    T = stress_prerel(cfg)
    l1, l2 = eigen_scalars(cfg)
    E, B = _spatial(cfg.E), _spatial(cfg.B)
    return T.contract_vector(E) - E * l1, T.contract_vector(B) - B * l2


def stress_spacetime(pair):
    """-1/2 (F_{s n} Fbar^{m n} + G_{s n} Gbar^{m n}) from dense component arrays."""
    F, G, Fb, Gb = dense(pair.F), dense(pair.G), dense(pair.Fbar), dense(pair.Gbar)
    comps = {}
    for s in range(4):
        for m in range(4):
            acc = sum_exprs(
                mul(F[s][v], Fb[m][v]) + mul(G[s][v], Gb[m][v]) for v in range(4)
            )
            comps[(s + 1, m + 1)] = mul(-0.5, acc)
    return StressTensor(4, comps, pair.chart)


def stress_bilinear(pair, X, theta):
    """-1/2 (<i_X F, i_theta Fbar> + <i_X G, i_theta Gbar>) for a vector X and 1-form theta."""
    a = pairing(interior_multivector(X, pair.F), interior_form(theta, pair.Fbar))
    b = pairing(interior_multivector(X, pair.G), interior_form(theta, pair.Gbar))
    return mul(-0.5, as_expr(a) + as_expr(b))


def energy_flux(pair, X):
    """V = X^s T_s^m d/dx^m."""
    return stress_spacetime(pair).contract_vector(X)


def helicity(eta, chart=None):
    """eta ^ d eta for a 1-form (spatial d when the chart carries a time axis)."""
    chart = chart or (default_chart() if eta.n == 4 else Chart.default(eta.n))
    if eta.variance != COVARIANT or eta.degree != 1:
        raise ContractViolation(f"helicity of {eta.describe()}")
    spatial = chart.time_axis is not None
    return wedge(eta, exterior_derivative(eta, chart, spatial=spatial))


def theta_form(cfg):
    """theta = i_{E ^ B} omega3."""
    return interior_multivector(wedge(cfg.E, cfg.B), cfg.omega3)


def energy_postulate_defect(cfg):
    """i_{E^B}(alpha ^ beta) - [1/2 (<alpha,E> + <beta,B>)]^2.

    A modelling assumption, not a field equation.  When <alpha,B> = <beta,E> = 0
    the defect is -(<alpha,E> - <beta,B>)^2 / 4, so it vanishes exactly when the
    two energy densities agree.
    """
    lhs = as_expr(interior_multivector(wedge(cfg.E, cfg.B), wedge(cfg.alpha, cfg.beta)).scalar_value())
    half = mul(0.5, pair_scalar(cfg.alpha, cfg.E) + pair_scalar(cfg.beta, cfg.B))
    return lhs - mul(half, half)
