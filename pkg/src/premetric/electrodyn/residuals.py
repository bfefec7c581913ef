"""Residual evaluation of the field equations on a sample plan.

Each public check builds symbolic residual tensors, compiles them into one
program, and evaluates on the sample points.  Checks that have two
independent derivations (componentwise display versus the vector-valued
product) also report the difference between the paths.
"""

from __future__ import annotations

import warnings

import numpy as np

from ..calculus import exterior_derivative, lie_derivative, time_derivative
from ..exterior import (GradedTensor, basis_indices, interior_multivector, pairing,
                        volume_form, wedge)
from ..field_expr import as_expr, evaluate_many, mul
from ..poincare import delta
from ..report import DEFAULT_TOL, ResidualEntry, ResidualReport, SamplePlan, derivative_scale
from ..vvalued import VValuedTensor, rank_deficient_points, vector_d, vee_interior
from .fields import (TIME_AXIS, build_spacetime, energy_flux, pair_scalar, spatial_d,
                     theta_form)


def _exprs(obj):
    if isinstance(obj, GradedTensor):
        return [as_expr(obj[k]) for k in basis_indices(obj.n, obj.degree)]
    if isinstance(obj, (list, tuple)):
        return [as_expr(v) for v in obj]
    return [as_expr(obj)]


class ResidualSet:
    """Named symbolic residual groups plus numeric path-agreement pairs."""

    def __init__(self, title, chart):
        self.title = title
        self.chart = chart
        self.groups = []
        self.agreements = []

    def add(self, name, obj):
        self.groups.append((name, _exprs(obj)))

    def agree(self, name, a, b, sign=1):
        """Report ``a - sign * b`` where a, b are names of already added groups."""
        self.agreements.append((name, a, b, sign))

    def evaluate(self, points, scale, tol=DEFAULT_TOL):
        flat = [e for _, comps in self.groups for e in comps]
        vals = evaluate_many(flat, points, self.chart)
        by_name, start = {}, 0
        report = ResidualReport(self.title)
        for name, comps in self.groups:
            block = vals[start:start + len(comps)]
            start += len(comps)
            by_name[name] = block
            report.add(ResidualEntry.from_values(name, block, scale, tol))
        for name, a, b, sign in self.agreements:
            diff = by_name[a] - sign * by_name[b]
            report.add(ResidualEntry.from_values(name, diff, scale, tol))
        return report


def sample_points(chart, plan=None, points=None):
    if points is not None:
        return np.atleast_2d(np.asarray(points, dtype=float))
    return (plan or SamplePlan()).points(chart.n)


def run_set(rs, scale_exprs, plan, tol, points, scale=None):
    pts = sample_points(rs.chart, plan, points)
    if scale is None:
        scale = derivative_scale(scale_exprs, pts, rs.chart)
    return rs.evaluate(pts, scale, tol)


def _pair_scale_exprs(pair):
    return pair.config.component_exprs() if pair.config is not None else pair.component_exprs()


# ---------------------------------------------------------------------------
# 3-space systems


def prerel_linear_terms(cfg):
    """The eleven linear/algebraic equations as (name, tensor-or-scalar) pairs."""
    c = cfg.chart
    w3 = cfg.omega3
    iE, iB = interior_multivector(cfg.E, w3), interior_multivector(cfg.B, w3)
    return [
        ("lie_E_omega3", lie_derivative(cfg.E, w3, c, spatial=True)),
        ("lie_B_omega3", lie_derivative(cfg.B, w3, c, spatial=True)),
        ("dxi_iE_omega3_minus_dbeta", time_derivative(iE, c) - spatial_d(cfg.beta, c)),
        ("dxi_iB_omega3_plus_dalpha", time_derivative(iB, c) + spatial_d(cfg.alpha, c)),
        ("alpha_B", pair_scalar(cfg.alpha, cfg.B)),
        ("beta_E", pair_scalar(cfg.beta, cfg.E)),
        ("alphaE_minus_betaB",
         pair_scalar(cfg.alpha, cfg.E) - pair_scalar(cfg.beta, cfg.B)),
    ]


def prerel_linear_residuals(cfg, plan=None, tol=DEFAULT_TOL, points=None):
    rs = ResidualSet("linear_prerel", cfg.chart)
    for name, t in prerel_linear_terms(cfg):
        # 3-forms on the spatial axes have a single component worth reporting
        if isinstance(t, GradedTensor) and t.degree == 3:
            t = [t[(1, 2, 3)]]
        elif isinstance(t, GradedTensor):
            t = [t[k] for k in basis_indices(3, t.degree)]
        rs.add(name, t)
    return run_set(rs, cfg.component_exprs(), plan, tol, points)


def cross_helicity_term(cfg):
    """beta^d alpha - alpha^d beta + d/dxi(1/2 (<alpha,E> + <beta,B>)) omega3."""
    c = cfg.chart
    lhs = wedge(cfg.beta, spatial_d(cfg.alpha, c)) - wedge(cfg.alpha, spatial_d(cfg.beta, c))
    energy = mul(0.5, pair_scalar(cfg.alpha, cfg.E) + pair_scalar(cfg.beta, cfg.B))
    rhs = time_derivative(cfg.omega3 * energy, c)
    return lhs + rhs


def cross_helicity_residual(cfg, plan=None, tol=DEFAULT_TOL, points=None):
    rs = ResidualSet("cross_helicity", cfg.chart)
    rs.add("cross_helicity", [cross_helicity_term(cfg)[(1, 2, 3)]])
    return run_set(rs, cfg.component_exprs(), plan, tol, points)


def integrability_residual(cfg, plan=None, tol=DEFAULT_TOL, points=None):
    """d theta ^ theta for theta = i_{E^B} omega3, plus i_E theta and i_B theta."""
    theta = theta_form(cfg)
    pts = sample_points(cfg.chart, plan, points)
    bad = rank_deficient_points([cfg.E, cfg.B], cfg.chart, pts)
    if bad:
        warnings.warn(
            f"E and B are linearly dependent at {len(bad)} of {len(pts)} sample points",
            stacklevel=2,
        )
    rs = ResidualSet("integrability", cfg.chart)
    rs.add("dtheta_wedge_theta", [wedge(spatial_d(theta, cfg.chart), theta)[(1, 2, 3)]])
    rs.add("iE_theta", interior_multivector(cfg.E, theta))
    rs.add("iB_theta", interior_multivector(cfg.B, theta))
    return run_set(rs, cfg.component_exprs(), plan, tol, pts)


def _spatial_div(X, cfg):
    d = exterior_derivative(interior_multivector(X, cfg.omega3), cfg.chart, spatial=True)
    return as_expr(d[(1, 2, 3)])


def static_balance_terms(cfg):
    """Left sides of the three component balance equations (1-forms)."""
    c = cfg.chart
    dE, dB = _spatial_div(cfg.E, cfg), _spatial_div(cfg.B, cfg)
    da, db = spatial_d(cfg.alpha, c), spatial_d(cfg.beta, c)
    iE, iB = interior_multivector, interior_multivector
    ee = iE(cfg.E, da) + cfg.beta * dB
    bb = iB(cfg.B, db) + cfg.alpha * dE
    eb = iE(cfg.E, db) + iB(cfg.B, da) - cfg.beta * dE - cfg.alpha * dB
    return ee, bb, eb


def subsystems(cfg):
    """(Omega, Omega_bar, Sigma, Sigma_bar) as vector-valued tensors with labels 1, 2."""
    w3 = cfg.omega3
    omega = VValuedTensor([(1, cfg.alpha), (2, cfg.beta)])
    omega_bar = VValuedTensor([(1, cfg.E), (2, cfg.B)])
    sigma = VValuedTensor([(1, -interior_multivector(cfg.B, w3)),
                           (2, interior_multivector(cfg.E, w3))])
    sigma_bar = VValuedTensor([(1, -cfg.Kbar), (2, cfg.Hbar)])
    return omega, omega_bar, sigma, sigma_bar


def static_balance_vee(cfg):
    """i_Omega_bar d Omega + i_Sigma_bar d Sigma with spatial d."""
    omega, omega_bar, sigma, sigma_bar = subsystems(cfg)
    c = cfg.chart
    return (vee_interior(omega_bar, vector_d(omega, c, spatial=True))
            + vee_interior(sigma_bar, vector_d(sigma, c, spatial=True)))


def static_balance_residual(cfg, plan=None, tol=DEFAULT_TOL, points=None):
    rs = ResidualSet("static_balance", cfg.chart)
    ee, bb, eb = static_balance_terms(cfg)
    vee = static_balance_vee(cfg)
    for name, t, key in (("static_EE", ee, (1, 1)), ("static_BB", bb, (2, 2)),
                         ("static_EB", eb, (1, 2))):
        rs.add(name, t)
        rs.add(name + ":vee", vee[key])
        rs.agree(name + ":path_agreement", name, name + ":vee")
    return run_set(rs, cfg.component_exprs(), plan, tol, points)


def time_balance_terms(cfg):
    """Right sides of the xi-dependent balance, one 1-form per V v V component."""
    c, w3 = cfg.chart, cfg.omega3
    Ed, Bd = time_derivative(cfg.E, c), time_derivative(cfg.B, c)

    def flux(a, b):
        return interior_multivector(wedge(a, b), w3)

    return -flux(Bd, cfg.E), flux(Ed, cfg.B), flux(Ed, cfg.E) - flux(Bd, cfg.B)


def time_balance_residual(cfg, plan=None, tol=DEFAULT_TOL, points=None):
    rs = ResidualSet("time_balance", cfg.chart)
    lhs = static_balance_terms(cfg)
    rhs = time_balance_terms(cfg)
    _, omega_bar, sigma, _ = subsystems(cfg)
    rhs_vee = vee_interior(omega_bar, sigma.map(lambda t: time_derivative(t, cfg.chart)))
    for name, l, r, key in zip(("time_EE", "time_BB", "time_EB"), lhs, rhs,
                               ((1, 1), (2, 2), (1, 2))):
        rs.add(name, l - r)
        rs.add(name + ":rhs", r)
        rs.add(name + ":rhs_vee", rhs_vee[key])
        rs.agree(name + ":path_agreement", name + ":rhs", name + ":rhs_vee")
    report = run_set(rs, cfg.component_exprs(), plan, tol, points)
    # the bare right sides are inputs to the agreement, not residuals
    report.entries = [e for e in report.entries if not e.name.endswith(("rhs", "rhs_vee"))]
    return report


# ---------------------------------------------------------------------------
# space-time systems


def _as_pair(obj):
    return build_spacetime(obj) if not hasattr(obj, "Fbar") else obj


def linear_spacetime_residuals(pair, plan=None, tol=DEFAULT_TOL, points=None):
    """dF, dG and the Lie derivatives of omega along Gbar and Fbar."""
    pair = _as_pair(pair)
    c, w = pair.chart, volume_form(4)
    rs = ResidualSet("linear_spacetime", c)
    rs.add("dF", exterior_derivative(pair.F, c))
    rs.add("dG", exterior_derivative(pair.G, c))
    rs.add("lie_Gbar_omega", lie_derivative(pair.Gbar, w, c))
    rs.add("lie_Fbar_omega", lie_derivative(pair.Fbar, w, c))
    rs.agree("lie_Gbar_omega:matches_dF", "lie_Gbar_omega", "dF")
    rs.agree("lie_Fbar_omega:matches_minus_dG", "lie_Fbar_omega", "dG", sign=-1)
    return run_set(rs, _pair_scale_exprs(pair), plan, tol, points)


def nonlinear_flows(pair):
    """(i_Fbar dF, i_Gbar dG, i_Fbar dG + i_Gbar dF)."""
    c = pair.chart
    dF, dG = exterior_derivative(pair.F, c), exterior_derivative(pair.G, c)
    i = interior_multivector
    return i(pair.Fbar, dF), i(pair.Gbar, dG), i(pair.Fbar, dG) + i(pair.Gbar, dF)


def divergence_flows(pair):
    """(i_{delta Gbar} G, i_{delta Fbar} F, i_{delta Fbar} G + i_{delta Gbar} F)."""
    c = pair.chart
    dG, dF = delta(pair.Gbar, c), delta(pair.Fbar, c)
    i = interior_multivector
    return i(dG, pair.G), i(dF, pair.F), i(dF, pair.G) + i(dG, pair.F)


def spacetime_balance_residual(pair, plan=None, tol=DEFAULT_TOL, points=None):
    """The three nonlinear flow residuals, the divergence form, and their agreement.

    The divergence form equals the flow form in the first two components and
    its negative in the mixed one.
    """
    pair = _as_pair(pair)
    rs = ResidualSet("nonlinear_spacetime", pair.chart)
    names = ("flow_FF", "flow_GG", "flow_FG")
    for name, t in zip(names, nonlinear_flows(pair)):
        rs.add(name, t)
    for name, t in zip(names, divergence_flows(pair)):
        rs.add(name + ":divergence_form", t)
    for name, sign in zip(names, (1, 1, -1)):
        rs.agree(name + ":path_agreement", name + ":divergence_form", name, sign)
    return run_set(rs, _pair_scale_exprs(pair), plan, tol, points)


def null_condition_check(pair, plan=None, tol=DEFAULT_TOL, points=None):
    """F^F, G^G, F^G and the scalar null conditions."""
    pair = _as_pair(pair)
    top = (1, 2, 3, 4)
    rs = ResidualSet("null_conditions", pair.chart)
    rs.add("F_wedge_F", [wedge(pair.F, pair.F)[top]])
    rs.add("G_wedge_G", [wedge(pair.G, pair.G)[top]])
    rs.add("F_wedge_G", [wedge(pair.F, pair.G)[top]])
    cfg = pair.config
    if cfg is not None:
        ab = pair_scalar(cfg.alpha, cfg.B)
        be = pair_scalar(cfg.beta, cfg.E)
        diff = pair_scalar(cfg.alpha, cfg.E) - pair_scalar(cfg.beta, cfg.B)
    else:
        ab = mul(0.5, as_expr(pairing(pair.F, pair.Gbar)))
        be = mul(0.5, as_expr(pairing(pair.G, pair.Fbar)))
        diff = mul(-1.0, as_expr(pairing(pair.F, pair.Fbar)))
    rs.add("alpha_B", [ab])
    rs.add("beta_E", [be])
    rs.add("alphaE_minus_betaB", [diff])
    return run_set(rs, _pair_scale_exprs(pair), plan, tol, points)


def conservation_residual(pair, X, plan=None, tol=DEFAULT_TOL, points=None):
    """d(i_V omega) for V = X^s T_s^m d_m."""
    pair = _as_pair(pair)
    V = energy_flux(pair, X)
    w = volume_form(4)
    rs = ResidualSet("conservation", pair.chart)
    rs.add("d_iV_omega", [exterior_derivative(interior_multivector(V, w), pair.chart)[(1, 2, 3, 4)]])
    return run_set(rs, _pair_scale_exprs(pair), plan, tol, points)


def time_vector():
    return GradedTensor.basis(4, (TIME_AXIS,), "contravariant")
