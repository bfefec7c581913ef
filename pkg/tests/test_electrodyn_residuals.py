import numpy as np
import pytest

from premetric.electrodyn import (EMConfig, build_spacetime, catalog, conservation_residual,
                                  cross_helicity_residual, integrability_residual,
                                  linear_spacetime_residuals, null_condition_check,
                                  prerel_linear_residuals, random_config,
                                  spacetime_balance_residual, static_balance_residual,
                                  time_balance_residual, time_vector)
from premetric.electrodyn.fields import pair_scalar
from premetric.electrodyn.residuals import ResidualSet, run_set, theta_form
from premetric.exterior import CONTRAVARIANT, GradedTensor, wedge
from premetric.field_expr import as_expr, evaluate_many
from premetric.report import SamplePlan

PLAN = SamplePlan(count=512, seed=3)
Z = ["0", "0", "0"]
CONST = EMConfig.from_components(["1", "0", "0"], ["0", "1", "0"], ["1", "0", "0"], ["0", "1", "0"])
ZERO = EMConfig.from_components(Z, Z, Z, Z)


def all_zero(report):
    return all(e.max_abs == 0.0 for e in report)


def test_plane_wave_linear_system():
    cfg = catalog("plane_wave")
    for check in (prerel_linear_residuals, linear_spacetime_residuals):
        r = check(cfg, PLAN)
        assert r.passed and r.max_abs <= 1e-12


def test_linear_prerel_entry_count():
    # seven groups carrying the eleven scalar equations
    r = prerel_linear_residuals(CONST, PLAN)
    assert r.names() == ["lie_E_omega3", "lie_B_omega3", "dxi_iE_omega3_minus_dbeta",
                       "dxi_iB_omega3_plus_dalpha", "alpha_B", "beta_E", "alphaE_minus_betaB"]
    assert sum(e.values.shape[0] for e in r) == 11
    assert all_zero(r)


def test_diverging_E_breaks_linear_system():
    cfg = EMConfig.from_components(["x", "0", "0"], Z, Z, Z)
    r = prerel_linear_residuals(cfg, PLAN)
    assert r["lie_E_omega3"].max_abs == 1.0
    assert np.all(r["lie_E_omega3"].values == 1.0)
    assert not r.passed


@pytest.mark.parametrize("cfg, ok", [
    (catalog("plane_wave"), True), (CONST, True), (catalog("random_nonsolution", seed=2), False),
], ids=["plane_wave", "constants", "random"])
def test_cross_helicity(cfg, ok):
    r = cross_helicity_residual(cfg, PLAN)
    assert r.passed is ok
    if ok:
        assert r.max_abs <= 1e-12


def test_integrability_examples():
    crossed = EMConfig.from_components(["1", "0", "0"], ["0", "1", "0"], Z, Z)
    assert all_zero(integrability_residual(crossed, PLAN))
    twisted = EMConfig.from_components(["1", "0", "0"], ["0", "1", "x"], Z, Z)
    r = integrability_residual(twisted, PLAN)
    assert np.all(r["dtheta_wedge_theta"].values == -1.0)
    assert r["iE_theta"].max_abs == 0 and r["iB_theta"].max_abs <= 1e-15


def test_integrability_of_running_wave():
    cfg = catalog("running_wave_null")
    theta = theta_form(cfg)
    u, p = cfg.E[(1,)], cfg.E[(2,)]
    pts = PLAN.points(4)
    v = evaluate_many([as_expr(theta[(3,)]), u * u + p * p], pts, cfg.chart)
    np.testing.assert_allclose(v[0], v[1], atol=1e-15)
    assert theta[(1,)] == 0 and theta[(2,)] == 0
    with pytest.warns(UserWarning, match="linearly dependent"):
        integrability_residual(EMConfig.from_components(["x", "0", "0"], ["y", "0", "0"], Z, Z),
                               PLAN)


def test_theta_annihilated_by_E_and_B():
    for seed in range(10):
        r = integrability_residual(random_config(seed), PLAN)
        assert r["iE_theta"].max_abs <= 1e-12 * max(1, r["iE_theta"].scale)
        assert r["iB_theta"].max_abs <= 1e-12 * max(1, r["iB_theta"].scale)


def test_static_balance_constants():
    r = static_balance_residual(CONST, PLAN)
    assert all_zero(r) and r.passed


def test_static_balance_divergence_term():
    cfg = EMConfig.from_components(["x", "0", "0"], Z, ["x", "0", "0"], Z)
    r = static_balance_residual(cfg, PLAN)
    pts = PLAN.points(4)
    # residual 1-form is div(E) alpha = x dx
    np.testing.assert_allclose(r["static_BB"].values[0], pts[:, 0])
    assert np.all(r["static_BB"].values[1:] == 0)
    assert r["static_BB:path_agreement"].max_abs <= 1e-15


def test_static_balance_paths_agree():
    for seed in range(50):
        r = static_balance_residual(random_config(seed), SamplePlan(count=64, seed=seed))
        for name in ("static_EE", "static_BB", "static_EB"):
            e = r[name + ":path_agreement"]
            assert e.max_abs <= 1e-12 * max(1.0, e.scale), (seed, name, e.max_abs)


def test_time_balance_examples():
    assert all_zero(time_balance_residual(CONST, PLAN))
    r = time_balance_residual(catalog("running_wave_null"), PLAN)
    assert r.passed
    for name in ("time_EE", "time_BB", "time_EB"):
        assert r[name].max_abs <= 1e-8 * max(1, r[name].scale)
    bad = time_balance_residual(catalog("random_nonsolution", seed=4), PLAN)
    assert not bad.passed
    assert all(bad[n + ":path_agreement"].passed for n in ("time_EE", "time_BB", "time_EB"))


def test_linear_spacetime_examples():
    assert all_zero(linear_spacetime_residuals(CONST, PLAN))
    r = linear_spacetime_residuals(EMConfig.from_components(["x", "0", "0"], Z, Z, Z), PLAN)
    # dG = dx^dy^dz: the first of the four 3-form components
    assert np.all(r["dG"].values[0] == 1.0) and np.all(r["dG"].values[1:] == 0)
    assert r["dF"].max_abs == 0
    assert r["lie_Fbar_omega:matches_minus_dG"].max_abs == 0


def test_linear_solutions_solve_nonlinear_system():
    r = spacetime_balance_residual(catalog("plane_wave"), PLAN)
    assert r.passed and r.max_abs <= 1e-12


@pytest.mark.parametrize("eps", [1, -1])
def test_running_wave_solves_nonlinear_system(eps):
    r = spacetime_balance_residual(catalog("running_wave_null", epsilon=eps), PLAN)
    assert r.passed
    assert all(r[n].max_abs <= 1e-8 * max(1, r[n].scale) for n in ("flow_FF", "flow_GG", "flow_FG"))


def test_flow_and_divergence_forms_agree_on_random_configs():
    for seed in range(10):
        r = spacetime_balance_residual(random_config(seed), PLAN)
        assert not all(r[n].passed for n in ("flow_FF", "flow_GG", "flow_FG"))
        for n in ("flow_FF", "flow_GG", "flow_FG"):
            e = r[n + ":path_agreement"]
            assert e.max_abs <= 1e-10 * max(1, e.scale)


def test_null_conditions():
    assert all_zero(null_condition_check(ZERO, PLAN))
    r = null_condition_check(catalog("running_wave_null"), PLAN)
    assert r.max_abs <= 1e-12
    single = EMConfig.from_components(["1", "0", "0"], Z, ["1", "0", "0"], Z)
    r = null_condition_check(single, PLAN)
    assert np.all(r["F_wedge_G"].values == 1.0)
    assert np.all(r["alphaE_minus_betaB"].values == 1.0)
    assert not r.passed


def test_mixed_wedge_tracks_pairing_difference():
    pts = PLAN.points(4)
    for seed in range(10):
        cfg = random_config(seed)
        p = build_spacetime(cfg)
        fg = as_expr(wedge(p.F, p.G)[(1, 2, 3, 4)])
        diff = pair_scalar(cfg.alpha, cfg.E) - pair_scalar(cfg.beta, cfg.B)
        a, b = evaluate_many([fg, diff], pts, cfg.chart)
        assert np.max(np.abs(a - b)) <= 1e-12 * max(1, np.max(np.abs(a)))


def test_null_conditions_without_config_use_pair_relations():
    p = build_spacetime(random_config(1))
    bare = type(p).from_forms(p.F, p.G)
    a = null_condition_check(p, PLAN)
    b = null_condition_check(bare, PLAN)
    for name in ("alpha_B", "beta_E", "alphaE_minus_betaB"):
        np.testing.assert_allclose(a[name].values, b[name].values, rtol=1e-12, atol=1e-12)


def test_conservation_examples():
    X = time_vector()
    assert conservation_residual(catalog("running_wave_null"), X, PLAN).passed
    other = GradedTensor.vector([1.0, -2.0, 0.5, 3.0])
    assert all_zero(conservation_residual(ZERO, other, PLAN))
    assert not conservation_residual(catalog("random_nonsolution", seed=1), X, PLAN).passed


def test_pairs_and_configs_are_interchangeable():
    cfg = random_config(5)
    a = spacetime_balance_residual(cfg, PLAN)
    b = spacetime_balance_residual(build_spacetime(cfg), PLAN)
    assert a.to_dict() == b.to_dict()


def test_explicit_points_and_scale():
    rs = ResidualSet("demo", catalog("plane_wave").chart)
    rs.add("one", [as_expr(1.0)])
    r = run_set(rs, [], None, 1e-8, [[0, 0, 0, 0]], scale=3.0)
    e = r["one"]
    assert (e.max_abs, e.scale, e.n_points, e.passed) == (1.0, 3.0, 1, False)
