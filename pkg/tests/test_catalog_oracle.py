import json

import numpy as np
import pytest

from premetric.electrodyn import (CATALOG, AutoparallelField, EMConfig, FamilyValidationError,
                                  build_spacetime, catalog, catalog_names, random_config,
                                  spacetime_balance_residual)
from premetric.electrodyn.catalog import BUMP_BOX, running_wave
from premetric.electrodyn.oracle import (assemble_F_G, bivector_of, nonlinear_residuals_fd,
                                         validate_nonlinear_solution)
from premetric.electrodyn.residuals import nonlinear_flows
from premetric.exterior import basis_indices
from premetric.field_expr import as_expr, evaluate_many
from premetric.report import SamplePlan, ValidationError

PTS = SamplePlan(count=2000, seed=9, box=BUMP_BOX).points(4)


def test_catalog_lists_all_families():
    assert catalog_names() == ["plane_wave", "static_equilibrium", "running_wave_null",
                               "bump_photon", "autoparallel_timelike", "autoparallel_null",
                               "random_nonsolution"]
    for entry in CATALOG.values():
        d = entry.to_dict()
        json.dumps(d)
        assert set(d) == {"name", "kind", "summary", "instantiates", "params", "box"}


def test_unknown_entry_lists_catalog():
    with pytest.raises(ValidationError, match="plane_wave, static_equilibrium"):
        catalog("photon")
    with pytest.raises(ValidationError, match="unknown parameters"):
        catalog("plane_wave", speed=2)


@pytest.mark.parametrize("kwargs", [{"epsilon": 0}, {"epsilon": 2}])
def test_sign_parameters_are_validated(kwargs):
    with pytest.raises(ValidationError):
        catalog("bump_photon", **kwargs)


def test_param_validation():
    with pytest.raises(ValidationError):
        catalog("bump_photon", width=0)
    with pytest.raises(ValidationError):
        catalog("autoparallel_timelike", speed=1.0)


def test_every_entry_instantiates_with_defaults():
    for name in catalog_names():
        obj = catalog(name)
        assert isinstance(obj, AutoparallelField if CATALOG[name].kind == "vector" else EMConfig)


def test_bump_photon_has_compact_support():
    cfg = catalog("bump_photon")
    outside = np.array([[1.2, 0.1, 0.2, 0.0], [0.1, -1.5, 0.0, 0.3], [0.0, 0.0, 1.3, 0.2]])
    vals = evaluate_many(cfg.component_exprs(), outside, cfg.chart)
    assert np.all(vals == 0.0)
    inside = evaluate_many(cfg.component_exprs(), [[0.1, 0.2, 0.3, 0.1]], cfg.chart)
    assert np.any(inside != 0.0)


def test_bump_photon_solves_nonlinear_system():
    r = spacetime_balance_residual(catalog("bump_photon"), SamplePlan(count=2048, box=BUMP_BOX))
    assert r.passed


def test_random_nonsolution_is_deterministic_and_fails():
    a, b = catalog("random_nonsolution", seed=7), catalog("random_nonsolution", seed=7)
    assert a.to_dict() == b.to_dict()
    assert a.to_dict() != catalog("random_nonsolution", seed=8).to_dict()
    assert not spacetime_balance_residual(a, SamplePlan(count=256)).passed


def test_oracle_agrees_with_symbolic_flows():
    pts = SamplePlan(count=300, seed=2).points(4)
    for seed in range(5):
        cfg = random_config(seed)
        fd = nonlinear_residuals_fd(cfg, pts, h=1e-4)
        sym = nonlinear_flows(build_spacetime(cfg))
        for name, t in zip(("flow_FF", "flow_GG", "flow_FG"), sym):
            exact = evaluate_many([as_expr(t[k]) for k in basis_indices(4, 1)], pts, cfg.chart)
            scale = max(1.0, np.max(np.abs(exact)))
            assert np.max(np.abs(fd[name] - exact)) <= 1e-6 * scale


def test_oracle_duals_match_symbolic_construction():
    cfg = random_config(3)
    pair = build_spacetime(cfg)
    pts = PTS[:50]
    vals = evaluate_many(cfg.component_exprs(), pts, cfg.chart)
    F, G = assemble_F_G(vals[0:3], vals[3:6], vals[6:9], vals[9:12])
    for dense, t in ((F, pair.F), (G, pair.G), (bivector_of(F), pair.Gbar),
                     (-bivector_of(G), pair.Fbar)):
        for (i, j) in basis_indices(4, 2):
            ref = evaluate_many([as_expr(t[(i, j)])], pts, cfg.chart)[0]
            np.testing.assert_allclose(dense[i - 1, j - 1], ref, atol=1e-12)


def test_oracle_rejects_non_solutions():
    with pytest.raises(FamilyValidationError, match="flow_"):
        validate_nonlinear_solution(random_config(1, identify_alpha_with_E=True), PTS)


def test_gate_rejects_broken_running_wave():
    # a profile pair whose null scalars fail: u and p with a constant offset in B
    bad = EMConfig.from_components(["cos(z - xi)", "0", "0"], ["0", "2*cos(z - xi)", "0"],
                                   identify_alpha_with_E=True)
    with pytest.raises(FamilyValidationError, match="alphaE_minus_betaB"):
        validate_nonlinear_solution(bad, PTS)


def test_running_wave_gate_accepts_family():
    worst = validate_nonlinear_solution(catalog("running_wave_null", epsilon=-1), PTS)
    assert worst["alpha_B"] <= 1e-12
    cfg = running_wave("x*cos(s)", "y*sin(s)", 1)
    assert spacetime_balance_residual(cfg, SamplePlan(count=256)).passed
