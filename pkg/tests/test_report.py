import csv
import io
import json

import numpy as np
import pytest

from premetric.field_expr import Chart, parse
from premetric.report import (ResidualEntry, ResidualReport, SamplePlan, ValidationError,
                              derivative_scale)


def test_pass_rule_uses_scale_floor():
    assert ResidualEntry.from_values("a", [1e-8], 0.5, 1e-8).passed
    assert not ResidualEntry.from_values("a", [2e-8], 0.5, 1e-8).passed
    assert ResidualEntry.from_values("a", [2e-8], 3.0, 1e-8).passed
    e = ResidualEntry.from_values("a", np.array([[3.0, -4.0]]), 0, 1)
    assert (e.max_abs, e.rms, e.n_points) == (4.0, pytest.approx(np.sqrt(12.5)), 2)


def test_empty_values_pass():
    e = ResidualEntry.from_values("empty", np.zeros((0, 5)), 0, 1e-8)
    assert e.passed and e.max_abs == 0


def _report():
    r = ResidualReport("demo")
    r.add(ResidualEntry.from_values("ok", [0.0, 1e-12], 1.0, 1e-8))
    r.add(ResidualEntry.from_values("bad", [0.1], 1.0, 1e-8))
    return r


def test_report_serialization():
    r = _report()
    d = json.loads(r.to_json())
    assert d["pass"] is False and d["title"] == "demo"
    assert list(d["checks"][0]) == ["name", "max_abs_residual", "rms_residual", "n_points",
                                    "scale", "tolerance", "pass"]
    rows = list(csv.DictReader(io.StringIO(r.to_csv())))
    assert [row["name"] for row in rows] == ["ok", "bad"]
    assert float(rows[1]["max_abs_residual"]) == 0.1
    assert [e.name for e in r.failures()] == ["bad"]
    assert r.summary_lines()[1].startswith("FAIL  bad")
    with pytest.raises(KeyError):
        r["missing"]


def test_sample_plan_is_deterministic():
    a = SamplePlan(count=10, seed=5).points(3)
    assert np.array_equal(a, SamplePlan(count=10, seed=5).points(3))
    assert not np.array_equal(a, SamplePlan(count=10, seed=6).points(3))
    assert a.min() >= -1 and a.max() <= 1


def test_grid_plan():
    g = SamplePlan(kind="grid", points_per_axis=3, box=((0, 1), (0, 2))).points(2)
    assert g.shape == (9, 2)
    assert sorted(set(g[:, 1])) == [0.0, 1.0, 2.0]


@pytest.mark.parametrize("bad", [
    {"kind": "sobol"}, {"box": [[1, 1]]}, {"count": 0}, {"kind": "grid", "points_per_axis": 0},
    {"colour": 1}, {"count": "many"},
])
def test_plan_validation(bad):
    with pytest.raises(ValidationError):
        SamplePlan.from_dict(bad)


def test_plan_round_trip_and_box_dimension():
    p = SamplePlan(kind="grid", box=((-1, 1),) * 2, points_per_axis=4, seed=3)
    assert SamplePlan.from_dict(p.to_dict()) == p
    with pytest.raises(ValidationError):
        p.points(3)


def test_derivative_scale():
    chart = Chart.default(4)
    pts = np.array([[1.0, 2.0, 0, 0], [-3.0, 0, 0, 0]])
    assert derivative_scale([parse("x^2"), parse("y")], pts, chart) == 6.0
    assert derivative_scale([], pts, chart) == 0.0
