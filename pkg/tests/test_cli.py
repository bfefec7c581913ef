import csv
import json
import subprocess
import sys

import pytest

from premetric.cli import CHECKS, main, run_check, spec_from_dict


def write(tmp_path, doc, name="spec.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc), encoding="utf-8")
    return str(p)


SMALL = {"count": 512}


def test_plane_wave_checks_pass(tmp_path, capsys):
    spec = write(tmp_path, {"catalog": "plane_wave", "checks": ["linear_prerel", "linear_spacetime"],
                            "sample_plan": SMALL})
    assert main(["check", "--spec", spec]) == 0
    assert capsys.readouterr().out.rstrip().endswith("PASS")


def test_bump_photon_checks_pass(tmp_path):
    spec = write(tmp_path, {"catalog": {"name": "bump_photon", "params": {"epsilon": -1}},
                            "checks": ["nonlinear_spacetime", "conservation", "null_conditions",
                                       "integrability"],
                            "sample_plan": SMALL})
    with pytest.warns(UserWarning):
        assert main(["check", "--spec", spec]) == 0


def test_random_nonsolution_fails(tmp_path, capsys):
    spec = write(tmp_path, {"catalog": {"name": "random_nonsolution", "params": {"seed": 3}},
                            "checks": ["nonlinear_spacetime"], "sample_plan": SMALL})
    out = tmp_path / "r.json"
    assert main(["check", "--spec", spec, "--report", str(out)]) == 1
    doc = json.loads(out.read_text())
    assert doc["pass"] is False
    assert max(c["max_abs_residual"] for c in doc["checks"]) > 0


def test_explicit_fields_and_reports(tmp_path):
    doc = {"E": ["sin(z - xi)", "0", "0"], "B": ["0", "sin(z - xi)", "0"],
           "identify_alpha_with_E": True, "checks": ["time_balance", "linear_prerel"],
           "sample_plan": {"count": 64, "seed": 2}, "tolerance": 1e-10}
    spec = write(tmp_path, doc)
    j1, j2, c1 = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "a.csv"
    assert main(["check", "--spec", spec, "--report", str(j1), "--csv", str(c1)]) == 0
    assert main(["check", "--spec", spec, "--report", str(j2)]) == 0
    assert j1.read_bytes() == j2.read_bytes()
    rows = list(csv.DictReader(c1.open(encoding="utf-8")))
    names = [r["name"] for r in rows]
    # registration order, not request order
    assert names[0].startswith("linear_prerel/") and names[-1].startswith("time_balance/")
    assert {r["tolerance"] for r in rows} == {"1e-10"}


def test_autoparallel_spec(tmp_path):
    spec = write(tmp_path, {"catalog": "autoparallel_null", "checks": ["autoparallel"],
                            "sample_plan": SMALL})
    assert main(["check", "--spec", spec]) == 0
    spec = write(tmp_path, {"u": ["x", "0", "0", "0"], "mode": "timelike",
                            "checks": ["autoparallel"], "sample_plan": SMALL})
    assert main(["check", "--spec", spec]) == 1


def test_tolerance_override(tmp_path):
    spec = write(tmp_path, {"catalog": {"name": "random_nonsolution", "params": {"seed": 0}},
                            "checks": ["null_conditions"], "sample_plan": SMALL})
    assert main(["check", "--spec", spec, "--tol", "1e6"]) == 0
    assert main(["check", "--spec", spec, "--tol", "-1"]) == 2


@pytest.mark.parametrize("doc, message", [
    ({"catalog": "plane_wave", "checks": ["bogus"]}, "unknown checks"),
    ({"catalog": "plane_wave", "checks": []}, "non-empty"),
    ({"catalog": "nope", "checks": ["linear_prerel"]}, "unknown catalog entry"),
    ({"E": ["x", "0"], "B": ["0", "0", "0"], "identify_alpha_with_E": True,
      "checks": ["linear_prerel"]}, "list of 3"),
    ({"E": ["foo(x)", "0", "0"], "B": ["0", "0", "0"], "identify_alpha_with_E": True,
      "checks": ["linear_prerel"]}, "unknown function"),
    ({"E": ["x", "0", "0"], "B": ["0", "0", "0"], "alpha": ["0", "0", "0"],
      "checks": ["linear_prerel"]}, "missing beta"),
    ({"catalog": "plane_wave", "checks": ["autoparallel"]}, "needs a vector"),
    ({"catalog": "plane_wave", "checks": ["linear_prerel"], "dimension": 3}, "dimension 4"),
    ({"catalog": "plane_wave", "checks": ["linear_prerel"], "colour": "red"}, "unknown spec keys"),
    ({"catalog": "plane_wave", "checks": ["linear_prerel"], "tolerance": 0}, "tolerance"),
    ({"catalog": "plane_wave", "checks": ["linear_prerel"],
      "sample_plan": {"box": [[0, 0]] * 4}}, "degenerate"),
])
def test_input_errors_exit_2(tmp_path, capsys, doc, message):
    assert main(["check", "--spec", write(tmp_path, doc)]) == 2
    assert message in capsys.readouterr().err


def test_unreadable_spec_exits_2(tmp_path, capsys):
    assert main(["check", "--spec", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert main(["check", "--spec", str(bad)]) == 2


def test_evaluation_error_exits_2(tmp_path):
    spec = write(tmp_path, {"E": ["1/x", "0", "0"], "B": ["0", "0", "0"],
                            "identify_alpha_with_E": True, "checks": ["linear_prerel"],
                            "sample_plan": {"kind": "grid", "points_per_axis": 3}})
    assert main(["check", "--spec", spec]) == 2


def test_catalog_box_used_by_default():
    spec = spec_from_dict({"catalog": "bump_photon", "checks": ["null_conditions"]})
    assert spec.plan.box == ((-0.95, 0.95),) * 4 and spec.plan.count == 4096
    spec = spec_from_dict({"catalog": "bump_photon", "checks": ["null_conditions"],
                           "sample_plan": {"box": [[-0.5, 0.5]] * 4}})
    assert spec.plan.box == ((-0.5, 0.5),) * 4


def test_appendix_check_matches_flow_check():
    spec = spec_from_dict({"catalog": {"name": "random_nonsolution", "params": {"seed": 5}},
                           "checks": ["appendix_flow", "nonlinear_spacetime"],
                           "sample_plan": {"count": 128}})
    r = run_check(spec)
    for a, b in (("appendix_11", "flow_FF"), ("appendix_22", "flow_GG"), ("appendix_12", "flow_FG")):
        assert r[f"appendix_flow/{a}"].max_abs == pytest.approx(
            r[f"nonlinear_spacetime/{b}"].max_abs, rel=1e-12)


def test_identities_command(tmp_path, capsys):
    out1, out2 = tmp_path / "1.json", tmp_path / "2.json"
    args = ["identities", "--dims", "3,4", "--trials", "100", "--seed", "42"]
    assert main(args + ["--report", str(out1)]) == 0
    assert main(args + ["--report", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert main(["identities", "--trials", "0"]) == 2
    assert main(["identities", "--dims", "3,x"]) == 2
    assert "trials must be at least 1" in capsys.readouterr().err


def test_catalog_command(capsys):
    assert main(["catalog"]) == 0
    text = capsys.readouterr().out
    for name in ("plane_wave", "bump_photon", "autoparallel_null"):
        assert name in text
    assert main(["catalog", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [e["name"] for e in doc["entries"]][:2] == ["plane_wave", "static_equilibrium"]
    for e in doc["entries"]:
        assert set(e) == {"name", "kind", "summary", "instantiates", "params", "box"}


def test_unknown_subcommand_prints_usage(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2
    assert "usage:" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "premetric", "catalog", "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["entries"]


def test_check_registry_order():
    assert list(CHECKS)[:3] == ["linear_prerel", "cross_helicity", "integrability"]


def test_identification_defaults_to_omitted_forms():
    spec = spec_from_dict({"E": ["x", "0", "0"], "B": ["0", "y", "0"], "checks": ["null_conditions"]})
    assert spec.config.identify_alpha_with_E
    spec = spec_from_dict({"E": ["x", "0", "0"], "B": ["0", "y", "0"], "alpha": ["1", "0", "0"],
                           "beta": ["0", "0", "0"], "checks": ["null_conditions"]})
    assert not spec.config.identify_alpha_with_E
