"""Command-line front end: residual checks from JSON field specs, identity suites, catalog listing.

Exit status: 0 all checks pass, 1 some residual fails, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from functools import cached_property

from .electrodyn import (CATALOG, AutoparallelField, EMConfig, FamilyValidationError,
                         autoparallel_residuals, build_spacetime, catalog,
                         conservation_residual, cross_helicity_residual,
                         integrability_residual, linear_spacetime_residuals,
                         null_condition_check, prerel_linear_residuals,
                         spacetime_balance_residual, static_balance_residual,
                         time_balance_residual)
from .electrodyn.autoparallel import NULL, TIMELIKE
from .electrodyn.residuals import ResidualSet, run_set
from .exterior import CONTRAVARIANT, ContractViolation, GradedTensor
from .field_expr import Chart, EvaluationError, ParseError, parse
from .identities import SUPPORTED_DIMS, run_identities
from .report import DEFAULT_TOL, ResidualReport, SamplePlan, ValidationError
from .vvalued import appendix_flow

SPEC_KEYS = {"dimension", "coordinates", "E", "B", "alpha", "beta", "catalog",
             "identify_alpha_with_E", "checks", "sample_plan", "tolerance",
             "u", "mode", "conservation_vector"}


def _appendix(pair, plan, tol, points):
    flow = appendix_flow([pair.Fbar], [pair.Gbar], pair.chart)
    rs = ResidualSet("appendix_flow", pair.chart)
    for key in ((1, 1), (2, 2), (1, 2)):
        rs.add(f"appendix_{key[0]}{key[1]}", flow[key])
    scale_exprs = pair.config.component_exprs() if pair.config else pair.component_exprs()
    return run_set(rs, scale_exprs, plan, tol, points)


# name -> (needs, runner); order here is the report order
CHECKS = {
    "linear_prerel": ("config", lambda s, plan, tol: prerel_linear_residuals(s.config, plan, tol)),
    "cross_helicity": ("config", lambda s, plan, tol: cross_helicity_residual(s.config, plan, tol)),
    "integrability": ("config", lambda s, plan, tol: integrability_residual(s.config, plan, tol)),
    "static_balance": ("config", lambda s, plan, tol: static_balance_residual(s.config, plan, tol)),
    "time_balance": ("config", lambda s, plan, tol: time_balance_residual(s.config, plan, tol)),
    "linear_spacetime": ("config", lambda s, plan, tol: linear_spacetime_residuals(s.pair, plan, tol)),
    "nonlinear_spacetime": ("config", lambda s, plan, tol: spacetime_balance_residual(s.pair, plan, tol)),
    "null_conditions": ("config", lambda s, plan, tol: null_condition_check(s.pair, plan, tol)),
    "conservation": ("config", lambda s, plan, tol: conservation_residual(s.pair, s.conservation_vector, plan, tol)),
    "appendix_flow": ("config", lambda s, plan, tol: _appendix(s.pair, plan, tol, None)),
    "autoparallel": ("vector", lambda s, plan, tol: autoparallel_residuals(s.vector.u, s.vector.mode, s.chart, plan=plan, tol=tol)),
}


@dataclass
class FieldSpec:
    chart: Chart
    checks: list
    plan: SamplePlan
    tolerance: float = DEFAULT_TOL
    config: EMConfig = None
    vector: AutoparallelField = None
    conservation_vector: GradedTensor = None
    source: dict = field(default_factory=dict)

    @cached_property
    def pair(self):
        return build_spacetime(self.config)


def _components(value, n, name):
    if not isinstance(value, list) or len(value) != n:
        raise ValidationError(f"{name} must be a list of {n} expression strings")
    out = []
    for v in value:
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            v = repr(float(v))
        if not isinstance(v, str):
            raise ValidationError(f"{name} entries must be strings or numbers")
        out.append(v)
    return out


def spec_from_dict(d):
    """Validate a decoded spec document and build the objects it describes."""
    if not isinstance(d, dict):
        raise ValidationError("spec must be a JSON object")
    unknown = set(d) - SPEC_KEYS
    if unknown:
        raise ValidationError(f"unknown spec keys: {sorted(unknown)}")
    dim = d.get("dimension", 4)
    if dim != 4:
        raise ValidationError(f"only dimension 4 (three space axes and time) is supported, got {dim!r}")
    names = d.get("coordinates", ["x", "y", "z", "xi"])
    if not isinstance(names, list) or len(names) != 4 or len(set(names)) != 4:
        raise ValidationError("coordinates must list 4 distinct names, time last")
    chart = Chart(tuple(names), time_axis=4)

    checks = d.get("checks")
    if not isinstance(checks, list) or not checks:
        raise ValidationError("checks must be a non-empty list")
    bad = [c for c in checks if c not in CHECKS]
    if bad:
        raise ValidationError(f"unknown checks {bad}; registered: {list(CHECKS)}")

    tol = d.get("tolerance", DEFAULT_TOL)
    if not isinstance(tol, (int, float)) or isinstance(tol, bool) or tol <= 0:
        raise ValidationError("tolerance must be a positive number")

    config = vector = None
    box = None
    if "catalog" in d:
        if any(k in d for k in ("E", "B", "alpha", "beta", "u")):
            raise ValidationError("give either a catalog reference or explicit fields, not both")
        ref = d["catalog"]
        if isinstance(ref, str):
            ref = {"name": ref}
        if not isinstance(ref, dict) or "name" not in ref:
            raise ValidationError("catalog must be a name or an object with 'name' and 'params'")
        if tuple(names) != ("x", "y", "z", "xi"):
            raise ValidationError("catalog entries are defined on coordinates x, y, z, xi")
        obj = catalog(ref["name"], ref.get("params") or {})
        box = CATALOG[ref["name"]].box
        if isinstance(obj, AutoparallelField):
            vector = obj
        else:
            config = obj
    elif "u" in d:
        comps = [parse(v, chart) for v in _components(d["u"], 4, "u")]
        mode = d.get("mode")
        if mode not in (TIMELIKE, NULL):
            raise ValidationError(f"mode must be {TIMELIKE!r} or {NULL!r}")
        u = GradedTensor(4, 1, CONTRAVARIANT, {(k,): c for k, c in enumerate(comps, 1)})
        vector = AutoparallelField(u, mode)
    else:
        # absent flag: identify exactly when both 1-forms are omitted
        identify = d.get("identify_alpha_with_E", "alpha" not in d and "beta" not in d)
        if not isinstance(identify, bool):
            raise ValidationError("identify_alpha_with_E must be true or false")
        for key in ("E", "B"):
            if key not in d:
                raise ValidationError(f"missing {key}")
        E = [parse(v, chart) for v in _components(d["E"], 3, "E")]
        B = [parse(v, chart) for v in _components(d["B"], 3, "B")]
        if identify:
            if "alpha" in d or "beta" in d:
                raise ValidationError("alpha/beta must be omitted when identified with E/B")
            config = EMConfig.from_components(E, B, chart=chart, identify_alpha_with_E=True)
        else:
            for key in ("alpha", "beta"):
                if key not in d:
                    raise ValidationError(f"missing {key} (or set identify_alpha_with_E)")
            alpha = [parse(v, chart) for v in _components(d["alpha"], 3, "alpha")]
            beta = [parse(v, chart) for v in _components(d["beta"], 3, "beta")]
            config = EMConfig.from_components(E, B, alpha, beta, chart=chart)

    for c in checks:
        needs = CHECKS[c][0]
        if needs == "config" and config is None:
            raise ValidationError(f"check {c!r} needs E, B, alpha, beta fields")
        if needs == "vector" and vector is None:
            raise ValidationError(f"check {c!r} needs a vector field u with a mode")

    X = None
    if "conservation_vector" in d:
        comps = [parse(v, chart) for v in _components(d["conservation_vector"], 4, "conservation_vector")]
        X = GradedTensor(4, 1, CONTRAVARIANT, {(k,): c for k, c in enumerate(comps, 1)})
    else:
        X = GradedTensor.basis(4, (4,), CONTRAVARIANT)

    plan_doc = d.get("sample_plan", {})
    plan = SamplePlan.from_dict(plan_doc)
    if plan.box is None and box is not None:
        plan = SamplePlan(plan.kind, box, plan.count, plan.points_per_axis, plan.seed)
    return FieldSpec(chart, list(checks), plan, float(tol), config, vector, X, d)


def load_spec(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from None
    return spec_from_dict(doc)


def run_check(spec, tol=None):
    """Run the requested checks in registration order; entry names are prefixed by check."""
    tol = spec.tolerance if tol is None else tol
    report = ResidualReport("check")
    for name in CHECKS:
        if name not in spec.checks:
            continue
        sub = CHECKS[name][1](spec, spec.plan, tol)
        for e in sub:
            e.name = f"{name}/{e.name}"
            report.add(e)
    return report


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _cmd_check(args):
    spec = load_spec(args.spec)
    if args.tol is not None and args.tol <= 0:
        raise ValidationError("--tol must be positive")
    report = run_check(spec, args.tol)
    for line in report.summary_lines():
        print(line)
    print("PASS" if report.passed else "FAIL")
    if args.report:
        _write(args.report, report.to_json())
    if args.csv:
        _write(args.csv, report.to_csv())
    return 0 if report.passed else 1


def _parse_dims(text):
    try:
        dims = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ValidationError(f"--dims must be comma-separated integers, got {text!r}") from None
    return dims


def _cmd_identities(args):
    report = run_identities(_parse_dims(args.dims), args.trials, args.seed)
    for line in report.summary_lines():
        print(line)
    print("PASS" if report.passed else "FAIL")
    if args.report:
        _write(args.report, report.to_json())
    return 0 if report.passed else 1


def catalog_listing():
    return {"entries": [e.to_dict() for e in CATALOG.values()]}


def _cmd_catalog(args):
    listing = catalog_listing()
    if args.json:
        sys.stdout.write(json.dumps(listing, indent=2) + "\n")
        return 0
    for e in listing["entries"]:
        print(f"{e['name']}  ({e['kind']})")
        print(f"    {e['summary']}")
        print(f"    instantiates: {e['instantiates']}")
        for k, p in e["params"].items():
            print(f"    {k} = {p['default']!r}: {p['doc']}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="premetric", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate residual checks for a field spec")
    p.add_argument("--spec", required=True, help="JSON field spec")
    p.add_argument("--tol", type=float, default=None, help="override the tolerance in the field-spec file")
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--csv", help="write a per-check CSV table here")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("identities", help="run the exact algebraic identity suites")
    p.add_argument("--dims", default=",".join(map(str, SUPPORTED_DIMS)))
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", help="write the JSON report here")
    p.set_defaults(func=_cmd_identities)

    p = sub.add_parser("catalog", help="list the built-in solution families")
    p.add_argument("--json", action="store_true", help="machine-readable listing")
    p.set_defaults(func=_cmd_catalog)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, ParseError, ContractViolation, EvaluationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FamilyValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
