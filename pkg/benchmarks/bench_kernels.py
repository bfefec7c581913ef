"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--points N] [--repeat R]

Three workloads: sparse wedge/contraction sign computation, evaluation of
the nonlinear flow residuals of a random polynomial configuration, and the
bump-photon residuals (heavy on the bump-derivative kernel).
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from premetric import kernels
from premetric.electrodyn import build_spacetime, catalog, random_config
from premetric.electrodyn.residuals import divergence_flows, nonlinear_flows
from premetric.exterior import basis_indices
from premetric.field_expr import compile_exprs
from premetric.report import SamplePlan


def _sign_workload():
    keys = [k for p in range(7) for k in basis_indices(6, p)]
    pairs = [(a, b) for a in keys[::3] for b in keys[::2]]

    def run():
        w, c = kernels.wedge_basis, kernels.contract_basis
        for a, b in pairs:
            w(a, b)
            if len(a) <= len(b):
                c(a, b)
    return run, len(pairs)


def _flow_program(cfg):
    pair = build_spacetime(cfg)
    exprs = []
    for t in nonlinear_flows(pair) + divergence_flows(pair):
        exprs.extend(t[k] for k in basis_indices(4, 1))
    return compile_exprs(exprs, cfg.chart)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    pts = SamplePlan(count=args.points, seed=7).points(4)
    poly = _flow_program(random_config(11))
    bump = _flow_program(catalog("bump_photon"))
    sign_run, n_pairs = _sign_workload()
    print(f"flow program: {len(poly)} instructions; bump program: {len(bump)}; "
          f"{args.points} points; {n_pairs} basis pairs")

    results = {}
    for name in kernels.available_backends():
        kernels.use_backend(name)
        row = {
            "signs": min(timeit.repeat(sign_run, number=1, repeat=args.repeat)),
            "poly_eval": min(timeit.repeat(lambda: poly.evaluate(pts), number=1, repeat=args.repeat)),
            "bump_eval": min(timeit.repeat(lambda: bump.evaluate(pts), number=1, repeat=args.repeat)),
        }
        results[name] = row
    kernels.use_backend("compiled" if "compiled" in results else "python")

    if len(results) == 2:
        kernels.use_backend("python")
        ref = poly.evaluate(pts[:512])
        kernels.use_backend("compiled")
        diff = np.max(np.abs(poly.evaluate(pts[:512]) - ref))
        print(f"max backend difference on flow program: {diff:.2e}")

    print(f"{'workload':<12}" + "".join(f"{n:>12}" for n in results) + "     speedup")
    for key in ("signs", "poly_eval", "bump_eval"):
        cells = "".join(f"{results[n][key] * 1e3:>10.2f}ms" for n in results)
        speed = ""
        if len(results) == 2:
            speed = f"{results['python'][key] / results['compiled'][key]:>10.1f}x"
        print(f"{key:<12}{cells}{speed}")


if __name__ == "__main__":
    main()
