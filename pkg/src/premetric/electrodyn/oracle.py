"""Independent numeric path for the nonlinear space-time equations.

Nothing here touches symbolic derivatives or the sparse tensor algebra: the
field components are evaluated point by point, differentiated by central
differences, assembled into dense antisymmetric arrays, and contracted with
an explicit Levi-Civita symbol.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np

from ..field_expr import compile_exprs


class FamilyValidationError(RuntimeError):
    """A solution family failed its finite-difference validation."""


def _levi_civita():
    eps = np.zeros((4, 4, 4, 4))
    for perm in permutations(range(4)):
        inv = sum(1 for i in range(4) for j in range(i + 1, 4) if perm[i] > perm[j])
        eps[perm] = -1.0 if inv % 2 else 1.0
    return eps


EPS4 = _levi_civita()


def fd_values_and_gradients(exprs, points, chart, h=1e-4):
    """Values (m, N) and central-difference gradients (m, n, N)."""
    prog = compile_exprs(exprs, chart)
    vals = prog.evaluate(points)
    grads = np.empty((len(exprs), chart.n, len(points)))
    for k in range(chart.n):
        fwd, bwd = points.copy(), points.copy()
        fwd[:, k] += h
        bwd[:, k] -= h
        grads[:, k, :] = (prog.evaluate(fwd) - prog.evaluate(bwd)) / (2 * h)
    return vals, grads


def assemble_F_G(E, B, alpha, beta):
    """Dense F_{ab}, G_{ab} from spatial component arrays (leading axis = component).

    F = B3 dx^dy - B2 dx^dz + B1 dy^dz + alpha_i dx^i ^ dxi
    G = E3 dx^dy - E2 dx^dz + E1 dy^dz - beta_i dx^i ^ dxi
    """
    shape = (4, 4) + E.shape[1:]
    F, G = np.zeros(shape), np.zeros(shape)

    def put(M, a, b, v):
        M[a, b] = v
        M[b, a] = -v

    for a, b, k, sign in ((0, 1, 2, 1), (0, 2, 1, -1), (1, 2, 0, 1)):
        put(F, a, b, sign * B[k])
        put(G, a, b, sign * E[k])
    for i in range(3):
        put(F, i, 3, alpha[i])
        put(G, i, 3, -beta[i])
    return F, G


def bivector_of(F):
    """T^{ab} = 1/2 eps^{abcd} F_cd, the bivector with i_T omega = F."""
    return 0.5 * np.einsum("abcd,cd...->ab...", EPS4, F)


def exterior_d(dF):
    """(dF)_{lmn} from the gradient array dF[a, b, l] = d_l F_ab."""
    return (np.einsum("mnl...->lmn...", dF) + np.einsum("nlm...->lmn...", dF)
            + np.einsum("lmn...->lmn...", dF))


def flow(T, P):
    """(i_T P)_n = 1/2 T^{rs} P_{rsn}."""
    return 0.5 * np.einsum("rs...,rsn...->n...", T, P)


def nonlinear_residuals_fd(cfg, points, h=1e-4):
    """Finite-difference values of the three flows and the null scalars.

    Returns a dict of arrays; flow arrays have shape (4, N), scalars (N,).
    """
    exprs = cfg.component_exprs()
    vals, grads = fd_values_and_gradients(exprs, points, cfg.chart, h)
    E, B, al, be = vals[0:3], vals[3:6], vals[6:9], vals[9:12]
    F, G = assemble_F_G(E, B, al, be)
    # gradients: component axis first, then derivative axis
    gE, gB, gal, gbe = grads[0:3], grads[3:6], grads[6:9], grads[9:12]
    dFa, dGa = assemble_F_G(gE, gB, gal, gbe)  # shape (4, 4, 4, N): [a, b, l]
    dF, dG = exterior_d(dFa), exterior_d(dGa)
    Gbar = bivector_of(F)
    Fbar = -bivector_of(G)
    out = {
        "flow_FF": flow(Fbar, dF),
        "flow_GG": flow(Gbar, dG),
        "flow_FG": flow(Fbar, dG) + flow(Gbar, dF),
        "F_wedge_F": 0.25 * np.einsum("abcd,ab...,cd...->...", EPS4, F, F),
        "G_wedge_G": 0.25 * np.einsum("abcd,ab...,cd...->...", EPS4, G, G),
        "F_wedge_G": 0.25 * np.einsum("abcd,ab...,cd...->...", EPS4, F, G),
        "alpha_B": np.einsum("i...,i...->...", al, B),
        "beta_E": np.einsum("i...,i...->...", be, E),
        "alphaE_minus_betaB": np.einsum("i...,i...->...", al, E) - np.einsum("i...,i...->...", be, B),
    }
    out["field_max"] = float(np.max(np.abs(vals))) if vals.size else 0.0
    out["gradient_max"] = float(np.max(np.abs(grads))) if grads.size else 0.0
    return out


def validate_nonlinear_solution(cfg, points, h=1e-4, fd_tol=1e-5, exact_tol=1e-12):
    """Raise :class:`FamilyValidationError` unless ``cfg`` solves the nonlinear system.

    Flow residuals carry the O(h^2) difference error and are held to
    ``fd_tol`` relative to field size times gradient size; the null scalars and
    wedges are algebraic and held to ``exact_tol``.  Returns the worst values.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    r = nonlinear_residuals_fd(cfg, points, h)
    scale = max(1.0, r["field_max"]) * max(1.0, r["gradient_max"])
    worst = {}
    failures = []
    for name in ("flow_FF", "flow_GG", "flow_FG"):
        worst[name] = float(np.max(np.abs(r[name])))
        if worst[name] > fd_tol * scale:
            failures.append(f"{name}={worst[name]:.3e}")
    for name in ("F_wedge_F", "G_wedge_G", "F_wedge_G", "alpha_B", "beta_E",
                 "alphaE_minus_betaB"):
        worst[name] = float(np.max(np.abs(r[name])))
        if worst[name] > exact_tol * max(1.0, r["field_max"] ** 2):
            failures.append(f"{name}={worst[name]:.3e}")
    if failures:
        raise FamilyValidationError(
            f"finite-difference validation failed on {len(points)} points: " + ", ".join(failures)
        )
    return worst
