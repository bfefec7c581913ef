import numpy as np
import pytest

from premetric.calculus import (div, exterior_derivative, lie_derivative, spatial_volume,
                                time_derivative)
from premetric.electrodyn.catalog import random_polynomial
from premetric.exterior import (CONTRAVARIANT, COVARIANT, ContractViolation, GradedTensor,
                                basis_indices, interior_multivector, volume_form, wedge)
from premetric.field_expr import Chart, as_expr, differentiate, evaluate_many, mul, parse, sin
from premetric.poincare import VolumeContext

C3, C4 = Chart.default(3), Chart.default(4)


def eps(n, *axes, c=1):
    return GradedTensor.basis(n, axes, COVARIANT, c)


def vec(chart, texts):
    return GradedTensor.vector([parse(t, chart) for t in texts])


def values(t, chart, pts):
    return evaluate_many([as_expr(t[k]) for k in basis_indices(t.n, t.degree)], pts, chart)


def close(a, b, chart, pts, tol=1e-10):
    va, vb = values(a, chart, pts), values(b, chart, pts)
    return np.max(np.abs(va - vb), initial=0.0) <= tol * max(1.0, np.max(np.abs(va), initial=0.0))


def random_expr(rng, chart):
    poly = random_polynomial(rng, chart, degree=2, terms=3)
    return poly + mul(float(rng.integers(1, 3)), sin(random_polynomial(rng, chart, 1, 2)))


def random_form(rng, chart, p):
    n = chart.n
    return GradedTensor(n, p, COVARIANT,
                        {k: random_expr(rng, chart) for k in basis_indices(n, p)})


def random_field(rng, chart):
    return GradedTensor.vector([random_expr(rng, chart) for _ in range(chart.n)])


def test_exterior_derivative_examples():
    assert exterior_derivative(eps(3, 2, c=parse("x", C3)), C3) == eps(3, 1, 2, c=as_expr(1))
    assert exterior_derivative(volume_form(3), C3).is_zero()
    X = vec(C3, ["x", "y", "z"])
    dX = exterior_derivative(interior_multivector(X, volume_form(3)), C3)
    pts = np.random.default_rng(0).uniform(-1, 1, (20, 3))
    np.testing.assert_allclose(values(dX, C3, pts)[0], 3.0)


@pytest.mark.parametrize("texts, expected", [
    (["x", "y", "z"], 3.0), (["2", "-1", "0.5"], 0.0), (["x", "0", "0"], 1.0),
])
def test_div_examples(texts, expected):
    g = div(vec(C3, texts), C3, VolumeContext(3))
    assert evaluate_many([as_expr(g)], [[0.3, -0.2, 0.7]], C3)[0, 0] == expected


def test_spatial_div_ignores_time():
    X = GradedTensor.vector([parse(t) for t in ["x*xi", "y", "0", "xi^2"]])
    assert evaluate_many([as_expr(div(X, C4, spatial=True))], [[0, 0, 0, 2.0]], C4)[0, 0] == 3.0


def test_lie_derivative_examples():
    X = vec(C3, ["x", "y", "z"])
    L = lie_derivative(X, volume_form(3), C3)
    assert evaluate_many([as_expr(L[(1, 2, 3)])], [[0.1, 0.2, 0.3]], C3)[0, 0] == 3.0
    T = GradedTensor.basis(3, (1, 2), CONTRAVARIANT)
    assert lie_derivative(T, eps(3, 1, 2), C3).is_zero()
    with pytest.raises(ContractViolation):
        lie_derivative(T, eps(3, 1), C3)


def test_time_derivative_examples():
    t = eps(4, 1, c=parse("sin(z - xi)"))
    d = time_derivative(t, C4)
    pts = np.random.default_rng(1).uniform(-1, 1, (30, 4))
    np.testing.assert_allclose(values(d, C4, pts)[0], -np.cos(pts[:, 2] - pts[:, 3]))
    assert time_derivative(eps(4, 2, c=parse("x*y")), C4).is_zero()
    with pytest.raises(ContractViolation):
        time_derivative(eps(3, 1), C3)


def test_spatial_derivative_needs_time_axis():
    with pytest.raises(ContractViolation):
        exterior_derivative(eps(3, 1, c=parse("x", C3)), C3, spatial=True)
    assert spatial_volume(C4) == eps(4, 1, 2, 3)


@pytest.mark.parametrize("chart", [C3, C4], ids=["n3", "n4"])
def test_d_squared_vanishes(chart):
    rng = np.random.default_rng(10 + chart.n)
    pts = rng.uniform(-1, 1, (64, chart.n))
    for i in range(100):
        phi = random_form(rng, chart, 1 + i % 2)
        dd = exterior_derivative(exterior_derivative(phi, chart), chart)
        assert np.max(np.abs(values(dd, chart, pts)), initial=0.0) <= 1e-9


def test_lie_leibniz_rule():
    rng = np.random.default_rng(3)
    pts = rng.uniform(-1, 1, (64, 4))
    for _ in range(20):
        X, f = random_field(rng, C4), random_expr(rng, C4)
        phi = random_form(rng, C4, int(rng.integers(1, 4)))
        lhs = lie_derivative(X, phi.map(lambda c: mul(f, c)), C4)
        Xf = sum((mul(as_expr(X[(k,)]), differentiate(f, C4.name(k))) for k in range(1, 5)),
                 as_expr(0))
        rhs = phi.map(lambda c: mul(Xf, c)) + lie_derivative(X, phi, C4).map(lambda c: mul(f, c))
        assert close(lhs, rhs, C4, pts)


def test_lie_is_bilinear():
    rng = np.random.default_rng(4)
    pts = rng.uniform(-1, 1, (64, 4))
    for _ in range(20):
        T1, T2 = (GradedTensor(4, 2, CONTRAVARIANT,
                               {k: random_expr(rng, C4) for k in basis_indices(4, 2)})
                  for _ in range(2))
        P1, P2 = random_form(rng, C4, 3), random_form(rng, C4, 3)
        c = float(rng.uniform(-2, 2))
        lhs = lie_derivative(T1 + c * T2, P1 - P2, C4)
        rhs = (lie_derivative(T1, P1, C4) - lie_derivative(T1, P2, C4)
               + c * (lie_derivative(T2, P1, C4) - lie_derivative(T2, P2, C4)))
        assert close(lhs, rhs, C4, pts)


def test_spatial_d_commutes_with_time_derivative():
    rng = np.random.default_rng(5)
    pts = rng.uniform(-1, 1, (64, 4))
    for _ in range(20):
        phi = random_form(rng, C4, 1).restrict(4)
        phi = GradedTensor(4, 1, COVARIANT, {k: phi[k] for k in [(1,), (2,), (3,)]})
        a = time_derivative(exterior_derivative(phi, C4, spatial=True), C4)
        b = exterior_derivative(time_derivative(phi, C4), C4, spatial=True)
        assert close(a, b, C4, pts)


def test_wedge_with_expression_coefficients():
    a = eps(4, 1, c=parse("x"))
    b = eps(4, 2, c=parse("y"))
    w = wedge(a, b)
    assert evaluate_many([as_expr(w[(1, 2)])], [[2, 3, 0, 0]], C4)[0, 0] == 6.0
