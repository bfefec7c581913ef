"""Exact algebraic identity suites on seeded random rational tensors."""

from __future__ import annotations

import random
from fractions import Fraction

from .exterior import (CONTRAVARIANT, COVARIANT, GradedTensor, basis_indices,
                       interior_form, interior_multivector, interior_vector, pairing,
                       volume_form, dual_volume, wedge)
from .poincare import dual_inverse_check, dual_of_form, dual_of_multivector
from .report import ResidualEntry, ResidualReport, ValidationError
from .vvalued import VValuedTensor, vee_interior

SUPPORTED_DIMS = (2, 3, 4, 5, 6)


def _rational(rng):
    num = rng.randint(-9, 9)
    while num == 0:
        num = rng.randint(-9, 9)
    return Fraction(num, rng.randint(1, 7))


def random_tensor(rng, n, degree, variance, max_terms=3):
    keys = basis_indices(n, degree)
    picks = rng.sample(keys, min(len(keys), rng.randint(1, max_terms)))
    return GradedTensor(n, degree, variance, {k: _rational(rng) for k in picks})


def random_vector(rng, n):
    return random_tensor(rng, n, 1, CONTRAVARIANT, max_terms=n)


def _antiderivation(rng, n):
    p = rng.randint(0, n - 1)
    q = rng.randint(1, n - p)
    a = random_tensor(rng, n, p, COVARIANT)
    b = random_tensor(rng, n, q, COVARIANT)
    h = random_vector(rng, n)
    lhs = interior_vector(h, wedge(a, b))
    rhs = wedge(interior_vector(h, a), b) if p else GradedTensor.zero(n, p + q - 1, COVARIANT)
    tail = wedge(a, interior_vector(h, b))
    rhs = rhs + tail if p % 2 == 0 else rhs - tail
    return lhs == rhs


def _anticommutation(rng, n):
    u = random_tensor(rng, n, rng.randint(2, n), COVARIANT)
    x, y = random_vector(rng, n), random_vector(rng, n)
    return interior_vector(x, interior_vector(y, u)) == -interior_vector(y, interior_vector(x, u))


def _self_annihilation(rng, n):
    u = random_tensor(rng, n, rng.randint(2, n), COVARIANT)
    x = random_vector(rng, n)
    return interior_vector(x, interior_vector(x, u)).is_zero()


def _graded_commutativity(rng, n):
    p = rng.randint(0, n)
    q = rng.randint(0, n - p)
    a = random_tensor(rng, n, p, COVARIANT)
    b = random_tensor(rng, n, q, COVARIANT)
    sign = -1 if (p * q) % 2 else 1
    return wedge(a, b) == sign * wedge(b, a)


def _pairing_kronecker(rng, n):
    p = rng.randint(0, n)
    keys = basis_indices(n, p)
    i, j = rng.choice(keys), rng.choice(keys)
    value = pairing(GradedTensor.basis(n, i, COVARIANT), GradedTensor.basis(n, j, CONTRAVARIANT))
    return value == (1 if i == j else 0)


def _dual_is_contraction(rng, n):
    p = rng.randint(0, n)
    T = random_tensor(rng, n, p, CONTRAVARIANT)
    psi = random_tensor(rng, n, p, COVARIANT)
    return (dual_of_multivector(T) == interior_multivector(T, volume_form(n))
            and dual_of_form(psi) == interior_form(psi, dual_volume(n)))


def _vee_relabel(rng, n):
    p = rng.randint(1, n)
    q = rng.randint(0, p)
    T = VValuedTensor([(1, random_tensor(rng, n, q, CONTRAVARIANT)),
                       (2, random_tensor(rng, n, q, CONTRAVARIANT))])
    Phi = VValuedTensor([(1, random_tensor(rng, n, p, COVARIANT)),
                         (2, random_tensor(rng, n, p, COVARIANT))])
    swap = {1: 2, 2: 1}
    T2 = VValuedTensor([(swap[label], t) for label, t in T])
    Phi2 = VValuedTensor([(swap[label], t) for label, t in Phi])
    a, b = vee_interior(T, Phi), vee_interior(T2, Phi2)
    return a[(1, 2)] == b[(1, 2)] and a[(1, 1)] == b[(2, 2)] and a[(2, 2)] == b[(1, 1)]


def _vee_bilinear(rng, n):
    p = rng.randint(1, n)
    q = rng.randint(0, p)
    c = _rational(rng)
    T1 = VValuedTensor([(1, random_tensor(rng, n, q, CONTRAVARIANT)),
                        (2, random_tensor(rng, n, q, CONTRAVARIANT))])
    T2 = VValuedTensor([(1, random_tensor(rng, n, q, CONTRAVARIANT)),
                        (2, random_tensor(rng, n, q, CONTRAVARIANT))])
    Phi = VValuedTensor([(1, random_tensor(rng, n, p, COVARIANT)),
                         (2, random_tensor(rng, n, p, COVARIANT))])
    mix = VValuedTensor([(label, t1 + c * T2[label]) for label, t1 in T1])
    lhs = vee_interior(mix, Phi)
    rhs = vee_interior(T1, Phi) + vee_interior(T2, Phi).map(lambda t: c * t)
    return all(lhs[k] == rhs[k] for k in ((1, 1), (1, 2), (2, 2)))


SUITES = {
    "antiderivation": _antiderivation,
    "anticommutation": _anticommutation,
    "self_annihilation": _self_annihilation,
    "graded_commutativity": _graded_commutativity,
    "pairing_kronecker": _pairing_kronecker,
    "dual_is_contraction": _dual_is_contraction,
    "vee_relabel_symmetry": _vee_relabel,
    "vee_bilinearity": _vee_bilinear,
}


def _entry(name, failures, trials):
    return ResidualEntry(name, float(failures), float(failures) / max(trials, 1) ** 0.5,
                         trials, 0.0, 0.0, failures == 0)


def run_identities(dims=SUPPORTED_DIMS, trials=1000, seed=0, suites=None):
    """Run every suite ``trials`` times per dimension; max_abs counts failed instances."""
    dims = list(dims)
    if trials < 1:
        raise ValidationError("trials must be at least 1")
    if not dims or any(d not in SUPPORTED_DIMS for d in dims):
        raise ValidationError(f"dimensions must be drawn from {list(SUPPORTED_DIMS)}, got {dims}")
    names = list(suites or SUITES)
    report = ResidualReport("identities")
    for n in dims:
        bad = sum(0 if dual_inverse_check(p, n) else 1 for p in range(n + 1))
        report.add(_entry(f"duality_involution:n={n}", bad, n + 1))
        for name in names:
            rng = random.Random(f"{seed}:{n}:{name}")
            fn = SUITES[name]
            failures = sum(0 if fn(rng, n) else 1 for _ in range(trials))
            report.add(_entry(f"{name}:n={n}", failures, trials))
    return report
