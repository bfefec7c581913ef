"""Vector-valued forms and multivectors, and interior/Lie products twisted by a bilinear map.

Components are labelled by basis vectors of an external space V.  The
shipped bilinear map is the symmetrized tensor product ``vee``; any callable
``phi(label_a, label_b) -> {output_label: weight}`` can stand in for it.
"""

from __future__ import annotations

import warnings

import numpy as np

from .calculus import exterior_derivative
from .exterior import (CONTRAVARIANT, COVARIANT, ContractViolation, GradedTensor,
                       basis_indices, interior_multivector, volume_form)
from .field_expr import evaluate_many


def _label_order(label):
    return (type(label).__name__, label)


def pair_key(a, b):
    """Canonical key of the unordered pair {a, b}."""
    return (a, b) if _label_order(a) <= _label_order(b) else (b, a)


def vee(a, b):
    """Symmetrized tensor product on basis labels: e_a v e_b."""
    return {pair_key(a, b): 1}


class VValuedTensor:
    """Sum of ``tensor (x) e_label`` over distinct labels; degree-homogeneous."""

    __slots__ = ("_components",)

    def __init__(self, components):
        if isinstance(components, dict):
            components = components.items()
        comps = tuple((label, t) for label, t in components)
        if not comps:
            raise ContractViolation("a V-valued tensor needs at least one component")
        labels = [label for label, _ in comps]
        if len(set(labels)) != len(labels):
            raise ContractViolation(f"duplicate labels in {labels}")
        first = comps[0][1]
        for label, t in comps:
            if (t.n, t.degree, t.variance) != (first.n, first.degree, first.variance):
                raise ContractViolation(
                    f"component {label!r} is a {t.describe()}, expected {first.describe()}"
                )
        self._components = comps

    @property
    def components(self):
        return self._components

    @property
    def labels(self):
        return [label for label, _ in self._components]

    @property
    def n(self):
        return self._components[0][1].n

    @property
    def degree(self):
        return self._components[0][1].degree

    @property
    def variance(self):
        return self._components[0][1].variance

    def __getitem__(self, label):
        for lab, t in self._components:
            if lab == label:
                return t
        raise KeyError(label)

    def __iter__(self):
        return iter(self._components)

    def map(self, fn):
        return VValuedTensor([(label, fn(t)) for label, t in self._components])

    def __repr__(self):
        inner = " + ".join(f"{t!r} (x) {label}" for label, t in self._components)
        return f"VValuedTensor({inner})"


class SymValuedTensor:
    """Tensor-valued map on output labels (unordered pairs for ``vee``)."""

    __slots__ = ("n", "degree", "variance", "_components")

    def __init__(self, n, degree, variance, components=None):
        self.n = n
        self.degree = degree
        self.variance = variance
        comps = {}
        for key, t in (components or {}).items():
            if (t.n, t.degree, t.variance) != (n, degree, variance):
                raise ContractViolation(f"component {key!r} is a {t.describe()}")
            if not t.is_zero():
                comps[key] = t
        self._components = comps

    @property
    def components(self):
        return dict(self._components)

    def keys(self):
        return list(self._components)

    def __getitem__(self, key):
        if isinstance(key, tuple) and len(key) == 2:
            key = pair_key(*key)
        t = self._components.get(key)
        return t if t is not None else GradedTensor.zero(self.n, self.degree, self.variance)

    def is_zero(self):
        return not self._components

    def _combine(self, other, sign):
        if (self.n, self.degree, self.variance) != (other.n, other.degree, other.variance):
            raise ContractViolation("cannot combine differently shaped V v V-valued tensors")
        out = dict(self._components)
        for key, t in other._components.items():
            t = t if sign > 0 else -t
            out[key] = out[key] + t if key in out else t
        return SymValuedTensor(self.n, self.degree, self.variance, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return SymValuedTensor(self.n, self.degree, self.variance,
                               {k: -t for k, t in self._components.items()})

    def map(self, fn, degree=None, variance=None):
        comps = {k: fn(t) for k, t in self._components.items()}
        if degree is None:
            degree = next(iter(comps.values())).degree if comps else self.degree
        return SymValuedTensor(self.n, degree, variance or self.variance, comps)

    def __repr__(self):
        inner = ", ".join(f"{k}: {t!r}" for k, t in self._components.items())
        return f"SymValuedTensor({{{inner}}})"


def vee_interior(T, Phi, phi=vee):
    """sum_{i,j} i_{t_i} alpha_j (x) phi(e_i, k_j)."""
    if T.variance != CONTRAVARIANT or Phi.variance != COVARIANT:
        raise ContractViolation("expected a V-valued multivector and a V-valued form")
    if T.n != Phi.n:
        raise ContractViolation(f"dimension mismatch {T.n} vs {Phi.n}")
    if T.degree > Phi.degree:
        raise ContractViolation(f"degree {T.degree} exceeds form degree {Phi.degree}")
    acc = {}
    for la, t in T:
        for lb, a in Phi:
            c = interior_multivector(t, a)
            if c.is_zero():
                continue
            for key, w in phi(la, lb).items():
                term = c if w == 1 else w * c
                acc[key] = acc[key] + term if key in acc else term
    return SymValuedTensor(T.n, Phi.degree - T.degree, COVARIANT, acc)


def vector_d(Phi, chart, spatial=False):
    """Componentwise exterior derivative of a V-valued form."""
    return Phi.map(lambda t: exterior_derivative(t, chart, spatial=spatial))


def vee_lie(T, Phi, chart, phi=vee, spatial=False):
    """d(i^phi_T Phi) - (-1)^deg(T) i^phi_T(d Phi)."""
    inner = vee_interior(T, Phi, phi)
    first = inner.map(lambda t: exterior_derivative(t, chart, spatial=spatial),
                      degree=inner.degree + 1)
    if Phi.degree == Phi.n:
        return first
    second = vee_interior(T, vector_d(Phi, chart, spatial), phi)
    return first - second if T.degree % 2 == 0 else first + second


def is_local_symmetry(T, Phi, chart, points, phi=vee, tol=1e-9):
    """True when the twisted Lie derivative vanishes at every sample point."""
    lie = vee_lie(T, Phi, chart, phi)
    exprs = [c for t in lie.components.values() for _, c in t.items()]
    if not exprs:
        return True
    vals = evaluate_many(exprs, points, chart)
    return bool(np.max(np.abs(vals)) <= tol)


def rank_deficient_points(fields, chart, points, tol=1e-10):
    """Indices of sample points where the coefficient vectors of ``fields`` lose rank."""
    keys = basis_indices(fields[0].n, fields[0].degree)
    exprs = [f[k] for f in fields for k in keys]
    vals = evaluate_many(exprs, points, chart).reshape(len(fields), len(keys), -1)
    bad = []
    for p in range(vals.shape[2]):
        m = vals[:, :, p]
        if np.linalg.matrix_rank(m, tol=tol) < len(fields):
            bad.append(p)
    return bad


def appendix_fields(fbars, gbars, vol=None):
    """(Omega, Omega_bar) on R^{4n} from n pairs of 2n-vector fields.

    F^i = i_{Gbar_j} omega and G^j = -i_{Fbar_i} omega with j = n + i; labels are
    1..n for the F family and n+1..2n for the G family.
    """
    n = len(fbars)
    if n < 1 or len(gbars) != n:
        raise ContractViolation("need two equally long, non-empty field lists")
    dim = 4 * n
    omega = vol.omega if vol is not None else volume_form(dim)
    if omega.n != dim:
        raise ContractViolation(f"volume of R^{omega.n} given for {n} subsystems")
    for f in list(fbars) + list(gbars):
        if f.n != dim or f.degree != 2 * n or f.variance != CONTRAVARIANT:
            raise ContractViolation(
                f"expected {2 * n}-vector fields on R^{dim}, got {f.describe()}"
            )
    forms, bars = [], []
    for i in range(n):
        forms.append((i + 1, interior_multivector(gbars[i], omega)))
        bars.append((i + 1, fbars[i]))
    for i in range(n):
        forms.append((n + i + 1, -interior_multivector(fbars[i], omega)))
        bars.append((n + i + 1, gbars[i]))
    return VValuedTensor(forms), VValuedTensor(bars)


def appendix_flow(fbars, gbars, chart, vol=None, phi=vee, points=None):
    """Self-mutual flow i^phi_{Omega_bar} d Omega of the many-subsystem extension.

    With ``points`` given, each field list is checked for pointwise linear
    independence and a warning is issued where it fails.
    """
    if points is not None:
        for name, fields in (("Fbar", fbars), ("Gbar", gbars)):
            bad = rank_deficient_points(list(fields), chart, points)
            if bad:
                warnings.warn(
                    f"{name} fields are linearly dependent at {len(bad)} sample point(s)",
                    stacklevel=2,
                )
    Omega, Omega_bar = appendix_fields(fbars, gbars, vol)
    return vee_interior(Omega_bar, vector_d(Omega, chart), phi)
