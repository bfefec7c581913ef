"""Graded exterior algebra over R^n with sparse basis coefficients.

A basis p-form (or p-vector) is named by a strictly increasing tuple of
1-based axes.  Coefficients can be anything supporting ``+``, ``*`` and unary
minus: ints, ``Fraction`` for exact identity checks, floats, or
:class:`~premetric.field_expr.Expr` for fields.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from types import MappingProxyType

from . import kernels
from .field_expr import is_zero

COVARIANT = "covariant"
CONTRAVARIANT = "contravariant"
_VARIANCES = (COVARIANT, CONTRAVARIANT)


class ContractViolation(ValueError):
    """An operation was called outside its domain (degree, dimension, variance)."""


@lru_cache(maxsize=None)
def _complement(n, axes):
    return tuple(k for k in range(1, n + 1) if k not in axes)


@lru_cache(maxsize=None)
def basis_indices(n, p):
    """All ascending p-subsets of 1..n in lexicographic order."""
    return tuple(combinations(range(1, n + 1), p))


@dataclass(frozen=True)
class MultiIndex:
    axes: tuple
    n: int

    def __post_init__(self):
        axes = tuple(int(a) for a in self.axes)
        object.__setattr__(self, "axes", axes)
        if any(b <= a for a, b in zip(axes, axes[1:])):
            raise ContractViolation(f"axes {axes} are not strictly increasing")
        if axes and (axes[0] < 1 or axes[-1] > self.n):
            raise ContractViolation(f"axes {axes} outside 1..{self.n}")

    @property
    def degree(self):
        return len(self.axes)

    def complement(self):
        return MultiIndex(_complement(self.n, self.axes), self.n)

    @property
    def sigma(self):
        return sum(v - i for i, v in enumerate(self.axes, 1))

    @property
    def sign(self):
        return -1 if self.sigma & 1 else 1

    @classmethod
    def all(cls, n, p):
        return [cls(axes, n) for axes in basis_indices(n, p)]


def _check_key(key, n, degree):
    if isinstance(key, MultiIndex):
        if key.n != n:
            raise ContractViolation(f"index for dimension {key.n} used in dimension {n}")
        key = key.axes
    key = tuple(key)
    if len(key) != degree:
        raise ContractViolation(f"key {key} does not have degree {degree}")
    MultiIndex(key, n)
    return key


class GradedTensor:
    """Homogeneous form (covariant) or multivector (contravariant) of one degree."""

    __slots__ = ("n", "degree", "variance", "_coeffs")

    def __init__(self, n, degree, variance, coeffs=None, *, _trusted=False):
        if variance not in _VARIANCES:
            raise ContractViolation(f"unknown variance {variance!r}")
        if not 0 <= degree <= n:
            raise ContractViolation(f"degree {degree} outside 0..{n}")
        self.n = n
        self.degree = degree
        self.variance = variance
        items = coeffs.items() if coeffs else ()
        if _trusted:
            self._coeffs = {k: v for k, v in items if not is_zero(v)}
        else:
            clean = {}
            for k, v in items:
                k = _check_key(k, n, degree)
                clean[k] = clean.get(k, 0) + v
            self._coeffs = {k: v for k, v in clean.items() if not is_zero(v)}

    # construction ---------------------------------------------------------

    @classmethod
    def zero(cls, n, degree, variance):
        return cls(n, degree, variance, _trusted=True)

    @classmethod
    def basis(cls, n, axes, variance, coeff=1):
        axes = tuple(axes)
        return cls(n, len(axes), variance, {axes: coeff})

    @classmethod
    def scalar(cls, n, value, variance=COVARIANT):
        return cls(n, 0, variance, {(): value})

    @classmethod
    def vector(cls, components, variance=CONTRAVARIANT):
        """Degree-1 tensor from a dense component list (axis 1 first)."""
        n = len(components)
        return cls(n, 1, variance, {(k,): c for k, c in enumerate(components, 1)},
                   _trusted=True)

    def _new(self, coeffs, degree=None, variance=None, n=None):
        return GradedTensor(
            self.n if n is None else n,
            self.degree if degree is None else degree,
            self.variance if variance is None else variance,
            coeffs,
            _trusted=True,
        )

    # access ---------------------------------------------------------------

    @property
    def coeffs(self):
        return MappingProxyType(self._coeffs)

    def __getitem__(self, axes):
        if isinstance(axes, MultiIndex):
            axes = axes.axes
        elif isinstance(axes, int):
            axes = (axes,)
        return self._coeffs.get(tuple(axes), 0)

    def items(self):
        return self._coeffs.items()

    def __iter__(self):
        return iter(self._coeffs)

    def __len__(self):
        return len(self._coeffs)

    def is_zero(self):
        return not self._coeffs

    def scalar_value(self):
        if self.degree != 0:
            raise ContractViolation(f"degree-{self.degree} tensor is not a scalar")
        return self._coeffs.get((), 0)

    def components(self):
        """Dense coefficient list over ``basis_indices(n, degree)``."""
        return [self[k] for k in basis_indices(self.n, self.degree)]

    # arithmetic -----------------------------------------------------------

    def _same_space(self, other):
        if not isinstance(other, GradedTensor):
            return False
        if (self.n, self.degree, self.variance) != (other.n, other.degree, other.variance):
            raise ContractViolation(
                f"cannot combine {self.describe()} with {other.describe()}"
            )
        return True

    def __add__(self, other):
        if not self._same_space(other):
            return NotImplemented
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            out[k] = out[k] + v if k in out else v
        return self._new(out)

    def __sub__(self, other):
        if not self._same_space(other):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return self._new({k: -v for k, v in self._coeffs.items()})

    def __mul__(self, c):
        if isinstance(c, GradedTensor):
            return NotImplemented
        return self._new({k: v * c for k, v in self._coeffs.items()})

    def __rmul__(self, c):
        if isinstance(c, GradedTensor):
            return NotImplemented
        return self._new({k: c * v for k, v in self._coeffs.items()})

    def map(self, fn):
        return self._new({k: fn(v) for k, v in self._coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, GradedTensor):
            return NotImplemented
        return (
            (self.n, self.degree, self.variance) == (other.n, other.degree, other.variance)
            and self._coeffs == other._coeffs
        )

    __hash__ = None

    def describe(self):
        kind = "form" if self.variance == COVARIANT else "vector"
        return f"{self.degree}-{kind} on R^{self.n}"

    def __repr__(self):
        sym = "eps" if self.variance == COVARIANT else "e"
        terms = ", ".join(
            f"{sym}{''.join(map(str, k)) or '0'}: {v}" for k, v in sorted(self._coeffs.items())
        )
        return f"GradedTensor({self.describe()}; {{{terms}}})"

    # dimension changes ----------------------------------------------------

    def embed(self, n):
        """Same coefficients viewed in R^n, n >= current dimension."""
        if n < self.n:
            raise ContractViolation("embedding must not lower the dimension")
        return self._new(dict(self._coeffs), n=n)

    def restrict(self, n):
        """Drop to R^n; every stored index must already lie in 1..n."""
        for k in self._coeffs:
            if k and k[-1] > n:
                raise ContractViolation(f"component {k} does not live in R^{n}")
        if self.degree > n:
            raise ContractViolation(f"degree {self.degree} does not fit R^{n}")
        return self._new(dict(self._coeffs), n=n)


def _accumulate(acc, key, sign, value):
    term = value if sign > 0 else -value
    acc[key] = acc[key] + term if key in acc else term


def wedge(a, b):
    """Exterior product of two tensors of equal variance."""
    if a.n != b.n or a.variance != b.variance:
        raise ContractViolation(f"cannot wedge {a.describe()} with {b.describe()}")
    if a.degree + b.degree > a.n:
        raise ContractViolation(f"degree {a.degree + b.degree} exceeds dimension {a.n}")
    merge = kernels.wedge_basis
    acc = {}
    for ka, va in a._coeffs.items():
        for kb, vb in b._coeffs.items():
            sign, key = merge(ka, kb)
            if sign:
                _accumulate(acc, key, sign, va * vb)
    return GradedTensor(a.n, a.degree + b.degree, a.variance, acc, _trusted=True)


def _contract(inner, outer):
    # inner factors act in their stored order: i(h_q) o ... o i(h_1)
    if inner.n != outer.n:
        raise ContractViolation(f"dimension mismatch {inner.n} vs {outer.n}")
    if inner.variance == outer.variance:
        raise ContractViolation("contraction needs opposite variances")
    if inner.degree > outer.degree:
        raise ContractViolation(
            f"cannot contract a degree-{inner.degree} argument into degree {outer.degree}"
        )
    contract = kernels.contract_basis
    acc = {}
    for ki, vi in inner._coeffs.items():
        for ko, vo in outer._coeffs.items():
            sign, rest = contract(ki, ko)
            if sign:
                _accumulate(acc, rest, sign, vi * vo)
    return GradedTensor(outer.n, outer.degree - inner.degree, outer.variance, acc,
                        _trusted=True)


def interior_vector(h, u):
    """i(h)u for a vector h and a covariant p-form u; a 0-form gives zero."""
    if h.variance != CONTRAVARIANT or h.degree != 1:
        raise ContractViolation(f"expected a vector, got {h.describe()}")
    if u.variance != COVARIANT:
        raise ContractViolation(f"expected a form, got {u.describe()}")
    if u.degree == 0:
        return GradedTensor.zero(u.n, 0, COVARIANT)
    return _contract(h, u)


def interior_multivector(T, u):
    """i(h_1 ^ ... ^ h_q)u = i(h_q) o ... o i(h_1) u, extended linearly."""
    if T.variance != CONTRAVARIANT or u.variance != COVARIANT:
        raise ContractViolation(
            f"expected (multivector, form), got ({T.describe()}, {u.describe()})"
        )
    return _contract(T, u)


def interior_form(w, H):
    """Contraction of a covariant argument into a multivector (opposite direction)."""
    if w.variance != COVARIANT or H.variance != CONTRAVARIANT:
        raise ContractViolation(
            f"expected (form, multivector), got ({w.describe()}, {H.describe()})"
        )
    if w.degree == 1 and H.degree == 0:
        return GradedTensor.zero(H.n, 0, CONTRAVARIANT)
    return _contract(w, H)


def interior(a, b):
    """Dispatch on variance: multivector into form, or form into multivector."""
    if a.variance == CONTRAVARIANT:
        return interior_multivector(a, b)
    return interior_form(a, b)


def pairing(phi, T):
    """<phi, T> for a p-form and a p-vector; Kronecker on matching basis elements."""
    if phi.degree != T.degree:
        raise ContractViolation(f"degree mismatch: {phi.degree} vs {T.degree}")
    return interior_multivector(T, phi).scalar_value()


def volume_form(n):
    """Covariant top-degree element with coefficient 1 on (1..n)."""
    return GradedTensor(n, n, COVARIANT, {tuple(range(1, n + 1)): 1}, _trusted=True)


def dual_volume(n):
    """Contravariant top-degree element dual to :func:`volume_form`."""
    return GradedTensor(n, n, CONTRAVARIANT, {tuple(range(1, n + 1)): 1}, _trusted=True)
