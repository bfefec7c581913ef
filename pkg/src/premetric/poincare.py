"""Volume-induced dualities between p-vectors and (n-p)-forms, and the divergence."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .calculus import exterior_derivative
from .exterior import (CONTRAVARIANT, COVARIANT, ContractViolation, GradedTensor,
                       MultiIndex, basis_indices, dual_volume, pairing, volume_form)


@dataclass(frozen=True)
class VolumeContext:
    """The volume form of R^n together with its dual top multivector."""

    n: int

    @cached_property
    def omega(self):
        return volume_form(self.n)

    @cached_property
    def omega_bar(self):
        return dual_volume(self.n)

    def check(self):
        return pairing(self.omega, self.omega_bar) == 1


def _dual(t, variance):
    n = t.n
    out = {}
    for axes, c in t.items():
        mi = MultiIndex(axes, n)
        out[mi.complement().axes] = c if mi.sign > 0 else -c
    return GradedTensor(n, n - t.degree, variance, out, _trusted=True)


def dual_of_multivector(T, vol=None):
    """D^p: p-vector -> (n-p)-form, e_I -> (-1)^sigma(I) eps^(complement of I)."""
    if T.variance != CONTRAVARIANT:
        raise ContractViolation(f"expected a multivector, got {T.describe()}")
    _check_vol(T, vol)
    return _dual(T, COVARIANT)


def dual_of_form(psi, vol=None):
    """D_p: p-form -> (n-p)-vector, mirror of :func:`dual_of_multivector`."""
    if psi.variance != COVARIANT:
        raise ContractViolation(f"expected a form, got {psi.describe()}")
    _check_vol(psi, vol)
    return _dual(psi, CONTRAVARIANT)


def _check_vol(t, vol):
    if vol is not None and vol.n != t.n:
        raise ContractViolation(f"volume of R^{vol.n} used on {t.describe()}")


def _inverse_sign(k, n):
    return -1 if (k * (n - k)) & 1 else 1


def multivector_of_form(phi, vol=None):
    """Inverse of D^p: the multivector T with i_T omega = phi."""
    return _inverse_sign(phi.degree, phi.n) * dual_of_form(phi, vol)


def form_of_multivector(T, vol=None):
    """Inverse of D_p: the form psi with i_psi omega_bar = T."""
    return _inverse_sign(T.degree, T.n) * dual_of_multivector(T, vol)


def dual_inverse_sign(p, n):
    return -1 if (p * (n - p)) & 1 else 1


def dual_inverse_check(p, n):
    """True iff D_{n-p} o D^p and D^{n-p} o D_p equal (-1)^{p(n-p)} id on every basis element."""
    if not 0 <= p <= n:
        raise ContractViolation(f"degree {p} outside 0..{n}")
    sign = dual_inverse_sign(p, n)
    for axes in basis_indices(n, p):
        e = GradedTensor.basis(n, axes, CONTRAVARIANT)
        if dual_of_form(dual_of_multivector(e)) != sign * e:
            return False
        eps = GradedTensor.basis(n, axes, COVARIANT)
        if dual_of_multivector(dual_of_form(eps)) != sign * eps:
            return False
    return True


def delta(T, chart, vol=None):
    """Divergence of a p-vector field: (-1)^p D_{n-p+1}(d(D^p T))."""
    if T.variance != CONTRAVARIANT:
        raise ContractViolation(f"expected a multivector field, got {T.describe()}")
    if T.degree < 1:
        raise ContractViolation("divergence needs degree >= 1")
    out = dual_of_form(exterior_derivative(dual_of_multivector(T, vol), chart), vol)
    return out if T.degree % 2 == 0 else -out
