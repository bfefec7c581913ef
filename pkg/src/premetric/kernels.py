"""Backend selection for the hot kernels.

The compiled extension is used when it imported cleanly; otherwise the
pure-Python versions in :mod:`premetric._purepy` take over.  ``use_backend``
switches at runtime (benchmarks and the cross-backend tests rely on it).
"""

from . import _purepy

try:
    from . import _speedups
except ImportError:  # extension not built
    _speedups = None

_BACKENDS = {"python": _purepy}
if _speedups is not None:
    _BACKENDS["compiled"] = _speedups

wedge_basis = None
contract_basis = None
eval_program = None
backend = None


def available_backends():
    return sorted(_BACKENDS)


def use_backend(name):
    """Route the module-level kernel names to backend ``name``."""
    global wedge_basis, contract_basis, eval_program, backend
    try:
        mod = _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown backend {name!r}; available: {available_backends()}"
        ) from None
    wedge_basis = mod.wedge_basis
    contract_basis = mod.contract_basis
    eval_program = mod.eval_program
    backend = name


use_backend("compiled" if _speedups is not None else "python")
