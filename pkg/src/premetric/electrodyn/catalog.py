"""Named solution families and counterexamples.

Running-wave null fields
------------------------
With s = z - eps*xi and arbitrary profiles u(x, y, s), p(x, y, s)::

    E = (u, p, 0),  B = eps * (-p, u, 0),  alpha = E,  beta = B

F and G both reduce to -(u dx + p dy)^ds and -(p dx - u dy)^ds, and both
bivectors contain the null direction d_z + eps d_xi, which annihilates ds.
Every nonlinear flow therefore vanishes, the null conditions hold pointwise,
and the energy flux is (u^2 + p^2)(eps d_z + d_xi).  Because this family is a
reconstruction, each instance is checked by the finite-difference oracle on
10^4 points before it is handed out.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..exterior import CONTRAVARIANT, GradedTensor
from ..field_expr import Chart, Var, add, as_expr, mul, parse, sub, substitute, sum_exprs
from ..report import SamplePlan, ValidationError
from .autoparallel import NULL, TIMELIKE
from .fields import EMConfig, default_chart
from .oracle import validate_nonlinear_solution

PROFILE_CHART = Chart(("x", "y", "s"))
GATE_POINTS = 10_000
GATE_SEED = 20240601
BUMP_BOX = ((-0.95, 0.95),) * 4


@dataclass(frozen=True)
class AutoparallelField:
    """A vector field on the 4-chart together with the residual mode it solves."""

    u: GradedTensor
    mode: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str
    summary: str
    source: str
    params: dict
    box: tuple = None
    builder: object = field(default=None, repr=False)

    def to_dict(self):
        return {
            "name": self.name,
            "kind": self.kind,
            "summary": self.summary,
            "instantiates": self.source,
            "params": {k: {"default": d, "doc": doc} for k, (d, doc) in self.params.items()},
            "box": [list(b) for b in self.box] if self.box else None,
        }

    def default_plan(self, count=4096, seed=1):
        return SamplePlan(kind="random", box=self.box, count=count, seed=seed)


def _profile(text, eps, speed=1.0):
    """Parse a profile in (x, y, s) and put s = z - eps*speed*xi."""
    chart = default_chart()
    e = parse(text, PROFILE_CHART) if isinstance(text, str) else as_expr(text)
    c = float(eps) * float(speed)
    z, xi = Var(chart.name(3)), Var(chart.time_name)
    s = sub(z, mul(c, xi)) if c > 0 else add(z, mul(-c, xi))
    return substitute(e, {"s": s})


def _sign(v, name="epsilon"):
    if v not in (1, -1):
        raise ValidationError(f"{name} must be +1 or -1, got {v!r}")
    return int(v)


def plane_wave(amplitude=1.0, epsilon=1, profile="sin(s)"):
    eps = _sign(epsilon)
    u = mul(float(amplitude), _profile(profile, eps))
    zero = as_expr(0)
    return EMConfig.from_components([u, zero, zero], [zero, mul(eps, u), zero],
                                    identify_alpha_with_E=True)


def static_equilibrium(amplitude=1.0):
    a = float(amplitude)
    return EMConfig.from_components([a, 0, 0], [0, a, 0], [a, 0, 0], [0, a, 0])


# instances that passed the finite-difference gate, keyed by (u, p, eps)
TRUSTED = {}


def running_wave(u, p, eps, validate=True):
    """The running-wave null configuration for profiles u, p in (x, y, s)."""
    eps = _sign(eps)
    ue, pe = _profile(u, eps), _profile(p, eps)
    zero = as_expr(0)
    cfg = EMConfig.from_components(
        [ue, pe, zero], [mul(-eps, pe), mul(eps, ue), zero], identify_alpha_with_E=True
    )
    if validate:
        key = (ue, pe, eps)
        if key not in TRUSTED:
            pts = SamplePlan(box=BUMP_BOX, count=GATE_POINTS, seed=GATE_SEED).points(4)
            TRUSTED[key] = validate_nonlinear_solution(cfg, pts)
    return cfg


def running_wave_null(u="cos(s)*exp(-(x^2 + y^2))", p="sin(s)*exp(-(x^2 + y^2))",
                      epsilon=1):
    return running_wave(u, p, epsilon)


def bump_photon(epsilon=1, width=1.0):
    w = float(width)
    if w <= 0:
        raise ValidationError("width must be positive")
    env = f"bump(x/{w!r})*bump(y/{w!r})*bump(s/{w!r})"
    return running_wave(f"{env}*cos(s)", f"{env}*sin(s)", epsilon)


def _autoparallel(mode, speed, sign, slope_mismatch, profile):
    sign = _sign(sign, "sign")
    f = _profile(profile, sign, speed * (1.0 + float(slope_mismatch)))
    lead = sign * speed
    u = GradedTensor(4, 1, CONTRAVARIANT, {(3,): mul(lead, f), (4,): f})
    return AutoparallelField(u, mode, {"speed": speed, "sign": sign,
                                       "slope_mismatch": slope_mismatch, "profile": str(profile)})


def autoparallel_timelike(speed=0.5, sign=1, slope_mismatch=0.0,
                          profile="bump(x)*bump(y)*bump(s)"):
    speed = float(speed)
    if not 0 < speed < 1:
        raise ValidationError(f"speed ratio v/c must lie in (0, 1), got {speed}")
    return _autoparallel(TIMELIKE, speed, sign, slope_mismatch, profile)


def autoparallel_null(sign=1, slope_mismatch=0.0, profile="bump(x)*bump(y)*bump(s)"):
    return _autoparallel(NULL, 1.0, sign, slope_mismatch, profile)


def random_polynomial(rng, chart, degree=2, terms=3, coeff_range=3):
    """Sum of ``terms`` monomials of total degree <= ``degree`` with integer coefficients."""
    out = []
    names = chart.names
    for _ in range(terms):
        c = int(rng.integers(-coeff_range, coeff_range + 1))
        if c == 0:
            continue
        powers = rng.multinomial(int(rng.integers(0, degree + 1)), [1 / len(names)] * len(names))
        factors = [as_expr(float(c))]
        for name, k in zip(names, powers):
            if k:
                factors.append(Var(name) ** int(k))
        prod = factors[0]
        for f in factors[1:]:
            prod = mul(prod, f)
        out.append(prod)
    return sum_exprs(out)


def random_config(seed, identify_alpha_with_E=False, degree=2, terms=3):
    """Deterministic pseudo-random polynomial configuration."""
    rng = np.random.default_rng(seed)
    chart = default_chart()

    def vec():
        return [random_polynomial(rng, chart, degree, terms) for _ in range(3)]

    if identify_alpha_with_E:
        return EMConfig.from_components(vec(), vec(), identify_alpha_with_E=True)
    return EMConfig.from_components(vec(), vec(), vec(), vec())


def random_nonsolution(seed=0):
    return random_config(int(seed), identify_alpha_with_E=True)


def _entry(name, kind, summary, source, params, builder, box=None):
    return CatalogEntry(name, kind, summary, source, params, box, builder)


CATALOG = {
    e.name: e for e in [
        _entry("plane_wave", "config",
               "Linear plane wave E=(u,0,0), B=(0,eps*u,0), u=amplitude*profile(z-eps*xi), alpha,beta identified",
               "linear 3-space system and linear space-time equations",
               {"amplitude": (1.0, "overall amplitude"),
                "epsilon": (1, "propagation sign +1 or -1"),
                "profile": ("sin(s)", "profile expression in s")},
               plane_wave),
        _entry("static_equilibrium", "config",
               "Constant fields E=a e1, B=a e2, alpha=a dx, beta=a dy",
               "static balance of the two subsystems",
               {"amplitude": (1.0, "common constant amplitude a")},
               static_equilibrium),
        _entry("running_wave_null", "config",
               "Running-wave null field E=(u,p,0), B=eps*(-p,u,0) with profiles in (x, y, z-eps*xi)",
               "nonlinear space-time system, null conditions, energy flux",
               {"u": ("cos(s)*exp(-(x^2 + y^2))", "first profile in x, y, s"),
                "p": ("sin(s)*exp(-(x^2 + y^2))", "second profile in x, y, s"),
                "epsilon": (1, "propagation sign +1 or -1")},
               running_wave_null),
        _entry("bump_photon", "config",
               "Running-wave null field with compact support: u, p = bump(x)bump(y)bump(s) times cos(s), sin(s)",
               "finite spatial support of nonlinear solutions",
               {"epsilon": (1, "propagation sign +1 or -1"),
                "width": (1.0, "support half-width of each bump factor")},
               bump_photon, BUMP_BOX),
        _entry("autoparallel_timelike", "vector",
               "u=(0,0,sign*v*f,f), f=profile(x,y,z-sign*v*(1+slope_mismatch)*xi)",
               "autoparallel soliton-like fields moving slower than light",
               {"speed": (0.5, "speed ratio v/c in (0,1)"),
                "sign": (1, "direction +1 or -1"),
                "slope_mismatch": (0.0, "relative error in the propagation slope; nonzero breaks the solution"),
                "profile": ("bump(x)*bump(y)*bump(s)", "profile expression in x, y, s")},
               autoparallel_timelike, BUMP_BOX),
        _entry("autoparallel_null", "vector",
               "u=(0,0,sign*f,f), f=profile(x,y,z-sign*(1+slope_mismatch)*xi)",
               "autoparallel null fields",
               {"sign": (1, "direction +1 or -1"),
                "slope_mismatch": (0.0, "relative error in the propagation slope"),
                "profile": ("bump(x)*bump(y)*bump(s)", "profile expression in x, y, s")},
               autoparallel_null, BUMP_BOX),
        _entry("random_nonsolution", "config",
               "Seeded random polynomial fields (degree <= 2), alpha,beta identified; fails the field equations",
               "counterexample generator",
               {"seed": (0, "integer seed")},
               random_nonsolution),
    ]
}


def catalog_names():
    return list(CATALOG)


def catalog(name, params=None, **kwargs):
    """Instantiate catalog entry ``name`` with keyword parameters."""
    try:
        entry = CATALOG[name]
    except KeyError:
        raise ValidationError(
            f"unknown catalog entry {name!r}; available: {', '.join(CATALOG)}"
        ) from None
    params = dict(params or {}, **kwargs)
    unknown = set(params) - set(entry.params)
    if unknown:
        raise ValidationError(
            f"unknown parameters for {name}: {sorted(unknown)}; accepted: {sorted(entry.params)}"
        )
    return entry.builder(**params)
