"""Sample plans and residual reports with JSON/CSV serialization."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .field_expr import differentiate, evaluate_many

DEFAULT_TOL = 1e-8
DEFAULT_COUNT = 4096
DEFAULT_SEED = 1


class ValidationError(ValueError):
    """Bad user input: malformed spec, plan, or arguments."""


@dataclass(frozen=True)
class SamplePlan:
    kind: str = "random"
    box: tuple = None
    count: int = DEFAULT_COUNT
    points_per_axis: int = 8
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.kind not in ("random", "grid"):
            raise ValidationError(f"sample plan kind must be 'random' or 'grid', not {self.kind!r}")
        if self.box is not None:
            box = tuple((float(lo), float(hi)) for lo, hi in self.box)
            for lo, hi in box:
                if not hi > lo:
                    raise ValidationError(f"degenerate box interval [{lo}, {hi}]")
            object.__setattr__(self, "box", box)
        if self.kind == "random" and self.count < 1:
            raise ValidationError("sample count must be positive")
        if self.kind == "grid" and self.points_per_axis < 1:
            raise ValidationError("points_per_axis must be positive")

    def resolved_box(self, n):
        box = self.box if self.box is not None else ((-1.0, 1.0),) * n
        if len(box) != n:
            raise ValidationError(f"box has {len(box)} intervals for a {n}-dimensional chart")
        return box

    def points(self, n):
        box = np.array(self.resolved_box(n))
        if self.kind == "grid":
            axes = [np.linspace(lo, hi, self.points_per_axis) for lo, hi in box]
            mesh = np.meshgrid(*axes, indexing="ij")
            return np.stack([m.ravel() for m in mesh], axis=1)
        rng = np.random.default_rng(self.seed)
        return box[:, 0] + (box[:, 1] - box[:, 0]) * rng.random((self.count, n))

    def to_dict(self):
        out = {"kind": self.kind, "seed": self.seed}
        if self.box is not None:
            out["box"] = [list(b) for b in self.box]
        if self.kind == "random":
            out["count"] = self.count
        else:
            out["points_per_axis"] = self.points_per_axis
        return out

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ValidationError("sample_plan must be an object")
        unknown = set(d) - {"kind", "box", "count", "points_per_axis", "seed"}
        if unknown:
            raise ValidationError(f"unknown sample_plan keys: {sorted(unknown)}")
        try:
            return cls(
                kind=d.get("kind", "random"),
                box=d.get("box"),
                count=int(d.get("count", DEFAULT_COUNT)),
                points_per_axis=int(d.get("points_per_axis", 8)),
                seed=int(d.get("seed", DEFAULT_SEED)),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"bad sample_plan: {exc}") from None


def derivative_scale(exprs, points, chart):
    """Largest first-derivative magnitude of ``exprs`` over the sample points."""
    derivs = [differentiate(e, v) for e in exprs for v in chart.names]
    if not derivs:
        return 0.0
    vals = evaluate_many(derivs, points, chart)
    return float(np.max(np.abs(vals))) if vals.size else 0.0


@dataclass
class ResidualEntry:
    name: str
    max_abs: float
    rms: float
    n_points: int
    scale: float
    tolerance: float
    passed: bool
    values: np.ndarray = field(default=None, repr=False, compare=False)

    @classmethod
    def from_values(cls, name, values, scale, tolerance, n_points=None):
        values = np.asarray(values, dtype=float)
        if values.ndim == 1:
            values = values[None, :]
        n = values.shape[1] if n_points is None else n_points
        if values.size:
            max_abs = float(np.max(np.abs(values)))
            rms = float(np.sqrt(np.mean(values ** 2)))
        else:
            max_abs = rms = 0.0
        passed = bool(max_abs <= tolerance * max(1.0, scale))
        return cls(name, max_abs, rms, int(n), float(scale), float(tolerance), passed, values)

    def to_dict(self):
        return {
            "name": self.name,
            "max_abs_residual": self.max_abs,
            "rms_residual": self.rms,
            "n_points": self.n_points,
            "scale": self.scale,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


class ResidualReport:
    """Ordered collection of residual entries with a global verdict."""

    def __init__(self, title="", entries=None):
        self.title = title
        self.entries = list(entries or [])

    def add(self, entry):
        self.entries.append(entry)
        return entry

    def extend(self, other):
        self.entries.extend(other.entries)
        return self

    def __getitem__(self, name):
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def names(self):
        return [e.name for e in self.entries]

    @property
    def passed(self):
        return all(e.passed for e in self.entries)

    @property
    def max_abs(self):
        return max((e.max_abs for e in self.entries), default=0.0)

    def failures(self):
        return [e for e in self.entries if not e.passed]

    def to_dict(self):
        return {
            "title": self.title,
            "pass": self.passed,
            "checks": [e.to_dict() for e in self.entries],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        cols = ["name", "max_abs_residual", "rms_residual", "n_points", "scale",
                "tolerance", "pass"]
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for e in self.entries:
            w.writerow({k: (repr(v) if isinstance(v, float) else v)
                        for k, v in e.to_dict().items()})
        return buf.getvalue()

    def summary_lines(self):
        lines = []
        for e in self.entries:
            flag = "PASS" if e.passed else "FAIL"
            lines.append(f"{flag}  {e.name:<44} max={e.max_abs:.3e} scale={e.scale:.3g}")
        return lines

    def __repr__(self):
        verdict = "pass" if self.passed else "fail"
        return f"ResidualReport({self.title!r}, {len(self.entries)} checks, {verdict})"
