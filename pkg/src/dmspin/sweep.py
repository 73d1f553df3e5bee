"""
Parameter sweeps over one or two axes, CSV/JSON serialisation and the
figure-reproduction presets.
"""

from __future__ import annotations

import datetime as _dt
import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .critical import concurrence_at, critical_closed, zero_t_concurrence
from .entanglement import concurrence_general, concurrence_model, thermal_concurrence
from .errors import DMSpinError
from .hamiltonian import FIELDS, ModelParams, Preset, check_preset, preset_constraints, preset_params

QUANTITIES = (
    "concurrence_numeric",
    "concurrence_general",
    "concurrence_model",
    "zero_t_concurrence",
    "critical_curve",
)
TEMPERATURE_AXES = ("T", "kT")
VERIFY_TOL = 1e-8


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise ValueError(f"axis {self.name}: count must be >= 2")
        if not self.lo < self.hi:
            raise ValueError(f"axis {self.name}: need lo < hi")
        if self.name not in FIELDS + TEMPERATURE_AXES:
            raise ValueError(f"cannot sweep {self.name!r}; choose from {FIELDS + TEMPERATURE_AXES}")

    @classmethod
    def parse(cls, text):
        """``name:lo:hi:count``"""
        try:
            name, lo, hi, count = text.split(":")
            return cls(name, float(lo), float(hi), int(count))
        except ValueError as exc:
            raise ValueError(f"bad sweep {text!r}: expected name:lo:hi:count ({exc})") from None

    def values(self):
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class SweepSpec:
    """What to compute on which grid.

    ``T`` is the fixed temperature when no temperature axis is swept (0 means
    the ground-state mixture). ``model`` names a registry formula for
    ``concurrence_model`` or a closed-form tag for ``critical_curve``.
    """

    preset: Preset
    params: ModelParams
    axes: tuple
    quantity: str = "concurrence_numeric"
    T: float | None = None
    model: str | None = None

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 2:
            raise ValueError("a sweep has one or two axes")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ValueError("axes must be distinct")
        if sum(n in TEMPERATURE_AXES for n in names) > 1:
            raise ValueError("sweep T or kT, not both")
        if self.quantity not in QUANTITIES:
            raise ValueError(f"unknown quantity {self.quantity!r}; choose from {QUANTITIES}")
        if self.quantity in ("concurrence_model", "critical_curve") and not self.model:
            raise ValueError(f"{self.quantity} needs a model/tag name")
        if not check_preset(self.params, self.preset):
            raise ValueError(f"fixed parameters violate preset {self.preset}")


@dataclass
class SweepResult:
    header: dict
    columns: list
    rows: list = field(default_factory=list)  # (axis values..., value, error tag)

    def values(self):
        return np.array([r[-2] for r in self.rows])

    def column(self, name):
        return np.array([r[self.columns.index(name)] for r in self.rows])


def _point(spec: SweepSpec, coords):
    """ModelParams and temperature for one grid point."""
    changes, T = {}, spec.T
    for axis, x in zip(spec.axes, coords):
        if axis.name == "T":
            T = float(x)
        elif axis.name == "kT":
            T = float(x) / spec.params.k
        else:
            changes[axis.name] = float(x)
    p = spec.params.replace(**changes) if changes else spec.params
    # keep tied couplings tied (e.g. sweeping jx of an XXZ model moves jy too)
    _, groups = preset_constraints(spec.preset)
    for group in groups:
        for name in changes:
            if name in group:
                p = p.replace(**{f: changes[name] for f in group})
    return p, T


def evaluate(spec: SweepSpec, p: ModelParams, T):
    q = spec.quantity
    if q == "zero_t_concurrence":
        return zero_t_concurrence(p)
    if q == "concurrence_numeric":
        return concurrence_at(p, T)
    if q == "concurrence_general":
        return concurrence_general(p, T).value
    if q == "concurrence_model":
        return concurrence_model(spec.model, p, T).value
    return critical_closed(spec.model, p, T)


def run_sweep(spec: SweepSpec):
    """Evaluate ``spec.quantity`` on the row-major grid of ``spec.axes``.

    Errors raised at individual points become rows with value ``nan`` and the
    exception class name in the error column; the sweep always completes.
    """
    header = {
        "tool": "dmspin",
        "version": __version__,
        "preset": str(spec.preset),
        "quantity": spec.quantity,
    }
    if spec.model:
        header["model"] = spec.model
    if spec.T is not None:
        header["T"] = repr(spec.T)
    for k, v in spec.params.as_dict().items():
        header[k] = repr(v)
    for a in spec.axes:
        header[f"axis.{a.name}"] = f"{a.lo!r}:{a.hi!r}:{a.count}"
    columns = [a.name for a in spec.axes] + [spec.quantity, "error"]
    result = SweepResult(header, columns)
    for coords in itertools.product(*(a.values() for a in spec.axes)):
        p, T = _point(spec, coords)
        try:
            value, err = float(evaluate(spec, p, T)), ""
            if not math.isfinite(value):
                value, err = math.nan, "NonFiniteResult"
        except (DMSpinError, ValueError, ArithmeticError) as exc:
            value, err = math.nan, type(exc).__name__
        result.rows.append((*map(float, coords), value, err))
    return result


def verify_sweep(spec: SweepSpec, result: SweepResult, tol=VERIFY_TOL):
    """Recompute closed-form rows on the numeric path; return the failing rows.

    Concurrence rows are compared with the numeric Gibbs-state concurrence. For
    finite-temperature ``critical_curve`` rows the numeric concurrence at the
    critical value must vanish; T = 0 level crossings (tags ending in ``0``)
    have a nonzero boundary value and are not checked.
    """
    failures = []
    if spec.quantity not in ("concurrence_general", "concurrence_model", "critical_curve"):
        return failures
    if spec.quantity == "critical_curve" and spec.model.endswith("0"):
        return failures
    n_axes = len(spec.axes)
    for row in result.rows:
        value, err = row[-2], row[-1]
        if err:
            continue
        p, T = _point(spec, row[:n_axes])
        if spec.quantity == "critical_curve":
            tag = spec.model
            if tag.endswith("/Tc"):
                numeric = concurrence_at(p, value)
            else:
                field_name = tag.split("/")[1][0]  # 'D' or 'B'
                numeric = concurrence_at(p.replace(**{field_name: value}), T or 0)
            dev = abs(numeric)
        else:
            dev = abs(value - thermal_concurrence(p, T))
        if dev > tol:
            failures.append((row, dev))
    return failures


# ---------------------------------------------------------------------------
# output


def _fmt(x):
    if isinstance(x, str):
        return x
    return format(x, ".12g")


def to_csv(result: SweepResult, reproducible=False):
    lines = [f"# {k}={v}" for k, v in result.header.items()]
    if not reproducible:
        lines.append(f"# timestamp={_dt.datetime.now(_dt.timezone.utc).isoformat(timespec='seconds')}")
    lines.append(",".join(result.columns))
    lines.extend(",".join(_fmt(x) for x in row) for row in result.rows)
    return "\n".join(lines) + "\n"


def to_json(result: SweepResult, reproducible=False):
    header = dict(result.header)
    if not reproducible:
        header["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    rows = [[None if isinstance(x, float) and math.isnan(x) else x for x in row] for row in result.rows]
    return json.dumps({"header": header, "columns": result.columns, "rows": rows}, indent=1) + "\n"


def write_result(result: SweepResult, path, fmt="csv", reproducible=False):
    text = to_csv(result, reproducible) if fmt == "csv" else to_json(result, reproducible)
    Path(path).write_text(text)
    return path


def read_csv(path):
    """Parse a file written by ``to_csv`` back into a ``SweepResult``."""
    header, rows, columns = {}, [], None
    for line in Path(path).read_text().splitlines():
        if line.startswith("# "):
            k, _, v = line[2:].partition("=")
            header[k] = v
        elif columns is None:
            columns = line.split(",")
        else:
            *nums, err = line.split(",")
            rows.append((*map(float, nums), err))
    return SweepResult(header, columns, rows)


# ---------------------------------------------------------------------------
# figure presets


def figure_specs(n, jz=None, xyz=(-0.2, -0.6, -1.0)):
    """Panels of figure ``n`` as ``{panel name: SweepSpec}``.

    Units follow J = 1, k = 1. Figures 6 and 7 need ``jz`` (the XXZ anisotropy
    is left open for these figures). Figures 8 and 9 use ferromagnetic XYZ
    couplings ``xyz = (jx, jy, jz)``.
    """
    P = Preset
    if n == 1:
        p = preset_params(P.PURE_DM, D=1.0)
        return {"": SweepSpec(P.PURE_DM, p, (Axis("kT", 0.002, 2.0, 1000),))}
    if n == 2:
        out = {}
        for B in (0.05, 0.5, 0.7, 1.0):
            p = preset_params(P.TRANSVERSE_ISING_DM, J=1.0, B=B)
            spec = SweepSpec(
                P.TRANSVERSE_ISING_DM, p, (Axis("kT", 0.01, 2.0, 200),), "critical_curve", model="TransverseIsingDM/Dc"
            )
            out[f"B{B:g}"] = spec
        return out
    if n == 3:
        p = preset_params(P.TRANSVERSE_ISING_DM, J=1.0, B=0.05)
        axes = (Axis("B", 0.05, 1.0, 40), Axis("kT", 0.01, 2.0, 40))
        return {"": SweepSpec(P.TRANSVERSE_ISING_DM, p, axes, "critical_curve", model="TransverseIsingDM/Dc")}
    if n == 4:
        p = preset_params(P.TRANSVERSE_ISING_DM, J=1.0, B=1.0)
        return {
            f"T{T:g}": SweepSpec(P.TRANSVERSE_ISING_DM, p, (Axis("D", 0.0, 2.0, 401),), T=T) for T in (0.01, 0.5, 1.0)
        }
    if n == 5:
        out = {}
        for panel, D in zip("abcd", (0.1, 1.118, 1.19, 3.0)):
            p = preset_params(P.XXZ_DMB, J=1.0, jz=0.5, B=2.0, D=D)
            out[panel] = SweepSpec(P.XXZ_DMB, p, (Axis("kT", 0.01, 3.0, 300),))
        return out
    if n in (6, 7):
        if jz is None:
            raise ValueError(f"figure {n} needs --jz (the anisotropy is a free choice for this figure)")
        D = 0.0 if n == 6 else 2.0
        p = preset_params(P.XXZ_DMB, J=1.0, jz=jz, D=D, B=0.0)
        return {f"T{T:g}": SweepSpec(P.XXZ_DMB, p, (Axis("B", 0.0, 4.0, 401),), T=T) for T in (0.1, 0.5, 1.0)}
    if n == 8:
        jx, jy, jz_ = xyz
        p = ModelParams(jx=jx, jy=jy, jz=jz_)
        return {f"T{T:g}": SweepSpec(P.XYZ_DM, p, (Axis("D", 0.0, 3.0, 3001),), T=T) for T in (0.1, 0.5, 1.0)}
    if n == 9:
        jx, jy, jz_ = xyz
        p = ModelParams(jx=jx, jy=jy, jz=jz_)
        return {"": SweepSpec(P.XYZ_DM, p, (Axis("D", 0.0, 3.0, 61), Axis("kT", 0.05, 2.0, 40)))}
    raise ValueError(f"figure number must be 1..9, got {n}")


def reproduce_figure(n, out_dir, fmt="csv", reproducible=True, **kwargs):
    """Write one file per panel of figure ``n`` into ``out_dir``; return ``{path: SweepResult}``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = {}
    for panel, spec in figure_specs(n, **kwargs).items():
        result = run_sweep(spec)
        result.header["figure"] = f"{n}{panel and '-' + panel}"
        name = f"fig{n}{panel and '_' + panel}.{fmt}"
        written[write_result(result, out_dir / name, fmt, reproducible)] = result
    return written
