"""
Critical parameters: closed forms, a bracketing bisection solver, T = 0
concurrence and a scan for ground-state level crossings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .entanglement import concurrence_numeric, lambdas_general, thermal_concurrence
from .errors import BracketInvalid, NoClosedForm, NoRoot, PresetMismatch
from .hamiltonian import ModelParams, Preset, check_preset
from .thermal import ground_state_mixture

ONSET_EPS = 1e-12
SOLVE_TOL = 1e-8
MAX_ITER = 60


def zero_t_concurrence(p: ModelParams):
    """Concurrence of the equal mixture over the ground eigenspace."""
    return concurrence_numeric(ground_state_mixture(p), validate=False).value


def concurrence_at(p: ModelParams, T):
    """Numeric concurrence, dispatching T = 0 to the ground-state mixture."""
    return zero_t_concurrence(p) if T == 0 else thermal_concurrence(p, T)


# ---------------------------------------------------------------------------
# closed forms


def _need_T(T, tag):
    if T is None or T <= 0:
        raise NoClosedForm(f"{tag} needs a temperature T > 0")
    return T


def _pure_dm_tc(p, T):
    return abs(p.D) / (p.k * math.log(1.0 + math.sqrt(2.0)))


def _xx_dm_tc(p, T):
    return math.hypot(p.jx, p.D) / (p.k * math.asinh(1.0))


def _xxx_tc(p, T):
    if p.jx <= 0:
        raise NoRoot("the ferromagnetic XXX model is never entangled")
    return 2.0 * p.jx / (p.k * math.log(3.0))


def _ising_dm_af_dc(p, T):
    kT = p.k * _need_T(T, "IsingDM-AF/Dc")
    return kT * math.asinh(math.exp(-p.jz / kT))


def _ising_dm_f_dc(p, T):
    kT = p.k * _need_T(T, "IsingDM-F/Dc")
    return kT * math.asinh(math.exp(abs(p.jz) / kT))


def ising_dm_f_dc_log_form(p: ModelParams, T):
    """|Jz| + (kT/2) ln(1 + exp(-2|Jz|/kT)).

    A commonly quoted form of the ferromagnetic Ising-DM threshold; it does not
    solve sinh(|D|/kT) = exp(|Jz|/kT) and is kept only for comparison.
    """
    kT = p.k * T
    return abs(p.jz) + 0.5 * kT * math.log1p(math.exp(-2.0 * abs(p.jz) / kT))


def _xxx_dm_dc(p, T):
    kT = p.k * _need_T(T, "XXXDM/Dc")
    sign = -1.0 if p.jx > 0 else 1.0
    arg = (kT * math.asinh(math.exp(sign * abs(p.jx) / kT))) ** 2 - p.jx**2
    if arg < 0:
        raise NoRoot("entangled already at D = 0")
    return math.sqrt(arg)


def _xxz_dm_dc(p, T):
    arg = p.jz**2 - p.jx**2
    if arg < 0:
        raise NoRoot("needs |Jz| > |J|")
    return math.sqrt(arg)


def _tfi_dc(p, T):
    """Branch crossing D_c(B, T) = sqrt(-J^2 + (kT)^2 ln^2[sqrt(1+s^2) + s]),
    s = (J/m) sinh(m/kT), m = sqrt(B^2 + J^2), J = |Jx|/2; the T = 0 limit is |B|."""
    J = abs(p.jx) / 2.0
    if T == 0:
        return abs(p.B)
    kT = p.k * _need_T(T, "TransverseIsingDM/Dc")
    m = math.hypot(p.B, J)
    x = m / kT
    # ln(sqrt(1+s^2) + s) = asinh(s), evaluated in log form when sinh overflows
    if x < 700:
        ln_term = math.asinh(J * math.sinh(x) / m) if m > 0 else 0.0
    else:
        ln_term = x + math.log(J / m)
    arg = (kT * ln_term) ** 2 - J * J
    if arg < 0:
        raise NoRoot("no branch crossing: the lambda_4 branch dominates for all D")
    return math.sqrt(arg)


def _nuclear_dc(p, T):
    """Root of (D/nu) sinh(nu/kT) = exp(-/+|Jz|/kT), nu = sqrt(D^2 + b^2)."""
    kT = p.k * _need_T(T, "NuclearSpinIsingDM/Dc")
    if p.jz == 0:
        raise NoRoot("needs Jz != 0")
    target = -abs(p.jz) / kT if p.jz > 0 else abs(p.jz) / kT

    def g(d):
        nu = math.hypot(d, p.b)
        # log of (d/nu) sinh(nu/kT), stable for large nu/kT
        x = nu / kT
        log_sinh = x + math.log(-math.expm1(-2.0 * x) / 2.0)
        return math.log(d / nu) + log_sinh - target

    hi = max(1.0, abs(p.b), abs(p.jz))
    lo = 1e-300
    while g(hi) < 0:
        hi *= 2.0
        if hi > 1e6:
            raise NoRoot("no threshold found below D = 1e6")
    return brentq(g, lo, hi, xtol=1e-14, rtol=1e-14, maxiter=200)


def _nuclear_dc0(p, T):
    """T = 0 level crossing sqrt((B -/+ |Jz|)^2 - b^2); upper sign for Jz > 0."""
    shift = abs(p.B) - abs(p.jz) if p.jz > 0 else abs(p.B) + abs(p.jz)
    arg = shift**2 - p.b**2
    if arg < 0 or shift < 0:
        raise NoRoot("ground state entangled for every D")
    return math.sqrt(arg)


def _xyz_dm_f_dc(p, T):
    arg = (abs(p.jz) + abs(p.j_minus)) ** 2 - p.j_plus**2
    if arg < 0:
        raise NoRoot("needs |Jz| + |J-| > |J+|")
    return math.sqrt(arg)


def _xxz_dm_b_dc(p, T):
    arg = (p.B - p.jz) ** 2 - p.jx**2
    if arg < 0 or p.B - p.jz < 0:
        raise NoRoot("ground state entangled for every D")
    return math.sqrt(arg)


def _xxz_dm_b_bc(p, T):
    return math.hypot(p.D, p.jx) + p.jz


_CLOSED = {
    "PureDM/Tc": (Preset.PURE_DM, _pure_dm_tc),
    "XX/Tc": (Preset.XX, _xx_dm_tc),
    "XXDM/Tc": (Preset.XX_DM, _xx_dm_tc),
    "XXX/Tc": (Preset.XXX, _xxx_tc),
    "IsingDM-AF/Dc": (Preset.ISING_DM, _ising_dm_af_dc),
    "IsingDM-F/Dc": (Preset.ISING_DM, _ising_dm_f_dc),
    "XXXDM/Dc": (Preset.XXX_DM, _xxx_dm_dc),
    "XXZDM/Dc": (Preset.XXZ_DM, _xxz_dm_dc),
    "TransverseIsingDM/Dc": (Preset.TRANSVERSE_ISING_DM, _tfi_dc),
    "NuclearSpinIsingDM/Dc": (Preset.NUCLEAR_SPIN_ISING_DM, _nuclear_dc),
    "NuclearSpinIsingDM/Dc0": (Preset.NUCLEAR_SPIN_ISING_DM, _nuclear_dc0),
    "XYZDM-F/Dc": (Preset.XYZ_DM, _xyz_dm_f_dc),
    "XXZDMB/Dc0": (Preset.XXZ_DMB, _xxz_dm_b_dc),
    "XXZDMB/Bc0": (Preset.XXZ_DMB, _xxz_dm_b_bc),
}

CLOSED_FORM_TAGS = tuple(_CLOSED)


def critical_closed(tag, p: ModelParams, T=None):
    """Closed-form (or implicit, root-solved) critical value.

    Tags ending in ``/Tc`` return a temperature, ``/Dc`` and ``/Bc`` a
    coupling or field; a trailing ``0`` marks a T = 0 level crossing.

    Raises
    ------
    NoClosedForm
        Unknown tag, or a temperature-dependent tag called without ``T``.
    NoRoot
        The threshold does not exist for these parameters.
    PresetMismatch
        ``p`` does not satisfy the tag's preset.
    """
    try:
        preset, fn = _CLOSED[tag]
    except KeyError:
        raise NoClosedForm(f"no closed form for {tag!r}; known: {', '.join(_CLOSED)}") from None
    if not check_preset(p, preset):
        raise PresetMismatch(f"{tag} needs preset {preset}")
    return fn(p, T)


# ---------------------------------------------------------------------------
# bisection


@dataclass(frozen=True)
class CriticalQuery:
    """A one-parameter threshold search.

    ``free`` is ``"T"`` or a ``ModelParams`` field. ``T`` fixes the temperature
    when the free parameter is not T (0 selects the ground-state mixture).
    ``criterion`` is ``"onset"`` (C crosses from zero to positive) or
    ``"branch"`` (the largest lambda changes label, T > 0 only).
    """

    preset: Preset
    free: str
    params: ModelParams
    bracket: tuple
    T: float | None = None
    criterion: str = "onset"

    def __post_init__(self):
        lo, hi = self.bracket
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValueError(f"bracket must be finite with lo < hi, got {self.bracket}")
        if self.criterion not in ("onset", "branch"):
            raise ValueError(f"unknown criterion {self.criterion!r}")
        if self.free != "T" and self.T is None:
            raise ValueError("a fixed temperature T is required unless T is the free parameter")

    def point(self, x):
        if self.free == "T":
            return self.params, x
        p = self.params.replace(**{self.free: x})
        if not check_preset(p, self.preset):
            raise PresetMismatch(f"varying {self.free} leaves preset {self.preset}")
        return p, self.T

    def status(self, x):
        p, T = self.point(x)
        if self.criterion == "onset":
            return concurrence_at(p, T) > ONSET_EPS
        return int(np.argmax(lambdas_general(p, T)))


def critical_solve(q: CriticalQuery, tol=SOLVE_TOL, max_iter=MAX_ITER):
    """Bisection on the entanglement status along ``q.free``.

    Raises
    ------
    BracketInvalid
        Both endpoints have the same status.
    """
    lo, hi = map(float, q.bracket)
    s_lo, s_hi = q.status(lo), q.status(hi)
    if s_lo == s_hi:
        raise BracketInvalid(f"status {s_lo!r} at both ends of {q.bracket}")
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if q.status(mid) == s_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# quantum phase transitions


@dataclass(frozen=True)
class Breakpoint:
    x: float
    left: float
    boundary: float
    right: float


@dataclass(frozen=True)
class StepProfile:
    free: str
    breakpoints: list = field(default_factory=list)


_PROJECTOR_JUMP = 0.5
_STEP_JUMP = 0.1
_SIDE_OFFSET = 1e-7


def qpt_scan(preset, p: ModelParams, free, grid, tol=1e-12):
    """Locate ground-state level crossings of ``zero_t_concurrence`` along ``grid``.

    Adjacent grid points whose ground-state mixtures differ by more than 0.5
    (Frobenius) are refined by bisection to ``tol``. A crossing is reported
    when the concurrence just left of it, at it, and just right of it differ
    by more than 0.1.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 3 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing with at least 3 points")
    preset = Preset(preset)

    def at(x):
        q = p.replace(**{free: float(x)})
        if not check_preset(q, preset):
            raise PresetMismatch(f"varying {free} leaves preset {preset}")
        return q

    def rho0(x):
        return ground_state_mixture(at(x)).matrix

    states = [rho0(x) for x in grid]
    found = []
    for i in range(len(grid) - 1):
        if np.linalg.norm(states[i] - states[i + 1]) <= _PROJECTOR_JUMP:
            continue
        lo, hi = grid[i], grid[i + 1]
        r_lo, r_hi = states[i], states[i + 1]
        x = None
        while hi - lo > tol * max(1.0, abs(lo)):
            mid = 0.5 * (lo + hi)
            r = rho0(mid)
            d_lo, d_hi = np.linalg.norm(r - r_lo), np.linalg.norm(r - r_hi)
            if min(d_lo, d_hi) > 0.25 * np.linalg.norm(r_lo - r_hi):
                x = mid  # landed inside the degeneracy window: a mixture of both sides
                break
            if d_lo <= d_hi:
                lo, r_lo = mid, r
            else:
                hi, r_hi = mid, r
        if x is None:
            if np.linalg.norm(r_lo - r_hi) <= _PROJECTOR_JUMP:
                continue  # a smooth rotation of the ground state, not a crossing
            x = 0.5 * (lo + hi)
        if found and abs(x - found[-1].x) <= 1e-6 * max(1.0, abs(x)):
            continue  # crossing sits on a grid point and was seen from both sides
        left = zero_t_concurrence(at(x - _SIDE_OFFSET))
        right = zero_t_concurrence(at(x + _SIDE_OFFSET))
        boundary = zero_t_concurrence(at(x))
        vals = (left, boundary, right)
        if max(vals) - min(vals) > _STEP_JUMP:
            found.append(Breakpoint(float(x), left, boundary, right))
    return StepProfile(free, found)
