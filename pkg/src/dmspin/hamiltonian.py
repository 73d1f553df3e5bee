"""
Two-qubit XYZ Hamiltonian with z-axis Dzyaloshinskii-Moriya coupling.

    H = 1/2 [Jx XX + Jy YY + Jz ZZ + (B+b) Z1 + (B-b) Z2 + D (XY - YX)]

The matrix is block diagonal: the outer block couples |00>, |11> through
J- = (Jx-Jy)/2, the inner block couples |01>, |10> through J+ + iD.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields, replace

import numpy as np

from .linalg import pauli2

FIELDS = ("jx", "jy", "jz", "B", "b", "D")


@dataclass(frozen=True)
class ModelParams:
    """Couplings and fields in energy units; ``k`` and ``hbar`` default to 1."""

    jx: float = 0.0
    jy: float = 0.0
    jz: float = 0.0
    B: float = 0.0
    b: float = 0.0
    D: float = 0.0
    k: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for f in fields(self):
            val = getattr(self, f.name)
            if not math.isfinite(val):
                raise ValueError(f"{f.name} must be finite, got {val!r}")
            object.__setattr__(self, f.name, float(val))
        if self.k <= 0 or self.hbar <= 0:
            raise ValueError("k and hbar must be positive")

    @property
    def j_plus(self):
        return 0.5 * (self.jx + self.jy)

    @property
    def j_minus(self):
        return 0.5 * (self.jx - self.jy)

    @property
    def mu(self):
        return math.hypot(self.B, self.j_minus)

    @property
    def nu(self):
        return math.hypot(self.b, self.j_plus, self.D)

    @property
    def delta(self):
        """Anisotropy Jz/J, defined for Jx = Jy = J != 0."""
        if self.jx != self.jy or self.jx == 0:
            raise ValueError("delta is defined only for jx == jy != 0")
        return self.jz / self.jx

    def replace(self, **changes):
        return replace(self, **changes)

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


class Preset(str, enum.Enum):
    PURE_DM = "PureDM"
    ISING = "Ising"
    ISING_DM = "IsingDM"
    NUCLEAR_SPIN_ISING_DM = "NuclearSpinIsingDM"
    XY = "XY"
    XY_DM = "XYDM"
    XX = "XX"
    XX_DM = "XXDM"
    TRANSVERSE_ISING_DM = "TransverseIsingDM"
    XXX = "XXX"
    XXX_DM = "XXXDM"
    XXZ = "XXZ"
    XXZ_DM = "XXZDM"
    XXZ_DMB = "XXZDMB"
    XYZ = "XYZ"
    XYZ_DM = "XYZDM"

    def __str__(self):
        return self.value


# (fields forced to zero, groups of fields forced equal)
_CONSTRAINTS = {
    Preset.PURE_DM: (("jx", "jy", "jz", "B", "b"), ()),
    Preset.ISING: (("jx", "jy", "B", "b", "D"), ()),
    Preset.ISING_DM: (("jx", "jy", "B", "b"), ()),
    Preset.NUCLEAR_SPIN_ISING_DM: (("jx", "jy"), ()),
    Preset.XY: (("jz", "B", "b", "D"), ()),
    Preset.XY_DM: (("jz", "B", "b"), ()),
    Preset.XX: (("jz", "B", "b", "D"), (("jx", "jy"),)),
    Preset.XX_DM: (("jz", "B", "b"), (("jx", "jy"),)),
    Preset.TRANSVERSE_ISING_DM: (("jy", "jz", "b"), ()),
    Preset.XXX: (("B", "b", "D"), (("jx", "jy", "jz"),)),
    Preset.XXX_DM: (("B", "b"), (("jx", "jy", "jz"),)),
    Preset.XXZ: (("B", "b", "D"), (("jx", "jy"),)),
    Preset.XXZ_DM: (("B", "b"), (("jx", "jy"),)),
    Preset.XXZ_DMB: (("b",), (("jx", "jy"),)),
    Preset.XYZ: (("B", "b", "D"), ()),
    Preset.XYZ_DM: (("B", "b"), ()),
}


def preset_constraints(preset):
    """Return ``(zero_fields, equal_groups)`` for a preset."""
    return _CONSTRAINTS[Preset(preset)]


def check_preset(p: ModelParams, preset, tol=1e-14):
    """True iff ``p`` satisfies every equality constraint of ``preset``."""
    zeros, groups = preset_constraints(preset)
    if any(abs(getattr(p, f)) > tol for f in zeros):
        return False
    for group in groups:
        ref = getattr(p, group[0])
        if any(abs(getattr(p, f) - ref) > tol for f in group[1:]):
            return False
    return True


def sample_params(preset, rng, low=-5.0, high=5.0, **fixed):
    """Draw uniform parameters satisfying a preset's constraints.

    Free fields (and one representative per equality group) are uniform in
    ``[low, high)``; keyword arguments pin individual fields.
    """
    zeros, groups = preset_constraints(preset)
    values = {}
    tied = {f for g in groups for f in g}
    for f in FIELDS:
        if f in zeros:
            values[f] = 0.0
        elif f not in tied:
            values[f] = float(rng.uniform(low, high))
    for g in groups:
        v = float(rng.uniform(low, high))
        for f in g:
            values[f] = v
    values.update(fixed)
    return ModelParams(**values)


def preset_params(preset, *, J=None, jx=None, jy=None, jz=None, B=0.0, b=0.0, D=0.0, k=1.0, hbar=1.0):
    """Build parameters from the symbols used for each model.

    ``J`` is the single exchange constant of the isotropic-in-plane models
    (XX, XXZ, XXX). For the transverse Ising model ``J`` denotes the
    off-diagonal amplitude J+ = J- = Jx/2, so ``jx = 2 J``.
    """
    preset = Preset(preset)
    zeros, groups = preset_constraints(preset)
    kw = dict(jx=jx or 0.0, jy=jy or 0.0, jz=jz or 0.0, B=B, b=b, D=D, k=k, hbar=hbar)
    if preset is Preset.TRANSVERSE_ISING_DM:
        if J is not None:
            kw["jx"] = 2.0 * J
    elif groups and J is not None:
        for f in groups[0]:
            kw[f] = J
    for f in zeros:
        kw[f] = 0.0
    return ModelParams(**kw)


def build_hamiltonian(p: ModelParams):
    """Dense 4x4 Hamiltonian assembled from Kronecker products of Paulis."""
    bp, bm = p.B + p.b, p.B - p.b
    h = (
        p.jx * pauli2("XX")
        + p.jy * pauli2("YY")
        + p.jz * pauli2("ZZ")
        + bp * pauli2("ZI")
        + bm * pauli2("IZ")
        + p.D * (pauli2("XY") - pauli2("YX"))
    )
    return 0.5 * h


@dataclass(frozen=True)
class Spectrum:
    """Energies E1..E4 and matching normalised eigenvectors (columns).

    ``degeneracy`` partitions the labels 1..4 into groups of equal energy.
    """

    energies: np.ndarray
    states: np.ndarray
    degeneracy: tuple

    def state(self, label):
        return self.states[:, label - 1]


def _stable_sum(r, x, c2):
    """r + x where r = sqrt(x^2 + c2), without cancellation when x < 0."""
    if x >= 0:
        return r + x
    return c2 / (r - x) if c2 > 0 else 0.0


def _two_level(h, c, sign, col_form):
    """Eigenvector of [[h, c], [c*, -h]] for eigenvalue sign*r.

    Column form (c, sign*r - h) is what the outer block uses; row form
    (sign*r + h, c*) is what the inner block uses. When the preferred form's
    normalisation vanishes the other one is taken; r = 0 returns basis vectors.
    """
    c2 = abs(c) ** 2
    r = math.sqrt(h * h + c2)
    if r == 0.0:
        return np.array([1.0, 0.0], complex) if sign < 0 else np.array([0.0, 1.0], complex)
    # r - sign*h and r + sign*h, both computed stably
    r_minus = _stable_sum(r, -sign * h, c2)
    r_plus = _stable_sum(r, sign * h, c2)
    if col_form and r_minus > 0 or not col_form and r_plus == 0:
        # sign*r - h = sign*(r - sign*h)
        vec = np.array([c, sign * r_minus], complex)
        norm = math.sqrt(2.0 * r * r_minus)
    else:
        vec = np.array([sign * r_plus, np.conj(c)], complex)
        norm = math.sqrt(2.0 * r * r_plus)
    return vec / norm


def analytic_spectrum(p: ModelParams, tol=1e-12):
    """Closed-form energies and eigenvectors.

    E1,2 = Jz/2 -/+ mu and E3,4 = -Jz/2 -/+ nu, with mu = sqrt(B^2 + J-^2)
    and nu = sqrt(b^2 + J+^2 + D^2). The outer-block states are
    (J-, 0, 0, -(B +/- mu)) / sqrt(2 mu (mu +/- B)) and the inner-block states
    (0, b -/+ nu, J+ - iD, 0) / sqrt(2 nu (nu -/+ b)); singular normalisations
    fall back to the equivalent form or to basis states.
    """
    mu, nu = p.mu, p.nu
    energies = np.array([p.jz / 2 - mu, p.jz / 2 + mu, -p.jz / 2 - nu, -p.jz / 2 + nu])
    states = np.zeros((4, 4), dtype=complex)
    outer = [0, 3]
    inner = [1, 2]
    c_in = complex(p.j_plus, p.D)  # H[01,10]
    for col, sign in ((0, -1), (1, +1)):
        states[outer, col] = _two_level(p.B, p.j_minus, sign, col_form=True)
    for col, sign in ((2, -1), (3, +1)):
        states[inner, col] = _two_level(p.b, c_in, sign, col_form=False)
    return Spectrum(energies, states, degeneracy_groups(energies, tol))


def degeneracy_groups(energies, tol=1e-12):
    """Partition labels 1..n into clusters of energies closer than ``tol``."""
    order = np.argsort(energies, kind="stable")
    groups, current = [], [int(order[0]) + 1]
    for a, b_ in zip(order[:-1], order[1:]):
        if energies[b_] - energies[a] <= tol:
            current.append(int(b_) + 1)
        else:
            groups.append(tuple(sorted(current)))
            current = [int(b_) + 1]
    groups.append(tuple(sorted(current)))
    return tuple(groups)
