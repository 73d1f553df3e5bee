"""
Wootters concurrence: numerically from a density matrix, from the general
closed-form lambdas, and from the per-model closed-form expressions.

The lambdas are the square roots of the eigenvalues of rho (Y x Y) rho* (Y x Y).
Numerically they are computed as singular values of
diag(sqrt(w)) V^H (Y x Y) V* diag(sqrt(w)) for rho = V diag(w) V^H, which keeps
small lambdas accurate to machine precision instead of sqrt(machine eps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BranchInvalid, NoClosedForm, PresetMismatch, ZeroTemperature
from .hamiltonian import ModelParams, Preset, check_preset
from .linalg import herm_eig, pauli2
from .thermal import DensityMatrix, _block_terms, density_matrix_numeric

YY = pauli2("YY")
_WEIGHT_FLOOR = 1e-15


@dataclass(frozen=True)
class ConcurrenceReport:
    lambdas: np.ndarray  # descending
    value: float
    source: str

    def __float__(self):
        return self.value


def _from_lambdas(lams, source):
    lams = np.sort(np.clip(np.asarray(lams, dtype=float), 0.0, None))[::-1]
    # C <= 1 exactly; the clamp only removes rounding above 1
    value = min(max(lams[0] - lams[1] - lams[2] - lams[3], 0.0), 1.0)
    return ConcurrenceReport(lams, float(value), source)


def concurrence_numeric(rho, validate=True):
    """Concurrence of a two-qubit density matrix.

    Accepts a ``DensityMatrix`` or a raw 4x4 array. If no spectral
    factorisation is attached, ``rho`` is diagonalised and eigenvalues below
    1e-15 are treated as zero.

    Raises
    ------
    InvalidState
        If ``rho`` is not Hermitian, unit-trace and positive semidefinite.
    """
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(np.asarray(rho, dtype=complex))
    if validate:
        rho.validate()
    if rho.weights is None:
        eig = herm_eig(rho.matrix)
        w = np.where(eig.values > _WEIGHT_FLOOR, eig.values, 0.0)
        v = eig.vectors
    else:
        w = np.clip(rho.weights, 0.0, None)
        v = rho.vectors
    s = np.sqrt(w)
    n = s[:, None] * (v.conj().T @ YY @ v.conj()) * s[None, :]
    lams = np.linalg.svd(n, compute_uv=False)
    return _from_lambdas(lams, "numeric")


def pure_state_concurrence(psi):
    """2 |a d - b c| for psi = (a, b, c, d) normalised."""
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return float(2.0 * abs(psi[0] * psi[3] - psi[1] * psi[2]))


def thermal_concurrence(p: ModelParams, T):
    """Numeric concurrence of the Gibbs state (independent of any closed form)."""
    return concurrence_numeric(density_matrix_numeric(p, T), validate=False).value


def lambdas_general(p: ModelParams, T):
    """Closed-form lambdas (lambda1..lambda4 in eigenstate labelling, unsorted).

    lambda1,2 = e^{-Jz/2kT}/Z |sqrt(1 + (J-/mu)^2 sinh^2(mu/kT)) -/+ (J-/mu) sinh(mu/kT)|
    lambda3,4 = e^{Jz/2kT}/Z |sqrt(1 + ((J+^2+D^2)/nu^2) sinh^2(nu/kT)) -/+ sqrt(J+^2+D^2)/nu sinh(nu/kT)|

    Each pair is evaluated relative to the ground energy; the smaller member
    of a pair uses the product form a^2 / (sqrt(a^2 + x^2) + |x|).
    """
    if T is None or T <= 0:
        raise ZeroTemperature("lambdas_general needs T > 0")
    kT = p.k * T
    _, w_out, w_in, ch_out, ch_in, sc_out, sc_in = _block_terms(p, kT)
    z = 2.0 * (w_out * ch_out + w_in * ch_in)

    def pair(prefactor, x):
        h = math.hypot(prefactor, x)
        big = h + abs(x)
        small = prefactor * prefactor / big if big > 0 else 0.0
        return (small, big) if x >= 0 else (big, small)

    a_out = w_out * math.exp(-p.mu / kT) / z
    x_out = p.j_minus * w_out * sc_out / (kT * z)
    a_in = w_in * math.exp(-p.nu / kT) / z
    x_in = math.hypot(p.j_plus, p.D) * w_in * sc_in / (kT * z)
    l1, l2 = pair(a_out, x_out)
    l3, l4 = pair(a_in, x_in)
    return np.array([l1, l2, l3, l4])


def concurrence_general(p: ModelParams, T):
    return _from_lambdas(lambdas_general(p, T), "general")


# ---------------------------------------------------------------------------
# per-model closed forms


def _sinh_over(r, kT):
    """sinh(r/kT) / r with the r -> 0 limit 1/kT."""
    x = r / kT
    if x < 1e-8:
        return (1.0 + x * x / 6.0) / kT
    return math.sinh(x) / r


def _pure_dm(p, kT):
    x = abs(p.D) / kT
    return (math.sinh(x) - 1.0) / (math.cosh(x) + 1.0)


def _ising_dm_af(p, kT):
    x = abs(p.D) / kT
    e = math.exp(-p.jz / kT)
    return (math.sinh(x) - e) / (math.cosh(x) + e)


def _ising_dm_f(p, kT):
    x = abs(p.D) / kT
    e = math.exp(abs(p.jz) / kT)
    return (math.sinh(x) - e) / (math.cosh(x) + e)


def _nuclear(sign):
    # sign = -1 for J_z > 0 (e^{-|Jz|/kT}), +1 for J_z < 0 (e^{+|Jz|/kT})
    def formula(p, kT):
        nu = math.hypot(p.b, p.D)
        e = math.exp(sign * abs(p.jz) / kT)
        num = abs(p.D) * _sinh_over(nu, kT) - e
        return num / (math.cosh(nu / kT) + math.cosh(p.B / kT) * e)

    return formula


def _xy_af(p, kT):
    jp, jm = p.j_plus / kT, p.j_minus / kT
    return (math.sinh(jp) - math.cosh(jm)) / (math.cosh(jm) + math.cosh(jp))


def _xy_f(p, kT):
    jp, jm = p.j_plus / kT, p.j_minus / kT
    return (math.sinh(abs(jp)) - math.cosh(jm)) / (math.cosh(abs(jm)) + math.cosh(jp))


def xy_f_text_variant(p: ModelParams, T):
    """Ferromagnetic XY candidate read off the inline entanglement condition
    sinh(|J-|/kT) > cosh(J+/kT); kept only for comparison with the numeric oracle,
    which it does not match."""
    kT = p.k * T
    jp, jm = p.j_plus / kT, p.j_minus / kT
    val = (math.sinh(abs(jm)) - math.cosh(jp)) / (math.cosh(abs(jm)) + math.cosh(jp))
    return max(val, 0.0)


def _xy_dm(p, kT):
    n = math.hypot(p.j_plus, p.D) / kT
    jm = p.j_minus / kT
    return (math.sinh(n) - math.cosh(jm)) / (math.cosh(n) + math.cosh(jm))


def _xx_dm(p, kT):
    n = math.hypot(p.jx, p.D) / kT
    return (math.sinh(n) - 1.0) / (math.cosh(n) + 1.0)


def _tfi_parts(p, kT):
    """(J, m, n, s) for the transverse Ising model, with J = |Jx|/2."""
    J = abs(p.jx) / 2.0
    m = math.hypot(p.B, J)
    n = math.hypot(J, p.D)
    s = J * _sinh_over(m, kT)
    return J, m, n, s


def transverse_ising_branch_gap(p: ModelParams, T):
    """f(B, D, T) = exp(n/kT) - sqrt(1 + s^2) - s, i.e. Z (lambda4 - lambda2).

    Negative below the critical coupling, positive above it.
    """
    kT = p.k * T
    _, _, n, s = _tfi_parts(p, kT)
    return math.exp(n / kT) - math.sqrt(1.0 + s * s) - s


def _tfi_under(p, kT):
    _, m, n, s = _tfi_parts(p, kT)
    return (s - math.cosh(n / kT)) / (math.cosh(m / kT) + math.cosh(n / kT))


def _tfi_over(p, kT):
    _, m, n, s = _tfi_parts(p, kT)
    return (math.sinh(n / kT) - math.sqrt(1.0 + s * s)) / (math.cosh(m / kT) + math.cosh(n / kT))


def _xxx_dm(sign):
    def formula(p, kT):
        n = math.hypot(p.jx, p.D) / kT
        e = math.exp(sign * abs(p.jx) / kT)
        return (math.sinh(n) - e) / (e + math.cosh(n))

    return formula


def _xxz(p, kT):
    j = abs(p.jx) / kT
    e = math.exp(-p.jz / kT)
    return (math.sinh(j) - e) / (math.cosh(j) + e)


def _xxz_dm(p, kT):
    n = math.hypot(p.jx, p.D) / kT
    e = math.exp(abs(p.jz) / kT)
    return (math.sinh(n) - e) / (math.cosh(n) + e)


def _xxz_dm_b(p, kT):
    n = math.hypot(p.jx, p.D) / kT
    e = math.exp(-p.jz / kT)
    return (math.sinh(n) - e) / (math.cosh(n) + e * math.cosh(p.B / kT))


def _xyz_af(p, kT):
    jp, jm = p.j_plus / kT, p.j_minus / kT
    e = math.exp(-p.jz / kT)
    return (math.sinh(jp) - math.cosh(jm) * e) / (math.cosh(jp) + math.cosh(jm) * e)


def _xyz_dm_af(p, kT):
    n = math.hypot(p.j_plus, p.D) / kT
    jm = p.j_minus / kT
    e = math.exp(-p.jz / kT)
    return (math.sinh(n) - e * math.cosh(jm)) / (math.cosh(n) + e * math.cosh(jm))


def _xyz_f(p, kT):
    jp, jm = abs(p.j_plus) / kT, abs(p.j_minus) / kT
    e = math.exp(-abs(p.jz) / kT)
    return (math.sinh(jm) - math.cosh(jp) * e) / (math.cosh(jm) + math.cosh(jp) * e)


def _xyz_dm_f_under(p, kT):
    n = math.hypot(p.j_plus, p.D) / kT
    jm = abs(p.j_minus) / kT
    e = math.exp(-abs(p.jz) / kT)
    return (math.sinh(jm) - math.cosh(n) * e) / (math.cosh(jm) + math.cosh(n) * e)


def _xyz_dm_f_over(p, kT):
    n = math.hypot(p.j_plus, p.D) / kT
    jm = abs(p.j_minus) / kT
    e = math.exp(abs(p.jz) / kT)
    return (math.sinh(n) - e * math.cosh(jm)) / (math.cosh(n) + e * math.cosh(jm))


def _always(p, T):
    return True


def _xyz_af_region(p, T):
    return p.jz > p.jy > p.jx > 0


def _xyz_f_region(p, T):
    return p.jz < p.jy < p.jx < 0


def xyz_f_dm_critical_nu(p: ModelParams):
    """|Jz| + |J-|, the value of sqrt(D^2 + J+^2) at the ferromagnetic level crossing."""
    return abs(p.jz) + abs(p.j_minus)


@dataclass(frozen=True)
class ModelFormula:
    """One closed-form concurrence with its preset and region of validity."""

    name: str
    preset: Preset
    formula: Callable[[ModelParams, float], float]
    valid: Callable[[ModelParams, float], bool]
    region: str

    def __call__(self, p: ModelParams, T):
        return min(max(self.formula(p, p.k * T), 0.0), 1.0)


def register_models():
    """Every closed-form concurrence, keyed by ``name``."""
    P = Preset
    entries = [
        ModelFormula("PureDM", P.PURE_DM, _pure_dm, _always, "any D"),
        ModelFormula("IsingDM-AF", P.ISING_DM, _ising_dm_af, lambda p, T: p.jz > 0, "Jz > 0"),
        ModelFormula("IsingDM-F", P.ISING_DM, _ising_dm_f, lambda p, T: p.jz < 0, "Jz < 0"),
        ModelFormula(
            "NuclearSpinIsingDM-AF", P.NUCLEAR_SPIN_ISING_DM, _nuclear(-1), lambda p, T: p.jz > 0, "Jz > 0"
        ),
        ModelFormula(
            "NuclearSpinIsingDM-F", P.NUCLEAR_SPIN_ISING_DM, _nuclear(+1), lambda p, T: p.jz < 0, "Jz < 0"
        ),
        ModelFormula("XY-AF", P.XY, _xy_af, lambda p, T: p.jx > 0 and p.jy > 0, "Jx, Jy > 0"),
        ModelFormula("XY-F", P.XY, _xy_f, lambda p, T: p.jx < 0 and p.jy < 0, "Jx, Jy < 0"),
        ModelFormula("XYDM", P.XY_DM, _xy_dm, lambda p, T: p.jx * p.jy >= 0, "Jx Jy >= 0"),
        ModelFormula("XXDM", P.XX_DM, _xx_dm, _always, "any J, D"),
        ModelFormula(
            "TransverseIsingDM-under",
            P.TRANSVERSE_ISING_DM,
            _tfi_under,
            lambda p, T: transverse_ising_branch_gap(p, T) <= 0,
            "D <= Dc(B, T)",
        ),
        ModelFormula(
            "TransverseIsingDM-over",
            P.TRANSVERSE_ISING_DM,
            _tfi_over,
            lambda p, T: transverse_ising_branch_gap(p, T) >= 0,
            "D >= Dc(B, T)",
        ),
        ModelFormula("XXXDM-AF", P.XXX_DM, _xxx_dm(-1), lambda p, T: p.jx > 0, "J > 0"),
        ModelFormula("XXXDM-F", P.XXX_DM, _xxx_dm(+1), lambda p, T: p.jx < 0, "J < 0"),
        ModelFormula("XXZ-AF", P.XXZ, _xxz, lambda p, T: p.jx > 0 and p.jz > -p.jx, "J > 0, Delta > -1"),
        ModelFormula("XXZ-F", P.XXZ, _xxz, lambda p, T: p.jx < 0 and p.jz > p.jx, "J < 0, Delta < 1"),
        ModelFormula(
            "XXZDM",
            P.XXZ_DM,
            _xxz_dm,
            lambda p, T: p.jz < 0 and abs(p.jz) > abs(p.jx) and abs(p.D) > math.sqrt(p.jz**2 - p.jx**2),
            "Jz < 0, |Jz| > |J|, D > sqrt(Jz^2 - J^2)",
        ),
        ModelFormula("XXZDMB", P.XXZ_DMB, _xxz_dm_b, _always, "any J, Jz, B, D"),
        ModelFormula("XYZ-AF", P.XYZ, _xyz_af, _xyz_af_region, "Jz > Jy > Jx > 0"),
        ModelFormula("XYZDM-AF", P.XYZ_DM, _xyz_dm_af, _xyz_af_region, "Jz > Jy > Jx > 0"),
        ModelFormula("XYZ-F", P.XYZ, _xyz_f, _xyz_f_region, "Jz < Jy < Jx < 0"),
        ModelFormula(
            "XYZDM-F-under",
            P.XYZ_DM,
            _xyz_dm_f_under,
            lambda p, T: _xyz_f_region(p, T) and math.hypot(p.j_plus, p.D) < xyz_f_dm_critical_nu(p),
            "Jz < Jy < Jx < 0, D < Dc",
        ),
        ModelFormula(
            "XYZDM-F-over",
            P.XYZ_DM,
            _xyz_dm_f_over,
            lambda p, T: _xyz_f_region(p, T) and math.hypot(p.j_plus, p.D) > xyz_f_dm_critical_nu(p),
            "Jz < Jy < Jx < 0, D > Dc",
        ),
    ]
    return {e.name: e for e in entries}


MODELS = register_models()


def concurrence_model(name, p: ModelParams, T):
    """Evaluate a registered closed form.

    Raises
    ------
    PresetMismatch
        ``p`` violates the entry's preset constraints.
    BranchInvalid
        ``p`` lies outside the entry's validity region.
    """
    try:
        entry = MODELS[name]
    except KeyError:
        raise NoClosedForm(f"unknown formula {name!r}; known: {', '.join(MODELS)}") from None
    if T is None or T <= 0:
        raise ZeroTemperature("closed-form concurrences need T > 0")
    if not check_preset(p, entry.preset):
        raise PresetMismatch(f"{p} does not satisfy preset {entry.preset}")
    if not entry.valid(p, T):
        raise BranchInvalid(f"{name} requires {entry.region}")
    lams = np.sort(lambdas_general(p, T))[::-1]
    return ConcurrenceReport(lams, entry(p, T), f"model:{name}")
