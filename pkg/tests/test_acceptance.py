"""Acceptance criteria, each at its stated tolerance.

Every test records one ``PASS``/``FAIL`` line; the lines are printed in the
pytest terminal summary and also when this file is run as a script.
"""

import math

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from dmspin.critical import CriticalQuery, critical_closed, critical_solve, qpt_scan, zero_t_concurrence
from dmspin.dynamics import check_swap_equivalence, entangling_power_profile
from dmspin.entanglement import (
    MODELS,
    concurrence_general,
    concurrence_model,
    concurrence_numeric,
    thermal_concurrence,
    xy_f_text_variant,
)
from dmspin.errors import NoRoot
from dmspin.hamiltonian import ModelParams, Preset, preset_params, sample_params
from dmspin.sweep import figure_specs, run_sweep
from dmspin.thermal import density_matrix_analytic, density_matrix_numeric

P = Preset


def record(label, checks):
    """``checks`` is a list of (description, ok) pairs; emit one line, then assert."""
    failed = [d for d, ok in checks if not ok]
    status = "FAIL" if failed else "PASS"
    detail = "; ".join(d for d, _ in checks) if not failed else "failed: " + "; ".join(failed)
    line = f"{status} {label}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not failed, line


# 1 -------------------------------------------------------------------------
def test_criterion_1_oracle_equivalence():
    rng = np.random.default_rng(1)
    worst_rho = worst_c = 0.0
    for _ in range(1000):
        p = ModelParams(*rng.uniform(-5, 5, 6))
        T = rng.uniform(0.05, 10)
        rho_n = density_matrix_numeric(p, T)
        worst_rho = max(worst_rho, float(np.max(np.abs(density_matrix_analytic(p, T).matrix - rho_n.matrix))))
        c_n = concurrence_numeric(rho_n, validate=False).value
        worst_c = max(worst_c, abs(concurrence_general(p, T).value - c_n))
    record(
        "criterion 1 (oracle equivalence, 1000 draws)",
        [(f"max |rho_closed - rho_numeric| = {worst_rho:.1e} <= 1e-10", worst_rho <= 1e-10),
         (f"max |C_general - C_numeric| = {worst_c:.1e} <= 1e-9", worst_c <= 1e-9)],
    )


# 2 -------------------------------------------------------------------------
def test_criterion_2_model_formulas():
    rng = np.random.default_rng(2)
    checks = []
    for name, entry in MODELS.items():
        worst, hits = 0.0, 0
        while hits < 50:
            p = sample_params(entry.preset, rng)
            T = rng.uniform(0.05, 10)
            if not entry.valid(p, T):
                continue
            hits += 1
            worst = max(worst, abs(concurrence_model(name, p, T).value - thermal_concurrence(p, T)))
        checks.append((f"{name} {worst:.0e}", worst <= 1e-9))
    record(f"criterion 2 (registry, {len(MODELS)} entries x 50 draws, tol 1e-9)", checks)


# 3 -------------------------------------------------------------------------
def test_criterion_3_pure_dm():
    p = preset_params(P.PURE_DM, D=1.0)
    tc = critical_solve(CriticalQuery(P.PURE_DM, "T", p, (0.5, 2.0)))
    c0 = zero_t_concurrence(p)
    c1 = thermal_concurrence(p, 1.0)
    exact = (math.sinh(1) - 1) / (math.cosh(1) + 1)
    record(
        "criterion 3 (pure DM)",
        [(f"bisection Tc = {tc:.6f} vs 1/ln(1+sqrt2) = {1 / math.log(1 + math.sqrt(2)):.6f}",
          abs(tc - 1 / math.log(1 + math.sqrt(2))) <= 1e-3),
         (f"C(T=0) = {c0!r}", c0 == 1.0),
         (f"|C(kT=1) - (sinh1-1)/(cosh1+1)| = {abs(c1 - exact):.1e}", abs(c1 - exact) <= 1e-12)],
    )


# 4 -------------------------------------------------------------------------
def test_criterion_4_gates():
    D = 1.0
    t_swap = math.pi / (2 * D)
    checks = [("PureDM SWAP at pi hbar/2D", check_swap_equivalence(preset_params(P.PURE_DM, D=D), t_swap).verdict)]
    for n in (1, -1, 2, -2):
        g = check_swap_equivalence(ModelParams(jz=8 * n * D, D=D), t_swap)
        checks.append((f"IsingDM Jz={8 * n}D SWAP", g.verdict))
    for s in ("01", "10"):
        (_, c), = entangling_power_profile(preset_params(P.PURE_DM, D=D), s, [math.pi / (4 * D)])
        checks.append((f"Bell from |{s}> C={c:.12f}", abs(c - 1) <= 1e-10))
    record("criterion 4 (gate checks)", checks)


# 5 -------------------------------------------------------------------------
def _draws(rng, make, n=50):
    out = []
    while len(out) < n:
        item = make(rng)
        if item is not None:
            out.append(item)
    return out


def _closed_vs_solve(tag, cases):
    worst = 0.0
    for query, T in cases:
        closed = critical_closed(tag, query.params, T)
        worst = max(worst, abs(closed - critical_solve(query)))
    return worst


def test_criterion_5_closed_vs_bisection():
    rng = np.random.default_rng(5)
    cases = {}

    def tc_case(preset, J=False):
        def make(r):
            if preset is P.PURE_DM:
                p = preset_params(preset, D=r.uniform(0.1, 5))
            elif preset is P.XX_DM:
                p = preset_params(preset, J=r.uniform(-5, 5), D=r.uniform(-5, 5))
            else:
                p = preset_params(preset, J=r.uniform(0.1, 5))
            return CriticalQuery(preset, "T", p, (0.01, 50.0)), None

        return make

    cases["PureDM/Tc"] = _draws(rng, tc_case(P.PURE_DM))
    cases["XXDM/Tc"] = _draws(rng, tc_case(P.XX_DM))
    cases["XXX/Tc"] = _draws(rng, tc_case(P.XXX))

    def ising(sign):
        def make(r):
            p = ModelParams(jz=sign * r.uniform(0.1, 5))
            T = r.uniform(0.1, 5)
            return CriticalQuery(P.ISING_DM, "D", p, (0.0, 50.0), T=T), T

        return make

    cases["IsingDM-AF/Dc"] = _draws(rng, ising(+1))
    cases["IsingDM-F/Dc"] = _draws(rng, ising(-1))

    def xxx_dm(r):
        p = preset_params(P.XXX_DM, J=r.uniform(-5, 5))
        T = r.uniform(0.1, 5)
        try:
            critical_closed("XXXDM/Dc", p, T)
        except NoRoot:
            return None
        return CriticalQuery(P.XXX_DM, "D", p, (0.0, 50.0), T=T), T

    cases["XXXDM/Dc"] = _draws(rng, xxx_dm)

    def xxz_dm(r):
        jz = -r.uniform(0.2, 5)
        p = preset_params(P.XXZ_DM, J=r.uniform(-1, 1) * abs(jz) * 0.95, jz=jz)
        return CriticalQuery(P.XXZ_DM, "D", p, (0.0, 20.0), T=0), 0

    cases["XXZDM/Dc"] = _draws(rng, xxz_dm)

    def xyz_f(r):
        jx, jy, jz = sorted(-r.uniform(0.05, 5, 3), reverse=True)
        if not jz < jy < jx < 0:
            return None
        T = r.uniform(0.05, 5)
        p = ModelParams(jx=jx, jy=jy, jz=jz)
        return CriticalQuery(P.XYZ_DM, "D", p, (0.0, 20.0), T=T, criterion="branch"), None

    cases["XYZDM-F/Dc"] = _draws(rng, xyz_f)

    def nuclear(r):
        p = ModelParams(jz=r.choice([-1, 1]) * r.uniform(0.1, 3), B=r.uniform(-3, 3), b=r.uniform(-3, 3))
        T = r.uniform(0.1, 3)
        return CriticalQuery(P.NUCLEAR_SPIN_ISING_DM, "D", p, (0.0, 50.0), T=T), T

    cases["NuclearSpinIsingDM/Dc"] = _draws(rng, nuclear)

    checks = []
    for tag, cs in cases.items():
        w = _closed_vs_solve(tag, cs)
        checks.append((f"{tag} {w:.0e}", w <= 1e-5))
    record("criterion 5 (closed form vs bisection, 50 draws each, tol 1e-5)", checks)


# 6 -------------------------------------------------------------------------
def test_criterion_6_step_functions():
    checks = []
    # transverse Ising, J = 1, B = 1
    tfi = preset_params(P.TRANSVERSE_ISING_DM, J=1.0, B=1.0)
    (bp,) = qpt_scan(P.TRANSVERSE_ISING_DM, tfi, "D", np.linspace(0, 2, 41)).breakpoints
    checks.append((f"TFI Dc = {bp.x:.9f}", abs(bp.x - 1) <= 1e-6))
    checks.append((f"TFI left {bp.left:.10f} = 1/sqrt2", abs(bp.left - 1 / math.sqrt(2)) <= 1e-10))
    checks.append((f"TFI right {bp.right:.10f} = 1", abs(bp.right - 1) <= 1e-10))
    # zero at the boundary: the degenerate-lambda point D = Dc(B, T) as T -> 0+
    along = max(thermal_concurrence(tfi.replace(D=critical_closed("TransverseIsingDM/Dc", tfi, T)), T)
                for T in (0.02, 0.01, 0.005))
    checks.append((f"TFI C(Dc(B,T), T -> 0+) = {along:.1e}", along <= 1e-10))
    # the exact T = 0 equal ground mixture is (1 - 1/sqrt2)/2 instead (see notes)
    checks.append((f"TFI ground-mixture boundary {bp.boundary:.10f}",
                   abs(bp.boundary - (1 - 1 / math.sqrt(2)) / 2) <= 1e-10))

    # XXZ with DM and field, J = 1, Jz = 0.5, B = 2
    x = preset_params(P.XXZ_DMB, J=1.0, jz=0.5, B=2.0)
    (bp,) = qpt_scan(P.XXZ_DMB, x, "D", np.linspace(0, 3, 31)).breakpoints
    checks.append((f"XXZDMB Dc = {bp.x:.6f} vs 1.118", abs(bp.x - 1.118) <= 1e-3))
    checks.append((f"XXZDMB 1/0.5/0 = {bp.right:.10f}/{bp.boundary:.10f}/{bp.left:.10f}",
                   abs(bp.right - 1) <= 1e-10 and abs(bp.boundary - 0.5) <= 1e-10 and abs(bp.left) <= 1e-10))

    # nuclear-spin Ising with DM, both exchange signs
    for jz in (1.0, -1.0):
        n = ModelParams(jz=jz, B=2.0, b=0.5)
        (bp,) = qpt_scan(P.NUCLEAR_SPIN_ISING_DM, n, "D", np.linspace(0, 4, 41)).breakpoints
        x0 = bp.x
        nu = lambda d: math.hypot(d, n.b)  # noqa: E731
        xr = x0 + 1e-7
        ok = (abs(x0 - critical_closed("NuclearSpinIsingDM/Dc0", n)) <= 1e-6
              and abs(bp.right - xr / nu(xr)) <= 1e-10
              and abs(bp.boundary - x0 / (2 * nu(x0))) <= 1e-10
              and abs(bp.left) <= 1e-10)
        checks.append((f"nuclear Jz={jz:+g}: D/nu={bp.right:.6f}, D/2nu={bp.boundary:.6f}, 0", ok))
    record("criterion 6 (T = 0 step functions)", checks)


# 7 -------------------------------------------------------------------------
def test_criterion_7a_fig5a_interior_maximum():
    c = run_sweep(figure_specs(5)["a"]).values()
    i = int(np.argmax(c))
    record("criterion 7a (Fig. 5a rises from 0 then falls)",
           [(f"C(kT_min)={c[0]:.1e}, max {c[i]:.3f} at index {i}/{len(c) - 1}, C(kT_max)={c[-1]:.1e}",
             c[0] < 1e-6 and 0 < i < len(c) - 1 and c[i] > c[0] + 0.1 and c[i] > c[-1] + 0.1)])


def test_criterion_7b_fig8_zero_interval():
    dc = critical_closed("XYZDM-F/Dc", ModelParams(jx=-0.2, jy=-0.6, jz=-1.0))
    widths, contains = [], []
    for panel, spec in figure_specs(8).items():
        res = run_sweep(spec)
        d, c = res.column("D"), res.values()
        zero = d[c <= 1e-12]
        widths.append(zero.max() - zero.min() if len(zero) else -1.0)
        contains.append(len(zero) > 0 and zero.min() <= dc <= zero.max())
    record("criterion 7b (Fig. 8 zero interval contains Dc and widens with T)",
           [(f"Dc={dc:.4f} inside every zero interval", all(contains)),
            (f"widths {', '.join(f'{w:.3f}' for w in widths)} increasing", all(np.diff(widths) > 0))])


@pytest.mark.xfail(strict=True, reason="the plotted D_c(B,T) decreases with T; see README 'Known discrepancies'")
def test_criterion_7c_fig2_dc_increasing():
    checks = []
    for panel, spec in figure_specs(2).items():
        v = run_sweep(spec).values()
        v = v[np.isfinite(v)]
        checks.append((f"{panel}: Dc from {v[0]:.3f} to {v[-1]:.3f}", bool(np.all(np.diff(v) > 0))))
    record("criterion 7c (Fig. 2 Dc(T) increasing in T)", checks)


# 8 -------------------------------------------------------------------------
def test_criterion_8_xxz_dm_equivalence():
    worst = 0.0
    for J in np.linspace(0.1, 3, 20):
        for D in np.linspace(0, 3, 20):
            for jz, T in ((-1.5, 0.5), (0.7, 1.3)):
                a = thermal_concurrence(preset_params(P.XXZ_DM, J=J, jz=jz, D=D), T)
                b = thermal_concurrence(preset_params(P.XXZ, J=math.hypot(J, D), jz=jz), T)
                worst = max(worst, abs(a - b))
    record("criterion 8 (XXZ+DM equals XXZ with J' = sqrt(J^2 + D^2), 20x20 grid)",
           [(f"max deviation {worst:.1e} <= 1e-10", worst <= 1e-10)])


# 9 -------------------------------------------------------------------------
def test_criterion_9_inconsistent_variants():
    rng = np.random.default_rng(9)
    disp = text = 0.0
    for _ in range(200):
        p = sample_params(P.XY, rng, low=-5, high=0)
        T = rng.uniform(0.05, 5)
        c = thermal_concurrence(p, T)
        disp = max(disp, abs(concurrence_model("XY-F", p, T).value - c))
        text = max(text, abs(xy_f_text_variant(p, T) - c))
    bcs = []
    for D in (0.0, 2.0):
        x = preset_params(P.XXZ_DMB, J=1.0, jz=1.0, D=D)
        (bp,) = qpt_scan(P.XXZ_DMB, x, "B", np.linspace(0, 4, 41)).breakpoints
        bcs.append(bp.x)
    record(
        "criterion 9 (competing closed forms checked against the numeric oracle)",
        [(f"ferromagnetic XY: displayed form matches ({disp:.0e}), inline-condition form does not ({text:.2f})",
          disp <= 1e-9 and text > 0.1),
         (f"B_c = sqrt(D^2+J^2)+Jz with J = Jz = 1: scan gives {bcs[0]:.6f}, {bcs[1]:.6f}",
          abs(bcs[0] - 2) <= 1e-6 and abs(bcs[1] - (1 + math.sqrt(5))) <= 1e-6)],
    )


if __name__ == "__main__":  # pragma: no cover
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
