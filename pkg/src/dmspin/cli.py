"""
Command-line front end.

    dmspin eval --model PureDM --D 1 --kT 1
    dmspin sweep --model XXZDMB --J 1 --jz 0.5 --B 2 --D 0.1 --sweep kT:0.01:3:100
    dmspin critical --model PureDM --D 1 --tag PureDM/Tc --free T --bracket 0.5:2
    dmspin evolve --model PureDM --D 1 --t 1.5707963 --basis 01
    dmspin figure 5 --out figs/
    dmspin selftest

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .critical import CriticalQuery, concurrence_at, critical_closed, critical_solve, zero_t_concurrence
from .dynamics import basis_index, check_swap_equivalence, evolution_operator, evolve_basis_closed_form
from .entanglement import MODELS, concurrence_general, concurrence_model, concurrence_numeric
from .errors import DMSpinError
from .hamiltonian import FIELDS, Preset, preset_params, sample_params
from .sweep import QUANTITIES, Axis, SweepSpec, reproduce_figure, run_sweep, to_csv, to_json, verify_sweep
from .thermal import density_matrix_analytic, density_matrix_numeric

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3

PARAM_FLAGS = FIELDS + ("J", "k", "hbar")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def read_config(path):
    """Flat ``key = value`` file; ``#`` starts a comment; ``sweep`` may repeat."""
    out = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{n}: expected key = value")
        key, value = key.strip().replace("-", "_"), value.strip()
        if key == "sweep":
            out.setdefault("sweep", []).append(value)
        else:
            out[key] = value
    return out


def _add_model_flags(p):
    p.add_argument("--config", help="key = value file; command-line flags take precedence")
    p.add_argument("--model", help="preset name: " + ", ".join(x.value for x in Preset))
    for f in PARAM_FLAGS:
        p.add_argument(f"--{f}", type=float, default=None)
    p.add_argument("--kT", type=float, default=None, help="temperature as an energy; 0 selects the ground state")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--verify", action="store_true", default=None)
    p.add_argument("--reproducible", action="store_true", default=None)


def build_parser():
    parser = _Parser(prog="dmspin", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("--version", action="version", version=f"dmspin {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="single-point evaluation")
    _add_model_flags(p)
    p.add_argument("--formula", help="registry formula to evaluate alongside the numeric value")

    p = sub.add_parser("sweep", help="1D or 2D parameter sweep")
    _add_model_flags(p)
    p.add_argument("--sweep", action="append", default=None, help="name:lo:hi:count (at most twice)")
    p.add_argument("--quantity", choices=QUANTITIES, default=None)
    p.add_argument("--formula", help="registry formula or closed-form critical tag")

    p = sub.add_parser("critical", help="closed-form and bisection critical values")
    _add_model_flags(p)
    p.add_argument("--tag", help="closed-form tag, e.g. PureDM/Tc")
    p.add_argument("--free", help="free parameter for bisection: T or a coupling/field name")
    p.add_argument("--bracket", help="lo:hi for bisection")
    p.add_argument("--criterion", choices=("onset", "branch"), default=None)

    p = sub.add_parser("evolve", help="unitary evolution and SWAP check")
    _add_model_flags(p)
    p.add_argument("--t", type=float, default=None, help="evolution time")
    p.add_argument("--basis", default=None, help="input basis state 00, 01, 10 or 11")

    p = sub.add_parser("figure", help="write the data behind a figure")
    p.add_argument("n", type=int, choices=range(1, 10), metavar="N")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--jz", type=float, default=None, help="XXZ anisotropy, required for figures 6 and 7")
    p.add_argument("--xyz", default=None, help="jx,jy,jz for figures 8 and 9, e.g. --xyz=-0.2,-0.6,-1 (the default)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--reproducible", action="store_true")

    p = sub.add_parser("selftest", help="random oracle-equivalence battery")
    p.add_argument("--draws", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _merge_config(args):
    if not getattr(args, "config", None):
        return args
    cfg = read_config(args.config)
    for key, value in cfg.items():
        if not hasattr(args, key):
            raise UsageError(f"unknown config key {key!r}")
        if getattr(args, key) is not None:
            continue  # flag wins
        if key == "sweep":
            setattr(args, key, value)
        elif key in PARAM_FLAGS + ("kT", "t"):
            setattr(args, key, float(value))
        elif key in ("verify", "reproducible"):
            setattr(args, key, value.lower() in ("1", "true", "yes", "on"))
        else:
            setattr(args, key, value)
    return args


def _params(args):
    if not args.model:
        raise UsageError("--model is required")
    try:
        preset = Preset(args.model)
    except ValueError:
        raise UsageError(f"unknown model {args.model!r}") from None
    kw = {f: getattr(args, f) for f in PARAM_FLAGS if getattr(args, f) is not None}
    return preset, preset_params(preset, **kw)


def _temperature(args, p, required=True):
    if args.kT is None:
        if required:
            raise UsageError("--kT is required")
        return None
    if args.kT < 0:
        raise UsageError("--kT must be >= 0")
    return args.kT / p.k


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _render(record, fmt):
    if fmt == "json":
        return json.dumps(record, indent=1, default=float) + "\n"
    return "".join(f"{k}={v}\n" for k, v in record.items())


def cmd_eval(args):
    preset, p = _params(args)
    T = _temperature(args, p)
    rec = {"model": preset.value, **p.as_dict(), "kT": args.kT}
    if T == 0:
        rec["zero_t_concurrence"] = zero_t_concurrence(p)
    else:
        rec["concurrence_numeric"] = concurrence_numeric(density_matrix_numeric(p, T)).value
        rec["concurrence_general"] = concurrence_general(p, T).value
        rec["rho_closed_vs_numeric"] = float(
            np.max(np.abs(density_matrix_analytic(p, T).matrix - density_matrix_numeric(p, T).matrix))
        )
    status = EXIT_OK
    if args.formula:
        if T == 0:
            raise UsageError("closed-form concurrences need kT > 0")
        rec["concurrence_model"] = concurrence_model(args.formula, p, T).value
        if args.verify and abs(rec["concurrence_model"] - rec["concurrence_numeric"]) > 1e-8:
            status = EXIT_VERIFY
    if args.verify and T and abs(rec["concurrence_general"] - rec["concurrence_numeric"]) > 1e-8:
        status = EXIT_VERIFY
    _emit(_render(rec, args.format), args.out)
    return status


def cmd_sweep(args):
    preset, p = _params(args)
    if not args.sweep:
        raise UsageError("at least one --sweep name:lo:hi:count is required")
    if len(args.sweep) > 2:
        raise UsageError("--sweep may be given at most twice")
    axes = tuple(Axis.parse(s) for s in args.sweep)
    T = None
    if not any(a.name in ("T", "kT") for a in axes):
        T = _temperature(args, p, required=args.quantity not in ("zero_t_concurrence",))
    spec = SweepSpec(preset, p, axes, args.quantity or "concurrence_numeric", T=T, model=args.formula)
    result = run_sweep(spec)
    fmt = args.format or "csv"
    text = to_csv(result, bool(args.reproducible)) if fmt == "csv" else to_json(result, bool(args.reproducible))
    _emit(text, args.out)
    if args.verify:
        failures = verify_sweep(spec, result)
        for row, dev in failures:
            print(f"verify: deviation {dev:.3e} at {row[:-2]}", file=sys.stderr)
        if failures:
            return EXIT_VERIFY
    return EXIT_OK


def cmd_critical(args):
    preset, p = _params(args)
    T = _temperature(args, p, required=False)
    if not args.tag and not args.free:
        raise UsageError("give --tag for a closed form and/or --free with --bracket for bisection")
    rec = {"model": preset.value}
    if args.tag:
        rec["closed_form"] = critical_closed(args.tag, p, T)
    if args.free:
        if not args.bracket:
            raise UsageError("--bracket lo:hi is required with --free")
        lo, hi = (float(x) for x in args.bracket.split(":"))
        q = CriticalQuery(preset, args.free, p, (lo, hi), T=T, criterion=args.criterion or "onset")
        rec["bisection"] = critical_solve(q)
    status = EXIT_OK
    if args.verify and "closed_form" in rec and "bisection" in rec:
        if abs(rec["closed_form"] - rec["bisection"]) > 1e-5:
            status = EXIT_VERIFY
    _emit(_render(rec, args.format), args.out)
    return status


def cmd_evolve(args):
    preset, p = _params(args)
    if args.t is None:
        raise UsageError("--t is required")
    gate = check_swap_equivalence(p, args.t)
    rec = {
        "model": preset.value,
        "t": args.t,
        "swap_equivalent": gate.verdict,
        "swap_phases": " ".join(format(x, ".12g") for x in gate.phase_profile),
        "swap_max_deviation": gate.max_deviation,
    }
    if args.basis is not None:
        i = basis_index(args.basis)
        col = evolution_operator(p, args.t)[:, i]
        rec["image"] = " ".join(f"{z.real:.12g}{z.imag:+.12g}j" for z in col)
        if p.B == 0 and p.b == 0:
            dev = float(np.max(np.abs(col - evolve_basis_closed_form(p, args.t, i))))
            rec["closed_form_deviation"] = dev
            if args.verify and dev > 1e-10:
                _emit(_render(rec, args.format), args.out)
                return EXIT_VERIFY
    _emit(_render(rec, args.format), args.out)
    return EXIT_OK


def cmd_figure(args):
    kw = {"jz": args.jz}
    if args.xyz:
        try:
            kw["xyz"] = tuple(float(x) for x in args.xyz.split(","))
            assert len(kw["xyz"]) == 3
        except (ValueError, AssertionError):
            raise UsageError("--xyz expects three comma-separated numbers") from None
    written = reproduce_figure(args.n, args.out, fmt=args.format, reproducible=args.reproducible, **kw)
    for path in written:
        print(path)
    return EXIT_OK


def selftest(draws=200, seed=0):
    """Compare every closed form with the numeric path on random draws.

    Returns ``{check name: worst deviation}``.
    """
    rng = np.random.default_rng(seed)
    worst = {"rho": 0.0, "lambdas_general": 0.0}
    for _ in range(draws):
        p = sample_params(Preset.XYZ_DM, rng).replace(B=rng.uniform(-5, 5), b=rng.uniform(-5, 5))
        T = rng.uniform(0.05, 10)
        rho_n = density_matrix_numeric(p, T)
        d = np.max(np.abs(density_matrix_analytic(p, T).matrix - rho_n.matrix))
        worst["rho"] = max(worst["rho"], float(d))
        c = abs(concurrence_general(p, T).value - concurrence_numeric(rho_n, validate=False).value)
        worst["lambdas_general"] = max(worst["lambdas_general"], c)
    per_model = max(1, draws // 10)
    for name, entry in MODELS.items():
        w, hits = 0.0, 0
        for _ in range(1000 * per_model):
            if hits == per_model:
                break
            p = sample_params(entry.preset, rng)
            T = rng.uniform(0.05, 10)
            if not entry.valid(p, T):
                continue
            hits += 1
            w = max(w, abs(entry(p, T) - concurrence_at(p, T)))
        worst[f"model:{name}"] = w
    return worst


def cmd_selftest(args):
    worst = selftest(args.draws, args.seed)
    limits = {"rho": 1e-10}
    ok = True
    for name, dev in worst.items():
        good = dev <= limits.get(name, 1e-9)
        ok &= good
        print(f"{'PASS' if good else 'FAIL'} {name} max deviation {dev:.2e}")
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {
    "eval": cmd_eval,
    "sweep": cmd_sweep,
    "critical": cmd_critical,
    "evolve": cmd_evolve,
    "figure": cmd_figure,
    "selftest": cmd_selftest,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _merge_config(args)
        return COMMANDS[args.command](args)
    except OSError as exc:
        print(f"dmspin: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, DMSpinError, ValueError, KeyError) as exc:
        print(f"dmspin: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
