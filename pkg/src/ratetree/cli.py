"""Command-line front end.

Rates, yields and vols are percentages in files; inside the program they are
decimal fractions. ``--x0`` is a decimal fraction (``0.0025`` is 0.25%).
``--curve`` takes a CSV path or one of the built-in names ``example`` and
``real-case``; built-in curves default to their published ZBDT parameters.

Exit codes: 0 success, 2 validation error, 3 solver failure, 4 option-spec error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .bonds import bond_tree
from .calibration import CalibrationError, calibrate_bdt, calibrate_zbdt
from .implied_vol import ImpliedVolError, model_implied_vol
from .lattice import Model, ZbdtParams, load_rate_tree, rate_tree_csv, rate_tree_json
from .market_data import TermStructureError, parse_term_structure
from .payoffs import Family, Kind, OptionSpec, SpecError, Style
from .pricer import price
from .reference import CASES

EXIT_OK, EXIT_VALIDATION, EXIT_SOLVER, EXIT_SPEC = 0, 2, 3, 4


class UsageError(ValueError):
    pass


# --- argument plumbing --------------------------------------------------------

def _curve_args(p, model_choice=True):
    p.add_argument("--curve", help="term-structure CSV, or 'example' / 'real-case'")
    p.add_argument("--tree", help="saved rate-tree JSON instead of --curve")
    if model_choice:
        p.add_argument("--model", choices=[m.value for m in Model], default="bdt")
    p.add_argument("--p", type=float, help="ZBDT jump probability into the zero-rate state")
    p.add_argument("--q", type=float, help="ZBDT exit probability from the zero-rate state")
    p.add_argument("--x0", type=float, help="ZBDT zero-zone rate, decimal fraction")


def _spec_args(p, strike=True):
    p.add_argument("--style", choices=[s.value for s in Style], default="european")
    p.add_argument("--kind", choices=[k.value for k in Kind], default="call")
    p.add_argument("--family", choices=[f.value for f in Family], default="vanilla")
    if strike:
        p.add_argument("--strike", type=float, required=True)
    p.add_argument("--expiry", type=int, required=True)
    p.add_argument("--bond-maturity", type=int,
                   help="maturity of the underlying bond (default: tree horizon)")
    p.add_argument("--hi", type=float, help="upper barrier (bond price)")
    p.add_argument("--lo", type=float, help="lower barrier (bond price)")


def _grid_args(p):
    p.add_argument("--k-min", type=float, required=True)
    p.add_argument("--k-max", type=float, required=True)
    p.add_argument("--k-step", type=float, required=True)
    p.add_argument("--compare", action="store_true", help="run BDT and ZBDT side by side")
    p.add_argument("--out", default="-", help="output CSV path, '-' for stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ratetree", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("calibrate", help="calibrate a tree and write rate/bond trees")
    _curve_args(p)
    p.add_argument("--bond-maturity", type=int, help="bond tree maturity (default: horizon)")
    p.add_argument("--out", default="-", help="output directory, '-' for stdout")

    p = sub.add_parser("price", help="price one option")
    _curve_args(p)
    _spec_args(p)
    p.add_argument("--lattice", action="store_true", help="print the JSON value lattice")

    p = sub.add_parser("sweep", help="price over a strike grid")
    _curve_args(p)
    _spec_args(p, strike=False)
    _grid_args(p)
    p.add_argument("--mode", choices=["price", "implied-vol"], default="price")

    p = sub.add_parser("implied-vol", help="implied Black volatility of European vanilla prices")
    _curve_args(p)
    _spec_args(p, strike=False)
    p.add_argument("--strike", type=float, help="single strike (otherwise use the grid)")
    p.add_argument("--k-min", type=float)
    p.add_argument("--k-max", type=float)
    p.add_argument("--k-step", type=float)
    p.add_argument("--compare", action="store_true")
    p.add_argument("--out", default="-")

    p = sub.add_parser("reproduce", help="rerun the published Example and Real Case")
    p.add_argument("--case", choices=sorted(CASES) + ["all"], default="all")
    p.add_argument("--out", default="-", help="output directory, '-' for stdout")
    return parser


# --- shared helpers -----------------------------------------------------------

def _load_curve(name):
    if name is None:
        raise UsageError("--curve (or --tree) is required")
    if name in CASES:
        return CASES[name].curve, CASES[name].zbdt_params
    path = Path(name)
    if not path.is_file():
        raise UsageError(f"curve file {name!r} not found")
    return parse_term_structure(path.read_text(encoding="utf-8")), None


def _zbdt_params(args, default):
    given = [args.p, args.q, args.x0]
    if all(v is None for v in given):
        if default is None:
            raise UsageError("ZBDT needs --p, --q and --x0")
        return default
    if any(v is None for v in given):
        if default is None:
            raise UsageError("ZBDT needs all of --p, --q and --x0")
        given = [d if v is None else v for v, d in zip(given, (default.p, default.q, default.x0))]
    return ZbdtParams(*given)


def _trees(args, models):
    """Calibrated trees keyed by model name."""
    if args.tree:
        tree = load_rate_tree(Path(args.tree).read_text(encoding="utf-8"))
        if len(models) > 1:
            raise UsageError("--compare needs --curve, not a saved --tree")
        return {tree.model.value: tree}
    ts, default = _load_curve(args.curve)
    out = {}
    for model in models:
        if model == "bdt":
            out[model] = calibrate_bdt(ts)[0]
        else:
            out[model] = calibrate_zbdt(ts, _zbdt_params(args, default))[0]
    return out


def _models(args):
    if getattr(args, "compare", False):
        return ["bdt", "zbdt"]
    return [getattr(args, "model", "bdt")]


def _spec(args, tree, strike):
    return OptionSpec(
        kind=args.kind, strike=strike, expiry=args.expiry,
        maturity=args.bond_maturity or tree.horizon, style=args.style,
        family=args.family, upper=args.hi, lower=args.lo,
    )


def strike_grid(k_min, k_max, k_step):
    if k_step is None or k_min is None or k_max is None:
        raise UsageError("--k-min, --k-max and --k-step are required")
    if not k_step > 0 or k_max < k_min:
        raise UsageError("empty strike grid")
    n = int(np.floor((k_max - k_min) / k_step + 1e-9)) + 1
    return [round(k_min + i * k_step, 10) for i in range(n)]


def _open_out(target):
    if target == "-":
        return sys.stdout, False
    return open(target, "w", encoding="utf-8", newline=""), True


def _fmt(x):
    return repr(float(x))


def _write_rows(target, header, rows):
    fh, close = _open_out(target)
    try:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")
    finally:
        if close:
            fh.close()


# --- commands -----------------------------------------------------------------

def cmd_calibrate(args):
    ts, default = _load_curve(args.curve)
    try:
        if args.model == "bdt":
            tree, report = calibrate_bdt(ts)
        else:
            tree, report = calibrate_zbdt(ts, _zbdt_params(args, default))
    except CalibrationError as exc:
        print(f"calibration failed: {exc}", file=sys.stderr)
        if exc.report is not None:
            print(exc.report.to_json(), file=sys.stderr)
        return EXIT_SOLVER
    maturity = args.bond_maturity or tree.horizon
    bonds = bond_tree(tree, maturity)
    files = {
        f"{tree.model.value}_rates.csv": rate_tree_csv(tree),
        f"{tree.model.value}_rates.json": rate_tree_json(tree) + "\n",
        f"{tree.model.value}_bonds_T{maturity}.csv": bonds.to_csv(),
        f"{tree.model.value}_report.json": report.to_json() + "\n",
    }
    _emit_files(args.out, files)
    return EXIT_OK


def _emit_files(out, files):
    if out == "-":
        for name, text in files.items():
            sys.stdout.write(f"# {name}\n{text}")
        return
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (outdir / name).write_text(text, encoding="utf-8")


def cmd_price(args):
    (tree,) = _trees(args, _models(args)).values()
    result = price(tree, _spec(args, tree, args.strike))
    if args.lattice:
        print(result.to_json())
    else:
        print(_fmt(result.value))
    return EXIT_OK


def cmd_sweep(args):
    grid = strike_grid(args.k_min, args.k_max, args.k_step)
    models = _models(args)
    trees = _trees(args, models)
    if args.mode == "implied-vol":
        return _vol_sweep(args, trees, models, grid)
    rows = []
    for k in grid:
        rows.append([f"{k:g}"] + [_fmt(price(trees[m], _spec(args, trees[m], k)).value)
                                  for m in trees])
    header = ["K"] + ([f"price_{m}" for m in trees] if len(trees) > 1 else ["price"])
    _write_rows(args.out, header, rows)
    return EXIT_OK


def _vol_sweep(args, trees, models, grid):
    rows = []
    for k in grid:
        row = [f"{k:g}"]
        for m in trees:
            row.append(_fmt(model_implied_vol(trees[m], _spec(args, trees[m], k))))
        rows.append(row)
    header = ["K"] + ([f"sigma_{m}" for m in trees] if len(trees) > 1 else ["sigma"])
    _write_rows(args.out, header, rows)
    return EXIT_OK


def cmd_implied_vol(args):
    models = _models(args)
    trees = _trees(args, models)
    if args.strike is not None:
        for m, tree in trees.items():
            sigma = model_implied_vol(tree, _spec(args, tree, args.strike))
            print(f"{m},{_fmt(sigma)}" if len(trees) > 1 else _fmt(sigma))
        return EXIT_OK
    grid = strike_grid(args.k_min, args.k_max, args.k_step)
    return _vol_sweep(args, trees, models, grid)


def reproduce_case(case) -> tuple[dict, dict]:
    """Deviation report and output files for one published case."""
    bdt, bdt_report = calibrate_bdt(case.curve, reference=_pct_to_dec(case.bdt_rates))
    zbdt, zbdt_report = calibrate_zbdt(case.curve, case.zbdt_params,
                                       reference=_pct_to_dec(case.zbdt_rates))
    T = case.curve.horizon
    bdt_bonds = bond_tree(bdt, T)
    zbdt_bonds = bond_tree(zbdt, T)
    report = {
        "case": case.name,
        "market_prices": case.curve.market_prices(),
        "bdt": {
            "root_price": bdt_bonds.root,
            "max_price_residual": bdt_report.max_price_residual,
            "rate_deviation_pp": bdt_report.reference_deviation,
            "bond_deviation": _bond_deviation(bdt_bonds, case.bdt_bonds),
        },
        "zbdt": {
            "params": {"p": case.zbdt_params.p, "q": case.zbdt_params.q,
                       "x0": case.zbdt_params.x0},
            "root_price": zbdt_bonds.root,
            "max_price_residual": zbdt_report.max_price_residual,
            "rate_deviation_pp": zbdt_report.reference_deviation,
            "bond_deviation": _bond_deviation(zbdt_bonds, case.zbdt_bonds,
                                              case.zbdt_bond_zirp),
        },
    }
    files = {
        f"{case.name}_bdt_rates.csv": rate_tree_csv(bdt),
        f"{case.name}_bdt_rates.json": rate_tree_json(bdt) + "\n",
        f"{case.name}_bdt_bonds.csv": bdt_bonds.to_csv(),
        f"{case.name}_zbdt_rates.csv": rate_tree_csv(zbdt),
        f"{case.name}_zbdt_rates.json": rate_tree_json(zbdt) + "\n",
        f"{case.name}_zbdt_bonds.csv": zbdt_bonds.to_csv(),
    }
    return report, files


def _pct_to_dec(columns):
    return [[v / 100.0 for v in col] for col in columns]


def _bond_deviation(bonds, reference, zirp_reference=None):
    cols, worst = [], 0.0
    for i, ref in enumerate(reference):
        diff = bonds.column(i) - np.asarray(ref, dtype=float)
        worst = max(worst, float(np.max(np.abs(diff))))
        cols.append([round(float(d), 6) for d in diff])
    out = {"max_abs": worst, "columns": cols}
    if zirp_reference is not None:
        zd = [bonds.zirp(i + 1) - ref for i, ref in enumerate(zirp_reference)]
        out["zirp"] = [round(float(d), 6) for d in zd]
        out["zirp_max_abs"] = float(np.max(np.abs(zd)))
    return out


def cmd_reproduce(args):
    names = sorted(CASES) if args.case == "all" else [args.case]
    reports, files = [], {}
    for name in names:
        report, case_files = reproduce_case(CASES[name])
        reports.append(report)
        files.update(case_files)
    text = json.dumps(reports if len(reports) > 1 else reports[0], indent=2) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        files["deviation_report.json"] = text
        _emit_files(args.out, files)
        for rep in reports:
            print(f"{rep['case']}: BDT root {rep['bdt']['root_price']:.4f}, "
                  f"max rate dev {rep['bdt']['rate_deviation_pp']['max_abs']:.4f} pp; "
                  f"ZBDT root {rep['zbdt']['root_price']:.4f}, "
                  f"max rate dev {rep['zbdt']['rate_deviation_pp']['max_abs']:.4f} pp")
    return EXIT_OK


COMMANDS = {
    "calibrate": cmd_calibrate,
    "price": cmd_price,
    "sweep": cmd_sweep,
    "implied-vol": cmd_implied_vol,
    "reproduce": cmd_reproduce,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except SpecError as exc:
        print(f"option spec error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except CalibrationError as exc:
        print(f"calibration failed: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (UsageError, TermStructureError, ImpliedVolError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
