"""Forward-induction calibration of BDT and ZBDT rate trees.

Column ``i`` of the tree is lognormal in the regular states,
``r[i, j] = base * exp(log_spacing * (j - 1))``, and is fitted to the
maturity ``m = i + 1`` bond with two conditions:

* the root price of the ``m``-year bond equals the market price;
* half the log-ratio of that bond's annual yields at nodes (1, 2) and (1, 1)
  equals the market yield volatility for maturity ``m``.

The zero-rate state is excluded from the volatility condition. Each column is
solved by nesting two bracketing root finders: the outer one on the log
spacing, the inner one on the base rate. State prices seen from the root,
from (1, 1) and from (1, 2) are rolled forward one column at a time, so each
residual evaluation is linear in the column size.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .lattice import Model, RateTree, ZbdtParams
from .market_data import TermStructure, market_zc_price


class CalibrationError(RuntimeError):
    """A column could not be fitted; ``report`` holds the columns solved so far."""

    def __init__(self, message, column=None, report=None):
        super().__init__(message)
        self.column = column
        self.report = report


@dataclass(frozen=True)
class CalibrationSettings:
    price_tol: float = 1e-10  # multiplied by the face value
    vol_tol: float = 1e-12
    max_iter: int = 200
    rate_bounds: tuple[float, float] = (1e-9, 1.0)
    # bracket on log(r[i, j+1] / r[i, j]); 0 is the zero-volatility column
    spacing_bounds: tuple[float, float] = (0.0, 2.0)

    def __post_init__(self):
        if self.price_tol <= 0 or self.vol_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        for name in ("rate_bounds", "spacing_bounds"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                raise ValueError(f"{name} must be ordered, got {(lo, hi)}")


@dataclass
class ColumnFit:
    period: int
    maturity: int
    base_rate: float
    log_spacing: float
    price_residual: float
    vol_residual: float | None
    outer_iterations: int = 0
    inner_iterations: int = 0


@dataclass
class CalibrationReport:
    model: str
    columns: list[ColumnFit] = field(default_factory=list)
    converged: bool = False
    reference_deviation: dict | None = None

    @property
    def iterations(self) -> int:
        return sum(c.outer_iterations + c.inner_iterations for c in self.columns)

    @property
    def max_price_residual(self) -> float:
        return max((abs(c.price_residual) for c in self.columns), default=0.0)

    @property
    def max_vol_residual(self) -> float:
        return max((abs(c.vol_residual) for c in self.columns if c.vol_residual is not None),
                   default=0.0)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "converged": self.converged,
            "iterations": self.iterations,
            "max_price_residual": self.max_price_residual,
            "max_vol_residual": self.max_vol_residual,
            "columns": [asdict(c) for c in self.columns],
            "reference_deviation": self.reference_deviation,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


class _ColumnProblem:
    """Residuals for one column given the state prices that reach it."""

    def __init__(self, i, fv, x0, q_root, q_down, q_up, target_price, target_vol):
        self.i = i
        self.fv = fv
        self.x0 = x0
        self.q_root = q_root
        self.q_down = q_down
        self.q_up = q_up
        self.target_price = target_price
        self.target_vol = target_vol
        self.exponent = np.arange(i + 1, dtype=float)
        self.inner_iterations = 0

    def price(self, qv, base, log_spacing):
        rates = base * np.exp(log_spacing * self.exponent)
        total = qv[0] / (1.0 + self.x0) + np.sum(qv[1 : self.i + 2] / (1.0 + rates))
        return self.fv * total

    def solve_base(self, log_spacing, settings):
        lo, hi = settings.rate_bounds

        def f(base):
            return self.price(self.q_root, base, log_spacing) - self.target_price

        f_lo, f_hi = f(lo), f(hi)
        if f_lo < 0:
            raise CalibrationError(
                f"period {self.i}: market price {self.target_price:.10g} needs a base rate "
                f"below {lo:g} (price at the lower bound is {f_lo + self.target_price:.10g}); "
                "the curve implies a non-positive forward rate"
                + ("" if self.q_root[0] == 0 else " or the zero-rate branch is too heavy"),
                column=self.i,
            )
        if f_hi > 0:
            raise CalibrationError(
                f"period {self.i}: market price needs a base rate above {hi:g}", column=self.i
            )
        if f_lo == 0:
            return lo
        if f_hi == 0:
            return hi
        base, res = brentq(f, lo, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps,
                           maxiter=settings.max_iter, full_output=True)
        self.inner_iterations += res.iterations
        return base

    def implied_vol(self, base, log_spacing):
        m = self.i + 1
        b_down = self.price(self.q_down, base, log_spacing)
        b_up = self.price(self.q_up, base, log_spacing)
        y_down = (self.fv / b_down) ** (1.0 / (m - 1)) - 1.0
        y_up = (self.fv / b_up) ** (1.0 / (m - 1)) - 1.0
        if y_down <= 0 or y_up <= 0:
            return math.nan
        return 0.5 * math.log(y_up / y_down)

    def vol_residual(self, log_spacing, settings):
        base = self.solve_base(log_spacing, settings)
        return self.implied_vol(base, log_spacing) - self.target_vol


def _calibrate(ts: TermStructure, model: Model, params: ZbdtParams | None,
               settings: CalibrationSettings, backend: str | None):
    if any(y <= 0 for y in ts.yields):
        raise ValueError("calibration needs strictly positive yields")
    T = ts.horizon
    fv = ts.face_value
    zbdt = model is Model.ZBDT
    p, q, x0 = (params.p, params.q, params.x0) if zbdt else (0.0, 0.0, 0.0)
    step = kernels.get_backend(backend).forward_step
    report = CalibrationReport(model.value)

    width = T + 2
    rates = np.zeros((T, width))
    if zbdt:
        rates[1:, 0] = x0
    rates[0, 1] = ts.yields[0]
    root_price = fv / (1.0 + rates[0, 1])
    report.columns.append(ColumnFit(0, 1, rates[0, 1], 0.0,
                                    root_price - market_zc_price(ts, 1), None))

    q_root = np.zeros(width)
    q_root[1] = 1.0
    q_down = np.zeros(width)
    q_up = np.zeros(width)
    scratch = np.zeros(width)
    for i in range(1, T):
        step(q_root, rates[i - 1], i - 1, p, q, zbdt, scratch)
        q_root, scratch = scratch, q_root
        if i == 1:
            q_down[1] = 1.0
            q_up[2] = 1.0
        else:
            step(q_down, rates[i - 1], i - 1, p, q, zbdt, scratch)
            q_down, scratch = scratch, q_down
            step(q_up, rates[i - 1], i - 1, p, q, zbdt, scratch)
            q_up, scratch = scratch, q_up

        m = i + 1
        prob = _ColumnProblem(i, fv, x0, q_root, q_down, q_up,
                              market_zc_price(ts, m), ts.vols[m - 1])
        try:
            log_spacing, outer = _solve_spacing(prob, settings)
            base = prob.solve_base(log_spacing, settings)
        except CalibrationError as exc:
            exc.report = report
            raise
        price_res = prob.price(q_root, base, log_spacing) - prob.target_price
        vol_res = prob.implied_vol(base, log_spacing) - prob.target_vol
        report.columns.append(ColumnFit(i, m, base, log_spacing, price_res, vol_res,
                                        outer, prob.inner_iterations))
        if abs(price_res) > settings.price_tol * fv:
            raise CalibrationError(
                f"period {i}: price residual {price_res:.3e} above tolerance", i, report)
        if prob.target_vol > 0 and not abs(vol_res) <= settings.vol_tol:
            raise CalibrationError(
                f"period {i}: volatility residual {vol_res:.3e} above tolerance", i, report)
        rates[i, 1 : i + 2] = base * np.exp(log_spacing * prob.exponent)

    report.converged = True
    dense = np.full((T, T + 1), np.nan)
    for i in range(T):
        dense[i, 1 : i + 2] = rates[i, 1 : i + 2]
    if zbdt:
        dense[1:, 0] = x0
    tree = RateTree(model, dense, params if zbdt else None, fv)
    return tree, report


def _residual_or_none(prob, log_spacing, settings):
    try:
        g = prob.vol_residual(log_spacing, settings)
    except CalibrationError:
        return None
    return None if math.isnan(g) else g


def _bracket_spacing(prob, lo, g_lo, hi, settings):
    """Upper end with a positive residual, pulled in below any infeasible spacing.

    A wide spacing can leave no base rate that prices the bond (the top rates
    explode), so the top of the bracket is bisected towards the feasible side.
    """
    infeasible = None
    for _ in range(200):
        g = _residual_or_none(prob, hi, settings)
        if g is None:
            infeasible = hi
        elif g > 0:
            return lo, hi, g
        else:
            lo, g_lo = hi, g
            if infeasible is None:
                break
        if infeasible is None or infeasible - lo <= 1e-15 * max(1.0, lo):
            break
        hi = 0.5 * (lo + infeasible)
    return lo, hi, g if g is not None else math.nan


def _solve_spacing(prob: _ColumnProblem, settings: CalibrationSettings):
    if prob.target_vol == 0.0:
        return 0.0, 0
    lo, hi = settings.spacing_bounds
    g_lo = prob.vol_residual(lo, settings)
    if g_lo == 0.0:
        return lo, 0
    a, b, g_hi = (lo, hi, math.nan) if not g_lo < 0 else _bracket_spacing(
        prob, lo, g_lo, hi, settings)
    if not (g_lo < 0 and g_hi > 0):
        raise CalibrationError(
            f"period {prob.i}: volatility {prob.target_vol:.6g} not attainable with log "
            f"spacing in [{lo:g}, {hi:g}] (residuals {g_lo:.3e}, {g_hi:.3e})",
            column=prob.i,
        )
    spacing, res = brentq(prob.vol_residual, a, b, args=(settings,), xtol=1e-15,
                          rtol=4 * np.finfo(float).eps, maxiter=settings.max_iter,
                          full_output=True)
    return spacing, res.iterations


def calibrate_bdt(ts: TermStructure, settings: CalibrationSettings | None = None, *,
                  reference=None, backend: str | None = None):
    """Calibrate a BDT tree; returns ``(tree, report)``.

    ``reference`` optionally holds published rate columns (decimal fractions,
    bottom to top); the report then carries per-node deviations.
    """
    settings = settings or CalibrationSettings()
    tree, report = _calibrate(ts, Model.BDT, None, settings, backend)
    if reference is not None:
        report.reference_deviation = rate_deviation(tree, reference)
    return tree, report


def calibrate_zbdt(ts: TermStructure, params: ZbdtParams,
                   settings: CalibrationSettings | None = None, *, reference=None,
                   backend: str | None = None):
    """Calibrate a ZBDT tree with the zero-rate state pinned at ``params.x0``."""
    settings = settings or CalibrationSettings()
    tree, report = _calibrate(ts, Model.ZBDT, params, settings, backend)
    if reference is not None:
        report.reference_deviation = rate_deviation(tree, reference)
    return tree, report


def rate_deviation(tree: RateTree, reference) -> dict:
    """Model minus reference rates in percentage points, per period."""
    cols = []
    worst = 0.0
    for i, ref in enumerate(reference[: tree.horizon]):
        diff = (tree.column(i) - np.asarray(ref, dtype=float)) * 100.0
        worst = max(worst, float(np.max(np.abs(diff))))
        cols.append([round(float(d), 6) for d in diff])
    return {"units": "percentage points", "max_abs": worst, "columns": cols}
