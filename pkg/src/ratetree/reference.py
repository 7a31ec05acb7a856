"""Published inputs and trees for the two worked cases.

``EXAMPLE``: a hypothetical ten-year S-shaped curve with decreasing vols.
``REAL_CASE``: the first five years of the US Treasury curve on 2020-02-14.

Tables are transcribed as rows of equal state ``j`` (bottom row first, each
row starting at period ``j - 1``) because that is how they are printed;
:func:`columns_from_rows` turns them into per-period columns. Values are in
percent for rates and currency for bond prices, at the printed two-decimal
precision.
"""
from __future__ import annotations

from dataclasses import dataclass

from .lattice import ZbdtParams
from .market_data import TermStructure


def columns_from_rows(rows):
    """Per-period columns (bottom to top) from state rows."""
    n = len(rows[0])
    cols = [[] for _ in range(n)]
    for j, row in enumerate(rows):
        for k, v in enumerate(row):
            cols[j + k].append(v)
    return cols


@dataclass(frozen=True)
class PublishedCase:
    name: str
    curve: TermStructure
    zbdt_params: ZbdtParams
    bdt_rates: list       # percent, per period
    zbdt_rates: list      # percent, per period (regular states)
    bdt_bonds: list       # per period, longest bond
    zbdt_bonds: list
    zbdt_bond_zirp: list  # zero-rate state bond prices, periods 1..T
    barriers: tuple[float, float]  # (lower, upper)
    expiry: int  # option expiry used for the strike sweeps; not printed for the real case


EXAMPLE = PublishedCase(
    name="example",
    curve=TermStructure.from_percent(
        [2.60, 2.50, 2.47, 2.48, 2.49, 2.53, 2.61, 2.74, 2.92, 3.17],
        [40.0, 34.0, 29.5, 28.9, 27.2, 26.0, 25.1, 24.2, 23.2, 23.1],
    ),
    zbdt_params=ZbdtParams(p=0.02, q=0.01, x0=0.0025),
    bdt_rates=columns_from_rows([
        [2.60, 1.62, 1.41, 0.94, 0.94, 0.82, 0.74, 0.75, 0.82, 0.52],
        [3.19, 2.28, 1.68, 1.48, 1.28, 1.15, 1.14, 1.22, 0.84],
        [3.71, 3.00, 2.32, 1.98, 1.78, 1.74, 1.80, 1.36],
        [5.34, 3.64, 3.08, 2.76, 2.65, 2.67, 2.22],
        [5.72, 4.79, 4.28, 4.03, 3.95, 3.61],
        [7.44, 6.64, 6.13, 5.85, 5.88],
        [10.30, 9.34, 8.66, 9.56],
        [14.22, 12.83, 15.56],
        [19.00, 25.32],
        [41.20],
    ]),
    zbdt_rates=columns_from_rows([
        [2.60, 1.32, 1.06, 0.57, 0.51, 0.40, 0.33, 0.35, 0.45, 0.26],
        [3.60, 2.08, 1.29, 1.00, 0.77, 0.64, 0.64, 0.74, 0.48],
        [4.77, 3.10, 2.08, 1.55, 1.26, 1.18, 1.27, 0.90],
        [7.47, 4.32, 3.13, 2.47, 2.20, 2.20, 1.70],
        [8.94, 6.29, 4.84, 4.09, 3.79, 3.21],
        [12.65, 9.51, 7.61, 6.55, 6.06],
        [18.66, 14.15, 11.32, 11.44],
        [26.30, 19.56, 21.60],
        [33.79, 40.79],
        [77.00],
    ]),
    bdt_bonds=columns_from_rows([
        [73.19, 79.93, 84.91, 88.91, 91.81, 94.18, 96.00, 97.39, 98.52, 99.49, 100],
        [70.26, 77.54, 83.30, 87.68, 91.18, 93.90, 96.02, 97.72, 99.17, 100],
        [67.46, 75.33, 81.72, 86.77, 90.78, 93.94, 96.50, 98.65, 100],
        [64.59, 73.46, 80.46, 86.20, 90.85, 94.65, 97.83, 100],
        [62.62, 71.80, 79.68, 86.32, 91.85, 96.51, 100],
        [60.60, 70.80, 79.87, 87.73, 94.45, 100],
        [59.43, 71.12, 81.82, 91.27, 100],
        [59.97, 73.71, 86.54, 100],
        [63.28, 79.80, 100],
        [70.82, 100],
        [100],
    ]),
    zbdt_bonds=columns_from_rows([
        [73.19, 81.82, 87.58, 91.77, 94.48, 96.40, 97.69, 98.56, 99.20, 99.75, 100],
        [67.45, 77.60, 84.86, 89.86, 93.37, 95.78, 97.42, 98.59, 99.53, 100],
        [62.16, 73.57, 82.06, 88.14, 92.41, 95.37, 97.48, 99.11, 100],
        [56.68, 69.64, 79.39, 86.61, 91.78, 95.51, 98.33, 100],
        [52.19, 65.91, 77.13, 85.72, 92.10, 96.89, 100],
        [47.80, 62.97, 76.01, 86.35, 94.29, 100],
        [44.73, 61.91, 77.24, 89.73, 100],
        [44.24, 64.10, 82.24, 100],
        [47.66, 71.03, 100],
        [56.50, 100],
        [100],
    ]),
    zbdt_bond_zirp=[97.53, 97.87, 98.18, 98.47, 98.74, 99.00, 99.25, 99.50, 99.75, 100],
    barriers=(70.0, 90.0),
    expiry=5,
)

REAL_CASE = PublishedCase(
    name="real-case",
    curve=TermStructure.from_percent(
        [1.49, 1.42, 1.40, 1.41, 1.42],
        [25.5, 39.8, 41.7, 41.6, 42.2],
    ),
    zbdt_params=ZbdtParams(p=0.1, q=0.01, x0=0.0025),
    bdt_rates=columns_from_rows([
        [1.49, 0.84, 0.48, 0.32, 0.17],
        [1.86, 1.14, 0.75, 0.42],
        [2.73, 1.72, 1.03],
        [3.96, 2.49],
        [6.05],
    ]),
    zbdt_rates=columns_from_rows([
        [1.49, 0.93, 0.66, 0.64, 0.30],
        [2.03, 1.19, 0.91, 0.61],
        [3.08, 1.93, 1.29],
        [4.07, 2.73],
        [5.77],
    ]),
    bdt_bonds=columns_from_rows([
        [93.19, 96.68, 98.50, 99.38, 99.83, 100],
        [92.49, 96.62, 98.55, 99.58, 100],
        [91.94, 96.62, 98.99, 100],
        [92.28, 97.57, 100],
        [94.29, 100],
        [100],
    ]),
    zbdt_bonds=columns_from_rows([
        [93.19, 96.35, 98.00, 98.93, 99.70, 100],
        [91.84, 96.03, 98.17, 99.40, 100],
        [91.37, 96.18, 98.73, 100],
        [92.19, 97.35, 100],
        [94.54, 100],
        [100],
    ]),
    zbdt_bond_zirp=[98.99, 99.25, 99.50, 99.75, 100],
    barriers=(93.0, 98.5),
    expiry=3,
)

CASES = {case.name: case for case in (EXAMPLE, REAL_CASE)}
