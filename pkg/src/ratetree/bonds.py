"""Zero-coupon bond lattices and root state prices on a calibrated tree."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .lattice import Model, RateTree, lattice_table_csv


@dataclass(frozen=True, eq=False)
class BondTree:
    """Bond prices per node, dense with the same state-as-column layout as RateTree.

    ``prices[i, j]`` is the price at period ``i`` in state ``j``; illegal cells are NaN.
    """

    maturity: int
    prices: np.ndarray
    model: Model
    face_value: float

    @property
    def root(self) -> float:
        return float(self.prices[0, 1])

    def column(self, i: int) -> np.ndarray:
        return self.prices[i, 1 : i + 2]

    def zirp(self, i: int) -> float | None:
        if self.model is Model.ZBDT and i >= 1:
            return float(self.prices[i, 0])
        return None

    def price(self, node) -> float:
        i, j = node
        rows, cols = self.prices.shape
        if not (0 <= i < rows and 0 <= j < cols) or np.isnan(self.prices[i, j]):
            raise ValueError(f"no node {tuple(node)} in this bond tree")
        return float(self.prices[i, j])

    def to_csv(self, decimals: int = 2) -> str:
        columns = [self.column(i) for i in range(self.maturity + 1)]
        zirp = None
        if self.model is Model.ZBDT:
            zirp = [self.zirp(i) for i in range(self.maturity + 1)]
        return lattice_table_csv(columns, zirp, decimals=decimals)


def dense_rates(tree: RateTree, steps: int, width: int) -> np.ndarray:
    """First ``steps`` rate columns, NaNs replaced by 0, padded to ``width`` positions."""
    out = np.zeros((steps, width))
    block = np.nan_to_num(tree.rates[:steps], nan=0.0)
    out[:, : block.shape[1]] = block[:, :width]
    return out


def node_mask(tree: RateTree, steps: int, width: int) -> np.ndarray:
    """Boolean (steps+1, width) mask of legal nodes."""
    i = np.arange(steps + 1)[:, None]
    j = np.arange(width)[None, :]
    mask = (j >= 1) & (j <= i + 1)
    if tree.is_zbdt:
        mask |= (j == 0) & (i >= 1)
    return mask


def bond_tree(tree: RateTree, maturity: int, *, backend: str | None = None) -> BondTree:
    """Price the ``maturity``-year zero-coupon bond at every node by backward induction."""
    if not 1 <= maturity <= tree.horizon:
        raise ValueError(f"bond maturity {maturity} outside 1..{tree.horizon}")
    width = maturity + 2
    values = np.zeros((maturity + 1, 1, width))
    values[maturity, 0, :] = tree.face_value
    hits = np.zeros((maturity + 1, width), dtype=np.int64)
    rates = dense_rates(tree, maturity, width)
    p, q, zbdt = tree.transition
    empty = np.zeros((maturity, 1, width))
    flags = np.zeros((maturity, 1, width), dtype=np.uint8)
    kernels.get_backend(backend).backward_induction(
        values, hits, rates, empty, False, p, q, zbdt, flags
    )
    prices = np.where(node_mask(tree, maturity, width), values[:, 0, :], np.nan)
    prices.setflags(write=False)
    return BondTree(maturity, prices, tree.model, tree.face_value)


def state_prices(tree: RateTree, upto: int | None = None, *, start=(0, 1),
                 backend: str | None = None) -> np.ndarray:
    """Arrow-Debreu prices of every node, seen from ``start``.

    Returns an array of shape ``(upto + 1, upto + 2)``; row ``i`` holds the
    value at ``start`` of one unit paid in each state of period ``i``. Rows
    before ``start`` are zero.
    """
    upto = tree.horizon if upto is None else upto
    if not 0 <= upto <= tree.horizon:
        raise ValueError(f"upto={upto} outside 0..{tree.horizon}")
    i0, j0 = start
    width = upto + 2
    out = np.zeros((upto + 1, width))
    out[i0, j0] = 1.0
    rates = dense_rates(tree, upto, width)
    p, q, zbdt = tree.transition
    step = kernels.get_backend(backend).forward_step
    for i in range(i0, upto):
        step(out[i], rates[i], i, p, q, zbdt, out[i + 1])
    return out
