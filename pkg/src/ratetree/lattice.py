"""Recombining short-rate lattices: BDT binomial and ZBDT binary-ternary.

Nodes are addressed as ``(i, j)``: ``i`` is the period (year), ``j`` the
state. Regular states run ``1..i+1`` bottom to top. ZBDT trees add the
zero-rate state ``j = 0`` for every ``i >= 1``; it is entered from the
bottom regular node with probability ``p`` and left, towards the bottom
regular node of the next period, with probability ``q``.

Rates are stored densely as an array of shape ``(T, T + 1)`` whose column
``j`` matches the state label, so the zero-rate state sits at position 0.
Unused cells hold NaN.
"""
from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np


class Model(str, enum.Enum):
    BDT = "bdt"
    ZBDT = "zbdt"


class NodeId(NamedTuple):
    time: int
    state: int


@dataclass(frozen=True)
class ZbdtParams:
    """Jump probability ``p``, exit probability ``q`` and zero-zone rate ``x0``."""

    p: float
    q: float
    x0: float

    def __post_init__(self):
        if not 0.0 <= self.p < 1.0:
            raise ValueError(f"p must lie in [0, 1), got {self.p}")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"q must lie in [0, 1], got {self.q}")
        if not self.x0 >= 0.0:
            raise ValueError(f"x0 must be non-negative, got {self.x0}")

    @property
    def p_hat(self) -> float:
        return 0.5 * (1.0 - self.p)


@dataclass(frozen=True, eq=False)
class RateTree:
    model: Model
    rates: np.ndarray
    params: ZbdtParams | None = None
    face_value: float = 100.0
    # per-run metadata only; not part of the lattice
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        model = Model(self.model)
        object.__setattr__(self, "model", model)
        rates = np.array(self.rates, dtype=float)
        if rates.ndim != 2 or rates.shape[1] != rates.shape[0] + 1:
            raise ValueError(f"rates must have shape (T, T+1), got {rates.shape}")
        if model is Model.ZBDT and self.params is None:
            raise ValueError("a ZBDT tree needs ZbdtParams")
        if model is Model.BDT and self.params is not None:
            raise ValueError("a BDT tree takes no ZbdtParams")
        rates.setflags(write=False)
        object.__setattr__(self, "rates", rates)

    @classmethod
    def from_columns(cls, model, columns, params=None, face_value=100.0) -> "RateTree":
        """Build from per-period lists of regular-state rates (bottom to top)."""
        n = len(columns)
        dense = np.full((n, n + 1), np.nan)
        for i, col in enumerate(columns):
            if len(col) != i + 1:
                raise ValueError(f"column {i} has {len(col)} rates, expected {i + 1}")
            dense[i, 1 : i + 2] = col
        if Model(model) is Model.ZBDT:
            dense[1:, 0] = params.x0
        return cls(model, dense, params, face_value)

    @property
    def horizon(self) -> int:
        return self.rates.shape[0]

    @property
    def is_zbdt(self) -> bool:
        return self.model is Model.ZBDT

    @property
    def transition(self) -> tuple[float, float, bool]:
        """``(p, q, zbdt)`` as consumed by the kernels."""
        if self.is_zbdt:
            return self.params.p, self.params.q, True
        return 0.0, 0.0, False

    def states(self, i: int) -> range:
        """Legal state labels at period ``i`` (up to and including the horizon)."""
        if not 0 <= i <= self.horizon:
            raise ValueError(f"period {i} outside 0..{self.horizon}")
        lo = 0 if (self.is_zbdt and i >= 1) else 1
        return range(lo, i + 2)

    def nodes(self, i: int) -> list[NodeId]:
        return [NodeId(i, j) for j in self.states(i)]

    def column(self, i: int) -> np.ndarray:
        """Regular-state rates of period ``i``, bottom to top."""
        return self.rates[i, 1 : i + 2]

    def rate(self, node) -> float:
        i, j = node
        self._check(i, j)
        if i >= self.horizon:
            raise ValueError(f"no rate at the horizon period {i}")
        return float(self.rates[i, j])

    def children(self, node) -> list[tuple[NodeId, float]]:
        i, j = node
        self._check(i, j)
        if i >= self.horizon:
            raise ValueError(f"node {tuple(node)} is at the horizon and has no children")
        nxt = i + 1
        if not self.is_zbdt:
            out = [(NodeId(nxt, j), 0.5), (NodeId(nxt, j + 1), 0.5)]
        elif j == 0:
            q = self.params.q
            out = [(NodeId(nxt, 0), 1.0 - q), (NodeId(nxt, 1), q)]
        elif j == 1:
            p, ph = self.params.p, self.params.p_hat
            out = [(NodeId(nxt, 0), p), (NodeId(nxt, 1), ph), (NodeId(nxt, 2), ph)]
        else:
            out = [(NodeId(nxt, j), 0.5), (NodeId(nxt, j + 1), 0.5)]
        assert abs(sum(pr for _, pr in out) - 1.0) <= 1e-15
        return out

    def _check(self, i, j):
        if j not in self.states(i):
            raise ValueError(f"state {j} is not legal at period {i} of a {self.model.value} tree")

    def with_params(self, params: ZbdtParams) -> "RateTree":
        return RateTree(self.model, self.rates, params, self.face_value, dict(self.meta))

    # serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "model": self.model.value,
            "face_value": self.face_value,
            "params": None if self.params is None else
            {"p": self.params.p, "q": self.params.q, "x0": self.params.x0},
            "rates": [self.column(i).tolist() for i in range(self.horizon)],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RateTree":
        params = data.get("params")
        params = None if params is None else ZbdtParams(**params)
        return cls.from_columns(data["model"], data["rates"], params,
                                data.get("face_value", 100.0))


def lattice_table_csv(columns, zirp=None, *, scale=1.0, decimals=2, label="rate") -> str:
    """Display CSV: one row per period, regular states bottom-to-top, zero-rate state last.

    ``columns[i]`` lists the regular values of period ``i``; ``zirp[i]`` is the
    zero-rate value (``None`` where the state does not exist).
    """
    width = len(columns[-1])
    header = ["time"] + [f"j{j}" for j in range(1, width + 1)]
    if zirp is not None:
        header.append("zirp")
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for i, col in enumerate(columns):
        row = [str(i)] + [f"{v * scale:.{decimals}f}" for v in col]
        row += [""] * (width - len(col))
        if zirp is not None:
            z = zirp[i]
            row.append("" if z is None else f"{z * scale:.{decimals}f}")
        writer.writerow(row)
    return out.getvalue()


def rate_tree_csv(tree: RateTree) -> str:
    """Rates in percent with two decimals, laid out like the published tables."""
    columns = [tree.column(i) for i in range(tree.horizon)]
    zirp = None
    if tree.is_zbdt:
        zirp = [None] + [tree.params.x0] * (tree.horizon - 1)
    return lattice_table_csv(columns, zirp, scale=100.0)


def rate_tree_json(tree: RateTree) -> str:
    """Full-precision machine-readable companion of :func:`rate_tree_csv`."""
    return json.dumps(tree.to_dict(), indent=2)


def load_rate_tree(text: str) -> RateTree:
    return RateTree.from_dict(json.loads(text))
