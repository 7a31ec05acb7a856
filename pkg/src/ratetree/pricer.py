"""European and American option pricing on the bond lattice.

Barrier options are priced on the recombining lattice by carrying one value
layer per reachable barrier status: two layers for a single barrier, four for
a double barrier. Layer ``s`` is a bit set (bit 0 for the first monitored
barrier, bit 1 for the second); a child read from layer ``s`` is taken from
layer ``s | hit(child)``, so statuses only ever accumulate along a path.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .bonds import BondTree, bond_tree, dense_rates, node_mask
from .lattice import RateTree
from .payoffs import (BarrierStatus, Family, Kind, OptionSpec, SpecError, Style,
                      barrier_active)


@dataclass(frozen=True, eq=False)
class PriceResult:
    """Root value plus the full value lattice.

    ``values`` has shape ``(S + 1, L, S + 2)``: period, barrier-status layer,
    state. ``layers[s]`` is the status that layer ``s`` stands for;
    ``root_layer`` is the layer that applies at the root.
    """

    value: float
    spec: OptionSpec
    model: str
    values: np.ndarray
    layers: tuple[BarrierStatus, ...]
    root_layer: int
    exercised: np.ndarray | None = None
    underlying: BondTree | None = field(default=None, repr=False)

    def node_value(self, node, status: BarrierStatus | None = None) -> float:
        i, j = node
        s = 0 if status is None else self.layers.index(_project(status, self.layers))
        return float(self.values[i, s, j])

    def to_dict(self, include_lattice: bool = True) -> dict:
        out = {
            "model": self.model,
            "value": self.value,
            "spec": {
                "style": self.spec.style.value, "kind": self.spec.kind.value,
                "family": self.spec.family.value, "strike": self.spec.strike,
                "expiry": self.spec.expiry, "maturity": self.spec.maturity,
                "upper": self.spec.upper, "lower": self.spec.lower,
            },
            "layers": [{"hit_up": s.hit_up, "hit_down": s.hit_down} for s in self.layers],
            "root_layer": self.root_layer,
        }
        if include_lattice:
            out["values"] = _nan_to_none(self.values)
            if self.exercised is not None:
                out["exercised"] = self.exercised.astype(int).tolist()
        return out

    def to_json(self, include_lattice: bool = True) -> str:
        return json.dumps(self.to_dict(include_lattice), indent=2)


def _nan_to_none(a):
    if a.ndim == 0:
        v = float(a)
        return None if np.isnan(v) else v
    return [_nan_to_none(x) for x in a]


def _project(status, layers):
    # drop flags the layer set does not track
    tracks_up = any(s.hit_up for s in layers)
    tracks_down = any(s.hit_down for s in layers)
    return BarrierStatus(status.hit_up and tracks_up, status.hit_down and tracks_down)


def _monitored(family: Family) -> tuple[str, ...]:
    if family is Family.VANILLA:
        return ()
    if family in (Family.UP_IN, Family.UP_OUT):
        return ("up",)
    if family in (Family.DOWN_IN, Family.DOWN_OUT):
        return ("down",)
    return ("up", "down")


def _layer_statuses(monitored) -> tuple[BarrierStatus, ...]:
    out = []
    for s in range(1 << len(monitored)):
        flags = {name: bool(s >> b & 1) for b, name in enumerate(monitored)}
        out.append(BarrierStatus(flags.get("up", False), flags.get("down", False)))
    return tuple(out)


def _hit_bits(spec: OptionSpec, monitored, prices: np.ndarray) -> np.ndarray:
    bits = np.zeros(prices.shape, dtype=np.int64)
    for b, name in enumerate(monitored):
        if name == "up":
            bits |= (prices > spec.upper).astype(np.int64) << b
        else:
            bits |= (prices < spec.lower).astype(np.int64) << b
    return bits


def _intrinsic(spec: OptionSpec, prices: np.ndarray) -> np.ndarray:
    if spec.kind is Kind.CALL:
        return np.maximum(prices - spec.strike, 0.0)
    return np.maximum(spec.strike - prices, 0.0)


def check_spec(tree: RateTree, spec: OptionSpec):
    if spec.maturity > tree.horizon:
        raise SpecError(f"bond maturity {spec.maturity} beyond tree horizon {tree.horizon}")


def _induct(tree: RateTree, spec: OptionSpec, family: Family, american: bool,
            underlying: BondTree, backend):
    S = spec.expiry
    width = S + 2
    monitored = _monitored(family)
    layers = _layer_statuses(monitored)
    mask = node_mask(tree, S, width)
    prices = np.where(mask, np.nan_to_num(underlying.prices[: S + 1, :width]), 0.0)
    hits = np.where(mask, _hit_bits(spec, monitored, prices), 0).astype(np.int64)
    payoff = _intrinsic(spec, prices)

    gates = np.array([barrier_active(family, st) for st in layers], dtype=float)
    values = np.zeros((S + 1, len(layers), width))
    values[S] = gates[:, None] * payoff[S][None, :]
    if american:
        exercise = np.ascontiguousarray(gates[None, :, None] * payoff[:S, None, :])
    else:
        exercise = np.zeros((S, len(layers), width))
    flags = np.zeros((S, len(layers), width), dtype=np.uint8)
    p, q, zbdt = tree.transition
    kernels.get_backend(backend).backward_induction(
        values, hits, dense_rates(tree, S, width), exercise, american, p, q, zbdt, flags
    )
    values = np.where(mask[:, None, :], values, np.nan)
    return values, layers, int(hits[0, 1]), (flags.astype(bool) if american else None)


def _price(tree: RateTree, spec: OptionSpec, american: bool, backend) -> PriceResult:
    check_spec(tree, spec)
    underlying = bond_tree(tree, spec.maturity, backend=backend)
    if spec.family is Family.DOUBLE_IN and not american:
        # vanilla minus double-out, layer by layer
        van, _, _, _ = _induct(tree, spec, Family.VANILLA, False, underlying, backend)
        dout, layers, root, _ = _induct(tree, spec, Family.DOUBLE_OUT, False, underlying,
                                        backend)
        values = van[:, :1, :] - dout
        flags = None
    else:
        values, layers, root, flags = _induct(tree, spec, spec.family, american,
                                              underlying, backend)
    values.setflags(write=False)
    return PriceResult(float(values[0, root, 1]), spec, tree.model.value, values, layers,
                       root, flags, underlying)


def price_european(tree: RateTree, spec: OptionSpec, *, backend: str | None = None
                   ) -> PriceResult:
    if spec.style is not Style.EUROPEAN:
        raise SpecError("price_european needs a European spec")
    return _price(tree, spec, False, backend)


def price_american(tree: RateTree, spec: OptionSpec, *, backend: str | None = None
                   ) -> PriceResult:
    if spec.style is not Style.AMERICAN:
        raise SpecError("price_american needs an American spec")
    return _price(tree, spec, True, backend)


def price(tree: RateTree, spec: OptionSpec, *, backend: str | None = None) -> PriceResult:
    """Dispatch on ``spec.style``."""
    if spec.style is Style.AMERICAN:
        return price_american(tree, spec, backend=backend)
    return price_european(tree, spec, backend=backend)
