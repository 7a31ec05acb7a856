"""Brute-force reference pricer that never recombines the lattice.

Every path of the tree up to expiry is enumerated with its probability, the
product of the one-period discounts actually visited, and the exact running
maximum and minimum of the underlying bond price. European claims are the
probability-weighted sum over paths; American claims are rolled back over the
path tree, deciding exercise per history. Underlying bond prices come from a
memoised node recursion, not from the lattice kernels.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .lattice import NodeId, RateTree
from .payoffs import BarrierStatus, OptionSpec, Style, barrier_payoff

MAX_STEPS = 6


class OracleGuardError(ValueError):
    pass


@dataclass(frozen=True)
class PathNode:
    history: tuple[NodeId, ...]
    probability: float
    discount: float  # product of 1/(1+r) over the nodes left so far
    running_max: float
    running_min: float

    @property
    def node(self) -> NodeId:
        return self.history[-1]


def bond_price_function(tree: RateTree, maturity: int):
    """Return ``price(node)`` for the ``maturity``-year bond, memoised by node."""

    @lru_cache(maxsize=None)
    def price(node):
        if node.time == maturity:
            return tree.face_value
        total = 0.0
        for child, prob in tree.children(node):
            total += prob * price(child)
        return total / (1.0 + tree.rate(node))

    return price


def _extend(tree, path, bond):
    disc = path.discount / (1.0 + tree.rate(path.node))
    for child, prob in tree.children(path.node):
        if prob == 0.0:
            continue
        b = bond(child)
        yield prob, PathNode(path.history + (child,), path.probability * prob, disc,
                             max(path.running_max, b), min(path.running_min, b))


def _root(bond):
    root = NodeId(0, 1)
    b = bond(root)
    return PathNode((root,), 1.0, 1.0, b, b)


def enumerate_paths(tree: RateTree, steps: int, maturity: int | None = None
                    ) -> Iterator[PathNode]:
    """All ``steps``-period paths from the root with positive probability."""
    _guard(steps)
    bond = bond_price_function(tree, maturity or tree.horizon)
    frontier = [_root(bond)]
    for _ in range(steps):
        frontier = [child for path in frontier for _, child in _extend(tree, path, bond)]
    yield from frontier


def _status(spec: OptionSpec, path: PathNode) -> BarrierStatus:
    hit_up = spec.upper is not None and path.running_max > spec.upper
    hit_down = spec.lower is not None and path.running_min < spec.lower
    return BarrierStatus(hit_up, hit_down)


def _guard(steps):
    if steps > MAX_STEPS:
        raise OracleGuardError(f"path enumeration limited to {MAX_STEPS} steps, got {steps}")


def oracle_price(tree: RateTree, spec: OptionSpec) -> float:
    _guard(spec.expiry)
    if spec.maturity > tree.horizon:
        raise ValueError(f"bond maturity {spec.maturity} beyond tree horizon {tree.horizon}")
    bond = bond_price_function(tree, spec.maturity)

    if spec.style is Style.EUROPEAN:
        total = 0.0
        for path in enumerate_paths(tree, spec.expiry, spec.maturity):
            spot = bond(path.node)
            total += path.probability * path.discount * barrier_payoff(
                spec, spot, _status(spec, path))
        return total

    def value(path):
        spot = bond(path.node)
        exercise = barrier_payoff(spec, spot, _status(spec, path))
        if path.node.time == spec.expiry:
            return exercise
        cont = 0.0
        for prob, child in _extend(tree, path, bond):
            cont += prob * value(child)
        cont /= 1.0 + tree.rate(path.node)
        return max(exercise, cont)

    return value(_root(bond))
