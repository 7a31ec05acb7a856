"""Black's formula for options on zero-coupon bonds, and its inversion.

Bond prices and the strike are quoted on the face-value scale (FV = 100).
Inside the formula the expiry-bond price is normalised to unit face, so the
strike leg is ``K * B(t,S) / FV``:

    C = B(t,T) N(d1) - K b(t,S) N(d2),   b(t,S) = B(t,S) / FV
    d1,2 = ln(B(t,T) / (K b(t,S))) / (sigma sqrt(tau)) +/- sigma sqrt(tau) / 2

This is the discounted Black-76 price on the forward bond price
``FV * B(t,T) / B(t,S)``. Worthless options are assigned zero volatility.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import ndtr

from .bonds import bond_tree
from .lattice import RateTree
from .payoffs import Family, Kind, OptionSpec, SpecError, Style
from .pricer import price_european

SIGMA_MAX = 10.0
SIGMA_XTOL = 1e-12


class ImpliedVolError(ValueError):
    """Price outside the range Black's formula can reach."""


@dataclass(frozen=True)
class BlackInputs:
    bond_T: float  # price of the underlying (maturity T) bond
    bond_S: float  # price of the bond maturing at expiry
    strike: float
    tau: float  # years to expiry
    sigma: float = 0.0
    face_value: float = 100.0

    def __post_init__(self):
        vals = (self.bond_T, self.bond_S, self.strike, self.tau, self.sigma, self.face_value)
        if any(math.isnan(v) for v in vals):
            raise ValueError("NaN in Black inputs")
        if not 0 < self.bond_T <= self.face_value or not 0 < self.bond_S <= self.face_value:
            raise ValueError("bond prices must lie in (0, FV]")
        if not self.tau > 0:
            raise ValueError("time to expiry must be positive")
        if self.sigma < 0 or self.strike < 0:
            raise ValueError("sigma and strike must be non-negative")

    @property
    def strike_leg(self) -> float:
        """Present value of paying the strike at expiry."""
        return self.strike * self.bond_S / self.face_value


def black_call(inputs: BlackInputs) -> float:
    bt, kb = inputs.bond_T, inputs.strike_leg
    if kb == 0.0:
        return bt
    width = inputs.sigma * math.sqrt(inputs.tau)
    if width == 0.0:
        return max(bt - kb, 0.0)
    d1 = math.log(bt / kb) / width + 0.5 * width
    d2 = d1 - width
    return bt * float(ndtr(d1)) - kb * float(ndtr(d2))


def black_put(inputs: BlackInputs) -> float:
    """Put through put-call parity."""
    return black_call(inputs) - inputs.bond_T + inputs.strike_leg


def black_price(inputs: BlackInputs, kind: Kind | str) -> float:
    return black_call(inputs) if Kind(kind) is Kind.CALL else black_put(inputs)


def implied_vol(price: float, inputs: BlackInputs, kind: Kind | str = Kind.CALL, *,
                price_tol: float = 1e-12) -> float:
    """Volatility reproducing ``price``; ``inputs.sigma`` is ignored.

    Returns 0 when the price does not exceed the zero-volatility value by
    more than ``price_tol * FV``, which covers worthless options. Raises
    :class:`ImpliedVolError` when the price is at or above the
    infinite-volatility bound.
    """
    if math.isnan(price):
        raise ValueError("price is NaN")
    if price < 0:
        raise ImpliedVolError(f"negative option price {price}")
    kind = Kind(kind)

    def at(sigma):
        return black_price(_with_sigma(inputs, sigma), kind)

    floor = at(0.0)
    tol = price_tol * inputs.face_value
    if price <= floor + tol:
        return 0.0
    cap = inputs.bond_T if kind is Kind.CALL else inputs.strike_leg
    if price >= cap:
        raise ImpliedVolError(f"price {price} at or above the upper bound {cap}")
    lo, hi = 0.0, SIGMA_MAX
    if at(hi) < price:
        raise ImpliedVolError(f"price {price} needs sigma above {SIGMA_MAX}")
    while hi - lo > SIGMA_XTOL:
        mid = 0.5 * (lo + hi)
        if at(mid) < price:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _with_sigma(inputs: BlackInputs, sigma: float) -> BlackInputs:
    return BlackInputs(inputs.bond_T, inputs.bond_S, inputs.strike, inputs.tau, sigma,
                       inputs.face_value)


def model_implied_vol(tree: RateTree, spec: OptionSpec, *, backend=None) -> float:
    """Implied volatility of the lattice price of a European vanilla option at t = 0.

    Both bond prices are the tree's own root prices.
    """
    if spec.style is not Style.EUROPEAN or spec.family is not Family.VANILLA:
        raise SpecError("implied volatility is defined for European vanilla options only")
    value = price_european(tree, spec, backend=backend).value
    inputs = BlackInputs(bond_tree(tree, spec.maturity, backend=backend).root,
                         bond_tree(tree, spec.expiry, backend=backend).root,
                         spec.strike, float(spec.expiry), 0.0, tree.face_value)
    return implied_vol(value, inputs, spec.kind)
