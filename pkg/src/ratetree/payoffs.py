"""Vanilla and barrier payoffs on a zero-coupon bond price.

Barriers are monitored on the lattice dates only, time 0 and expiry included.
A barrier counts as hit when the bond price is strictly above the upper level
or strictly below the lower level; the knock-out conditions are the weak
complements (``max <= upper``, ``min >= lower``).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace


class Style(str, enum.Enum):
    EUROPEAN = "european"
    AMERICAN = "american"


class Kind(str, enum.Enum):
    CALL = "call"
    PUT = "put"


class Family(str, enum.Enum):
    VANILLA = "vanilla"
    UP_IN = "up-in"
    UP_OUT = "up-out"
    DOWN_IN = "down-in"
    DOWN_OUT = "down-out"
    DOUBLE_IN = "double-in"
    DOUBLE_OUT = "double-out"

    @property
    def uses_upper(self) -> bool:
        return self in (Family.UP_IN, Family.UP_OUT, Family.DOUBLE_IN, Family.DOUBLE_OUT)

    @property
    def uses_lower(self) -> bool:
        return self in (Family.DOWN_IN, Family.DOWN_OUT, Family.DOUBLE_IN, Family.DOUBLE_OUT)

    @property
    def is_knock_in(self) -> bool:
        return self in (Family.UP_IN, Family.DOWN_IN, Family.DOUBLE_IN)

    @property
    def is_knock_out(self) -> bool:
        return self in (Family.UP_OUT, Family.DOWN_OUT, Family.DOUBLE_OUT)

    @property
    def partner(self) -> "Family | None":
        """The knock-out family for a knock-in one and vice versa."""
        return _PARTNERS.get(self)


_PARTNERS = {
    Family.UP_IN: Family.UP_OUT, Family.UP_OUT: Family.UP_IN,
    Family.DOWN_IN: Family.DOWN_OUT, Family.DOWN_OUT: Family.DOWN_IN,
    Family.DOUBLE_IN: Family.DOUBLE_OUT, Family.DOUBLE_OUT: Family.DOUBLE_IN,
}


class SpecError(ValueError):
    """Inconsistent option contract terms."""


@dataclass(frozen=True)
class OptionSpec:
    """An option on the zero-coupon bond maturing at ``maturity``, expiring at ``expiry``.

    ``upper`` and ``lower`` are bond-price barrier levels on the face-value scale.
    """

    kind: Kind
    strike: float
    expiry: int
    maturity: int
    style: Style = Style.EUROPEAN
    family: Family = Family.VANILLA
    upper: float | None = None
    lower: float | None = None

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", Kind(self.kind))
            object.__setattr__(self, "style", Style(self.style))
            object.__setattr__(self, "family", Family(self.family))
        except ValueError as exc:
            raise SpecError(str(exc)) from None
        if not 0 < self.expiry < self.maturity:
            raise SpecError(f"need 0 < expiry < maturity, got expiry={self.expiry}, "
                            f"maturity={self.maturity}")
        if not self.strike >= 0:
            raise SpecError(f"strike must be non-negative, got {self.strike}")
        if self.family.uses_upper and self.upper is None:
            raise SpecError(f"{self.family.value} needs an upper barrier")
        if self.family.uses_lower and self.lower is None:
            raise SpecError(f"{self.family.value} needs a lower barrier")
        if (self.family in (Family.DOUBLE_IN, Family.DOUBLE_OUT)
                and not self.lower < self.upper):
            raise SpecError(f"lower barrier {self.lower} must be below upper {self.upper}")

    def with_family(self, family) -> "OptionSpec":
        return replace(self, family=Family(family))

    def with_style(self, style) -> "OptionSpec":
        return replace(self, style=Style(style))

    def with_strike(self, strike) -> "OptionSpec":
        return replace(self, strike=strike)


@dataclass(frozen=True)
class BarrierStatus:
    hit_up: bool = False
    hit_down: bool = False


def intrinsic(spec: OptionSpec, spot: float) -> float:
    if spec.kind is Kind.CALL:
        return max(spot - spec.strike, 0.0)
    return max(spec.strike - spot, 0.0)


def update_status(status: BarrierStatus, spec: OptionSpec, spot: float) -> BarrierStatus:
    """Fold one monitored price into the running barrier status."""
    hit_up = status.hit_up or (spec.upper is not None and spot > spec.upper)
    hit_down = status.hit_down or (spec.lower is not None and spot < spec.lower)
    return BarrierStatus(hit_up, hit_down)


def barrier_active(family: Family, status: BarrierStatus) -> bool:
    """Whether the claim pays its intrinsic value under ``status``."""
    if family is Family.VANILLA:
        return True
    if family is Family.UP_IN:
        return status.hit_up
    if family is Family.UP_OUT:
        return not status.hit_up
    if family is Family.DOWN_IN:
        return status.hit_down
    if family is Family.DOWN_OUT:
        return not status.hit_down
    if family is Family.DOUBLE_OUT:
        return not (status.hit_up or status.hit_down)
    return status.hit_up or status.hit_down  # double-in


def barrier_payoff(spec: OptionSpec, spot: float, status: BarrierStatus) -> float:
    """Intrinsic value gated by the family's barrier indicator."""
    return intrinsic(spec, spot) if barrier_active(spec.family, status) else 0.0
