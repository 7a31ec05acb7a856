"""Term-structure input: yields and yield volatilities per annual maturity.

Files and flags carry percentages; everything inside the package is a
decimal fraction. One lattice period is one year and yields are annually
compounded, so the market zero-coupon price for maturity ``m`` is
``FV / (1 + y_m) ** m``.

The maturity-1 volatility is carried but never used by calibration: the
root rate is pinned by the one-year yield alone.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, TextIO

HEADER = ("maturity_years", "yield_pct", "vol_pct")


class TermStructureError(ValueError):
    """Invalid term-structure data; ``row`` is the 1-based CSV line when known."""

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        super().__init__(f"row {row}: {message}" if row is not None else message)


@dataclass(frozen=True)
class TermStructure:
    yields: tuple[float, ...]
    vols: tuple[float, ...]
    face_value: float = 100.0

    def __post_init__(self):
        object.__setattr__(self, "yields", tuple(float(y) for y in self.yields))
        object.__setattr__(self, "vols", tuple(float(v) for v in self.vols))
        if not self.yields:
            raise TermStructureError("term structure needs at least one maturity")
        if len(self.yields) != len(self.vols):
            raise TermStructureError(
                f"{len(self.yields)} yields but {len(self.vols)} volatilities"
            )
        for m, (y, v) in enumerate(zip(self.yields, self.vols), start=1):
            if not (math.isfinite(y) and math.isfinite(v)):
                raise TermStructureError(f"non-finite value at maturity {m}")
            if v < 0:
                raise TermStructureError(f"negative volatility {v} at maturity {m}")
            if y <= -1.0:
                raise TermStructureError(f"yield {y} at maturity {m} is not above -100%")
        if not self.face_value > 0:
            raise TermStructureError("face value must be positive")

    @property
    def horizon(self) -> int:
        return len(self.yields)

    @property
    def maturities(self) -> tuple[int, ...]:
        return tuple(range(1, self.horizon + 1))

    @classmethod
    def from_percent(cls, yields_pct: Iterable[float], vols_pct: Iterable[float],
                     face_value: float = 100.0) -> "TermStructure":
        return cls(tuple(y / 100.0 for y in yields_pct),
                   tuple(v / 100.0 for v in vols_pct), face_value)

    def market_prices(self) -> list[float]:
        return [market_zc_price(self, m) for m in self.maturities]


def market_zc_price(ts: TermStructure, maturity: int) -> float:
    """Market price of the zero-coupon bond maturing after ``maturity`` years."""
    if not 1 <= maturity <= ts.horizon:
        raise ValueError(f"maturity {maturity} outside 1..{ts.horizon}")
    return ts.face_value / (1.0 + ts.yields[maturity - 1]) ** maturity


def parse_term_structure(text: str | TextIO, *, allow_negative_yields: bool = True,
                         face_value: float = 100.0) -> TermStructure:
    """Parse ``maturity_years,yield_pct,vol_pct`` CSV text.

    Blank lines and lines starting with ``#`` are skipped. Errors name the
    offending line number.
    """
    if not isinstance(text, str):
        text = text.read()
    yields, vols = [], []
    header_seen = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = [f.strip() for f in next(csv.reader([stripped]))]
        if not header_seen:
            if tuple(f.lower() for f in fields) != HEADER:
                raise TermStructureError(
                    f"expected header {','.join(HEADER)!r}, got {stripped!r}", lineno
                )
            header_seen = True
            continue
        if len(fields) != 3:
            raise TermStructureError(f"expected 3 fields, got {len(fields)}", lineno)
        try:
            maturity = int(fields[0])
            y_pct = float(fields[1])
            v_pct = float(fields[2])
        except ValueError:
            raise TermStructureError(f"malformed row {stripped!r}", lineno) from None
        if not (math.isfinite(y_pct) and math.isfinite(v_pct)):
            raise TermStructureError("non-finite value", lineno)
        if maturity != len(yields) + 1:
            raise TermStructureError(
                f"maturity {maturity} out of sequence (expected {len(yields) + 1})", lineno
            )
        if v_pct < 0:
            raise TermStructureError(f"negative volatility {v_pct}", lineno)
        if y_pct < 0 and not allow_negative_yields:
            raise TermStructureError(f"negative yield {y_pct} not allowed", lineno)
        yields.append(y_pct / 100.0)
        vols.append(v_pct / 100.0)
    if not header_seen:
        raise TermStructureError("empty term-structure file")
    if not yields:
        raise TermStructureError("no maturities after header")
    return TermStructure(tuple(yields), tuple(vols), face_value)


def _pct(x: float) -> str:
    # shortest percent text that parses back to exactly x
    for digits in range(1, 18):
        s = f"{x * 100.0:.{digits}g}"
        if float(s) / 100.0 == x:
            return s
    return repr(x * 100.0)


def format_term_structure(ts: TermStructure) -> str:
    out = io.StringIO()
    out.write(",".join(HEADER) + "\n")
    for m, y, v in zip(ts.maturities, ts.yields, ts.vols):
        out.write(f"{m},{_pct(y)},{_pct(v)}\n")
    return out.getvalue()
