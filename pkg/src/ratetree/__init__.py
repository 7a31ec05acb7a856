"""Calibrated BDT / ZBDT short-rate lattices and options on zero-coupon bonds."""
from .bonds import BondTree, bond_tree, state_prices
from .calibration import (CalibrationError, CalibrationReport, CalibrationSettings,
                          calibrate_bdt, calibrate_zbdt)
from .implied_vol import (BlackInputs, ImpliedVolError, black_call, black_put, implied_vol,
                          model_implied_vol)
from .lattice import Model, NodeId, RateTree, ZbdtParams
from .market_data import (TermStructure, TermStructureError, market_zc_price,
                          parse_term_structure)
from .oracle import oracle_price
from .payoffs import (BarrierStatus, Family, Kind, OptionSpec, SpecError, Style,
                      barrier_payoff, intrinsic, update_status)
from .pricer import PriceResult, price, price_american, price_european

__version__ = "0.1.0"

__all__ = [
    "BarrierStatus", "BlackInputs", "BondTree", "CalibrationError", "CalibrationReport",
    "CalibrationSettings", "Family", "ImpliedVolError", "Kind", "Model", "NodeId",
    "OptionSpec", "PriceResult", "RateTree", "SpecError", "Style", "TermStructure",
    "TermStructureError", "ZbdtParams", "barrier_payoff", "black_call", "black_put",
    "bond_tree", "calibrate_bdt", "calibrate_zbdt", "implied_vol", "intrinsic",
    "market_zc_price", "model_implied_vol", "oracle_price", "parse_term_structure",
    "price", "price_american", "price_european", "state_prices", "update_status",
]
