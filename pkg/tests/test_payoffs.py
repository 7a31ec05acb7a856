import pytest
from hypothesis import given, strategies as st

from ratetree.payoffs import (BarrierStatus, Family, Kind, OptionSpec, SpecError, Style,
                              barrier_active, barrier_payoff, intrinsic, update_status)


def _spec(kind="call", strike=90.0, family="vanilla", upper=90.0, lower=70.0):
    return OptionSpec(kind, strike, 2, 10, "european", family, upper, lower)


def test_intrinsic_examples():
    assert intrinsic(_spec("call", 90), 97.53) == pytest.approx(7.53)
    assert intrinsic(_spec("call", 85), 85.0) == 0.0
    assert intrinsic(_spec("put", 90), 63.28) == pytest.approx(26.72)


def test_knocked_out_call_pays_nothing():
    assert barrier_payoff(_spec(family="up-out", strike=50), 95.0, BarrierStatus(True)) == 0.0


def test_double_in_put_with_lower_hit():
    spec = _spec("put", 90, "double-in")
    assert barrier_payoff(spec, 80.0, BarrierStatus(False, True)) == 10.0


def test_strict_hits():
    spec = _spec(family="double-out", upper=90, lower=70)
    assert update_status(BarrierStatus(), spec, 90.0) == BarrierStatus()
    assert update_status(BarrierStatus(), spec, 70.0) == BarrierStatus()
    assert update_status(BarrierStatus(), spec, 69.99) == BarrierStatus(False, True)
    assert update_status(BarrierStatus(), spec, 90.01) == BarrierStatus(True, False)


def test_status_is_sticky():
    spec = _spec(family="double-out")
    hit = update_status(BarrierStatus(), spec, 95.0)
    assert update_status(hit, spec, 80.0).hit_up


@given(st.floats(0, 120), st.booleans(), st.booleans())
def test_update_idempotent(spot, up, down):
    spec = _spec(family="double-in")
    once = update_status(BarrierStatus(up, down), spec, spot)
    assert update_status(once, spec, spot) == once


def test_partners():
    assert Family.UP_IN.partner is Family.UP_OUT
    assert Family.DOUBLE_OUT.partner is Family.DOUBLE_IN
    assert Family.VANILLA.partner is None
    ins = [f for f in Family if f.is_knock_in]
    assert len(ins) == 3 and all(f.partner.is_knock_out for f in ins)


@given(st.sampled_from(["call", "put"]), st.floats(0, 120), st.floats(0, 120),
       st.booleans(), st.booleans(),
       st.sampled_from([Family.UP_IN, Family.DOWN_IN, Family.DOUBLE_IN]))
def test_pointwise_in_out_parity(kind, strike, spot, up, down, family):
    status = BarrierStatus(up, down)
    spec = _spec(kind, strike, family)
    vanilla = barrier_payoff(spec.with_family("vanilla"), spot, status)
    knock_in = barrier_payoff(spec, spot, status)
    knock_out = barrier_payoff(spec.with_family(family.partner), spot, status)
    assert knock_in + knock_out == vanilla
    assert knock_in >= 0 and knock_out >= 0


@given(st.sampled_from(list(Family)), st.floats(0, 120), st.floats(0, 120), st.floats(0, 120),
       st.booleans(), st.booleans())
def test_monotone_in_spot(family, strike, a, b, up, down):
    lo, hi = sorted((a, b))
    status = BarrierStatus(up, down)
    call = _spec("call", strike, family)
    put = _spec("put", strike, family)
    assert barrier_payoff(call, lo, status) <= barrier_payoff(call, hi, status)
    assert barrier_payoff(put, lo, status) >= barrier_payoff(put, hi, status)


def test_active_table():
    none, up, down, both = (BarrierStatus(False, False), BarrierStatus(True, False),
                            BarrierStatus(False, True), BarrierStatus(True, True))
    assert [barrier_active(Family.DOUBLE_IN, s) for s in (none, up, down, both)] == [
        False, True, True, True]
    assert [barrier_active(Family.DOUBLE_OUT, s) for s in (none, up, down, both)] == [
        True, False, False, False]
    assert barrier_active(Family.DOWN_OUT, up)
    assert not barrier_active(Family.UP_IN, down)


@pytest.mark.parametrize("kwargs", [
    dict(expiry=0), dict(expiry=10), dict(strike=-1.0), dict(family="up-in", upper=None),
    dict(family="down-out", lower=None), dict(family="double-out", upper=70, lower=90),
    dict(kind="straddle"), dict(style="bermudan"),
])
def test_spec_validation(kwargs):
    base = dict(kind="call", strike=90.0, expiry=2, maturity=10, style="european",
                family="vanilla", upper=90.0, lower=70.0)
    base.update(kwargs)
    with pytest.raises(SpecError):
        OptionSpec(**base)


def test_spec_coerces_strings():
    spec = OptionSpec("put", 80, 3, 10, "american", "down-in", lower=70)
    assert spec.kind is Kind.PUT and spec.style is Style.AMERICAN
    assert spec.family is Family.DOWN_IN
