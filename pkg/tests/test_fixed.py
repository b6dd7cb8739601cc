from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fpda.errors import ConfigurationError
from fpda.fixed import (
    Q15,
    Fx,
    FxFormat,
    Overflow,
    fx_add,
    fx_convert,
    fx_mul,
    fx_neg,
    fx_scale,
    fx_shift_right,
    fx_sub,
    narrow,
    quantize,
    resolve,
    round_shift,
    saturate,
)

Q8 = FxFormat(8, 7)
Q8W = FxFormat(8, 7, Overflow.WRAP)


def q(x, fmt=Q15):
    return quantize(x, fmt)


def test_quantize_examples():
    assert q(0.0).raw == 0
    assert q(0.7148).raw == 23423
    assert q(1.5).raw == 32767
    assert q(-1.0).raw == -32768
    assert q(-1.5).raw == -32768


def test_wavelet_coefficient_by_integer_arithmetic():
    # 0.7148 * 2^15 = 23422.5664 exactly
    exact = Fraction("0.7148") * 2**15
    assert exact == Fraction(14639104, 625)
    assert abs(q(0.7148).raw - exact) <= Fraction(1, 2)


def test_rounding_half_away_from_zero():
    lsb = 2.0**-15
    assert q(0.5 * lsb).raw == 1
    assert q(-0.5 * lsb).raw == -1
    assert q(1.5 * lsb).raw == 2
    assert q(-2.5 * lsb).raw == -3
    assert round_shift(5, 1) == 3
    assert round_shift(-5, 1) == -3
    assert round_shift(3, -2) == 12


def test_arith_examples():
    assert fx_add(q(0.25), q(0.25)) == q(0.5)
    assert fx_mul(q(0.5), q(0.5)) == q(0.25)
    mx = Fx(Q15.max_raw)
    assert fx_add(mx, mx) == mx
    assert fx_sub(Fx(Q15.min_raw), mx).raw == Q15.min_raw


def test_wrap_policy():
    f = FxFormat(16, 15, Overflow.WRAP)
    mx = Fx(f.max_raw, f)
    assert fx_add(mx, Fx(1, f)).raw == f.min_raw
    assert resolve(2**16 + 5, f) == 5


def test_shift_right_examples():
    assert fx_shift_right(q(0.5), 1) == q(0.25)
    assert fx_shift_right(Fx(-1), 1).raw == -1
    assert fx_shift_right(q(0.75), 2) == q(0.1875)
    with pytest.raises(ValueError):
        fx_shift_right(q(0.5), -1)


def test_format_mismatch_is_configuration_error():
    with pytest.raises(ConfigurationError):
        fx_add(q(0.1), q(0.1, Q8))
    with pytest.raises(ConfigurationError):
        fx_mul(q(0.1), q(0.1, Q8))


def test_parse_and_str():
    f = FxFormat.parse("Q4.12/wrap")
    assert (f.total_bits, f.frac_bits, f.overflow_policy) == (16, 12, Overflow.WRAP)
    assert str(FxFormat.parse("Q1.15")) == "Q1.15/sat"
    assert FxFormat.parse(str(f)) == f
    for bad in ("Q1", "1.15", "Q1.15/round", "Q0.0"):
        with pytest.raises(ConfigurationError):
            FxFormat.parse(bad)


def test_fx_rejects_out_of_range():
    with pytest.raises(ConfigurationError):
        Fx(1 << 15)


@pytest.mark.parametrize("fmt", [FxFormat(b, f) for b in (4, 7, 10) for f in (0, b // 2, b - 1)])
def test_round_trip_exhaustive(fmt):
    for raw in range(fmt.min_raw, fmt.max_raw + 1):
        assert quantize(Fx(raw, fmt).value, fmt).raw == raw


@pytest.mark.parametrize("fmt", [FxFormat(6, 5), FxFormat(6, 3, Overflow.WRAP), FxFormat(5, 2)])
def test_add_mul_exhaustive_against_rationals(fmt):
    # one quantization of the exact rational result
    raws = range(fmt.min_raw, fmt.max_raw + 1)
    for a in raws:
        fa = Fx(a, fmt)
        for b in raws:
            fb = Fx(b, fmt)
            assert fx_add(fa, fb) == quantize(fa.value + fb.value, fmt)
            assert fx_mul(fa, fb) == quantize(fa.value * fb.value, fmt)


def test_mul_by_one_exhaustive():
    fmt = FxFormat(10, 7)
    one = quantize(1.0, fmt)
    for raw in range(fmt.min_raw, fmt.max_raw + 1):
        a = Fx(raw, fmt)
        assert fx_mul(a, one) == a


@given(st.integers(-(2**40), 2**40), st.integers(2, 32))
def test_saturation_idempotent(v, bits):
    fmt = FxFormat(bits, bits - 1)
    once = saturate(v, fmt)
    assert saturate(once, fmt) == once
    assert fmt.min_raw <= once <= fmt.max_raw


@given(st.integers(-(2**15), 2**15 - 1), st.integers(-(2**15), 2**15 - 1))
def test_mul_matches_rational_random(a, b):
    fa, fb = Fx(a), Fx(b)
    assert fx_mul(fa, fb) == quantize(fa.value * fb.value)


@given(st.integers(-(2**15), 2**15 - 1), st.integers(-(2**17), 2**17 - 1))
def test_scale_matches_rational(a, c):
    cf = FxFormat(19, 15)
    fa, fc = Fx(a), Fx(c, cf)
    assert fx_scale(fa, fc) == quantize(fa.value * fc.value)


@given(st.integers(-(2**15) + 1, 2**15 - 1))
def test_neg_and_convert(a):
    fa = Fx(a)
    assert fx_neg(fa).raw == -a
    wide = fx_convert(fa, Q15.widen(int_bits=3))
    assert wide.value == fa.value
    assert fx_convert(wide, Q15) == fa


def test_narrow_rounds_once():
    # value at scale 2^-16 into Q1.15: 1.5 LSB rounds away from zero
    assert narrow(3, 16, Q15).raw == 2
    assert narrow(-3, 16, Q15).raw == -2
    assert narrow(1 << 40, 15, Q15).raw == Q15.max_raw
    assert narrow(1 << 8, 7, Q8W).raw == 0
