import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fpda import oracles
from fpda.errors import ConfigurationError
from fpda.fft import (
    FABRIC_POINTS,
    FftConfig,
    Twiddle,
    bit_reverse,
    butterfly_step,
    complex_multiply,
    fft,
    fft16,
    fft_routing,
    fft_scale,
)
from fpda.fixed import Q15, CFx, Fx, fx_convert, quantize
from fpda.modules import CmInventory, CmKind

EPS = 16 * 2.0**-15
WORK = FftConfig().work_fmt


def cfx(re, im, fmt=Q15):
    return CFx(quantize(re, fmt), quantize(im, fmt))


def rand_frame(rng, n=16, scale=1.0):
    raws = rng.integers(-2**15, 2**15, (n, 2))
    return [CFx(Fx(int(r * scale)), Fx(int(i * scale))) for r, i in raws]


def as_complex(xs):
    return np.array([complex(z) for z in xs])


def max_err(got, ref):
    d = as_complex(got) - np.array(ref)
    return max(np.abs(d.real).max(), np.abs(d.imag).max())


@pytest.fixture
def rng():
    return np.random.default_rng(11)


def test_twiddle_terms_exact():
    tw = Twiddle.unity_root(3, 16)
    assert tw.diff.raw == tw.cos.raw - tw.sin.raw
    assert tw.summ.raw == tw.cos.raw + tw.sin.raw
    assert tw.cos.raw == quantize(math.cos(-2 * math.pi * 3 / 16), tw.cos.format).raw


def test_complex_multiply_identity_and_j(rng):
    for z in rand_frame(rng, 20):
        assert complex_multiply(z, Twiddle.from_angle(0.0)) == z
        jz = complex_multiply(z, Twiddle.from_angle(math.pi / 2))
        assert (jz.re.raw, jz.im.raw) == (min(-z.im.raw, Q15.max_raw), z.re.raw)


def test_complex_multiply_three_multiplies():
    act = Counter()
    complex_multiply(cfx(0.3, -0.2), Twiddle.from_angle(0.7), act)
    assert act == Counter({CmKind.MULTIPLIER: 3, CmKind.ADDER: 1, CmKind.SUBTRACTOR: 2})


@settings(max_examples=300)
@given(st.integers(-(2**14), 2**14 - 1), st.integers(-(2**14), 2**14 - 1), st.floats(-math.pi, math.pi))
def test_complex_multiply_vs_schoolbook(a, b, theta):
    tw = Twiddle.from_angle(theta)
    got = complex_multiply(CFx(Fx(a), Fx(b)), tw)
    c, s = float(tw.cos), float(tw.sin)
    re, im = float(Fx(a)) * c - float(Fx(b)) * s, float(Fx(a)) * s + float(Fx(b)) * c
    lsb = 2.0**-15
    # two independently rounded products per component
    assert abs(float(got.re) - re) <= lsb and abs(float(got.im) - im) <= lsb
    # against the unquantized rotation: add the twiddle quantization error
    re0 = float(Fx(a)) * math.cos(theta) - float(Fx(b)) * math.sin(theta)
    im0 = float(Fx(a)) * math.sin(theta) + float(Fx(b)) * math.cos(theta)
    assert abs(float(got.re) - re0) <= 2 * lsb and abs(float(got.im) - im0) <= 2 * lsb


def test_butterfly_examples():
    u = cfx(0.25, -0.125, WORK)
    top, bot = butterfly_step(u, u, Twiddle.from_angle(0.0))
    assert top == CFx(Fx(2 * u.re.raw, WORK), Fx(2 * u.im.raw, WORK))
    assert bot == cfx(0, 0, WORK)
    tw = Twiddle.from_angle(-1.1)
    top, bot = butterfly_step(cfx(1, 0, WORK), cfx(0, 0, WORK), tw)
    assert top == cfx(1, 0, WORK)
    assert (bot.re.raw, bot.im.raw) == (tw.cos.raw, tw.sin.raw)


def test_butterfly_matches_oracle(rng):
    for _ in range(200):
        # butterflies run in the working format, which absorbs the growth
        u, v = (CFx(fx_convert(z.re, WORK), fx_convert(z.im, WORK)) for z in rand_frame(rng, 2))
        theta = rng.uniform(-math.pi, math.pi)
        act = Counter()
        top, bot = butterfly_step(u, v, Twiddle.from_angle(theta), act)
        assert act[CmKind.MULTIPLIER] == 3
        top_ref = complex(u) + complex(v)
        ref = (complex(u) - complex(v)) * complex(math.cos(theta), math.sin(theta))
        assert complex(top) == top_ref
        assert abs(float(bot.re) - ref.real) <= 2 * 2.0**-15
        assert abs(float(bot.im) - ref.imag) <= 2 * 2.0**-15


def test_fft16_impulse_and_constant():
    cfg = FftConfig()
    zero, one = cfx(0, 0, WORK), cfx(1, 0, WORK)
    assert fft16(cfg, [one] + [zero] * 15) == [one] * 16
    out = fft16(cfg, [one] * 16)
    assert out[0] == cfx(16, 0, WORK)
    assert all(z == zero for z in out[1:])


def test_fft16_q15_impulse():
    # the largest Q1.15 impulse spreads flat
    cfg = FftConfig()
    x = [cfx(0.5, 0)] + [cfx(0, 0)] * 15
    assert all(z == cfx(0.5, 0, WORK) for z in fft16(cfg, x))


def test_fft16_random_within_tolerance(rng):
    cfg = FftConfig()
    worst = 0.0
    for _ in range(200):
        x = rand_frame(rng)
        worst = max(worst, max_err(fft16(cfg, x), oracles.oracle_dft(x, 16).values))
    assert worst <= EPS


def test_parseval(rng):
    cfg = FftConfig()
    for _ in range(50):
        x = rand_frame(rng)
        got = as_complex(fft16(cfg, x))
        lhs = np.linalg.norm(got)
        rhs = 4 * np.linalg.norm(as_complex(x))
        assert abs(lhs - rhs) <= EPS * math.sqrt(32)


def test_linearity(rng):
    cfg = FftConfig()
    for _ in range(30):
        x, y = rand_frame(rng, 16, 0.25), rand_frame(rng, 16, 0.25)
        s = [CFx(Fx(a.re.raw + b.re.raw), Fx(a.im.raw + b.im.raw)) for a, b in zip(x, y)]
        lhs = as_complex(fft16(cfg, s))
        rhs = as_complex(fft16(cfg, x)) + as_complex(fft16(cfg, y))
        assert np.abs(lhs - rhs).max() <= EPS


@pytest.mark.parametrize("points", [2, 4, 8])
def test_smaller_sizes(points, rng):
    cfg = fft_scale(FftConfig(), points)
    zero, one = cfx(0, 0, WORK), cfx(1, 0, WORK)
    assert fft(cfg, [one] + [zero] * (points - 1)) == [one] * points
    for _ in range(50):
        x = rand_frame(rng, points)
        assert max_err(fft(cfg, x), oracles.oracle_dft(x, points).values) <= EPS


def test_scale_16_is_fft16(rng):
    cfg = fft_scale(FftConfig(points=8), 16)
    x = rand_frame(rng)
    assert fft(cfg, x) == fft16(FftConfig(), x)


def test_scale_errors():
    for bad in (0, 3, 32, -4):
        with pytest.raises(ConfigurationError):
            fft_scale(FftConfig(), bad)
    with pytest.raises(ConfigurationError):
        fft16(FftConfig(points=8), [cfx(0, 0)] * 8)
    with pytest.raises(ConfigurationError):
        fft(FftConfig(), [cfx(0, 0)] * 15)


def test_smaller_schedule_is_tail_of_16():
    full = fft_routing(FABRIC_POINTS)
    for points in (2, 4, 8):
        small = fft_routing(points)
        tail = full[len(full) - len(small):]
        for s_stage, f_stage in zip(small, tail):
            # same register pairs on the low registers, twiddle index rescaled
            low = [(p, q, k * FABRIC_POINTS // points) for p, q, k in s_stage]
            assert set(low) <= set(f_stage)


def test_selects():
    cfg = FftConfig()
    assert [cfg.selects(t) for t in range(4)] == [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)]
    cfg8 = FftConfig(points=8)
    assert [cfg8.selects(t) for t in range(3)] == [(1, 0, 1), (0, 1, 1), (1, 1, 1)]


def test_stage_activity(rng):
    act = Counter()
    fft16(FftConfig(), rand_frame(rng), act)
    assert act[CmKind.MULTIPLIER] == 8 * 3 * 4
    assert act[CmKind.ADDER] == 8 * 2 * 4
    assert act[CmKind.SUBTRACTOR] == 8 * 3 * 4


def test_bit_reverse():
    assert [bit_reverse(i, 4) for i in range(4)] == [0, 8, 4, 12]
    assert bit_reverse(0, 0) == 0


def test_inventory():
    inv = FftConfig().inventory
    assert inv == CmInventory.of(Adder=16, Subtractor=24, Multiplier=24, Register=48, Mux4=16, Mux2=14)
    assert FftConfig(points=4).inventory == inv
