import ast
import math
from pathlib import Path

import numpy as np
import pytest

import fpda.oracles as oracles_mod
from fpda.dct import DctConfig, dct16
from fpda.filters import daubechies8
from fpda.fixed import Q15, CFx, Fx, quantize
from fpda.oracles import Mode, oracle_dct, oracle_dft, oracle_dwt, oracle_fir, oracle_iir


def fxs(raws):
    return [Fx(int(r)) for r in raws]


@pytest.fixture
def rng():
    return np.random.default_rng(9)


def test_oracle_imports_only_fixed_point_core():
    tree = ast.parse(Path(oracles_mod.__file__).read_text())
    local = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom) and node.level:
            local.add(node.module)
    assert local <= {"fixed"}


def test_zero_in_zero_out():
    z = fxs([0] * 16)
    assert oracle_fir(fxs([5, 6]), z).raws() == [0] * 16
    assert oracle_iir(fxs([5, 6]), fxs([7]), z).raws() == [0] * 16
    assert all(v == 0 for v in oracle_dct(z, 16).values)
    assert all(v == 0 for v in oracle_dft([CFx(Fx(0), Fx(0))] * 16, 16).values)


def test_dft_impulse():
    x = [CFx(quantize(0.5), Fx(0))] + [CFx(Fx(0), Fx(0))] * 15
    assert all(abs(v - 0.5) < 1e-15 for v in oracle_dft(x, 16).values)


def test_dft_parseval_real_mode(rng):
    for _ in range(20):
        raws = rng.integers(-2**15, 2**15, (16, 2))
        x = [CFx(Fx(int(r)), Fx(int(i))) for r, i in raws]
        X = np.array(oracle_dft(x, 16).values)
        xc = np.array([complex(z) for z in x])
        assert abs(np.sum(np.abs(X) ** 2) - 16 * np.sum(np.abs(xc) ** 2)) < 1e-10


def test_dft_matches_numpy(rng):
    raws = rng.integers(-2**15, 2**15, (8, 2))
    x = [CFx(Fx(int(r)), Fx(int(i))) for r, i in raws]
    xc = np.array([complex(z) for z in x])
    assert np.allclose(oracle_dft(x, 8).values, np.fft.fft(xc), atol=1e-12)


def test_dft_exact_mode_near_real(rng):
    raws = rng.integers(-2**14, 2**14, (16, 2))
    x = [CFx(Fx(int(r)), Fx(int(i))) for r, i in raws]
    fmt = Q15.widen(int_bits=5)
    exact = oracle_dft(x, 16, Mode.EXACT_FX, fmt).values
    real = oracle_dft(x, 16).values
    for e, r in zip(exact, real):
        assert abs(complex(e) - r) < 16 * 2.0**-15


def test_iir_zero_feedback_equals_fir(rng):
    a = fxs(rng.integers(-2**15, 2**15, 12))
    xs = fxs(rng.integers(-2**15, 2**15, 100))
    assert oracle_iir(a, fxs([0] * 11), xs).raws() == oracle_fir(a, xs).raws()
    assert oracle_iir(a, [], xs).raws() == oracle_fir(a, xs).raws()


def test_fir_real_mode(rng):
    a = fxs(rng.integers(-2**15, 2**15, 5))
    xs = fxs(rng.integers(-2**15, 2**15, 30))
    real = oracle_fir(a, xs, Mode.REAL).values
    want = np.convolve([float(v) for v in xs], [float(v) for v in a])[:30]
    assert np.allclose(real, want, atol=1e-12)


def test_dwt_level1_is_downsampled_fir(rng):
    pair = daubechies8()
    xs = fxs(rng.integers(-2**15, 2**15, 40))
    (lo, hi), = oracle_dwt(pair.lowpass, pair.highpass, xs, 1)
    fmt = lo.values[0].format
    assert lo.raws() == oracle_fir(pair.lowpass, xs, out_fmt=fmt).raws()[::2]
    assert hi.raws() == oracle_fir(pair.highpass, xs, out_fmt=fmt).raws()[::2]


def test_dct_constant_agrees_with_system():
    c = [quantize(0.6)] * 16
    ref = oracle_dct(c, 16).values
    sysv = dct16(DctConfig(), c)
    assert ref[0] == pytest.approx(math.sqrt(2) * float(c[0]), abs=1e-12)
    assert abs(float(sysv[0]) - ref[0]) <= 16 * 2.0**-15


def test_dct_matches_definition(rng):
    # DCT-II with C_0 = 1/sqrt(2) and 2/N scaling
    x = fxs(rng.integers(-2**15, 2**15, 16))
    xf = np.array([float(v) for v in x])
    n = np.arange(16)
    for k, y in enumerate(oracle_dct(x, 16).values):
        c = 1 / math.sqrt(2) if k == 0 else 1.0
        want = 2 / 16 * c * np.sum(xf * np.cos((2 * n + 1) * k * math.pi / 32))
        assert y == pytest.approx(want, abs=1e-12)
