"""Brute-force reference implementations.

Nothing here imports the DA engine or the function models; only the
fixed-point core is shared, so that exact-mode results use the same
rounding rule as the system under test.  Everything is a literal double
loop over the defining sums.

``exact_fx`` mode takes and returns :class:`Fx` / :class:`CFx` values and
narrows each output once.  ``real`` mode takes numbers and returns
floats / complex in double precision.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .fixed import CFx, Fx, FxFormat, narrow, quantize

__all__ = [
    "Mode",
    "OracleResult",
    "oracle_fir",
    "oracle_iir",
    "oracle_dwt",
    "oracle_dft",
    "oracle_dct",
]


class Mode(str, enum.Enum):
    EXACT_FX = "exact_fx"
    REAL = "real"


@dataclass(frozen=True)
class OracleResult:
    values: list
    mode: Mode

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def raws(self) -> list[int]:
        return [v.raw for v in self.values]


def _real(v):
    return float(v) if isinstance(v, Fx) else v


def oracle_fir(taps, signal, mode=Mode.EXACT_FX, out_fmt: FxFormat | None = None) -> OracleResult:
    """``y[n] = sum_k c[k] x[n-k]`` with zero history before ``n = 0``."""
    mode = Mode(mode)
    taps, signal = list(taps), list(signal)
    out = []
    if mode is Mode.REAL:
        c = [_real(t) for t in taps]
        x = [_real(s) for s in signal]
        for n in range(len(x)):
            out.append(sum(c[k] * x[n - k] for k in range(len(c)) if n - k >= 0))
        return OracleResult(out, mode)
    if not signal:
        return OracleResult([], mode)
    in_fmt = signal[0].format
    out_fmt = out_fmt or in_fmt
    scale = taps[0].format.frac_bits + in_fmt.frac_bits
    for n in range(len(signal)):
        acc = 0
        for k in range(len(taps)):
            if n - k >= 0:
                acc += taps[k].raw * signal[n - k].raw
        out.append(narrow(acc, scale, out_fmt))
    return OracleResult(out, mode)


def oracle_iir(a, b, signal, mode=Mode.EXACT_FX, out_fmt: FxFormat | None = None) -> OracleResult:
    """``y[n] = sum_l a[l] x[n-l] + sum_{m>=1} b[m] y[n-m]``.

    ``b`` lists ``b[1], b[2], ...``.  In exact mode both sums are formed
    exactly and ``y[n]`` is narrowed once; the narrowed value is what feeds
    back.
    """
    mode = Mode(mode)
    a, b, signal = list(a), list(b), list(signal)
    y = []
    if mode is Mode.REAL:
        aa = [_real(v) for v in a]
        bb = [_real(v) for v in b]
        x = [_real(s) for s in signal]
        for n in range(len(x)):
            acc = sum(aa[l] * x[n - l] for l in range(len(aa)) if n - l >= 0)
            acc += sum(bb[m - 1] * y[n - m] for m in range(1, len(bb) + 1) if n - m >= 0)
            y.append(acc)
        return OracleResult(y, mode)
    if not signal:
        return OracleResult([], mode)
    in_fmt = signal[0].format
    out_fmt = out_fmt or in_fmt
    fa = a[0].format.frac_bits
    fb = b[0].format.frac_bits if b else fa
    # bring both sums to a common scale
    s_fwd = fa + in_fmt.frac_bits
    s_fb = fb + out_fmt.frac_bits
    scale = max(s_fwd, s_fb)
    for n in range(len(signal)):
        fwd = sum(a[l].raw * signal[n - l].raw for l in range(len(a)) if n - l >= 0)
        back = sum(b[m - 1].raw * y[n - m].raw for m in range(1, len(b) + 1) if n - m >= 0)
        acc = (fwd << (scale - s_fwd)) + (back << (scale - s_fb))
        y.append(narrow(acc, scale, out_fmt))
    return OracleResult(y, mode)


def oracle_dwt(h0, h1, signal, levels: int = 1, mode=Mode.EXACT_FX, formats=None) -> list[tuple[OracleResult, OracleResult]]:
    """Mallat pyramid as literal decimated sums.

    ``W_L(n, j) = sum_m W_L(m, j-1) h0(2n - m)`` and likewise for ``W_H``
    with ``h1``; level 0 is the input.  Returns ``[(approx, detail), ...]``
    for levels ``1..levels``.

    In exact mode ``formats[j-1]`` is the output format of level ``j``
    (default: input format widened by ``j`` integer bits).
    """
    mode = Mode(mode)
    h0, h1 = list(h0), list(h1)
    prev = list(signal)
    result = []
    for j in range(1, levels + 1):
        half = (len(prev) + 1) // 2
        if mode is Mode.REAL:
            c0 = [_real(v) for v in h0]
            c1 = [_real(v) for v in h1]
            x = [_real(v) for v in prev]
            lo, hi = [], []
            for n in range(half):
                lo.append(sum(x[m] * c0[2 * n - m] for m in range(len(x)) if 0 <= 2 * n - m < len(c0)))
                hi.append(sum(x[m] * c1[2 * n - m] for m in range(len(x)) if 0 <= 2 * n - m < len(c1)))
        else:
            if not prev:
                lo, hi = [], []
            else:
                in_fmt = prev[0].format
                fmt = formats[j - 1] if formats else in_fmt.widen(int_bits=1)
                scale = h0[0].format.frac_bits + in_fmt.frac_bits
                lo, hi = [], []
                for n in range(half):
                    s0 = sum(prev[m].raw * h0[2 * n - m].raw for m in range(len(prev)) if 0 <= 2 * n - m < len(h0))
                    s1 = sum(prev[m].raw * h1[2 * n - m].raw for m in range(len(prev)) if 0 <= 2 * n - m < len(h1))
                    lo.append(narrow(s0, scale, fmt))
                    hi.append(narrow(s1, scale, fmt))
        result.append((OracleResult(lo, mode), OracleResult(hi, mode)))
        prev = lo
    return result


def oracle_dft(inputs, n_points: int | None = None, mode=Mode.REAL, out_fmt: FxFormat | None = None) -> OracleResult:
    """``X[k] = sum_n x[n] exp(-j 2 pi k n / N)``.

    Exact mode quantizes each ``cos``/``sin`` factor to the input's fraction
    width plus one integer bit, sums the products exactly and narrows once.
    """
    mode = Mode(mode)
    x = list(inputs)
    n_points = n_points or len(x)
    if mode is Mode.REAL:
        xs = [complex(v) for v in x]
        out = []
        for k in range(n_points):
            out.append(sum(xs[n] * cmath.exp(-2j * math.pi * k * n / n_points) for n in range(n_points)))
        return OracleResult(out, mode)
    in_fmt = x[0].format
    out_fmt = out_fmt or in_fmt
    tw = FxFormat(in_fmt.frac_bits + 2, in_fmt.frac_bits)
    scale = 2 * in_fmt.frac_bits
    out = []
    for k in range(n_points):
        re = im = 0
        for n in range(n_points):
            ang = -2 * math.pi * ((k * n) % n_points) / n_points
            c = quantize(math.cos(ang), tw).raw
            s = quantize(math.sin(ang), tw).raw
            a, b = x[n].re.raw, x[n].im.raw
            re += a * c - b * s
            im += a * s + b * c
        out.append(CFx(narrow(re, scale, out_fmt), narrow(im, scale, out_fmt)))
    return OracleResult(out, mode)


def oracle_dct(inputs, n_points: int | None = None, mode=Mode.REAL, out_fmt: FxFormat | None = None) -> OracleResult:
    """``Y[k] = (2/N) C_k sum_n y(n) cos((2n+1) k pi / 2N)``, ``C_0 = 1/sqrt(2)``."""
    mode = Mode(mode)
    x = list(inputs)
    n_points = n_points or len(x)
    out = []
    if mode is Mode.REAL:
        xs = [_real(v) for v in x]
        for k in range(n_points):
            ck = 1 / math.sqrt(2) if k == 0 else 1.0
            acc = sum(xs[n] * math.cos((2 * n + 1) * k * math.pi / (2 * n_points)) for n in range(n_points))
            out.append(2 / n_points * ck * acc)
        return OracleResult(out, mode)
    in_fmt = x[0].format
    out_fmt = out_fmt or in_fmt
    cf = FxFormat(in_fmt.frac_bits + 1, in_fmt.frac_bits)
    shift = int(math.log2(n_points)) - 1
    for k in range(n_points):
        ck = 1 / math.sqrt(2) if k == 0 else 1.0
        acc = 0
        for n in range(n_points):
            c = quantize(ck * math.cos((2 * n + 1) * k * math.pi / (2 * n_points)), cf).raw
            acc += x[n].raw * c
        out.append(narrow(acc, 2 * in_fmt.frac_bits + shift, out_fmt))
    return OracleResult(out, mode)
