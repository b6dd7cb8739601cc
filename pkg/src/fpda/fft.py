"""Radix-2 DIF FFT on eight recirculating three-multiplier butterflies.

A frame is loaded into the 16 stage registers.  Each pass, the 4:1 muxes
(selected by ``s1 s0`` = stage index) route register pairs to the
butterflies and the results are written back, so the output of stage ``t``
is the input of stage ``t + 1``.  With ``s2`` set, 8- and 4-point frames run
the last three or two stages of the 16-point schedule on the low registers;
unused butterflies idle.

Data travels in the input format widened by ``log2(16) + 2`` integer bits,
enough for the full growth of a 16-point transform including the ``a - b``
term of the complex multiplier.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field, replace
from functools import cached_property

from .errors import ConfigurationError
from .fixed import Q15, CFx, Fx, FxFormat, fx_add, fx_convert, fx_scale, fx_sub, quantize
from .modules import CmInventory, CmKind, butterfly_inventory

__all__ = [
    "Twiddle",
    "Butterfly",
    "FftConfig",
    "complex_multiply",
    "butterfly_step",
    "fft",
    "fft16",
    "fft_scale",
    "fft_routing",
    "bit_reverse",
]

FABRIC_POINTS = 16
FABRIC_BUTTERFLIES = FABRIC_POINTS // 2
FFT_REGISTERS = 48
FFT_MUX4 = 16
FFT_MUX2 = 14


@dataclass(frozen=True)
class Twiddle:
    """Twiddle ``cos(theta) + j sin(theta)`` stored as the three DA-friendly terms.

    ``cos`` and ``sin`` are quantized once; ``diff`` and ``summ`` are their
    exact difference and sum, so the three-multiplier product is
    algebraically the schoolbook product with the quantized factors.
    """

    theta: float
    cos: Fx
    sin: Fx
    diff: Fx  # cos - sin
    summ: Fx  # cos + sin

    @classmethod
    def from_angle(cls, theta: float, frac_bits: int = 15) -> "Twiddle":
        # two integer bits: cos +/- sin reaches sqrt(2)
        fmt = FxFormat(frac_bits + 2, frac_bits)
        c = quantize(math.cos(theta), fmt)
        s = quantize(math.sin(theta), fmt)
        return cls(theta, c, s, Fx(c.raw - s.raw, fmt), Fx(c.raw + s.raw, fmt))

    @classmethod
    def unity_root(cls, k: int, n: int, frac_bits: int = 15) -> "Twiddle":
        """``W_n^k = exp(-j 2 pi k / n)``; angle reduced exactly before evaluation."""
        return cls.from_angle(-2 * math.pi * (k % n) / n, frac_bits)

    def __complex__(self):
        return complex(float(self.cos), float(self.sin))


def complex_multiply(v: CFx, tw: Twiddle, activity: Counter | None = None) -> CFx:
    """``(a + jb)(cos + j sin)`` with three multiplies, one add, two subtracts.

    ``m = cos (a - b)``, ``R = (cos - sin) b + m``, ``I = (cos + sin) a - m``.
    """
    fmt = v.format
    # a - b and the final sums carry one growth bit before narrowing back
    wide = fmt.widen(int_bits=1)
    a, b = fx_convert(v.re, wide), fx_convert(v.im, wide)
    m = fx_scale(fx_sub(a, b), tw.cos)
    re = fx_convert(fx_add(fx_scale(b, tw.diff), m), fmt)
    im = fx_convert(fx_sub(fx_scale(a, tw.summ), m), fmt)
    if activity is not None:
        activity[CmKind.MULTIPLIER] += 3
        activity[CmKind.ADDER] += 1
        activity[CmKind.SUBTRACTOR] += 2
    return CFx(re, im)


def butterfly_step(u: CFx, v: CFx, tw: Twiddle, activity: Counter | None = None) -> tuple[CFx, CFx]:
    """DIF butterfly: ``(u + v, (u - v) * W)``."""
    top = CFx(fx_add(u.re, v.re), fx_add(u.im, v.im))
    diff = CFx(fx_sub(u.re, v.re), fx_sub(u.im, v.im))
    if activity is not None:
        activity[CmKind.ADDER] += 1
        activity[CmKind.SUBTRACTOR] += 1
    return top, complex_multiply(diff, tw, activity)


@dataclass(frozen=True)
class Butterfly:
    index: int
    inventory: CmInventory = field(default_factory=butterfly_inventory)


def bit_reverse(i: int, bits: int) -> int:
    return int(f"{i:0{bits}b}"[::-1], 2) if bits else 0


def fft_routing(points: int) -> list[list[tuple[int, int, int]]]:
    """Per-stage schedule ``[(p, q, k), ...]``: butterfly ``b`` reads registers
    ``p`` and ``q`` and applies ``W_points^k``."""
    stages = []
    for t in range(int(math.log2(points))):
        span = points >> (t + 1)
        sched = []
        for start in range(0, points, 2 * span):
            for i in range(span):
                sched.append((start + i, start + i + span, i << t))
        stages.append(sched)
    return stages


@dataclass(frozen=True)
class FftConfig:
    points: int = FABRIC_POINTS
    in_fmt: FxFormat = Q15
    butterflies: tuple[Butterfly, ...] = tuple(Butterfly(i) for i in range(FABRIC_BUTTERFLIES))

    def __post_init__(self):
        if self.points not in (2, 4, 8, 16):
            raise ConfigurationError(f"points must be a power of two <= {FABRIC_POINTS}, got {self.points}")

    @property
    def stages(self) -> int:
        return int(math.log2(self.points))

    @property
    def work_fmt(self) -> FxFormat:
        return self.in_fmt.widen(int_bits=int(math.log2(FABRIC_POINTS)) + 2)

    @cached_property
    def schedule(self):
        return fft_routing(self.points)

    @cached_property
    def twiddles(self) -> list[list[Twiddle]]:
        return [[Twiddle.unity_root(k, self.points, self.in_fmt.frac_bits) for _, _, k in stage]
                for stage in self.schedule]

    @property
    def stage_offset(self) -> int:
        """Smaller sizes run the tail of the 16-point schedule on the low registers."""
        return int(math.log2(FABRIC_POINTS)) - self.stages

    def selects(self, stage: int) -> tuple[int, int, int]:
        """Mux select lines ``(s0, s1, s2)`` for pass ``stage`` of this size."""
        t = stage + self.stage_offset
        return t & 1, t >> 1 & 1, int(self.points != FABRIC_POINTS)

    @property
    def inventory(self) -> CmInventory:
        # the fabric is fixed: all butterflies are charged whatever the size
        inv = CmInventory()
        for bf in self.butterflies:
            inv = inv + bf.inventory
        return inv + CmInventory.of(Register=FFT_REGISTERS, Mux4=FFT_MUX4, Mux2=FFT_MUX2)


def fft_scale(cfg: FftConfig, points: int) -> FftConfig:
    if points <= 0 or points & (points - 1) or points > FABRIC_POINTS:
        raise ConfigurationError(f"points must be a power of two <= {FABRIC_POINTS}, got {points}")
    return replace(cfg, points=points)


def _load(cfg: FftConfig, frame) -> list[CFx]:
    frame = list(frame)
    if len(frame) != cfg.points:
        raise ConfigurationError(f"expected {cfg.points} samples, got {len(frame)}")
    wf = cfg.work_fmt
    regs = []
    for z in frame:
        if z.format.frac_bits != wf.frac_bits:
            raise ConfigurationError(f"sample format {z.format} has the wrong fraction width for {wf}")
        regs.append(z if z.format == wf else CFx(fx_convert(z.re, wf), fx_convert(z.im, wf)))
    return regs


def fft(cfg: FftConfig, frame, activity: Counter | None = None) -> list[CFx]:
    """Transform one frame of ``cfg.points`` complex samples; natural-order output."""
    regs = _load(cfg, frame)
    for sched, tws in zip(cfg.schedule, cfg.twiddles):
        for (p, q, _), tw in zip(sched, tws):
            regs[p], regs[q] = butterfly_step(regs[p], regs[q], tw, activity)
        if activity is not None:
            activity[CmKind.REGISTER] += cfg.points
    # DIF leaves the spectrum bit-reversed; the permutation is not charged
    bits = cfg.stages
    return [regs[bit_reverse(k, bits)] for k in range(cfg.points)]


def fft16(cfg: FftConfig, frame, activity: Counter | None = None) -> list[CFx]:
    if cfg.points != FABRIC_POINTS:
        raise ConfigurationError(f"fft16 needs a 16-point configuration, got {cfg.points}")
    return fft(cfg, frame, activity)
