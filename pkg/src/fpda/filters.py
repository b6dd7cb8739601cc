"""Filter-family configurations: PDA FIR, PDA IIR and the DWT decimator.

All three are stateful, single-owner objects with zero-initialized delay
lines.  Each output is formed exactly in a widened accumulator and narrowed
once.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .da import DaPlan, da_eval_batch, da_eval_wide, da_plan
from .errors import ConfigurationError
from .fixed import Q15, Fx, FxFormat, narrow, quantize
from .modules import CmInventory, CmKind

__all__ = [
    "FirConfig",
    "IirConfig",
    "DwtConfig",
    "fir_step",
    "fir_filter",
    "iir_step",
    "iir_filter",
    "dwt_step",
    "dwt_pyramid",
    "qmf_holds",
    "load_coefficients",
    "daubechies8",
]

# Adders in the IIR combining stage (forward + feedback merge and the
# feedback accumulation into the output register).
IIR_COMBINER_ADDERS = 2


class FirConfig:
    """``L``-tap direct-form FIR evaluated by parallel DA."""

    def __init__(self, taps, in_fmt: FxFormat = Q15, out_fmt: FxFormat | None = None):
        self.taps = tuple(taps)
        if not self.taps:
            raise ConfigurationError("FIR needs at least one tap")
        self.in_fmt = in_fmt
        self.out_fmt = out_fmt or in_fmt
        self.plan: DaPlan = da_plan(self.taps, in_fmt.total_bits)
        self.scale = self.plan.coeff_format.frac_bits + in_fmt.frac_bits
        self.delay_line = deque([Fx(0, in_fmt)] * len(self.taps), maxlen=len(self.taps))

    def __len__(self):
        return len(self.taps)

    @property
    def inventory(self) -> CmInventory:
        return self.plan.inventory + CmInventory.of(Register=len(self.taps), Mux2=1)

    def reset(self):
        self.delay_line.extend([Fx(0, self.in_fmt)] * len(self.taps))

    def push(self, x: Fx):
        if x.format != self.in_fmt:
            raise ConfigurationError(f"sample format {x.format} does not match FIR input {self.in_fmt}")
        self.delay_line.appendleft(x)

    def peek_wide(self) -> int:
        """Exact inner product over the current delay line (newest first)."""
        return da_eval_wide(self.plan, self.delay_line)

    def charge(self, activity: Counter | None, samples: int = 1):
        if activity is None:
            return
        activity[CmKind.LUT16] += self.plan.lut_count * samples
        activity[CmKind.ADDER] += self.plan.adder_count * samples
        activity[CmKind.REGISTER] += len(self.taps) * samples


def fir_step(cfg: FirConfig, x: Fx, activity: Counter | None = None) -> Fx:
    cfg.push(x)
    cfg.charge(activity)
    return narrow(cfg.peek_wide(), cfg.scale, cfg.out_fmt)


def _history_windows(history: list[int], samples: list[int], taps: int) -> np.ndarray:
    # rows are [x[n], x[n-1], ..., x[n-L+1]] for each new sample n
    full = np.array(history[::-1] + samples, dtype=np.int64)
    idx = np.arange(len(samples))[:, None] + (taps - 1) - np.arange(taps)[None, :]
    return full[idx]


def fir_filter(cfg: FirConfig, xs, activity: Counter | None = None) -> list[Fx]:
    """Stream a block through ``cfg``; same results as repeated :func:`fir_step`."""
    xs = list(xs)
    if not xs:
        return []
    for x in xs:
        if x.format != cfg.in_fmt:
            raise ConfigurationError(f"sample format {x.format} does not match FIR input {cfg.in_fmt}")
    history = [s.raw for s in list(cfg.delay_line)[: len(cfg.taps) - 1]]
    windows = _history_windows(history, [x.raw for x in xs], len(cfg.taps))
    wide = da_eval_batch(cfg.plan, windows)
    for x in xs:
        cfg.delay_line.appendleft(x)
    cfg.charge(activity, len(xs))
    return [narrow(int(v), cfg.scale, cfg.out_fmt) for v in wide]


class IirConfig:
    """Forward FIR over ``a[0..L-1]`` plus feedback FIR over ``b[1..L-1]`` and an adder.

    The feedback filter's delay line holds past outputs ``y[n-1], y[n-2], ...``.
    """

    def __init__(self, a, b, in_fmt: FxFormat = Q15, out_fmt: FxFormat | None = None):
        a, b = tuple(a), tuple(b)
        self.forward = FirConfig(a, in_fmt)
        self.out_fmt = out_fmt or in_fmt
        self.feedback = FirConfig(b, self.out_fmt) if b else None
        s_fwd = self.forward.scale
        s_fb = self.feedback.scale if self.feedback else s_fwd
        self.scale = max(s_fwd, s_fb)
        self._align_fwd = self.scale - s_fwd
        self._align_fb = self.scale - s_fb

    @property
    def a(self):
        return self.forward.taps

    @property
    def b(self):
        return self.feedback.taps if self.feedback else ()

    @property
    def inventory(self) -> CmInventory:
        inv = self.forward.plan.inventory + CmInventory.of(
            Register=len(self.forward), Mux2=1, Adder=IIR_COMBINER_ADDERS
        )
        if self.feedback:
            inv = inv + self.feedback.plan.inventory + CmInventory.of(Register=len(self.feedback))
        return inv

    def reset(self):
        self.forward.reset()
        if self.feedback:
            self.feedback.reset()


def iir_step(cfg: IirConfig, x: Fx, activity: Counter | None = None) -> Fx:
    cfg.forward.push(x)
    cfg.forward.charge(activity)
    acc = cfg.forward.peek_wide() << cfg._align_fwd
    if cfg.feedback:
        acc += cfg.feedback.peek_wide() << cfg._align_fb
        cfg.feedback.charge(activity)
    if activity is not None:
        activity[CmKind.ADDER] += IIR_COMBINER_ADDERS
    y = narrow(acc, cfg.scale, cfg.out_fmt)
    if cfg.feedback:
        cfg.feedback.push(y)
    return y


def iir_filter(cfg: IirConfig, xs, activity: Counter | None = None) -> list[Fx]:
    return [iir_step(cfg, x, activity) for x in xs]


def qmf_holds(h0, h1) -> bool:
    """``h1[n] == (-1)**n * h0[L-1-n]`` exactly on raw values."""
    h0, h1 = list(h0), list(h1)
    if len(h0) != len(h1):
        return False
    last = len(h0) - 1
    return all(h1[n].raw == (-1) ** n * h0[last - n].raw for n in range(len(h0)))


class DwtConfig:
    """Decimator pair (scaling + wavelet filter) driven by a 1-bit phase counter.

    Level ``j`` of the pyramid outputs in the input format widened by ``j``
    integer bits, since each analysis filter has L1 gain below 2.
    """

    def __init__(self, h0, h1, in_fmt: FxFormat = Q15, levels: int = 1, check_qmf: bool = True):
        h0, h1 = tuple(h0), tuple(h1)
        if len(h0) != len(h1):
            raise ConfigurationError("scaling and wavelet filters must have equal length")
        if check_qmf and not qmf_holds(h0, h1):
            raise ConfigurationError("wavelet filter is not the quadrature mirror of the scaling filter")
        if levels < 1:
            raise ConfigurationError(f"levels must be >= 1, got {levels}")
        self.h0, self.h1 = h0, h1
        self.in_fmt = in_fmt
        self.levels = levels
        self.out_fmt = in_fmt.widen(int_bits=1)
        self.lowpass = FirConfig(h0, in_fmt, self.out_fmt)
        self.highpass = FirConfig(h1, in_fmt, self.out_fmt)
        self.phase = 0

    @property
    def inventory(self) -> CmInventory:
        # one decimator; the wavelet branch shares the delay line, and higher
        # levels recirculate through the same hardware
        taps = len(self.h0)
        return CmInventory.of(Counter1Bit=1, Lut16=taps, Adder=taps, Register=taps + 1)

    def reset(self):
        self.lowpass.reset()
        self.highpass.reset()
        self.phase = 0

    def level_config(self, level: int) -> "DwtConfig":
        """Fresh single-level decimator for pyramid level ``level`` (1-based)."""
        return DwtConfig(self.h0, self.h1, self.in_fmt.widen(int_bits=level - 1), 1, check_qmf=False)


def dwt_step(cfg: DwtConfig, x: Fx, activity: Counter | None = None):
    """Feed one sample; returns ``(approx, detail)`` on even phases, else ``None``."""
    cfg.lowpass.push(x)
    cfg.highpass.push(x)
    emit = cfg.phase == 0
    cfg.phase ^= 1
    if activity is not None:
        activity[CmKind.COUNTER1] += 1
        activity[CmKind.REGISTER] += len(cfg.h0)
    if not emit:
        return None
    if activity is not None:
        activity[CmKind.LUT16] += 2 * len(cfg.h0)
        activity[CmKind.ADDER] += 2 * len(cfg.h0)
        activity[CmKind.REGISTER] += 1
    lo = narrow(cfg.lowpass.peek_wide(), cfg.lowpass.scale, cfg.out_fmt)
    hi = narrow(cfg.highpass.peek_wide(), cfg.highpass.scale, cfg.out_fmt)
    return lo, hi


def _decimate_block(cfg: DwtConfig, xs: list[Fx]):
    # vectorized equivalent of repeated dwt_step
    if not xs:
        return [], []
    taps = len(cfg.h0)
    history = [s.raw for s in list(cfg.lowpass.delay_line)[: taps - 1]]
    windows = _history_windows(history, [x.raw for x in xs], taps)
    start = cfg.phase  # first emitting index within the block
    keep = windows[start::2]
    lo = da_eval_batch(cfg.lowpass.plan, keep)
    hi = da_eval_batch(cfg.highpass.plan, keep)
    for x in xs:
        cfg.lowpass.delay_line.appendleft(x)
        cfg.highpass.delay_line.appendleft(x)
    cfg.phase = (cfg.phase + len(xs)) & 1
    return (
        [narrow(int(v), cfg.lowpass.scale, cfg.out_fmt) for v in lo],
        [narrow(int(v), cfg.highpass.scale, cfg.out_fmt) for v in hi],
    )


def dwt_pyramid(cfg: DwtConfig, signal, levels: int | None = None, activity: Counter | None = None):
    """Mallat pyramid: level ``j`` decimates level ``j-1``'s approximation.

    Returns ``[(approx, detail), ...]`` for levels ``1..levels``.  Delay lines
    start at zero, so early outputs include the zero-padding transient.  A
    signal too short for the deeper levels leaves their streams empty.
    """
    samples = list(getattr(signal, "samples", signal))
    levels = levels or cfg.levels
    if levels < 1:
        raise ConfigurationError(f"levels must be >= 1, got {levels}")
    out = []
    prev = samples
    for j in range(1, levels + 1):
        stage = cfg.level_config(j)
        lo, hi = _decimate_block(stage, prev)
        if activity is not None:
            n_in, n_out = len(prev), len(lo)
            taps = len(cfg.h0)
            activity[CmKind.COUNTER1] += n_in
            activity[CmKind.REGISTER] += taps * n_in + n_out
            activity[CmKind.LUT16] += 2 * taps * n_out
            activity[CmKind.ADDER] += 2 * taps * n_out
        out.append((lo, hi))
        prev = lo
    return out


def load_coefficients(path, fmt: FxFormat = Q15) -> list[Fx]:
    """Whitespace-separated reals; ``#`` starts a comment."""
    with open(path) as fh:
        text = fh.read()
    return parse_coefficients(text, fmt)


def parse_coefficients(text: str, fmt: FxFormat = Q15) -> list[Fx]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        for word in line.split():
            try:
                out.append(quantize(float(word), fmt))
            except ValueError as exc:
                raise ConfigurationError(f"line {lineno}: not a number: {word!r}") from exc
    return out


@dataclass(frozen=True)
class WaveletPair:
    lowpass: tuple[Fx, ...]
    highpass: tuple[Fx, ...]


def daubechies8(fmt: FxFormat = Q15) -> WaveletPair:
    """Bundled 8-tap Daubechies pair (4-digit values) quantized to ``fmt``."""
    data = resources.files("fpda.data")
    lo = parse_coefficients(data.joinpath("db8_lowpass.txt").read_text(), fmt)
    hi = parse_coefficients(data.joinpath("db8_highpass.txt").read_text(), fmt)
    return WaveletPair(tuple(lo), tuple(hi))
