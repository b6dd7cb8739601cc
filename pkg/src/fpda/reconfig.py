"""The fabric control plane.

The decoder turns a function selection into a one-hot control word; a
:class:`Fabric` holds the shared pool of common modules and at most one
active :class:`Configuration`, whose datapath and port-to-port netlist are
built by the filter and transform models.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from . import filters
from .dct import BLOCK_OUTPUTS, DctConfig, charge_frames, dct_batch
from .errors import CapacityError, ConfigurationError, FrameFormatError, OccupancyError
from .fft import FABRIC_BUTTERFLIES, FABRIC_POINTS, FFT_MUX4, FftConfig, fft, fft_routing, fft_scale
from .filters import DwtConfig, FirConfig, IirConfig
from .fixed import Q15, Fx, FxFormat, narrow, quantize
from .modules import TABLE_ORDER, CmInventory, CmKind
from .signals import Channel, SignalFrame

__all__ = [
    "Function",
    "ControlWord",
    "IDLE",
    "decode",
    "encode",
    "Configuration",
    "build_configuration",
    "function_inventory",
    "pool_requirement",
    "Fabric",
    "RunReport",
    "configure",
    "teardown",
    "run",
    "ALL_FUNCTIONS",
]


class Function(str, enum.Enum):
    FIR = "FIR"
    IIR = "IIR"
    DCT = "DCT"
    FFT = "FFT"
    DWT = "DWT"

    def __str__(self):
        return self.value


# control line C1..C5 order
CONTROL_ORDER = (Function.FIR, Function.IIR, Function.DCT, Function.FFT, Function.DWT)
ALL_FUNCTIONS = frozenset(Function)

# LUTs hold function-specific contents; only functions in the same family
# can reuse each other's tables.  FFT needs none.
LUT_FAMILY = {
    Function.FIR: "filter",
    Function.IIR: "filter",
    Function.DWT: "wavelet",
    Function.DCT: "cosine",
    Function.FFT: None,
}


@dataclass(frozen=True)
class ControlWord:
    bits: tuple[int, int, int, int, int]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if len(bits) != 5 or any(b not in (0, 1) for b in bits) or sum(bits) > 1:
            raise ConfigurationError(f"control word must be one-hot or idle, got {bits}")
        object.__setattr__(self, "bits", bits)

    c1 = property(lambda self: self.bits[0])
    c2 = property(lambda self: self.bits[1])
    c3 = property(lambda self: self.bits[2])
    c4 = property(lambda self: self.bits[3])
    c5 = property(lambda self: self.bits[4])

    @property
    def idle(self) -> bool:
        return not any(self.bits)

    def __str__(self):
        return "".join(map(str, self.bits))


IDLE = ControlWord((0, 0, 0, 0, 0))


def decode(function) -> ControlWord:
    """One-hot control word for ``function``; ``None`` gives the idle word."""
    if function is None:
        return IDLE
    f = Function(function)
    return ControlWord(tuple(int(f is g) for g in CONTROL_ORDER))


def encode(word: ControlWord) -> Function | None:
    if word.idle:
        return None
    return CONTROL_ORDER[word.bits.index(1)]


# ---------------------------------------------------------------- netlists

Netlist = tuple[tuple[str, str], ...]


class _Wiring:
    def __init__(self):
        self.edges: list[tuple[str, str]] = []
        self._adders = 0

    def wire(self, src: str, dst: str):
        self.edges.append((src, dst))

    def adder_tree(self, prefix: str, inputs: list[str]) -> str:
        """Pairwise reduction; returns the final output port."""
        level = list(inputs)
        while len(level) > 1:
            nxt = []
            for i in range(0, len(level) - 1, 2):
                name = f"{prefix}add{self._adders}"
                self._adders += 1
                self.wire(level[i], f"{name}.a")
                self.wire(level[i + 1], f"{name}.b")
                nxt.append(f"{name}.y")
            if len(level) % 2:
                nxt.append(level[-1])
            level = nxt
        return level[0]

    def freeze(self) -> Netlist:
        return tuple(self.edges)


def _da_filter_netlist(w: _Wiring, prefix: str, taps: int, word_bits: int, src: str) -> str:
    w.wire(src, f"{prefix}reg0.d")
    for i in range(1, taps):
        w.wire(f"{prefix}reg{i - 1}.q", f"{prefix}reg{i}.d")
    lut_outs = []
    for g in range(0, taps, 4):
        lanes = list(range(g, min(g + 4, taps)))
        copies = 2 * len(lanes)
        for c in range(copies):
            lut_outs.append(f"{prefix}lut{g // 4}.{c}.out")
        for i in lanes:
            for j in range(word_bits):
                w.wire(f"{prefix}reg{i}.q[{j}]", f"{prefix}lut{g // 4}.{j % copies}.a{i % 4}")
    return w.adder_tree(prefix, lut_outs)


def _fir_netlist(cfg: FirConfig) -> Netlist:
    w = _Wiring()
    w.wire("in", "mux2_0.a")
    w.wire("const0", "mux2_0.b")
    out = _da_filter_netlist(w, "", len(cfg.taps), cfg.plan.word_bits, "mux2_0.y")
    w.wire(out, "out")
    return w.freeze()


def _iir_netlist(cfg: IirConfig) -> Netlist:
    w = _Wiring()
    w.wire("in", "mux2_0.a")
    w.wire("const0", "mux2_0.b")
    fwd = _da_filter_netlist(w, "fwd.", len(cfg.forward), cfg.forward.plan.word_bits, "mux2_0.y")
    w.wire(fwd, "comb0.a")
    if cfg.feedback:
        back = _da_filter_netlist(w, "fb.", len(cfg.feedback), cfg.feedback.plan.word_bits, "comb1.y")
        w.wire(back, "comb0.b")
    w.wire("comb0.y", "comb1.a")
    w.wire("round", "comb1.b")
    w.wire("comb1.y", "out")
    return w.freeze()


def _dwt_netlist(cfg: DwtConfig) -> Netlist:
    w = _Wiring()
    taps = len(cfg.h0)
    w.wire("in", "reg0.d")
    for i in range(1, taps):
        w.wire(f"reg{i - 1}.q", f"reg{i}.d")
    for branch in ("lo", "hi"):
        outs = []
        for g in range(0, taps, 4):
            for c in range(2):
                outs.append(f"{branch}.lut{g // 4}.{c}.out")
                for i in range(g, min(g + 4, taps)):
                    w.wire(f"reg{i}.q", f"{branch}.lut{g // 4}.{c}.a{i % 4}")
        w.wire(w.adder_tree(f"{branch}.", outs), f"{branch}.acc.a")
        w.wire(f"{branch}.acc.y", f"{branch}.acc.b")
        w.wire(f"{branch}.acc.y", "outreg.d" if branch == "lo" else "out_detail")
    w.wire("clk", "cnt.clk")
    w.wire("cnt.q", "outreg.load")
    w.wire("outreg.q", "out_approx")
    return w.freeze()


def _fft_netlist(cfg: FftConfig) -> Netlist:
    w = _Wiring()
    full = fft_routing(FABRIC_POINTS)
    for t, sched in enumerate(full):
        for b, (p, q, _) in enumerate(sched):
            w.wire(f"reg{p}.q", f"mux4_{2 * b}.in{t}")
            w.wire(f"reg{q}.q", f"mux4_{2 * b + 1}.in{t}")
            w.wire(f"bf{b}.top", f"wb{p}.in{t}")
            w.wire(f"bf{b}.bot", f"wb{q}.in{t}")
    for b in range(FABRIC_BUTTERFLIES):
        w.wire(f"mux4_{2 * b}.y", f"bf{b}.u")
        w.wire(f"mux4_{2 * b + 1}.y", f"bf{b}.v")
    for m in range(FFT_MUX4):
        w.wire("s0", f"mux4_{m}.sel0")
        w.wire("s1", f"mux4_{m}.sel1")
    w.wire("s2", "stage_offset.sel")
    # registers 0 and 15 always take bf0.top / bf7.bot; the rest choose
    # between a frame load and their stage write-back
    last = FABRIC_POINTS - 1
    for r in range(1, last):
        w.wire(f"in{r}", f"mux2_{r - 1}.a")
        w.wire(f"wb{r}.y", f"mux2_{r - 1}.b")
        w.wire("load", f"mux2_{r - 1}.sel")
        w.wire(f"mux2_{r - 1}.y", f"reg{r}.d")
    w.wire("wb0.y", "reg0.d")
    w.wire(f"wb{last}.y", f"reg{last}.d")
    return w.freeze()


def _dct_netlist(cfg: DctConfig) -> Netlist:
    w = _Wiring()
    for n in range(8):
        w.wire(f"in{n}", f"s{n}.a")
        w.wire(f"in{15 - n}", f"s{n}.b")
        w.wire(f"in{n}", f"d{n}.a")
        w.wire(f"in{15 - n}", f"d{n}.b")
    for n in range(4):
        w.wire(f"s{n}.y", f"ee{n}.a")
        w.wire(f"s{7 - n}.y", f"ee{n}.b")
        w.wire(f"s{n}.y", f"eo{n}.a")
        w.wire(f"s{7 - n}.y", f"eo{n}.b")
    sources = {
        "even4": [f"ee{n}.y" for n in range(4)],
        "evenodd4": [f"eo{n}.y" for n in range(4)],
        "odd_left": [f"d{n}.y" for n in range(4)],
        "odd_right": [f"d{n}.y" for n in range(4, 8)],
    }
    for name, outs in BLOCK_OUTPUTS.items():
        for r, k in enumerate(outs):
            lut = f"{name}.lut{r}"
            for i, src in enumerate(sources[name]):
                w.wire(src, f"{lut}.a{i}")
            w.wire(f"{lut}.out", f"{name}.sacc{r}.in")
            if name in ("even4", "evenodd4"):
                w.wire(f"{name}.sacc{r}.y", f"out{k}")
    for r, k in enumerate(BLOCK_OUTPUTS["odd_left"]):
        w.wire(f"odd_left.sacc{r}.y", f"oddsum{r}.a")
        w.wire(f"odd_right.sacc{r}.y", f"oddsum{r}.b")
        w.wire(f"oddsum{r}.y", f"out{k}")
    return w.freeze()


# ---------------------------------------------------------- configurations


def default_lowpass(taps: int = 16, fmt: FxFormat = Q15, cutoff: float = 0.25) -> list[Fx]:
    """Hamming-windowed sinc lowpass, used when no coefficients are given."""
    n = np.arange(taps) - (taps - 1) / 2
    h = 2 * cutoff * np.sinc(2 * cutoff * n) * np.hamming(taps)
    return [quantize(float(v), fmt) for v in h]


def _coeff_list(value, fmt: FxFormat) -> list[Fx]:
    return [v if isinstance(v, Fx) else quantize(v, fmt) for v in value]


@dataclass
class Configuration:
    function: Function
    params: Mapping
    control: ControlWord
    datapath: object
    inventory: CmInventory
    interconnect: Netlist
    state: dict = field(default_factory=dict)

    def reset(self):
        if hasattr(self.datapath, "reset"):
            self.datapath.reset()
        self.state.clear()


def build_configuration(function, **params) -> Configuration:
    """Build a function's datapath and wiring without touching any fabric.

    Parameters by function (all optional):

    * FIR: ``taps`` (list of Fx/real, or a tap count), ``format``
    * IIR: ``a``, ``b`` (``b[1..L-1]``), ``format``
    * DWT: ``h0``, ``h1``, ``levels``, ``format``
    * FFT: ``points``, ``format``
    * DCT: ``format``
    """
    f = Function(function)
    fmt = params.get("format") or Q15
    if isinstance(fmt, str):
        fmt = FxFormat.parse(fmt)
    if f is Function.FIR:
        taps = params.get("taps", 16)
        taps = default_lowpass(taps, fmt) if isinstance(taps, int) else _coeff_list(taps, fmt)
        dp = FirConfig(taps, fmt)
        net = _fir_netlist(dp)
    elif f is Function.IIR:
        a = params.get("a", 16)
        a = default_lowpass(a, fmt) if isinstance(a, int) else _coeff_list(a, fmt)
        b = params.get("b")
        if b is None:
            b = [quantize(0.25, fmt)] + [Fx(0, fmt)] * (len(a) - 2)
        dp = IirConfig(a, _coeff_list(b, fmt), fmt)
        net = _iir_netlist(dp)
    elif f is Function.DWT:
        pair = filters.daubechies8(fmt)
        h0 = _coeff_list(params.get("h0") or pair.lowpass, fmt)
        h1 = _coeff_list(params.get("h1") or pair.highpass, fmt)
        dp = DwtConfig(h0, h1, fmt, int(params.get("levels", 1)))
        net = _dwt_netlist(dp)
    elif f is Function.FFT:
        dp = fft_scale(FftConfig(in_fmt=fmt), int(params.get("points", 16)))
        net = _fft_netlist(dp)
    else:
        dp = DctConfig(fmt)
        net = _dct_netlist(dp)
    return Configuration(f, MappingProxyType(dict(params)), decode(f), dp, dp.inventory, net)


_DEFAULT_INVENTORY: dict[Function, CmInventory] = {}


def function_inventory(function) -> CmInventory:
    """Charged modules for a function at its reference size (16 taps / 16 points)."""
    f = Function(function)
    if f not in _DEFAULT_INVENTORY:
        _DEFAULT_INVENTORY[f] = build_configuration(f).inventory
    return _DEFAULT_INVENTORY[f]


def pool_requirement(functions: Iterable, inventories: Mapping | None = None) -> CmInventory:
    """Smallest pool able to host any one of ``functions`` at a time.

    Content-agnostic modules are shared, so each takes the per-function
    maximum.  LUTs are shared only within a family (FIR with IIR); families
    add up.
    """
    funcs = [Function(f) for f in functions]
    if not funcs:
        raise ConfigurationError("pool_requirement needs at least one function")
    inv = {f: (inventories or {}).get(f) or function_inventory(f) for f in funcs}
    shared = CmInventory()
    for f in funcs:
        shared = shared.maximum(inv[f].without([CmKind.LUT16]))
    families: dict[str, int] = {}
    for f in funcs:
        fam = LUT_FAMILY[f]
        if fam is not None:
            families[fam] = max(families.get(fam, 0), inv[f][CmKind.LUT16])
    return shared + CmInventory({CmKind.LUT16: sum(families.values())})


# -------------------------------------------------------------------- runs


@dataclass(frozen=True)
class RunReport:
    function: Function
    control: ControlWord
    inventory: CmInventory
    activations: Mapping[CmKind, int]
    cycles: int
    samples_in: int
    samples_out: int

    def to_text(self) -> str:
        lines = [
            f"function     {self.function}",
            f"control      {self.control}",
            f"samples_in   {self.samples_in}",
            f"samples_out  {self.samples_out}",
            f"cycles       {self.cycles}",
            "",
            f"{'CmKind':<12}  {'Charged':>7}  {'Activations':>11}",
        ]
        for k in TABLE_ORDER:
            n = self.inventory[k]
            a = self.activations.get(k, 0)
            lines.append(f"{k.value:<12}  {n if n else '-':>7}  {a:>11}")
        return "\n".join(lines) + "\n"


class Fabric:
    """Shared module pool with a single configuration slot."""

    def __init__(self, pool: CmInventory | None = None):
        self.pool = pool if pool is not None else pool_requirement(ALL_FUNCTIONS)
        self.available = self.pool
        self.active: Configuration | None = None

    @property
    def control(self) -> ControlWord:
        return self.active.control if self.active else IDLE

    @property
    def interconnect(self) -> Netlist:
        return self.active.interconnect if self.active else ()

    def configure(self, function, **params) -> Configuration:
        if self.active is not None:
            raise OccupancyError(f"fabric already configured for {self.active.function}; tear down first")
        cfg = build_configuration(function, **params)
        short = cfg.inventory.deficit(self.available)
        if short:
            k = short[0]
            raise CapacityError(
                f"{cfg.function} needs {cfg.inventory[k]} {k} but the pool has {self.available[k]}",
                cm_kind=k,
                needed=cfg.inventory[k],
                available=self.available[k],
            )
        self.available = self.available - cfg.inventory
        self.active = cfg
        return cfg

    def teardown(self):
        """Release the active configuration; its delay lines and registers are discarded."""
        if self.active is None:
            return
        self.active.reset()
        self.available = self.available + self.active.inventory
        self.active = None

    def run(self, frames):
        if self.active is None:
            raise OccupancyError("fabric is idle; configure a function first")
        return _run(self.active, frames)


def configure(fabric: Fabric, function, **params) -> Configuration:
    return fabric.configure(function, **params)


def teardown(fabric: Fabric):
    fabric.teardown()


def run(fabric: Fabric, frames):
    """Stream frames through the active configuration: ``(outputs, RunReport)``."""
    return fabric.run(frames)


def _check_frame(frame: SignalFrame, fmt: FxFormat, channel: Channel):
    if not isinstance(frame, SignalFrame):
        raise FrameFormatError(f"expected a SignalFrame, got {type(frame).__name__}")
    if frame.channel is not channel:
        raise FrameFormatError(f"expected a {channel.value} frame, got {frame.channel.value}")
    if frame.format != fmt:
        raise FrameFormatError(f"frame format {frame.format} does not match configuration {fmt}")


def _run(cfg: Configuration, frames) -> tuple[list, RunReport]:
    if isinstance(frames, SignalFrame):
        frames = [frames]
    activity: Counter = Counter()
    outputs: list = []
    cycles = samples_in = samples_out = 0
    dp = cfg.datapath
    f = cfg.function
    for frame in frames:
        if f is Function.FIR:
            _check_frame(frame, dp.in_fmt, Channel.REAL)
            ys = filters.fir_filter(dp, frame.samples, activity)
            activity[CmKind.MUX2] += len(frame)
            outputs.extend(ys)
            cycles += len(frame)
            samples_out += len(ys)
        elif f is Function.IIR:
            _check_frame(frame, dp.forward.in_fmt, Channel.REAL)
            ys = filters.iir_filter(dp, frame.samples, activity)
            activity[CmKind.MUX2] += len(frame)
            outputs.extend(ys)
            cycles += len(frame)
            samples_out += len(ys)
        elif f is Function.DWT:
            _check_frame(frame, dp.in_fmt, Channel.REAL)
            stages = cfg.state.setdefault("stages", [dp] + [dp.level_config(j) for j in range(2, dp.levels + 1)])
            if not outputs:
                outputs.extend([] for _ in stages)
            data = list(frame.samples)
            for level, stage in enumerate(stages):
                lo, hi = filters._decimate_block(stage, data)
                taps = len(stage.h0)
                activity[CmKind.COUNTER1] += len(data)
                activity[CmKind.REGISTER] += taps * len(data) + len(lo)
                activity[CmKind.LUT16] += 2 * taps * len(lo)
                activity[CmKind.ADDER] += 2 * taps * len(lo)
                cycles += len(data)
                outputs[level].extend(zip(lo, hi))
                samples_out += len(lo)
                data = lo
        elif f is Function.FFT:
            _check_frame(frame, dp.in_fmt, Channel.COMPLEX)
            if len(frame) % dp.points:
                raise FrameFormatError(f"FFT frame length {len(frame)} is not a multiple of {dp.points}")
            for i in range(0, len(frame), dp.points):
                outputs.extend(fft(dp, frame.samples[i:i + dp.points], activity))
                activity[CmKind.MUX4] += FFT_MUX4 * dp.stages
                cycles += dp.stages
            samples_out += len(frame)
        else:
            _check_frame(frame, dp.in_fmt, Channel.REAL)
            if len(frame) % dp.points:
                raise FrameFormatError(f"DCT frame length {len(frame)} is not a multiple of {dp.points}")
            n = len(frame) // dp.points
            if n:
                raws = frame.raws().reshape(n, dp.points)
                wide = dct_batch(dp, raws)
                outputs.extend(narrow(int(v), dp.scale, dp.out_fmt) for v in wide.reshape(-1))
                charge_frames(dp, activity, n)
            cycles += n * dp.word_bits
            samples_out += len(frame)
        samples_in += len(frame)
    report = RunReport(
        f,
        cfg.control,
        cfg.inventory,
        MappingProxyType({k: activity[k] for k in CmKind if activity[k]}),
        cycles,
        samples_in,
        samples_out,
    )
    return outputs, report
