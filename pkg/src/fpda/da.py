"""Parallel distributed-arithmetic inner product.

The coefficient vector is split into groups of four, one :class:`LutBank`
per group.  For each bit plane ``j`` of the input words every group is
addressed by the four ``j``-th bits of its inputs, the group outputs are
summed by the adder tree, and the plane sum enters a shift-right
accumulator.  The sign plane is subtracted instead of added.

The accumulator carries ``B`` guard bits, so after ``B`` halvings it holds
``sum(a_i * x_i)`` exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigurationError
from .fixed import Fx, FxFormat, narrow
from .modules import LUT_ADDRESS_WIDTH, CmInventory, LutBank, lut_build

# Physical LUT instances charged per coefficient and per-plan adder tree;
# calibrated so a 16-tap filter costs 32 Lut16 and 31 adders.
LUTS_PER_TAP = 2


@dataclass(frozen=True)
class DaPlan:
    coeffs: tuple[Fx, ...]
    word_bits: int
    groups: tuple[LutBank, ...]
    lut_count: int
    adder_count: int

    @property
    def taps(self) -> int:
        return len(self.coeffs)

    @property
    def coeff_format(self) -> FxFormat:
        return self.coeffs[0].format

    @property
    def inventory(self) -> CmInventory:
        return CmInventory.of(Lut16=self.lut_count, Adder=self.adder_count)

    @cached_property
    def table_array(self) -> np.ndarray:
        """LUT contents as a ``(groups, 16)`` integer array."""
        arr = np.array([g.raw_table() for g in self.groups], dtype=_dtype_for(self))
        arr.setflags(write=False)
        return arr

    def dump(self) -> str:
        """Hex listing of every group's 16 entries (raw two's complement)."""
        fmt = self.groups[0].format
        digits = (fmt.total_bits + 3) // 4
        mask = (1 << fmt.total_bits) - 1
        lines = [
            f"# da-plan taps={self.taps} word_bits={self.word_bits} "
            f"coeff_format={self.coeff_format} lut_format={fmt} "
            f"luts={self.lut_count} adders={self.adder_count}"
        ]
        for gi, g in enumerate(self.groups):
            words = " ".join(f"{e.raw & mask:0{digits}x}" for e in g.entries)
            lines.append(f"group {gi}: {words}")
        return "\n".join(lines) + "\n"


def da_plan(coeffs, word_bits: int = 16) -> DaPlan:
    coeffs = tuple(coeffs)
    if not coeffs:
        raise ConfigurationError("DA plan needs at least one coefficient")
    if word_bits < 2:
        raise ConfigurationError(f"word_bits must be >= 2, got {word_bits}")
    fmt = coeffs[0].format
    if any(c.format != fmt for c in coeffs):
        raise ConfigurationError("DA coefficients must share one format")
    groups = tuple(
        lut_build(coeffs[i:i + LUT_ADDRESS_WIDTH]) for i in range(0, len(coeffs), LUT_ADDRESS_WIDTH)
    )
    luts = LUTS_PER_TAP * len(coeffs)
    return DaPlan(coeffs, word_bits, groups, luts, luts - 1)


def _dtype_for(plan: DaPlan):
    # largest intermediate: plane sum (groups * lut entry) shifted by word_bits guard bits
    lut_bits = plan.groups[0].format.total_bits
    need = lut_bits + int(np.ceil(np.log2(len(plan.groups) + 1))) + plan.word_bits + 2
    return np.int64 if need < 63 else object


def da_kernel(tables: np.ndarray, windows: np.ndarray, word_bits: int) -> np.ndarray:
    """Exact inner products for a batch of windows.

    ``tables`` is ``(G, 16)``; ``windows`` is ``(M, n)`` raw two's-complement
    words of ``word_bits`` bits with ``n <= 4 * G``.  Returns ``(M,)``.
    """
    m, n = windows.shape
    g = tables.shape[0]
    pad = g * LUT_ADDRESS_WIDTH - n
    if pad < 0:
        raise ConfigurationError(f"window of {n} words exceeds {g} LUT groups")
    if pad:
        windows = np.concatenate([windows, np.zeros((m, pad), dtype=windows.dtype)], axis=1)
    grouped = windows.reshape(m, g, LUT_ADDRESS_WIDTH)
    weights = np.array([1 << i for i in range(LUT_ADDRESS_WIDTH)], dtype=windows.dtype)
    rows = np.arange(g)
    acc = np.zeros(m, dtype=tables.dtype)
    for j in range(word_bits):
        addr = (((grouped >> j) & 1) * weights).sum(axis=2).astype(np.intp)
        plane = tables[rows, addr].sum(axis=1)
        partial = plane * (1 << word_bits) if tables.dtype == object else plane << word_bits
        if j == word_bits - 1:
            acc = acc - partial
        else:
            acc = acc + partial
        acc = acc >> 1
    return acc


def _window_array(plan: DaPlan, window) -> np.ndarray:
    window = list(window)
    if len(window) != plan.taps:
        raise ConfigurationError(f"window length {len(window)} != plan taps {plan.taps}")
    for w in window:
        if w.format.total_bits != plan.word_bits:
            raise ConfigurationError(f"sample format {w.format} does not match {plan.word_bits}-bit plan")
    return np.array([[w.raw for w in window]], dtype=_dtype_for(plan))


def da_eval_wide(plan: DaPlan, window) -> int:
    """Exact ``sum(a_i * x_i)`` at scale ``2**-(coef_frac + sample_frac)``."""
    return int(da_kernel(plan.table_array, _window_array(plan, window), plan.word_bits)[0])


def da_eval_batch(plan: DaPlan, windows: np.ndarray) -> np.ndarray:
    """Vectorized :func:`da_eval_wide` over rows of raw sample words."""
    windows = np.asarray(windows, dtype=_dtype_for(plan))
    if windows.ndim != 2 or windows.shape[1] != plan.taps:
        raise ConfigurationError(f"expected (M, {plan.taps}) windows, got {windows.shape}")
    lim = 1 << (plan.word_bits - 1)
    if windows.size and (windows.min() < -lim or windows.max() >= lim):
        raise ConfigurationError(f"window words exceed the {plan.word_bits}-bit range")
    return da_kernel(plan.table_array, windows, plan.word_bits)


def da_eval(plan: DaPlan, window, out_fmt: FxFormat | None = None) -> Fx:
    """Inner product of ``window`` with the plan's coefficients, narrowed once.

    The result is expressed in ``out_fmt`` (default: the window's format).
    """
    window = list(window)
    wide = da_eval_wide(plan, window)
    in_fmt = window[0].format
    out_fmt = out_fmt or in_fmt
    return narrow(wide, plan.coeff_format.frac_bits + in_fmt.frac_bits, out_fmt)
