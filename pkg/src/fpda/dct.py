"""16-point DCT-II by distributed arithmetic over even/odd decomposed matrices.

The input combination block forms ``s_n = x_n + x_{15-n}`` and
``d_n = x_n - x_{15-n}``, then ``s_n +/- s_{7-n}``.  Four 4x4 blocks follow:

* even-even (outputs 0, 4, 8, 12) on ``s_n + s_{7-n}``
* even-odd (outputs 2, 6, 10, 14) on ``s_n - s_{7-n}``
* odd left / odd right (outputs 1, 3, ..., 15) on ``d_0..d_3`` and ``d_4..d_7``,
  summed by one adder per output.

Each matrix row is one 4-coefficient LUT driving a scaling accumulator.  The
DC row carries ``C_0 = 1/sqrt(2)`` through its coefficient ``A = cos(pi/4)``,
so only the ``2/N`` factor remains, folded into the single final narrowing.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .da import DaPlan, da_eval_batch, da_plan
from .errors import ConfigurationError
from .fixed import Q15, Fx, FxFormat, narrow, quantize
from .modules import CmInventory, CmKind

log = logging.getLogger(__name__)

__all__ = [
    "SYMBOLS",
    "PRINTED_BLOCKS",
    "DctMatrices",
    "DctConfig",
    "dct_matrices",
    "dct_block_discrepancies",
    "dct16",
    "dct_rows",
]

POINTS = 16

# symbol -> odd multiple of pi/32 (A..O): A = cos(8 pi/32) = cos(pi/4), ...
SYMBOL_ANGLES = {
    "A": 8, "B": 4, "C": 12, "D": 2, "E": 6, "F": 10, "G": 14,
    "H": 1, "I": 3, "J": 5, "K": 7, "L": 9, "M": 11, "N": 13, "O": 15,
}
SYMBOLS = {s: math.cos(k * math.pi / 32) for s, k in SYMBOL_ANGLES.items()}
_BY_ANGLE = {k: s for s, k in SYMBOL_ANGLES.items()}

# The block matrices as printed, row by row.
PRINTED_BLOCKS = {
    "even4": ["A A A A", "B C -C -B", "A -A -A A", "C -B B -C"],
    "evenodd4": ["D E F G", "E -G -D -F", "F -G D E", "G -F D -E"],
    "odd_left": ["H I J K", "I L O -M", "J O -K -I", "K -M -I O",
                 "L -J -N H", "M -H L N", "N -K H -J", "O -N M -L"],
    "odd_right": ["L M N O", "-J -H -K -N", "-N L H M", "H N -J -L",
                  "-O -I M K", "-I K O -J", "M O -L I", "K -J I -H"],
}

# output index of each block row
BLOCK_OUTPUTS = {
    "even4": [0, 4, 8, 12],
    "evenodd4": [2, 6, 10, 14],
    "odd_left": [1, 3, 5, 7, 9, 11, 13, 15],
    "odd_right": [1, 3, 5, 7, 9, 11, 13, 15],
}
# input sample index whose basis value multiplies each block column
BLOCK_COLUMNS = {
    "even4": [0, 1, 2, 3],
    "evenodd4": [0, 1, 2, 3],
    "odd_left": [0, 1, 2, 3],
    "odd_right": [4, 5, 6, 7],
}

DCT_REGISTERS = 32
DCT_MUX2 = 8


def _symbol(k: int, n: int) -> str:
    """Signed symbol for ``C_k cos((2n+1) k pi / 32)``."""
    if k == 0:
        return "A"
    a = (2 * n + 1) * k % 64  # in units of pi/32
    sign = 1
    if a > 32:
        a = 64 - a
    if a > 16:
        a, sign = 32 - a, -sign
    return ("" if sign > 0 else "-") + _BY_ANGLE[a]


def _value(sym: str) -> float:
    return -SYMBOLS[sym[1:]] if sym.startswith("-") else SYMBOLS[sym]


def derived_blocks() -> dict[str, list[list[str]]]:
    """Block matrices as signed symbols derived from the DCT-II definition."""
    return {
        name: [[_symbol(k, n) for n in BLOCK_COLUMNS[name]] for k in BLOCK_OUTPUTS[name]]
        for name in PRINTED_BLOCKS
    }


def dct_block_discrepancies() -> list[tuple[str, int, int, str, str]]:
    """Entries where the printed blocks disagree with the definition:
    ``(block, row, col, printed, derived)``."""
    out = []
    derived = derived_blocks()
    for name, rows in PRINTED_BLOCKS.items():
        for r, row in enumerate(rows):
            for c, sym in enumerate(row.split()):
                if sym != derived[name][r][c]:
                    out.append((name, r, c, sym, derived[name][r][c]))
    return out


@dataclass(frozen=True)
class DctMatrices:
    even4: np.ndarray
    evenodd4: np.ndarray
    odd_left: np.ndarray
    odd_right: np.ndarray

    def as_dict(self) -> dict[str, np.ndarray]:
        return {"even4": self.even4, "evenodd4": self.evenodd4,
                "odd_left": self.odd_left, "odd_right": self.odd_right}


def dct_matrices() -> DctMatrices:
    """Double-precision block matrices.

    Printed entries are used where they agree with the DCT-II definition;
    the rest come from the definition, and each replacement is logged.
    """
    derived = derived_blocks()
    for name, r, c, printed, fixed in dct_block_discrepancies():
        log.info("DCT block %s row %d col %d: printed %s, using %s", name, r, c, printed, fixed)
    mats = {name: np.array([[_value(s) for s in row] for row in rows]) for name, rows in derived.items()}
    return DctMatrices(**mats)


def dct_rows() -> list[tuple[str, int, tuple[float, ...]]]:
    """``(block, output index, coefficients)`` for each of the 24 LUT rows."""
    m = dct_matrices().as_dict()
    return [(name, k, tuple(m[name][r])) for name in PRINTED_BLOCKS for r, k in enumerate(BLOCK_OUTPUTS[name])]


class DctConfig:
    """Fixed 16-point DA DCT.  Outputs use the input format plus one integer bit."""

    def __init__(self, in_fmt: FxFormat = Q15, coeff_fmt: FxFormat | None = None):
        self.in_fmt = in_fmt
        self.coeff_fmt = coeff_fmt or FxFormat(in_fmt.frac_bits + 1, in_fmt.frac_bits)
        self.comb_fmt = in_fmt.widen(int_bits=2)  # two levels of input additions
        self.out_fmt = in_fmt.widen(int_bits=1)
        self.points = POINTS
        self.coefficients = {s: quantize(v, self.coeff_fmt) for s, v in SYMBOLS.items()}
        self.rows: dict[str, list[DaPlan]] = {}
        for name, rows in derived_blocks().items():
            self.rows[name] = [da_plan([self._coef(s) for s in row], self.comb_fmt.total_bits) for row in rows]
        self.scale = self.coeff_fmt.frac_bits + self.comb_fmt.frac_bits + int(math.log2(POINTS // 2))

    def _coef(self, sym: str) -> Fx:
        c = self.coefficients[sym.lstrip("-")]
        return Fx(-c.raw, c.format) if sym.startswith("-") else c

    @property
    def lut_rows(self) -> int:
        return sum(len(v) for v in self.rows.values())

    @property
    def word_bits(self) -> int:
        return self.comb_fmt.total_bits

    @cached_property
    def inventory(self) -> CmInventory:
        n_odd = len(BLOCK_OUTPUTS["odd_left"])
        comb = CmInventory.of(Adder=POINTS // 2 + POINTS // 4, Subtractor=POINTS // 2 + POINTS // 4)
        # each LUT row feeds a scaling accumulator (adder + sign-plane subtractor)
        rows = CmInventory.of(Lut16=self.lut_rows, Adder=self.lut_rows + n_odd, Subtractor=self.lut_rows)
        return comb + rows + CmInventory.of(Register=DCT_REGISTERS, Mux2=DCT_MUX2)


def _combine(x: np.ndarray):
    # x: (M, 16) raw ints -> the four block input vectors
    s = x[:, :8] + x[:, ::-1][:, :8]
    d = x[:, :8] - x[:, ::-1][:, :8]
    ee = s[:, :4] + s[:, 7:3:-1]
    eo = s[:, :4] - s[:, 7:3:-1]
    return {"even4": ee, "evenodd4": eo, "odd_left": d[:, :4], "odd_right": d[:, 4:]}


def dct_batch(cfg: DctConfig, frames: np.ndarray) -> np.ndarray:
    """Exact pre-narrowing outputs for ``(M, 16)`` raw frames, shape ``(M, 16)``."""
    frames = np.asarray(frames, dtype=np.int64)
    if frames.ndim != 2 or frames.shape[1] != POINTS:
        raise ConfigurationError(f"expected (M, {POINTS}) frames, got {frames.shape}")
    vecs = _combine(frames)
    out = np.zeros(frames.shape, dtype=np.int64)
    for name, plans in cfg.rows.items():
        for plan, k in zip(plans, BLOCK_OUTPUTS[name]):
            out[:, k] += da_eval_batch(plan, vecs[name])
    return out


def dct16(cfg: DctConfig, frame, activity: Counter | None = None) -> list[Fx]:
    frame = list(frame)
    if len(frame) != POINTS:
        raise ConfigurationError(f"expected {POINTS} samples, got {len(frame)}")
    for x in frame:
        if x.format != cfg.in_fmt:
            raise ConfigurationError(f"sample format {x.format} does not match DCT input {cfg.in_fmt}")
    wide = dct_batch(cfg, np.array([[x.raw for x in frame]]))[0]
    if activity is not None:
        charge_frames(cfg, activity, 1)
    return [narrow(int(v), cfg.scale, cfg.out_fmt) for v in wide]


def charge_frames(cfg: DctConfig, activity: Counter, frames: int):
    inv = cfg.inventory
    bits = cfg.word_bits
    activity[CmKind.ADDER] += frames * (12 + (bits - 1) * cfg.lut_rows + 8)
    activity[CmKind.SUBTRACTOR] += frames * (12 + cfg.lut_rows)
    activity[CmKind.LUT16] += frames * bits * inv[CmKind.LUT16]
    activity[CmKind.REGISTER] += frames * DCT_REGISTERS
