"""Common modules (CMs) of the fabric and the resource ledger.

A configuration is charged for the primitive modules it wires together.
Registers and muxes exist only as ledger entries; their dataflow is done by
the function models directly.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import CapacityError, ConfigurationError
from .fixed import Fx, FxFormat, narrow

LUT_ADDRESS_WIDTH = 4
LUT_ENTRIES = 1 << LUT_ADDRESS_WIDTH


class CmKind(str, enum.Enum):
    ADDER = "Adder"
    SUBTRACTOR = "Subtractor"
    MULTIPLIER = "Multiplier"
    LUT16 = "Lut16"
    REGISTER = "Register"
    MUX2 = "Mux2"
    MUX4 = "Mux4"
    COUNTER1 = "Counter1Bit"
    # Composite (adder + subtractor + shift register); never charged directly.
    SCALING_ACCUMULATOR = "ScalingAccumulator"

    def __str__(self):
        return self.value


# Column order of the block-count table.
TABLE_ORDER = (
    CmKind.COUNTER1,
    CmKind.ADDER,
    CmKind.LUT16,
    CmKind.SUBTRACTOR,
    CmKind.REGISTER,
    CmKind.MUX4,
    CmKind.MUX2,
    CmKind.MULTIPLIER,
)


def _kind(k) -> CmKind:
    if isinstance(k, CmKind):
        return k
    try:
        return CmKind(k)
    except ValueError:
        return CmKind[k.upper()]


@dataclass(frozen=True)
class CmInventory:
    """Immutable multiset of common modules; zero counts are dropped."""

    counts: Mapping[CmKind, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for k, n in dict(self.counts).items():
            n = int(n)
            if n < 0:
                raise ConfigurationError(f"negative count for {k}: {n}")
            if n:
                clean[_kind(k)] = n
        object.__setattr__(self, "counts", MappingProxyType(clean))

    @classmethod
    def of(cls, **counts) -> "CmInventory":
        return cls({_kind(k): n for k, n in counts.items()})

    def __getitem__(self, kind) -> int:
        return self.counts.get(_kind(kind), 0)

    def __add__(self, other: "CmInventory") -> "CmInventory":
        return inventory_add(self, other)

    def __sub__(self, other: "CmInventory") -> "CmInventory":
        short = other.deficit(self)
        if short:
            raise CapacityError(f"cannot remove {short[0]} beyond zero", cm_kind=short[0])
        return CmInventory({k: self[k] - other[k] for k in set(self.counts) | set(other.counts)})

    def __mul__(self, n: int) -> "CmInventory":
        return CmInventory({k: v * n for k, v in self.counts.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, CmInventory):
            return dict(self.counts) == dict(other.counts)
        if isinstance(other, Mapping):
            return self == CmInventory(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.counts.items()))

    def __le__(self, other: "CmInventory") -> bool:
        return all(n <= other[k] for k, n in self.counts.items())

    def __repr__(self):
        body = ", ".join(f"{k.value}: {n}" for k, n in self.items())
        return f"CmInventory({{{body}}})"

    def items(self):
        order = {k: i for i, k in enumerate(CmKind)}
        return sorted(self.counts.items(), key=lambda kv: order[kv[0]])

    def deficit(self, pool: "CmInventory") -> list[CmKind]:
        """Kinds for which this demand exceeds ``pool``."""
        return [k for k in CmKind if self[k] > pool[k]]

    def maximum(self, other: "CmInventory") -> "CmInventory":
        kinds = set(self.counts) | set(other.counts)
        return CmInventory({k: max(self[k], other[k]) for k in kinds})

    def restrict(self, kinds: Iterable[CmKind]) -> "CmInventory":
        return CmInventory({k: self[k] for k in kinds})

    def without(self, kinds: Iterable[CmKind]) -> "CmInventory":
        drop = set(kinds)
        return CmInventory({k: n for k, n in self.counts.items() if k not in drop})


EMPTY = CmInventory()


def inventory_add(a: CmInventory, b: CmInventory) -> CmInventory:
    kinds = set(a.counts) | set(b.counts)
    return CmInventory({k: a[k] + b[k] for k in kinds})


def complex_multiplier_inventory() -> CmInventory:
    """Three-multiplier complex product: 3 multipliers, 1 adder, 2 subtractors."""
    return CmInventory.of(Multiplier=3, Adder=1, Subtractor=2)


def butterfly_inventory() -> CmInventory:
    """DIF butterfly: complex multiplier plus the u+v adder and u-v subtractor."""
    return complex_multiplier_inventory() + CmInventory.of(Adder=1, Subtractor=1)


def format_inventory(inv: CmInventory, title: str = "CmKind") -> str:
    """Two-column text table in block-count column order; absent kinds show '-'."""
    width = max(len(title), max(len(k.value) for k in TABLE_ORDER))
    lines = [f"{title:<{width}}  Count"]
    for k in TABLE_ORDER:
        n = inv[k]
        lines.append(f"{k.value:<{width}}  {n if n else '-':>5}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class LutBank:
    """A 16-entry DA table: ``entries[addr]`` sums the coefficients selected by ``addr``.

    Entries live in the coefficient format widened by two integer bits, which
    is enough for any subset sum of four coefficients.
    """

    coeffs: tuple[Fx, ...]
    entries: tuple[Fx, ...]
    address_width: int = LUT_ADDRESS_WIDTH

    @property
    def format(self) -> FxFormat:
        return self.entries[0].format

    @property
    def coeff_format(self) -> FxFormat:
        return self.coeffs[0].format

    def __getitem__(self, addr: int) -> Fx:
        return self.entries[addr]

    def __len__(self):
        return len(self.entries)

    def raw_table(self) -> list[int]:
        return [e.raw for e in self.entries]


def lut_build(coeffs) -> LutBank:
    coeffs = tuple(coeffs)
    if not coeffs:
        raise ConfigurationError("a LUT needs at least one coefficient")
    if len(coeffs) > LUT_ADDRESS_WIDTH:
        raise CapacityError(
            f"a Lut16 holds at most {LUT_ADDRESS_WIDTH} coefficients, got {len(coeffs)}",
            cm_kind=CmKind.LUT16,
            needed=len(coeffs),
            available=LUT_ADDRESS_WIDTH,
        )
    fmt = coeffs[0].format
    if any(c.format != fmt for c in coeffs):
        raise ConfigurationError("LUT coefficients must share one format")
    wide = fmt.widen(int_bits=2)
    raws = [c.raw for c in coeffs] + [0] * (LUT_ADDRESS_WIDTH - len(coeffs))
    entries = []
    for addr in range(LUT_ENTRIES):
        s = sum(r for i, r in enumerate(raws) if addr >> i & 1)
        entries.append(Fx(s, wide))
    return LutBank(coeffs, tuple(entries))


class ScalingAccumulatorUnit:
    """Shift-and-add multiplier replacement built on a single-coefficient LUT.

    One bit of the input word is consumed per step, LSB first.  The
    accumulator carries ``B`` guard bits below the binary point so every
    right shift is exact; the sign bit's partial product is subtracted.
    """

    def __init__(self, lut: LutBank):
        if len(lut.coeffs) != 1:
            raise ConfigurationError("a scaling accumulator is driven by a single-coefficient LUT")
        self.lut = lut
        self.state = 0
        self.steps = 0

    @classmethod
    def for_coefficient(cls, c: Fx) -> "ScalingAccumulatorUnit":
        return cls(lut_build([c]))

    def reset(self):
        self.state = 0
        self.steps = 0

    def step(self, bit: int, sign_plane: bool, guard: int, activity: Counter | None = None):
        partial = self.lut.entries[bit].raw << guard
        if sign_plane:
            self.state = (self.state - partial) >> 1
            kind = CmKind.SUBTRACTOR
        else:
            self.state = (self.state + partial) >> 1
            kind = CmKind.ADDER
        self.steps += 1
        if activity is not None:
            activity[kind] += 1
            activity[CmKind.LUT16] += 1


def scaling_accumulate(unit: ScalingAccumulatorUnit, word: Fx, activity: Counter | None = None) -> Fx:
    """Bit-serial product ``c * word``, narrowed once into ``word.format``."""
    b = word.format.total_bits
    unit.reset()
    for j in range(b):
        unit.step((word.raw >> j) & 1, j == b - 1, b, activity)
    # after b halvings the guard bits are consumed: state == c.raw * word.raw
    scale = unit.lut.coeff_format.frac_bits + word.format.frac_bits
    return narrow(unit.state, scale, word.format)
