"""Two's-complement fixed-point values.

Every datapath in the fabric computes on :class:`Fx` words.  Raw values are
Python ints, so widened accumulators never overflow; narrowing back to a
declared :class:`FxFormat` is where rounding and the overflow policy apply.

Rounding is round-half-away-from-zero everywhere.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigurationError

__all__ = [
    "Overflow",
    "FxFormat",
    "Fx",
    "CFx",
    "Q15",
    "round_shift",
    "resolve",
    "narrow",
    "quantize",
    "quantize_complex",
    "fx_add",
    "fx_sub",
    "fx_mul",
    "fx_scale",
    "fx_neg",
    "fx_shift_right",
    "fx_convert",
    "saturate",
]


class Overflow(str, enum.Enum):
    SATURATE = "sat"
    WRAP = "wrap"


_QFMT = re.compile(r"^Q(\d+)\.(\d+)(?:/(sat|wrap))?$")


@dataclass(frozen=True)
class FxFormat:
    """Word layout ``Qm.n``: ``m`` integer bits (sign included), ``n`` fraction bits."""

    total_bits: int = 16
    frac_bits: int = 15
    overflow_policy: Overflow = Overflow.SATURATE

    def __post_init__(self):
        if not 2 <= self.total_bits <= 64:
            raise ConfigurationError(f"total_bits must be in [2, 64], got {self.total_bits}")
        if not 0 <= self.frac_bits < self.total_bits:
            raise ConfigurationError(
                f"frac_bits must be in [0, {self.total_bits}), got {self.frac_bits}"
            )
        object.__setattr__(self, "overflow_policy", Overflow(self.overflow_policy))

    @classmethod
    def parse(cls, text: str) -> "FxFormat":
        """Parse ``"Q1.15"``, ``"Q1.15/sat"`` or ``"Q4.12/wrap"``."""
        m = _QFMT.match(text.strip())
        if not m:
            raise ConfigurationError(f"bad fixed-point format {text!r}, expected Qm.n[/sat|/wrap]")
        int_bits, frac_bits = int(m.group(1)), int(m.group(2))
        return cls(int_bits + frac_bits, frac_bits, Overflow(m.group(3) or "sat"))

    def __str__(self):
        return f"Q{self.int_bits}.{self.frac_bits}/{self.overflow_policy.value}"

    @property
    def int_bits(self) -> int:
        return self.total_bits - self.frac_bits

    @property
    def min_raw(self) -> int:
        return -(1 << (self.total_bits - 1))

    @property
    def max_raw(self) -> int:
        return (1 << (self.total_bits - 1)) - 1

    @property
    def lsb(self) -> Fraction:
        return Fraction(1, 1 << self.frac_bits)

    @property
    def min_value(self) -> Fraction:
        return self.min_raw * self.lsb

    @property
    def max_value(self) -> Fraction:
        return self.max_raw * self.lsb

    def widen(self, int_bits: int = 0, frac_bits: int = 0) -> "FxFormat":
        """Same layout with extra guard bits on either side of the binary point."""
        return FxFormat(self.total_bits + int_bits + frac_bits, self.frac_bits + frac_bits,
                        self.overflow_policy)

    def contains(self, raw: int) -> bool:
        return self.min_raw <= raw <= self.max_raw


Q15 = FxFormat(16, 15)


def round_shift(value: int, k: int) -> int:
    """Divide by ``2**k`` rounding half away from zero (``k < 0`` shifts left)."""
    if k <= 0:
        return value << -k
    half = 1 << (k - 1)
    if value >= 0:
        return (value + half) >> k
    return -((-value + half) >> k)


def saturate(raw: int, fmt: FxFormat) -> int:
    return min(max(raw, fmt.min_raw), fmt.max_raw)


def resolve(raw: int, fmt: FxFormat) -> int:
    """Apply the format's overflow policy to an out-of-range raw integer."""
    if fmt.contains(raw):
        return raw
    if fmt.overflow_policy is Overflow.SATURATE:
        return saturate(raw, fmt)
    span = 1 << fmt.total_bits
    return ((raw - fmt.min_raw) % span) + fmt.min_raw


@dataclass(frozen=True)
class Fx:
    raw: int
    format: FxFormat = Q15

    def __post_init__(self):
        if not self.format.contains(self.raw):
            raise ConfigurationError(f"raw {self.raw} does not fit {self.format}")

    @property
    def value(self) -> Fraction:
        return self.raw * self.format.lsb

    def __float__(self):
        return self.raw / (1 << self.format.frac_bits)

    def __repr__(self):
        return f"Fx({self.raw}, {self.format})"

    def __add__(self, other):
        return fx_add(self, other)

    def __sub__(self, other):
        return fx_sub(self, other)

    def __mul__(self, other):
        return fx_mul(self, other)

    def __neg__(self):
        return fx_neg(self)

    def __rshift__(self, k):
        return fx_shift_right(self, k)


@dataclass(frozen=True)
class CFx:
    re: Fx
    im: Fx

    def __post_init__(self):
        if self.re.format != self.im.format:
            raise ConfigurationError(f"complex parts disagree: {self.re.format} vs {self.im.format}")

    @property
    def format(self) -> FxFormat:
        return self.re.format

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"CFx({self.re.raw}, {self.im.raw}, {self.format})"


def narrow(value: int, scale_bits: int, fmt: FxFormat) -> Fx:
    """Re-quantize an exact integer at scale ``2**-scale_bits`` into ``fmt``."""
    return Fx(resolve(round_shift(value, scale_bits - fmt.frac_bits), fmt), fmt)


def quantize(x, fmt: FxFormat = Q15) -> Fx:
    """Nearest representable value, ties away from zero, then overflow policy.

    ``x`` may be a float, int, or Fraction; floats are taken at their exact
    binary value so the result never depends on intermediate float rounding.
    """
    scaled = Fraction(x) * (1 << fmt.frac_bits)
    mag = abs(scaled)
    rounded = (mag.numerator * 2 + mag.denominator) // (mag.denominator * 2)
    raw = rounded if scaled >= 0 else -rounded
    return Fx(resolve(raw, fmt), fmt)


def quantize_complex(z, fmt: FxFormat = Q15) -> CFx:
    z = complex(z)
    return CFx(quantize(z.real, fmt), quantize(z.imag, fmt))


def _same(a: Fx, b: Fx) -> FxFormat:
    if a.format != b.format:
        raise ConfigurationError(f"format mismatch: {a.format} vs {b.format}")
    return a.format


def fx_add(a: Fx, b: Fx) -> Fx:
    fmt = _same(a, b)
    return Fx(resolve(a.raw + b.raw, fmt), fmt)


def fx_sub(a: Fx, b: Fx) -> Fx:
    fmt = _same(a, b)
    return Fx(resolve(a.raw - b.raw, fmt), fmt)


def fx_neg(a: Fx) -> Fx:
    return Fx(resolve(-a.raw, a.format), a.format)


def fx_mul(a: Fx, b: Fx) -> Fx:
    fmt = _same(a, b)
    return narrow(a.raw * b.raw, 2 * fmt.frac_bits, fmt)


def fx_scale(a: Fx, coef: Fx) -> Fx:
    """Multiply a data word by a coefficient held in its own format.

    The product lands in ``a.format``.  Used where coefficients need a wider
    integer range than the data, e.g. FFT twiddle sums reaching sqrt(2).
    """
    return narrow(a.raw * coef.raw, a.format.frac_bits + coef.format.frac_bits, a.format)


def fx_shift_right(a: Fx, k: int) -> Fx:
    """Arithmetic shift: sign preserved, rounds toward minus infinity."""
    if k < 0:
        raise ValueError(f"shift amount must be >= 0, got {k}")
    return Fx(a.raw >> k, a.format)


def fx_convert(a: Fx, fmt: FxFormat) -> Fx:
    """Re-express ``a`` in ``fmt`` (exact when ``fmt`` is at least as wide)."""
    return narrow(a.raw, a.format.frac_bits, fmt)
