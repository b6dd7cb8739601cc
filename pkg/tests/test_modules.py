import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from fpda.errors import CapacityError, ConfigurationError
from fpda.fixed import Q15, Fx, FxFormat, fx_mul, quantize
from fpda.modules import (
    EMPTY,
    CmInventory,
    CmKind,
    ScalingAccumulatorUnit,
    butterfly_inventory,
    format_inventory,
    inventory_add,
    lut_build,
    scaling_accumulate,
)


def q(x, fmt=Q15):
    return quantize(x, fmt)


def test_lut_examples():
    a = [q(0.1), q(-0.3), q(0.7148), q(-1.0)]
    lut = lut_build(a)
    assert lut[0b0000].raw == 0
    assert lut[0b1111].raw == sum(c.raw for c in a)
    assert lut_build([q(0.25), q(0.5)])[0b0011].value == q(0.75).value


def test_lut_entries_match_subset_sums():
    rng = random.Random(3)
    a = [Fx(rng.randrange(-2**15, 2**15)) for _ in range(4)]
    lut = lut_build(a)
    for addr in range(16):
        assert lut[addr].raw == sum(a[i].raw for i in range(4) if addr >> i & 1)
    assert lut.format == Q15.widen(int_bits=2)


def test_lut_errors():
    with pytest.raises(CapacityError) as exc:
        lut_build([q(0.1)] * 5)
    assert exc.value.cm_kind is CmKind.LUT16
    with pytest.raises(ConfigurationError):
        lut_build([])
    with pytest.raises(ConfigurationError):
        lut_build([q(0.1), q(0.1, FxFormat(8, 7))])


@given(st.lists(st.integers(-(2**15), 2**15 - 1), min_size=1, max_size=4),
       st.integers(0, 15), st.integers(0, 15))
def test_lut_linearity(raws, a1, a2):
    a2 &= ~a1
    lut = lut_build([Fx(r) for r in raws])
    assert lut[a1 | a2].raw == lut[a1].raw + lut[a2].raw


def test_scaling_accumulate_examples():
    u = ScalingAccumulatorUnit.for_coefficient(q(0.5))
    assert scaling_accumulate(u, q(0.0)) == q(0.0)
    assert scaling_accumulate(u, q(0.5)) == q(0.25)
    assert scaling_accumulate(u, q(-1.0)) == q(-0.5)


@pytest.mark.parametrize("fmt", [FxFormat(6, 5), FxFormat(8, 7), FxFormat(8, 4)])
def test_scaling_accumulate_exhaustive(fmt):
    raws = range(fmt.min_raw, fmt.max_raw + 1)
    for c in raws:
        unit = ScalingAccumulatorUnit.for_coefficient(Fx(c, fmt))
        for w in raws:
            assert scaling_accumulate(unit, Fx(w, fmt)) == fx_mul(Fx(c, fmt), Fx(w, fmt))


def test_scaling_accumulate_exhaustive_words_10bit():
    fmt = FxFormat(10, 9)
    for c in (fmt.min_raw, -1, 0, 1, 173, fmt.max_raw):
        unit = ScalingAccumulatorUnit.for_coefficient(Fx(c, fmt))
        for w in range(fmt.min_raw, fmt.max_raw + 1):
            assert scaling_accumulate(unit, Fx(w, fmt)) == fx_mul(Fx(c, fmt), Fx(w, fmt))


def test_scaling_accumulate_random_16bit():
    rng = random.Random(1)
    for _ in range(10**5):
        c, w = Fx(rng.randrange(-2**15, 2**15)), Fx(rng.randrange(-2**15, 2**15))
        assert scaling_accumulate(ScalingAccumulatorUnit.for_coefficient(c), w) == fx_mul(c, w)


def test_scaling_accumulate_activity():
    act = Counter()
    scaling_accumulate(ScalingAccumulatorUnit.for_coefficient(q(0.3)), q(0.2), act)
    assert act[CmKind.ADDER] == 15 and act[CmKind.SUBTRACTOR] == 1 and act[CmKind.LUT16] == 16


def test_scaling_unit_needs_single_coefficient():
    with pytest.raises(ConfigurationError):
        ScalingAccumulatorUnit(lut_build([q(0.1), q(0.2)]))


def test_inventory_examples():
    assert inventory_add(EMPTY, EMPTY) == EMPTY
    assert CmInventory.of(Adder=2) + CmInventory.of(Adder=3, Multiplier=3) == {
        CmKind.ADDER: 5, CmKind.MULTIPLIER: 3}
    total = EMPTY
    for _ in range(8):
        total = total + butterfly_inventory()
    assert total == CmInventory.of(Adder=16, Subtractor=24, Multiplier=24)


def test_butterfly_block_counts():
    assert butterfly_inventory() == CmInventory.of(Adder=2, Subtractor=3, Multiplier=3)


def test_inventory_subtraction_and_deficit():
    pool = CmInventory.of(Adder=4, Lut16=2)
    need = CmInventory.of(Adder=3, Lut16=5)
    assert need.deficit(pool) == [CmKind.LUT16]
    with pytest.raises(CapacityError):
        pool - need
    assert pool - CmInventory.of(Adder=4) == CmInventory.of(Lut16=2)
    assert CmInventory.of(Adder=1) <= pool
    assert not need <= pool


def test_inventory_rejects_negative():
    with pytest.raises(ConfigurationError):
        CmInventory.of(Adder=-1)


def test_format_inventory_lists_every_kind():
    text = format_inventory(CmInventory.of(Adder=31, Lut16=32))
    assert "Adder" in text and "31" in text and "Multiplier" in text


inventories = st.dictionaries(
    st.sampled_from([k for k in CmKind if k is not CmKind.SCALING_ACCUMULATOR]),
    st.integers(0, 100),
).map(CmInventory)


@given(inventories, inventories, inventories)
def test_inventory_monoid(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a + EMPTY == a
    assert (a + b) - b == a
    assert a.maximum(b) == b.maximum(a)
    assert a <= a.maximum(b)
