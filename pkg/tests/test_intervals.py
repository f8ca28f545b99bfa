"""Interval arithmetic soundness: results always enclose the true value."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from besicov.errors import ValidationError
from besicov.intervals import (
    ProductAccumulator,
    RationalInterval,
    interval_div_snapshots,
    round_outward,
)

fractions = st.fractions(min_value=-100, max_value=100, max_denominator=997)
pos_fractions = st.fractions(min_value=Fraction(1, 997), max_value=100, max_denominator=997)


def test_ordering_validated():
    with pytest.raises(ValidationError):
        RationalInterval(Fraction(1), Fraction(0))


def test_exact_interval_roundtrip():
    iv = RationalInterval.exact(Fraction(3, 7))
    assert iv.is_exact() and iv.mid == Fraction(3, 7) and iv.width == 0


@given(fractions, fractions, fractions, fractions)
def test_mul_encloses_products(a, b, c, d):
    x = RationalInterval(min(a, b), max(a, b))
    y = RationalInterval(min(c, d), max(c, d))
    z = x * y
    for u in (x.lo, x.hi, x.mid):
        for v in (y.lo, y.hi, y.mid):
            assert z.contains(u * v)


@given(fractions, fractions)
def test_round_outward_contains(a, b):
    iv = RationalInterval(min(a, b), max(a, b))
    out = round_outward(iv, 64)
    assert out.lo <= iv.lo and iv.hi <= out.hi
    assert out.width <= iv.width + Fraction(2, 2**64)


@given(st.lists(pos_fractions, min_size=1, max_size=30))
def test_product_accumulator_encloses(factors):
    acc = ProductAccumulator(bits=96)
    true = Fraction(1)
    for f in factors:
        acc.multiply(f.numerator, f.denominator)
        true *= f
    assert acc.value().contains(true)


def test_snapshot_division():
    acc = ProductAccumulator(bits=96)
    snaps = []
    true = Fraction(1)
    trues = []
    for k in range(2, 12):
        acc.multiply(k * k - 1, k * k)
        true *= Fraction(k * k - 1, k * k)
        snaps.append(acc.snapshot())
        trues.append(true)
    quot = interval_div_snapshots(snaps[-1], snaps[3], 96)
    assert quot.contains(trues[-1] / trues[3])


def test_division_by_zero_interval_rejected():
    with pytest.raises(ValidationError):
        RationalInterval(Fraction(-1), Fraction(1)).__truediv__(
            RationalInterval(Fraction(-1), Fraction(1))
        )
