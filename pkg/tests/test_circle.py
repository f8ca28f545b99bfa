"""Exact quadratic-field arithmetic and circle interval sets."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from besicov.circle import (
    ALPHA,
    ONE,
    PHI,
    ZERO,
    CircleIntervalSet,
    CirclePoint,
    QSqrt5,
    alpha_power,
    rotation_point,
    sqrt5_bounds,
    window_shift_distance,
)
from besicov.errors import ValidationError

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=64)


def test_field_relations():
    assert (ALPHA * ALPHA + ALPHA - 1).sign() == 0
    assert (PHI * PHI - PHI - 1).sign() == 0
    assert (PHI * ALPHA - 1).sign() == 0
    assert PHI - 1 == QSqrt5.of(1) / PHI


@given(fractions, fractions, fractions, fractions)
@settings(max_examples=80)
def test_arithmetic_vs_float(p1, q1, p2, q2):
    x = QSqrt5(p1, q1)
    y = QSqrt5(p2, q2)
    s5 = 5**0.5
    for got, ref in (
        (x + y, (p1 + p2) + (q1 + q2) * s5),
        (x - y, (p1 - p2) + (q1 - q2) * s5),
        (x * y, (float(p1) + float(q1) * s5) * (float(p2) + float(q2) * s5)),
    ):
        assert float(got) == pytest.approx(float(ref), abs=1e-6)


@given(fractions, fractions)
@settings(max_examples=80)
def test_sign_matches_float(p, q):
    x = QSqrt5(p, q)
    fx = float(p) + float(q) * 5**0.5
    if abs(fx) > 1e-6:
        assert x.sign() == (1 if fx > 0 else -1)


def test_alpha_powers_multiply():
    for m in range(0, 31, 5):
        for k in range(0, 30, 7):
            assert alpha_power(m) * alpha_power(k) == alpha_power(m + k)


def test_alpha_power_60():
    acc = QSqrt5.of(1)
    for _ in range(60):
        acc = acc * ALPHA
    assert acc == alpha_power(60)


def test_floor_and_mod1():
    assert QSqrt5.of(Fraction(7, 2)).floor() == 3
    assert (ALPHA * 5).floor() == 3
    assert (-ALPHA).floor() == -1
    assert (ALPHA * 2).mod1() == ALPHA * 2 - 1
    assert rotation_point(2).value == ALPHA * 2 - 1


def test_sqrt5_bounds():
    lo, hi = sqrt5_bounds(80)
    assert lo * lo < 5 < hi * hi
    assert hi - lo == Fraction(1, 2**80)


def test_enclosure():
    iv = ALPHA.enclosure()
    assert float(iv.lo) <= 0.6180339887498949 <= float(iv.hi)
    neg = (-ALPHA).enclosure()
    assert neg.lo < 0 and float(neg.hi) == pytest.approx(-0.618, abs=1e-3)


def _arcs(*pairs):
    return CircleIntervalSet.from_arcs(
        [(QSqrt5.of(Fraction(a)), QSqrt5.of(Fraction(b))) for a, b in pairs]
    )


def test_membership_conventions():
    w = _arcs(("0", "1/2"))
    assert not w.contains(QSqrt5.of(0))
    assert w.contains(QSqrt5.of(Fraction(1, 2)))
    assert not w.contains(QSqrt5.of(Fraction(3, 4)))
    wrap = _arcs(("9/10", "1/10"))
    assert wrap.contains(QSqrt5.of(0))  # 0 == 1 lies in (9/10, 1]
    assert wrap.contains(QSqrt5.of(Fraction(1, 10)))
    assert not wrap.contains(QSqrt5.of(Fraction(9, 10)))
    assert wrap.interval_count() == 1 and wrap.piece_count() == 2


def test_merge_and_measure():
    w = _arcs(("0", "1/4"), ("1/4", "1/2"), ("3/4", "7/8"))
    assert w.piece_count() == 2
    assert w.measure() == QSqrt5.of(Fraction(5, 8))
    assert w.interval_count() == 2


def test_set_algebra_random():
    rng = random.Random(12)
    for _ in range(40):
        def rand_set():
            arcs = []
            for _ in range(rng.randint(1, 4)):
                a = Fraction(rng.randint(0, 99), 100)
                b = Fraction(rng.randint(0, 99), 100)
                if a != b:
                    arcs.append((QSqrt5.of(a), QSqrt5.of(b)))
            return (
                CircleIntervalSet.from_arcs(arcs)
                if arcs
                else CircleIntervalSet.empty()
            )

        x, y = rand_set(), rand_set()
        ux = x.union(y)
        ix = x.intersection(y)
        sx = x.symmetric_difference(y)
        assert ux.measure() == x.measure() + y.measure() - ix.measure()
        assert sx.measure() == ux.measure() - ix.measure()
        assert x.difference(y).union(ix) == x
        for _ in range(12):
            point = QSqrt5.of(Fraction(rng.randint(0, 399), 400))
            assert ux.contains(point) == (x.contains(point) or y.contains(point))
            assert ix.contains(point) == (x.contains(point) and y.contains(point))
            assert sx.contains(point) == (x.contains(point) != y.contains(point))


def test_translate_preserves_measure():
    rng = random.Random(3)
    w = _arcs(("1/10", "3/10"), ("2/5", "1/2"), ("19/20", "1/20"))
    for _ in range(10):
        h = QSqrt5.of(Fraction(rng.randint(1, 999), 1000)) + ALPHA * rng.randint(0, 3)
        t = w.translate(h)
        assert t.measure() == w.measure()
        assert t.translate(-h) == w


def test_complement():
    w = _arcs(("0", "1/2"))
    c = w.complement()
    assert c.measure() == QSqrt5.of(Fraction(1, 2))
    assert c.union(w) == CircleIntervalSet.full()
    assert c.intersection(w).is_empty()


def test_full_and_zero_arc_rejected():
    with pytest.raises(ValidationError):
        _arcs(("1/2", "1/2"))
    assert CircleIntervalSet.full().measure() == QSqrt5.of(1)


def test_window_shift_distance_single_arc():
    w = _arcs(("3/10", "11/20"))  # length 1/4
    assert window_shift_distance(w, QSqrt5.of(Fraction(1, 10))) == QSqrt5.of(
        Fraction(1, 5)
    )
    assert window_shift_distance(w, QSqrt5.of(Fraction(1, 3))) == QSqrt5.of(
        Fraction(1, 2)
    )
    assert window_shift_distance(w, ZERO).sign() == 0


def test_window_shift_distance_symmetry_and_triangle():
    rng = random.Random(9)
    w = _arcs(("1/10", "3/10"), ("2/5", "1/2"), ("19/20", "1/20"))
    hs = [QSqrt5.of(Fraction(rng.randint(1, 999), 1000)) for _ in range(8)]
    for h in hs:
        assert window_shift_distance(w, h) == window_shift_distance(w, -h)
    for h1 in hs[:4]:
        for h2 in hs[4:]:
            d12 = window_shift_distance(w, h1 + h2)
            assert (
                d12 - window_shift_distance(w, h1) - window_shift_distance(w, h2)
            ).sign() <= 0
