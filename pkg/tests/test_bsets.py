"""B-set construction, density arithmetic and the eta-word oracle."""

import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from besicov.bsets import (
    BSet,
    density_mb,
    density_mb_bounds,
    divisors_in,
    eta_word,
    is_taut,
    lcm_of,
    make_bset,
    normalize_primitive,
    parse_bset_spec,
    serialize_bset_spec,
)
from besicov.errors import CertificationError, ResourceCapError, ValidationError


def test_parse_explicit_identity():
    b = parse_bset_spec('{"kind": "explicit", "elements": [2, 3]}')
    assert b.elements == (2, 3)


def test_parse_squarefree_count():
    b = parse_bset_spec('{"kind": "squarefree", "count": 3}')
    assert b.elements == (4, 9, 25)


def test_parse_normalizes_with_notice():
    b = parse_bset_spec('{"kind": "explicit", "elements": [2, 4, 3]}')
    assert b.elements == (2, 3)
    assert b.notices and "4" in b.notices[0]


@pytest.mark.parametrize(
    "raw, kept",
    [([2, 3], (2, 3)), ([2, 4, 6], (2,)), ([4, 6, 12], (4, 6))],
)
def test_normalize_primitive(raw, kept):
    assert normalize_primitive(raw)[0] == kept


@given(st.lists(st.integers(min_value=2, max_value=60), min_size=1, max_size=8))
@settings(max_examples=60)
def test_normalize_idempotent_and_multiples_preserved(raw):
    kept, _ = normalize_primitive(raw)
    assert normalize_primitive(kept) == (kept, ())
    # same set of multiples over a common period
    period = math.lcm(*raw)
    if period > 10**5:
        return
    def multiples(es):
        m = np.zeros(period, dtype=bool)
        for e in es:
            m[::e] = True
        return m
    assert np.array_equal(multiples(raw), multiples(kept))


def test_rejects_bad_elements():
    with pytest.raises(ValidationError):
        make_bset("explicit", elements=[1, 3])
    with pytest.raises(ValidationError):
        make_bset("explicit", elements=[])
    with pytest.raises(ValidationError):
        parse_bset_spec("not json at all {")


@pytest.mark.parametrize(
    "values, expect", [([], 1), ([4, 6], 12), ([4, 9, 25], 900)]
)
def test_lcm_of(values, expect):
    assert lcm_of(values) == expect


def test_divisors_in():
    b = make_bset("explicit", elements=[2, 3])
    assert divisors_in(b, 4) == (2,)
    assert divisors_in(b, 0) == (2, 3)
    assert divisors_in(make_bset("explicit", elements=[4, 9, 25]), 2) == ()


def test_eta_word_23():
    w = eta_word(make_bset("explicit", elements=[2, 3]))
    assert w.period == 6
    assert list(w.bits) == [0, 1, 0, 0, 0, 1]


def test_eta_word_2():
    w = eta_word(make_bset("explicit", elements=[2]))
    assert w.period == 2 and list(w.bits) == [0, 1]


def test_eta_word_46_free_positions():
    w = eta_word(make_bset("explicit", elements=[4, 6]))
    assert w.period == 12
    assert set(np.flatnonzero(w.bits)) == {1, 2, 3, 5, 7, 9, 10, 11}


def test_eta_word_cap():
    with pytest.raises(ResourceCapError):
        eta_word(make_bset("explicit", elements=[9973, 9967]), period_cap=10**6)


@pytest.mark.parametrize(
    "els, expect",
    [([2, 3], Fraction(2, 3)), ([4, 6], Fraction(1, 3)), ([2], Fraction(1, 2))],
)
def test_density_mb(els, expect):
    assert density_mb(make_bset("explicit", elements=els)) == expect


def test_density_matches_period_count():
    rng = random.Random(11)
    for _ in range(40):
        els = sorted(rng.sample(range(2, 40), rng.randint(1, 5)))
        kept, _ = normalize_primitive(els)
        b = make_bset("explicit", elements=list(kept))
        if b.period() > 10**6:
            continue
        w = eta_word(b)
        zeros = w.period - w.ones()
        assert density_mb(b) == Fraction(zeros, w.period)


def test_density_bounds_squarefree():
    from besicov.scaling import reference_12_over_pi2

    iv = density_mb_bounds(make_bset("squarefree", count=3))
    # exact truncation density of {4, 9, 25} is 9/25 (count 324 over 900)
    assert iv.lo == Fraction(9, 25)
    assert iv.hi > iv.lo
    # the enclosure must contain the true limit 1 - 6/pi^2
    six_over_pi2 = reference_12_over_pi2() / 2
    assert iv.lo <= 1 - six_over_pi2.hi and 1 - six_over_pi2.lo <= iv.hi


def test_density_bounds_nested():
    prev = density_mb_bounds(make_bset("squarefree", count=2))
    for n in (3, 4, 6, 9):
        iv = density_mb_bounds(make_bset("squarefree", count=n))
        assert iv.lo >= prev.lo and iv.hi <= prev.hi
        prev = iv


def test_density_bounds_explicit_degenerate():
    b = make_bset("explicit", elements=[2, 3])
    iv = density_mb_bounds(b)
    assert iv.is_exact() and iv.lo == Fraction(2, 3)


def test_density_bounds_toeplitz():
    b = make_bset("toeplitz", count=2)
    iv = density_mb_bounds(b, extend=8)
    assert iv.lo == density_mb(b)
    # geometric tail: 1/b_3 dominates, about 1/56 here
    assert 0 < iv.hi - iv.lo < Fraction(1, 25)
    finer = density_mb_bounds(make_bset("toeplitz", count=5), extend=8)
    assert finer.lo >= iv.lo and finer.hi <= iv.hi


def test_density_bounds_erdos_requires_acceptance():
    b = make_bset("erdos-custom", elements=[5, 7, 9])
    with pytest.raises(CertificationError):
        density_mb_bounds(b)
    iv = density_mb_bounds(b, accept_truncation=True)
    assert iv.is_exact()


def test_subset_cap():
    b = make_bset("explicit", elements=list(range(23, 120, 4)))
    with pytest.raises(ResourceCapError):
        density_mb(b, subset_cap=20)


@pytest.mark.parametrize("els", [[2, 3], [2], [4, 6, 9], [12, 15, 20]])
def test_is_taut(els):
    # a finite primitive set is always taut: multiples of b with cofactor
    # coprime to the rest are never covered by the other progressions
    assert is_taut(make_bset("explicit", elements=els)) is True


def test_taut_singletons():
    for b in (2, 3, 17):
        assert is_taut(make_bset("explicit", elements=[b]))


def test_spec_roundtrip():
    for b in (
        make_bset("explicit", elements=[2, 3]),
        make_bset("squarefree", count=4),
        make_bset("toeplitz", count=3, r_rule="kappa-log2", kappa=Fraction(1, 2)),
        make_bset("erdos-custom", elements=[4, 9, 35]),
    ):
        assert parse_bset_spec(serialize_bset_spec(b)) == b
