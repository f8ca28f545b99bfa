"""Covering sandwich, separated sets, exact covers, block-code inequality."""

from fractions import Fraction

import pytest

from besicov.bsets import eta_word, make_bset
from besicov.covering import (
    ball_mass,
    build_eps_grid,
    covering_grid,
    covering_sandwich,
    distance_at_lcm,
    exact_cover_small,
    lemma_bounds,
    min_distance_upto,
    separated_cover,
)
from besicov.distance import apply_block_code, distance_profile, profile_from_word
from besicov.errors import ResourceCapError, ValidationError


def B(*els):
    return make_bset("explicit", elements=list(els))


@pytest.fixture(scope="module")
def p23():
    return distance_profile(B(2, 3))


def test_ball_mass(p23):
    assert ball_mass(p23, Fraction(2, 5)) == Fraction(1, 2)
    assert ball_mass(p23, Fraction(1, 100)) == Fraction(1, 6)
    assert ball_mass(p23, Fraction(1)) == Fraction(1)


def test_sandwich(p23):
    cb = covering_sandwich(p23, Fraction(2, 5))
    assert (cb.lower, cb.upper) == (2, 6)
    assert covering_sandwich(p23, Fraction(1)).lower == 1
    cb = covering_sandwich(p23, Fraction(1, 100))
    assert (cb.lower, cb.upper) == (6, 6)


def test_min_distance_upto(p23):
    assert min_distance_upto(p23, 2) == Fraction(1, 3)
    assert min_distance_upto(p23, 1) == Fraction(2, 3)
    assert min_distance_upto(p23, 6) == 0


def test_distance_at_lcm():
    b = B(2, 3)
    assert distance_at_lcm(b, [2]) == Fraction(1, 3)
    assert distance_at_lcm(b, [2, 3]) == 0
    assert distance_at_lcm(B(4, 9), [4]) == Fraction(1, 6)
    with pytest.raises(ValidationError):
        distance_at_lcm(b, [5])


def test_lemma_bounds(p23):
    lb = lemma_bounds(B(2, 3), [2], p23)
    assert lb.ell_s == 2 and lb.eps_s == Fraction(1, 3)
    assert lb.eps_floor == Fraction(1, 3)
    assert lb.upper_count == 2 and lb.lower_count == 2


def test_lemma_consistency_exact_cover(p23):
    # exact cover slightly above M*eps_S is <= ell_S; at the running
    # minimum it is >= r
    b = B(2, 3)
    for subset in ([2], [3]):
        lb = lemma_bounds(b, subset, p23)
        eps = lb.eps_s * Fraction(101, 100)
        assert exact_cover_small(p23, eps) <= lb.ell_s
    for r in range(1, 7):
        floor = min_distance_upto(p23, r)
        if floor > 0:
            assert exact_cover_small(p23, floor) >= min(r, 6)


def test_coprime_prefix_floor_equals_level_distance():
    # pairwise coprime B, S a prefix by magnitude: the running minimum up
    # to lcm(S) (inclusive) equals the distance at lcm(S) itself
    cases = [((2, 9, 25), (2, 9)), ((2, 9, 25), (2,)), ((4, 9, 35), (4, 9)), ((3, 5, 7), (3, 5))]
    for els, prefix in cases:
        b = B(*els)
        p = distance_profile(b)
        ell_s = 1
        for e in prefix:
            ell_s *= e
        assert min_distance_upto(p, ell_s) == distance_at_lcm(b, list(prefix))


def test_separated_cover(p23):
    assert separated_cover(p23, Fraction(2, 5)) == 2
    assert separated_cover(p23, Fraction(7, 10)) == 1
    assert separated_cover(p23, Fraction(3, 10)) == 6


def test_exact_cover(p23):
    assert exact_cover_small(p23, Fraction(2, 5)) == 2
    assert exact_cover_small(p23, Fraction(1)) == 1


def test_exact_cover_46():
    p = distance_profile(B(4, 6))
    vals = sorted(set(v for v in p.values() if v > 0))
    eps = vals[0] * Fraction(101, 100)
    n = exact_cover_small(p, eps)
    cb = covering_sandwich(p, eps)
    assert cb.lower <= n <= cb.upper


def test_exact_cover_cap():
    p = distance_profile(B(4, 6))
    with pytest.raises(ResourceCapError):
        exact_cover_small(p, Fraction(1, 3), cap=5)


def test_sandwich_ordering_grid():
    for els in ((2, 3), (4, 6), (2, 5), (3, 4, 5)):
        p = distance_profile(B(*els))
        rows = covering_grid(p, build_eps_grid(p, 20))
        for row in rows:
            assert row.lower <= row.exact <= row.separated <= row.upper
        exacts = [r.exact for r in rows]
        assert all(a >= b for a, b in zip(exacts, exacts[1:]))


def test_monotonicity_in_eps(p23):
    grid = build_eps_grid(p23, 12)
    exacts = [exact_cover_small(p23, e) for e in grid]
    assert all(a >= b for a, b in zip(exacts, exacts[1:]))


BLOCK_CODES = {
    "center": [0, 0, 1, 1, 0, 0, 1, 1],
    "neighbor-xor": [0, 1, 0, 1, 1, 0, 1, 0],
    "majority": [0, 0, 0, 1, 0, 1, 1, 1],
}


@pytest.mark.parametrize("name", sorted(BLOCK_CODES))
def test_block_code_inequality(name):
    # a length-M code is M-Lipschitz for d_1, so N_{M eps}(image orbit)
    # never exceeds N_eps(source orbit); exact covers at period <= 6
    m_len = 3
    w = eta_word(B(2, 3))
    img = apply_block_code(w, BLOCK_CODES[name], m_len)
    src = profile_from_word(w)
    dst = profile_from_word(img)
    grid = build_eps_grid(src, 10)
    for eps in grid:
        n_src = exact_cover_small(src, eps)
        n_img = exact_cover_small(dst, m_len * eps)
        assert n_img <= n_src, (name, eps, n_img, n_src)
