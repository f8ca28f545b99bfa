"""Covering-number bounds for orbits of periodic B-free words.

For a finite B-set the orbit of eta under the shift is a cyclic group
Z/period with the translation-invariant distance rho(i, j) =
d_1(sigma^i eta, sigma^j eta) read off the distance profile.  Open balls
are translates of the sublevel set S_eps = {k : profile(k) < eps}, so the
covering number N_eps is the minimum number of translates of S_eps that
cover the cycle.  The sandwich

    ceil(1 / mass(eps))  <=  N_eps  <=  floor(1 / mass(eps/2))

comes from the uniform measure of the balls; a greedy maximal separated
set gives a constructive upper bound in between, and a branch-and-bound
gives the exact minimum on small periods.

Strict inequality (open balls) is used everywhere; grids should avoid the
finitely many exact profile values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bsets import SUBSET_CAP, BSet, lcm_of
from .distance import DistanceProfile, d1_shift, d1_shift_coprime
from .errors import ResourceCapError, ValidationError
from .intervals import RationalInterval

#: exact minimum covers are searched only up to this period
EXACT_COVER_CAP = 2000


@dataclass(frozen=True)
class CoveringBounds:
    """Sandwich bounds for N_eps, with the exact value when computed."""

    epsilon: Fraction
    lower: int
    upper: int
    exact: int | None = None
    separated: int | None = None
    method_tags: tuple[str, ...] = ()

    def __post_init__(self):
        if self.lower < 1:
            raise ValidationError("covering lower bound must be >= 1")
        if self.exact is not None and not (self.lower <= self.exact <= self.upper):
            raise ValidationError("exact covering number escapes its sandwich")
        if self.separated is not None and not (self.lower <= self.separated <= self.upper):
            raise ValidationError("separated-set size escapes its sandwich")


def _require_dense(p: DistanceProfile) -> np.ndarray:
    if not p.is_dense:
        raise ResourceCapError("operation needs a full dense profile over one period")
    return p.numerators


def ball_mass(p: DistanceProfile, epsilon: Fraction) -> Fraction:
    """Uniform-measure mass of an open ball: #{k : profile(k) < eps}/period."""
    num = _require_dense(p)
    eps = Fraction(epsilon)
    # num[k]/period < eps  <=>  num[k] * eps.den < eps.num * period
    hits = int(np.count_nonzero(num * eps.denominator < eps.numerator * p.period))
    return Fraction(hits, p.period)


def sublevel_indices(p: DistanceProfile, epsilon: Fraction) -> np.ndarray:
    num = _require_dense(p)
    eps = Fraction(epsilon)
    return np.flatnonzero(num * eps.denominator < eps.numerator * p.period)


def covering_sandwich(p: DistanceProfile, epsilon: Fraction) -> CoveringBounds:
    """ceil(1/mass(eps)) <= N_eps <= floor(1/mass(eps/2))."""
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValidationError("covering bounds need eps > 0")
    m_lo = ball_mass(p, eps)
    m_hi = ball_mass(p, eps / 2)
    lower = int(math.ceil(1 / m_lo))
    upper = int(math.floor(1 / m_hi))
    return CoveringBounds(
        epsilon=eps,
        lower=lower,
        upper=upper,
        method_tags=("ball-mass-lower", "half-ball-upper"),
    )


def min_distance_upto(p: DistanceProfile, r: int) -> Fraction:
    """Minimum of the profile over shifts 1..r (periodically extended)."""
    if r < 1:
        raise ValidationError("min_distance_upto needs r >= 1")
    if r >= p.period:
        return Fraction(0)  # the full-period shift is distance zero
    num = _require_dense(p)
    return Fraction(int(num[1 : r + 1].min()), p.period)


def distance_at_lcm(b: BSet, subset, subset_cap: int = SUBSET_CAP):
    """Distance at the shift lcm(S) for a sub-collection S of B.

    Exact Fraction for finite B, a certified RationalInterval for coprime
    families.
    """
    subset = tuple(subset)
    for e in subset:
        if e not in b.elements:
            raise ValidationError(f"{e} is not an element of {b}")
    r = lcm_of(subset)
    if b.is_finite:
        return d1_shift(b, r, subset_cap)
    return d1_shift_coprime(b, r)


@dataclass(frozen=True)
class LemmaBounds:
    """Paired upper/lower covering statements derived from one subset S.

    upper: N_{M * eps_s} <= ell_s for every M > 1;
    lower: N_{eps_floor} >= ell_s, where eps_floor is the profile minimum
    over 1..ell_s.
    """

    subset: tuple[int, ...]
    ell_s: int
    eps_s: Fraction
    eps_floor: Fraction
    upper_count: int
    lower_count: int
    method_tags: tuple[str, ...] = ("lcm-shift-upper", "separation-lower")


def lemma_bounds(
    b: BSet, subset, profile: DistanceProfile, subset_cap: int = SUBSET_CAP
) -> LemmaBounds:
    subset = tuple(subset)
    ell_s = lcm_of(subset)
    eps_s = distance_at_lcm(b, subset, subset_cap)
    if isinstance(eps_s, RationalInterval):
        raise ValidationError("lemma_bounds needs a finite B-set")
    return LemmaBounds(
        subset=subset,
        ell_s=ell_s,
        eps_s=eps_s,
        eps_floor=min_distance_upto(profile, ell_s),
        upper_count=ell_s,
        lower_count=ell_s,
    )


def separated_cover(p: DistanceProfile, epsilon: Fraction) -> int:
    """Size of the greedy maximal eps-separated subset of the cycle.

    Residues are scanned in increasing order; a residue is taken when it is
    at distance >= eps from everything taken so far.  Maximality makes the
    size an upper bound for N_eps, and disjointness of the eps/2-balls
    keeps it below floor(1/mass(eps/2)).
    """
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValidationError("separated_cover needs eps > 0")
    period = p.period
    ball = sublevel_indices(p, eps)
    blocked = np.zeros(period, dtype=bool)
    count = 0
    for i in range(period):
        if not blocked[i]:
            count += 1
            blocked[(ball + i) % period] = True
    return count


def _rotate_mask(mask: int, t: int, period: int, full: int) -> int:
    t %= period
    return ((mask << t) | (mask >> (period - t))) & full


def exact_cover_small(
    p: DistanceProfile, epsilon: Fraction, cap: int = EXACT_COVER_CAP
) -> int:
    """Exact N_eps: minimum number of ball translates covering the cycle.

    Reduces by the stabilizer subgroup of the ball (translate structure),
    then runs branch-and-bound with the ball-mass lower bound for pruning.
    """
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValidationError("exact cover needs eps > 0")
    period = p.period
    if period > cap:
        raise ResourceCapError(f"period {period} exceeds exact-cover cap {cap}")
    ball_idx = sublevel_indices(p, eps)
    if len(ball_idx) == 0:
        raise ValidationError("empty ball: eps is at or below the minimum distance")
    if len(ball_idx) == period:
        return 1

    full = (1 << period) - 1
    ball = 0
    for k in ball_idx:
        ball |= 1 << int(k)

    # translate structure: if ball + d == ball for a divisor d of period,
    # membership only depends on k mod d and the problem quotients to Z/d
    d = period
    for cand in sorted(
        t for t in range(1, period) if period % t == 0
    ):
        if _rotate_mask(ball, cand, period, full) == ball:
            d = cand
            break
    if d < period:
        qfull = (1 << d) - 1
        qball = 0
        for k in range(d):
            if ball >> k & 1:
                qball |= 1 << k
        period, full, ball = d, qfull, qball
        if ball == full:
            return 1

    translates = [_rotate_mask(ball, t, period, full) for t in range(period)]
    ball_size = bin(ball).count("1")
    # greedy first solution for the initial upper bound
    uncovered = full
    best = 0
    while uncovered:
        pick = max(translates, key=lambda m: bin(m & uncovered).count("1"))
        uncovered &= ~pick
        best += 1

    seen: dict[int, int] = {}

    def dfs(uncovered: int, depth: int):
        nonlocal best
        if uncovered == 0:
            best = min(best, depth)
            return
        need = depth + (bin(uncovered).count("1") + ball_size - 1) // ball_size
        if need >= best:
            return
        prev = seen.get(uncovered)
        if prev is not None and prev <= depth:
            return
        seen[uncovered] = depth
        e = (uncovered & -uncovered).bit_length() - 1  # lowest uncovered residue
        for s in ball_idx:
            t = (e - int(s)) % period
            dfs(uncovered & ~translates[t], depth + 1)

    dfs(full, 0)
    return best


def covering_grid(
    p: DistanceProfile,
    eps_list,
    with_exact: bool = True,
    exact_cap: int = EXACT_COVER_CAP,
) -> list[CoveringBounds]:
    """Sandwich + separated (+ exact when feasible) for every grid point."""
    rows = []
    for eps in eps_list:
        cb = covering_sandwich(p, eps)
        sep = separated_cover(p, eps)
        exact = None
        if with_exact and p.period <= exact_cap:
            exact = exact_cover_small(p, eps, exact_cap)
        rows.append(
            CoveringBounds(
                epsilon=cb.epsilon,
                lower=cb.lower,
                upper=cb.upper,
                exact=exact,
                separated=sep,
                method_tags=cb.method_tags + ("greedy-separated",),
            )
        )
    return rows


def build_eps_grid(p: DistanceProfile, count: int) -> list[Fraction]:
    """Log-spaced rational grid inside the profile's value range.

    Grid points are nudged off the finitely many exact profile values so
    the open-ball convention never sits on a boundary.
    """
    num = _require_dense(p)
    positive = num[num > 0]
    if len(positive) == 0:
        return [Fraction(1, 2)] * min(count, 1)
    lo = Fraction(int(positive.min()), p.period) / 2
    hi = Fraction(int(num.max()), p.period) * Fraction(21, 20)
    values = {Fraction(int(v), p.period) for v in np.unique(num)}
    grid = []
    for i in range(count):
        t = i / (count - 1) if count > 1 else 0.0
        x = float(lo) * (float(hi) / float(lo)) ** t
        f = Fraction(x).limit_denominator(10**9)
        while f in values or f in grid or f <= 0:
            f *= Fraction(1000000007, 1000000000)
        grid.append(f)
    return grid


def covering_rows_to_csv(rows) -> str:
    lines = ["epsilon_num,epsilon_den,lower,upper,separated,exact"]
    for row in rows:
        sep = "" if row.separated is None else row.separated
        exact = "" if row.exact is None else row.exact
        lines.append(
            f"{row.epsilon.numerator},{row.epsilon.denominator},"
            f"{row.lower},{row.upper},{sep},{exact}"
        )
    return "\n".join(lines) + "\n"
