"""Besicovitch distances d_1(eta, sigma^r eta) for B-free words.

Three independent computation paths are implemented and cross-checked:

* inclusion-exclusion over subsets S of B, where the intersection of the
  shifted progressions contributes T_r(S)/lcm(S), T_r(S) counting the
  subsets K of S \\ B_{|r} with gcd(lcm(K), lcm(S\\K)) | r;
* the closed-form product formula available when B is pairwise coprime;
* a brute-force oracle that counts mismatches over one period of the word.

All finite-B results are exact rationals.  Family (infinite-B) results are
certified rational enclosures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .bsets import (
    KIND_SQUAREFREE,
    KIND_TOEPLITZ,
    PERIOD_BIT_CAP,
    SUBSET_CAP,
    BSet,
    PeriodicWord,
    density_mb,
    divisors_in,
    eta_word,
    lcm_of,
)
from .errors import CrossCheckError, ResourceCapError, ValidationError
from .intervals import ProductAccumulator, RationalInterval
from .primes import first_primes

#: dense profiles allocate O(period) arrays; stay lazy beyond this
PROFILE_PERIOD_CAP = 4 * 10**6


def t_r_count(s: tuple[int, ...], r: int, b_div_r: tuple[int, ...]) -> int:
    """Number of K subseteq S \\ B_{|r} with gcd(lcm(K), lcm(S\\K)) | r.

    ``b_div_r`` is the list of elements of S dividing r (for r = 0 that is
    all of S, forcing K = empty).  Note g | 0 holds for every g.
    """
    s = tuple(s)
    blocked = set(b_div_r)
    free = [e for e in s if e not in blocked]
    count = 0
    for mask in range(1 << len(free)):
        k_lcm = 1
        rest = list(blocked)
        for j, e in enumerate(free):
            if mask >> j & 1:
                k_lcm = math.lcm(k_lcm, e)
            else:
                rest.append(e)
        g = math.gcd(k_lcm, lcm_of(rest))
        if r % g == 0:
            count += 1
    return count


@lru_cache(maxsize=256)
def _subset_structure(elements: tuple[int, ...]):
    """Flat (lcm_S, sign, g, K) records over all K subseteq S subseteq B.

    There are 3^|B| records; the per-r evaluation only has to test the
    divisibility pattern of r against g and against the members of K.
    """
    n = len(elements)
    records = []
    for s_mask in range(1, 1 << n):
        s = [elements[i] for i in range(n) if s_mask >> i & 1]
        lcm_s = lcm_of(s)
        sign = -1 if len(s) % 2 == 0 else +1
        sub = s_mask
        while True:  # enumerate K as submask of s_mask (including 0)
            k = [elements[i] for i in range(n) if sub >> i & 1]
            rest = [elements[i] for i in range(n) if (s_mask & ~sub) >> i & 1]
            g = math.gcd(lcm_of(k), lcm_of(rest))
            records.append((lcm_s, sign, g, tuple(k)))
            if sub == 0:
                break
            sub = (sub - 1) & s_mask
    return records


def _check_subset_cap(b: BSet, subset_cap: int):
    if len(b.elements) > subset_cap:
        raise ResourceCapError(
            f"{len(b.elements)} elements exceed the subset-enumeration cap {subset_cap}"
        )


def _reduce_shift(b: BSet, r: int) -> int:
    """Reduce r into [0, period); eta is period-periodic and M_B = -M_B."""
    return r % b.period()


def density_union_shift(b: BSet, r: int, subset_cap: int = SUBSET_CAP) -> Fraction:
    """Exact density of M_B united with its shift by r (finite B)."""
    _check_subset_cap(b, subset_cap)
    r = _reduce_shift(b, r)
    big_l = b.period()
    num = 0
    for lcm_s, sign, g, k in _subset_structure(b.elements):
        if r % g == 0 and all(r % e != 0 for e in k):
            num += sign * (big_l // lcm_s)
    return Fraction(num, big_l)


def d1_shift(b: BSet, r: int, subset_cap: int = SUBSET_CAP) -> Fraction:
    """d_1(eta, sigma^r eta) = 2(d(M_B united (r+M_B)) - d(M_B)), exact."""
    return 2 * (density_union_shift(b, r, subset_cap) - density_mb(b, subset_cap))


def d1_shift_all(b: BSet, subset_cap: int = SUBSET_CAP) -> tuple[np.ndarray, int]:
    """Vectorized d_1 numerators for every shift r in one period.

    Returns (num, period) with d_1(eta, sigma^r eta) = num[r] / period.
    """
    _check_subset_cap(b, subset_cap)
    period = b.period()
    if period > PROFILE_PERIOD_CAP:
        raise ResourceCapError(f"period {period} exceeds dense-profile cap")
    # divisibility masks for the elements are shared across records; the
    # per-record gcd masks are cheap transients (cost period/g each)
    elem_div = {}
    for e in b.elements:
        arr = np.zeros(period, dtype=bool)
        arr[::e] = True
        elem_div[e] = arr
    union_num = np.zeros(period, dtype=np.int64)
    for lcm_s, sign, g, k in _subset_structure(b.elements):
        if g == 1:
            cond = np.ones(period, dtype=bool)
        else:
            cond = np.zeros(period, dtype=bool)
            cond[::g] = True
        for e in k:
            np.logical_and(cond, ~elem_div[e], out=cond)
        union_num += (sign * (period // lcm_s)) * cond
    mult_count = period - int(np.count_nonzero(eta_mask(b, period)))
    return 2 * (union_num - mult_count), period


def eta_mask(b: BSet, period: int) -> np.ndarray:
    """Free-position mask over one period (uint8), without the word wrapper."""
    bits = np.ones(period, dtype=np.uint8)
    for e in b.elements:
        bits[::e] = 0
    return bits


def reduce_r(b: BSet, r: int) -> int:
    """lcm of the elements dividing r; the distance at r equals the one there.

    Only valid for pairwise coprime B, and undefined at r = 0.
    """
    if r == 0:
        raise ValidationError("reduce_r needs r != 0")
    if not b.pairwise_coprime():
        raise ValidationError("reduce_r needs pairwise coprime elements")
    return lcm_of(divisors_in(b, r))


# ---------------------------------------------------------------------------
# coprime closed form


def _coprime_value(b: BSet, r: int) -> Fraction:
    """2 d(F_B) (1 - prod over b not dividing r of (1 - 1/(b-1))), finite B."""
    d_free = math.prod((Fraction(e - 1, e) for e in b.elements), start=Fraction(1))
    prod = math.prod(
        (Fraction(e - 2, e - 1) for e in b.elements if r % e != 0), start=Fraction(1)
    )
    return 2 * d_free * (1 - prod)


def _squarefree_coprime_interval(b: BSet, r: int, truncation: int) -> RationalInterval:
    """Certified enclosure of the closed form for the square-free family."""
    n = max(truncation, b.truncation_index)
    ps = first_primes(n + 1)
    tail_next = ps[n]  # p_{n+1}
    # d(F_B): partial product over i <= n times a tail factor in [1 - s, 1],
    # s >= sum_{i>n} 1/p_i^2, bounded by the odd telescoping sum
    acc = ProductAccumulator()
    for p in ps[:n]:
        acc.multiply(p * p - 1, p * p)
    tail_sigma = Fraction(1, 2 * (tail_next - 1))
    d_free = acc.value() * RationalInterval(max(Fraction(0), 1 - tail_sigma), Fraction(1))
    # inner product over elements not dividing r; all i > n contribute a
    # factor in [1 - s', 1] with s' >= sum_{i>n} 1/(p_i^2 - 1)
    inner = ProductAccumulator()
    for p in ps[:n]:
        if r % (p * p) != 0:
            inner.multiply(p * p - 2, p * p - 1)
    inner_iv = inner.value() * RationalInterval(
        max(Fraction(0), 1 - tail_sigma), Fraction(1)
    )
    one = RationalInterval.exact(1)
    return (one - inner_iv) * d_free * 2


def d1_shift_coprime(
    b: BSet, r: int, truncation: int | None = None
) -> RationalInterval:
    """Closed-form d_1 for pairwise coprime B.

    Exact (degenerate interval) when B is finite; a certified enclosure for
    the square-free family, with partial products over ``truncation`` primes.
    """
    if b.kind == KIND_TOEPLITZ:
        raise ValidationError("toeplitz elements share powers of two; not coprime")
    if not b.pairwise_coprime():
        raise ValidationError("closed form needs pairwise coprime elements")
    if b.kind == KIND_SQUAREFREE:
        return _squarefree_coprime_interval(b, r, truncation or 2000)
    return RationalInterval.exact(_coprime_value(b, r))


def coprime_pattern_values(b: BSet) -> dict[tuple[int, ...], Fraction]:
    """Closed-form values keyed by the sub-tuple of elements dividing r.

    There are at most 2^|B| distinct values of the closed form; bulk
    comparisons over a whole period group shifts by this pattern.
    """
    if not b.pairwise_coprime():
        raise ValidationError("closed form needs pairwise coprime elements")
    out = {}
    n = len(b.elements)
    for mask in range(1 << n):
        pat = tuple(e for j, e in enumerate(b.elements) if mask >> j & 1)
        r = lcm_of(pat)  # a shift realizing exactly this pattern
        out[pat] = _coprime_value(b, r)
    return out


# ---------------------------------------------------------------------------
# oracle path


def d1_oracle_periodic(w: PeriodicWord, r: int) -> Fraction:
    """Mismatch density between the word and its shift, exact period count."""
    if r % w.period == 0:
        return Fraction(0)
    shifted = np.roll(w.bits, -(r % w.period))
    return Fraction(int(np.count_nonzero(w.bits != shifted)), w.period)


def mismatch_counts(w: PeriodicWord) -> np.ndarray:
    """Mismatch counts against every shift r in one period, exact int64.

    Computed through an FFT autocorrelation.  For 0/1 words of period up to
    ~1e7 the float64 FFT error is below 1e-4 of a count, so rounding to the
    nearest integer recovers the exact values; the residual is checked and
    the direct per-shift count is used as a fallback if it ever degrades.
    """
    bits = w.bits.astype(np.float64)
    spec = np.fft.rfft(bits)
    ac = np.fft.irfft(spec * np.conj(spec), n=w.period)
    ones = float(np.sum(bits))
    counts = 2.0 * (ones - ac)
    rounded = np.rint(counts)
    if float(np.max(np.abs(counts - rounded))) > 1e-3:
        rounded = np.array(
            [
                np.count_nonzero(w.bits != np.roll(w.bits, -r))
                for r in range(w.period)
            ],
            dtype=np.int64,
        )
        return rounded
    out = rounded.astype(np.int64)
    out[0] = 0
    return out


def d1_empirical(x, y, n: int | None = None, two_sided: bool = True) -> float:
    """Finite-window mismatch average; an approximation, not a limit.

    ``x`` and ``y`` are 0/1 sequences over a common window, two-sided
    [-n, n] by default (length 2n+1); pass two_sided=False for one-sided
    [0, 2n] windows.
    """
    x = np.asarray(x, dtype=np.uint8)
    y = np.asarray(y, dtype=np.uint8)
    if x.shape != y.shape or x.ndim != 1:
        raise ValidationError("sequences must be 1-d and of equal length")
    if n is not None and len(x) != 2 * n + 1:
        raise ValidationError(f"window half-length {n} needs {2 * n + 1} samples")
    if two_sided and len(x) % 2 == 0:
        raise ValidationError("a two-sided window has odd length 2n+1")
    return float(np.count_nonzero(x != y)) / len(x)


# ---------------------------------------------------------------------------
# profiles


@dataclass(frozen=True, eq=False)
class DistanceProfile:
    """The cyclic distance function r -> d_1(eta, sigma^r eta).

    Dense profiles store exact numerators over the common denominator
    ``period``; lazy profiles (huge periods) evaluate per shift on demand.
    """

    period: int
    numerators: np.ndarray | None
    bset: BSet | None = None
    paths: tuple[str, ...] = ()
    r_max: int | None = None

    def __post_init__(self):
        if self.numerators is not None:
            self.numerators.setflags(write=False)

    @property
    def is_dense(self) -> bool:
        return self.numerators is not None

    def value(self, r: int) -> Fraction:
        r = r % self.period
        if self.numerators is not None:
            return Fraction(int(self.numerators[r]), self.period)
        return d1_shift(self.bset, r)

    def values(self, r_max: int | None = None) -> list[Fraction]:
        limit = self.period - 1 if r_max is None else min(r_max, self.period - 1)
        return [self.value(r) for r in range(limit + 1)]

    def max_value(self) -> Fraction:
        if self.numerators is None:
            raise ResourceCapError("lazy profile has no dense maximum")
        return Fraction(int(self.numerators.max()), self.period)

    def to_csv(self, r_max: int | None = None) -> str:
        limit = self.period - 1 if r_max is None else min(r_max, self.period - 1)
        lines = ["r,numerator,denominator,decimal"]
        for r in range(limit + 1):
            v = self.value(r)
            lines.append(f"{r},{v.numerator},{v.denominator},{float(v):.12g}")
        return "\n".join(lines) + "\n"


def profile_from_word(w: PeriodicWord) -> DistanceProfile:
    """Oracle-path profile: exact mismatch counts over one period."""
    return DistanceProfile(
        period=w.period,
        numerators=mismatch_counts(w),
        bset=w.source,
        paths=("oracle",),
    )


def distance_profile(
    b: BSet,
    r_max: int | None = None,
    subset_cap: int = SUBSET_CAP,
    period_cap: int = PERIOD_BIT_CAP,
    cross_check: bool = True,
) -> DistanceProfile:
    """Distance profile of a finite B-set, cross-checked when possible.

    The formula path needs |B| within the subset cap; the oracle path needs
    the period within the cap.  When both are feasible they must agree bit
    for bit, otherwise a CrossCheckError is raised.
    """
    period = b.period()
    formula_ok = len(b.elements) <= subset_cap and period <= PROFILE_PERIOD_CAP
    oracle_ok = period <= min(period_cap, PROFILE_PERIOD_CAP)
    if not formula_ok and not oracle_ok:
        if len(b.elements) <= subset_cap:
            # per-shift formula evaluation still works; stay lazy
            return DistanceProfile(
                period=period, numerators=None, bset=b, paths=("formula-lazy",), r_max=r_max
            )
        raise ResourceCapError(
            "neither the formula path nor the periodic oracle is feasible"
        )
    num = None
    paths = []
    if formula_ok:
        num, _ = d1_shift_all(b, subset_cap)
        paths.append("formula")
    if oracle_ok and (cross_check or num is None):
        counts = mismatch_counts(eta_word(b, period_cap))
        paths.append("oracle")
        if num is not None and not np.array_equal(num, counts):
            bad = int(np.flatnonzero(num != counts)[0])
            raise CrossCheckError(
                f"formula and oracle disagree at r={bad}: "
                f"{num[bad]}/{period} vs {counts[bad]}/{period}"
            )
        if num is None:
            num = counts
    return DistanceProfile(
        period=period, numerators=num, bset=b, paths=tuple(paths), r_max=r_max
    )


# ---------------------------------------------------------------------------
# block codes


def apply_block_code(w: PeriodicWord, table, length: int) -> PeriodicWord:
    """Apply a sliding block code of odd length M to a periodic word.

    ``table`` maps each of the 2^M blocks to an output bit; blocks are
    indexed as integers with the leftmost symbol in the highest bit.  The
    image has the same period (possibly non-minimal).
    """
    if length < 1 or length % 2 == 0:
        raise ValidationError("block code length must be odd and >= 1")
    if callable(table):
        lut = np.array(
            [int(table(tuple(v >> (length - 1 - j) & 1 for j in range(length))))
             for v in range(1 << length)],
            dtype=np.uint8,
        )
    else:
        lut = np.asarray(table, dtype=np.uint8)
        if len(lut) != 1 << length:
            raise ValidationError(f"block code table needs {1 << length} entries")
    m = (length - 1) // 2
    idx = np.zeros(w.period, dtype=np.int64)
    for j in range(length):
        idx = (idx << 1) | np.roll(w.bits, m - j).astype(np.int64)
    return PeriodicWord(period=w.period, bits=lut[idx], source=None)
