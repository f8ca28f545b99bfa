"""Epsilon sequences and scaling-exponent estimation for the example families.

The Toeplitz family b_i = 2^{r_i} c_i admits the exact identity

    eps_at_level(n) = 2 * prod_{i<=n}(1 - 1/c_i) * d(M of {b_i : i > n}),

where the trailing density is enclosed by a finite inclusion-exclusion
chunk plus the geometric tail sum_{i>T} 2^{-r_i}/c_i <= 2^{-r_T}/c_{T+1}.
The square-free family (b_i = p_i^2) uses the coprime product form with
prime-tail bounds instead.  Exponents are then read off as slopes of
log-log fits: count against 1/eps on the dimensional scale, log(count)
against 1/eps on the power-exponential scale.

All logs used in fits are base 2, so synthetic data built from powers of
two fits exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .bsets import SUBSET_CAP, density_mb_of
from .errors import CertificationError, ResourceCapError, ValidationError
from .families import ToeplitzFamily
from .intervals import (
    ProductAccumulator,
    RationalInterval,
    interval_div_snapshots,
)
from .primes import first_primes, primes_upto

#: default mantissa bits for logarithms of astronomically large scales
LOG_PRECISION_BITS = 128
#: dimensional/power-exponential fits drop this many largest-eps points
FIT_DROP_LARGEST = 2


# ---------------------------------------------------------------------------
# Toeplitz family


def toeplitz_eps(fam: ToeplitzFamily, n: int, tail: int) -> RationalInterval:
    """Certified enclosure of the distance at the level-n period lcm.

    ``tail`` is the index up to which the trailing density uses exact
    inclusion-exclusion; beyond it the geometric bound takes over.  With an
    explicit (finite) c list the result degenerates to an exact rational
    once the tail exhausts the family.
    """
    if n < 1:
        raise ValidationError("toeplitz eps needs n >= 1")
    if tail < n:
        raise ValidationError("tail must be at least n")
    finite = fam.c_rule == "explicit"
    if finite:
        tail = min(tail, fam.count)
    if tail - n > SUBSET_CAP:
        raise ResourceCapError(
            f"exact chunk of {tail - n} elements exceeds the subset cap"
        )
    fam = fam.extend(tail) if tail > fam.count else fam
    prod_c = math.prod(
        (Fraction(c - 1, c) for c in fam.cs[:n]), start=Fraction(1)
    )
    chunk = tuple(fam.b(i) for i in range(n + 1, tail + 1))
    d_lo = density_mb_of(chunk)
    if finite and tail == fam.count:
        rem = Fraction(0)
    else:
        rem = Fraction(1, (1 << fam.r(tail)) * fam.c(tail + 1))
    trailing = RationalInterval(d_lo, d_lo + rem)
    return trailing * (2 * prod_c)


def toeplitz_lower_gap(fam: ToeplitzFamily, n: int, tail: int | None = None) -> RationalInterval:
    """Enclosure of the certified floor gap_bound(n)^{-1} * eps_at_level(n).

    Distances at shifts 1..ell(n) all sit above this value, which pairs
    with the count ell(n) as a covering lower bound.
    """
    eps = toeplitz_eps(fam, n, tail if tail is not None else n + 10)
    return eps / fam.gap_bound(n)


@dataclass(frozen=True)
class ToeplitzRow:
    """One level of the Toeplitz covering report."""

    n: int
    ell: int
    eps: RationalInterval
    gap_bound: Fraction
    #: eps scale at which ell is an upper bound for the covering number
    upper_eps: RationalInterval
    #: eps scales at which ell is a lower bound (sharp and crude variants)
    lower_eps_gap: RationalInterval
    lower_eps_c: RationalInterval
    log2_ell: float


def log2_big(x: int, prec_bits: int = LOG_PRECISION_BITS) -> float:
    """log2 of a (possibly astronomically large) positive integer."""
    if x <= 0:
        raise ValidationError("log2 of a nonpositive value")
    with mpmath.workprec(prec_bits):
        return float(mpmath.log(mpmath.mpf(x), 2))


def toeplitz_rows(
    fam: ToeplitzFamily, n_values, tail_extra: int = 10
) -> list[ToeplitzRow]:
    rows = []
    for n in sorted(n_values):
        eps = toeplitz_eps(fam, n, n + tail_extra)
        fam = fam.extend(max(fam.count, n + tail_extra))
        gap = fam.gap_bound(n)
        rows.append(
            ToeplitzRow(
                n=n,
                ell=fam.ell(n),
                eps=eps,
                gap_bound=gap,
                upper_eps=eps * 2,
                lower_eps_gap=eps / gap,
                lower_eps_c=eps / fam.c(n),
                log2_ell=log2_big(fam.ell(n)),
            )
        )
    return rows


# ---------------------------------------------------------------------------
# square-free family

#: primes up to here certify <1% enclosures for levels up to p_n ~ 1e4
SQUAREFREE_PMAX = 2 * 10**7


@dataclass(frozen=True)
class SquarefreeRow:
    n: int
    p_n: int
    eps: RationalInterval
    #: log2 of lcm = prod p_i^2, i <= n
    log2_ell: float
    #: natural log of ell, for the p log p reference ratio
    ln_ell: float


def _prime_tail_sigma(p_last: int) -> Fraction:
    # sum over primes p > p_last of 1/(p^2-1); primes are odd >= p_last+2,
    # and sum over odd k >= m of 1/(k^2-1) telescopes to 1/(2(m-1))
    return Fraction(1, 2 * (p_last + 1))


def squarefree_eps(n: int, tail: int) -> RationalInterval:
    """Certified enclosure of the square-free distance at level n.

    eps = 2 * d(F_B) * (1 - prod_{i>n}(1 - 1/(p_i^2 - 1))), with both
    infinite products enclosed by partial products over the first ``tail``
    primes times certified tail factors.
    """
    if n < 1:
        raise ValidationError("squarefree eps needs n >= 1")
    if tail <= n:
        raise ValidationError("tail must exceed n")
    ps = first_primes(tail)
    acc_free = ProductAccumulator()
    acc_inner = ProductAccumulator()
    for i, p in enumerate(ps, start=1):
        p2 = p * p
        acc_free.multiply(p2 - 1, p2)
        if i > n:
            acc_inner.multiply(p2 - 2, p2 - 1)
    sigma = _prime_tail_sigma(ps[-1])
    tail_factor = RationalInterval(max(Fraction(0), 1 - sigma), Fraction(1))
    d_free = acc_free.value() * tail_factor
    inner = acc_inner.value() * tail_factor
    one = RationalInterval.exact(1)
    return (one - inner) * d_free * 2


def squarefree_rows(
    n_values, p_max: int = SQUAREFREE_PMAX, bits: int = 192
) -> list[SquarefreeRow]:
    """Level rows for the square-free family, one sieve pass for all levels.

    Prefix snapshots of the two Euler products are taken at the requested
    levels; per-level enclosures then come from snapshot division, keeping
    the whole table pass linear in the number of primes.
    """
    marks = sorted(set(int(n) for n in n_values))
    if marks and marks[0] < 1:
        raise ValidationError("levels must be >= 1")
    ps = primes_upto(p_max)
    if marks and marks[-1] >= len(ps):
        raise CertificationError(
            f"level {marks[-1]} needs more primes than exist below {p_max}"
        )
    acc_free = ProductAccumulator(bits)
    acc_inner = ProductAccumulator(bits)
    snap_inner = {}
    lnsum = mpmath.mpf(0)
    ln_at = {}
    log2_at = {}
    mark_set = set(marks)
    with mpmath.workprec(LOG_PRECISION_BITS):
        for i, p in enumerate(ps, start=1):
            p = int(p)
            p2 = p * p
            acc_free.multiply(p2 - 1, p2)
            acc_inner.multiply(p2 - 2, p2 - 1)
            if i <= marks[-1]:
                lnsum += mpmath.log(p)
            if i in mark_set:
                snap_inner[i] = acc_inner.snapshot()
                ln_at[i] = float(2 * lnsum)
                log2_at[i] = float(2 * lnsum / mpmath.log(2))
    sigma = _prime_tail_sigma(int(ps[-1]))
    tail_factor = RationalInterval(max(Fraction(0), 1 - sigma), Fraction(1))
    d_free = acc_free.value() * tail_factor
    inner_end = acc_inner.snapshot()
    one = RationalInterval.exact(1)
    rows = []
    prime_list = first_primes(marks[-1]) if marks else []
    for nn in marks:
        inner = interval_div_snapshots(inner_end, snap_inner[nn], bits) * tail_factor
        eps = (one - inner) * d_free * 2
        rows.append(
            SquarefreeRow(
                n=nn,
                p_n=prime_list[nn - 1],
                eps=eps,
                log2_ell=log2_at[nn],
                ln_ell=ln_at[nn],
            )
        )
    return rows


def reference_12_over_pi2(terms: int = 20000) -> RationalInterval:
    """Certified rational enclosure of 12/pi^2 from a partial basel sum.

    pi^2/6 = sum 1/k^2 is enclosed by the partial sum plus the integral
    tail bracket [1/(K+1), 1/K]; the constant is never used inside any
    certified computation, only as a report annotation.
    """
    bits = 128
    scale = 1 << bits
    lo_m = 0
    hi_m = 0
    for k in range(1, terms + 1):
        k2 = k * k
        lo_m += scale // k2
        hi_m += -((-scale) // k2)
    basel = RationalInterval(
        Fraction(lo_m, scale) + Fraction(1, terms + 1),
        Fraction(hi_m, scale) + Fraction(1, terms),
    )
    return RationalInterval(2 / basel.hi, 2 / basel.lo)


def ln_interval(x: int) -> RationalInterval:
    """Certified rational enclosure of ln(x) for a positive integer."""
    if x <= 0:
        raise ValidationError("ln of a nonpositive value")
    with mpmath.workprec(96):
        r = mpmath.iv.log(mpmath.iv.mpf(x))
    return RationalInterval(_mpf_fraction(r.a), _mpf_fraction(r.b))


def _mpf_fraction(x) -> Fraction:
    """Exact Fraction value of an mpmath mpf (dyadic rational)."""
    num, den = mpmath.libmp.to_rational(mpmath.mpf(x)._mpf_)
    return Fraction(int(num), int(den))


# ---------------------------------------------------------------------------
# log-log fits


def _log2_of(x) -> float:
    if isinstance(x, RationalInterval):
        x = x.mid
    if isinstance(x, Fraction):
        if x <= 0:
            raise ValidationError("log2 of nonpositive value")
        return math.log2(x.numerator) - math.log2(x.denominator)
    if isinstance(x, int):
        return log2_big(x) if x.bit_length() > 50 else math.log2(x)
    x = float(x)
    if x <= 0:
        raise ValidationError("log2 of nonpositive value")
    return math.log2(x)


def _slope(xs: list[float], ys: list[float]) -> tuple[float, list[float]]:
    n = len(xs)
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    sxx = math.fsum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        raise ValidationError("degenerate fit: all abscissae equal")
    sxy = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = my - slope * mx
    residuals = [y - (slope * x + intercept) for x, y in zip(xs, ys)]
    return slope, residuals


def _fit_points(points, drop_largest: int):
    pts = sorted(points, key=lambda p: -_log2_of(p[0]))  # largest eps first
    if len(pts) < 3:
        raise ValidationError("fits need at least 3 points")
    drop = min(drop_largest, len(pts) - 3)
    return pts[drop:], drop


def fit_dimensional_exponent(points, drop_largest: int = FIT_DROP_LARGEST) -> float:
    """Least-squares slope of log2(count) against log2(1/eps).

    This is the amorphic-complexity estimate; the fit window drops the
    ``drop_largest`` largest-eps points (transient regime) when enough
    points remain.
    """
    pts, _ = _fit_points(points, drop_largest)
    xs = [-_log2_of(e) for e, _ in pts]
    ys = [_log2_of(c) for _, c in pts]
    for (_, c) in pts:
        if (isinstance(c, (int, float)) and c < 1) or (
            isinstance(c, Fraction) and c < 1
        ):
            raise ValidationError("counts must be >= 1")
    slope, _ = _slope(xs, ys)
    return slope


def fit_power_exponential_exponent(points, drop_largest: int = FIT_DROP_LARGEST) -> float:
    """Least-squares slope of log2(log-count) against log2(1/eps).

    Estimates the critical exponent on the scale eps -> exp(-eps^-alpha).
    The base of the supplied log-counts only shifts the fit by a constant
    and cancels in the slope.
    """
    pts, _ = _fit_points(points, drop_largest)
    for (_, lc) in pts:
        if float(lc) <= 0:
            raise ValidationError("log-counts must be positive")
    xs = [-_log2_of(e) for e, _ in pts]
    ys = [_log2_of(lc) for _, lc in pts]
    slope, _ = _slope(xs, ys)
    return slope


@dataclass(frozen=True)
class ScalingReport:
    """Fit summary over a family's (eps, scale) rows."""

    points: list
    exponent: float
    window: tuple[int, int]
    residuals: list[float]
    expected: float | None = None
    scale_kind: str = "dimensional"
    notes: tuple[str, ...] = field(default=())

    def residual_norm(self) -> float:
        return math.sqrt(math.fsum(r * r for r in self.residuals))

    def summary(self) -> str:
        lines = [
            f"scale: {self.scale_kind}",
            f"exponent: {self.exponent:.6f}",
            f"fit-window: points {self.window[0]}..{self.window[1] - 1}"
            f" of {len(self.points)}",
            f"residual-norm: {self.residual_norm():.3e}",
        ]
        if self.expected is not None:
            lines.append(f"expected: {self.expected:.6f}")
        for n in self.notes:
            lines.append(f"note: {n}")
        return "\n".join(lines) + "\n"


def fit_report(
    points,
    scale_kind: str = "dimensional",
    drop_largest: int = FIT_DROP_LARGEST,
    expected: float | None = None,
    notes: tuple[str, ...] = (),
) -> ScalingReport:
    pts, drop = _fit_points(points, drop_largest)
    xs = [-_log2_of(e) for e, _ in pts]
    if scale_kind == "dimensional":
        ys = [_log2_of(c) for _, c in pts]
    elif scale_kind == "power-exp":
        ys = [_log2_of(lc) for _, lc in pts]
    else:
        raise ValidationError(f"unknown scale kind {scale_kind!r}")
    slope, residuals = _slope(xs, ys)
    return ScalingReport(
        points=list(points),
        exponent=slope,
        window=(drop, drop + len(pts)),
        residuals=residuals,
        expected=expected,
        scale_kind=scale_kind,
        notes=notes,
    )


def synthetic_rows(slope: Fraction, count: int = 10) -> list[tuple[Fraction, int]]:
    """Exactly log-linear rows (2^-i, 2^(slope*i)) for fit self-tests."""
    slope = Fraction(slope)
    rows = []
    for i in range(1, count + 1):
        e = Fraction(1, 2**i)
        y = slope * i
        if y.denominator == 1:
            c = 2 ** int(y)
        else:
            c = int(round(2 ** float(y)))
        rows.append((e, c))
    return rows
