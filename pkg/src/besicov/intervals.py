"""Exact rational intervals with outward rounding.

All certified enclosures in this package are ``RationalInterval`` values:
pairs of ``fractions.Fraction`` bounds with ``lo <= hi`` such that the true
(possibly irrational) quantity lies inside.  Arithmetic is exact; where long
products would blow up the rational representation, ``round_outward`` clamps
denominators to a power of two while keeping the enclosure valid.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import ValidationError

#: denominator clamp used by the long-product helpers, in bits
DEFAULT_PRECISION_BITS = 192


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise ValidationError(f"expected an exact rational, got {x!r} ({type(x).__name__})")


@dataclass(frozen=True)
class RationalInterval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _to_fraction(self.lo))
        object.__setattr__(self, "hi", _to_fraction(self.hi))
        if self.lo > self.hi:
            raise ValidationError(f"interval bounds out of order: {self.lo} > {self.hi}")

    @classmethod
    def exact(cls, x) -> "RationalInterval":
        x = _to_fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        x = _to_fraction(x)
        return self.lo <= x <= self.hi

    def intersects(self, other: "RationalInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def strictly_below(self, other: "RationalInterval") -> bool:
        return self.hi < other.lo

    def __add__(self, other):
        if isinstance(other, RationalInterval):
            return RationalInterval(self.lo + other.lo, self.hi + other.hi)
        x = _to_fraction(other)
        return RationalInterval(self.lo + x, self.hi + x)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, RationalInterval):
            return RationalInterval(self.lo - other.hi, self.hi - other.lo)
        x = _to_fraction(other)
        return RationalInterval(self.lo - x, self.hi - x)

    def __mul__(self, other):
        if isinstance(other, RationalInterval):
            cands = (
                self.lo * other.lo,
                self.lo * other.hi,
                self.hi * other.lo,
                self.hi * other.hi,
            )
            return RationalInterval(min(cands), max(cands))
        x = _to_fraction(other)
        if x >= 0:
            return RationalInterval(self.lo * x, self.hi * x)
        return RationalInterval(self.hi * x, self.lo * x)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, RationalInterval):
            if other.lo <= 0 <= other.hi:
                raise ValidationError("division by an interval containing zero")
            cands = (
                self.lo / other.lo,
                self.lo / other.hi,
                self.hi / other.lo,
                self.hi / other.hi,
            )
            return RationalInterval(min(cands), max(cands))
        x = _to_fraction(other)
        if x == 0:
            raise ZeroDivisionError("division of interval by zero")
        if x > 0:
            return RationalInterval(self.lo / x, self.hi / x)
        return RationalInterval(self.hi / x, self.lo / x)

    def __float__(self) -> float:
        return float(self.mid)

    def __str__(self) -> str:
        if self.is_exact():
            return str(self.lo)
        return f"[{self.lo}, {self.hi}]"


def round_outward(iv: RationalInterval, bits: int = DEFAULT_PRECISION_BITS) -> RationalInterval:
    """Widen ``iv`` so that both endpoints have denominator 2**bits.

    The result always contains ``iv``; the widening is at most 2**(1-bits).
    """
    scale = 1 << bits
    lo = Fraction(iv.lo.numerator * scale // iv.lo.denominator, scale)
    hi = Fraction(-((-iv.hi.numerator * scale) // iv.hi.denominator), scale)
    return RationalInterval(lo, hi)


class ProductAccumulator:
    """Outward-rounded running product of nonnegative rational factors.

    Long Euler-type products over hundreds of thousands of factors cannot be
    kept as exact ``Fraction`` values (the denominators explode).  This
    accumulator keeps dyadic mantissas ``m / 2**bits`` for both bounds and
    rounds outward after every multiplication, so the final interval is a
    certified enclosure of the true product.
    """

    def __init__(self, bits: int = DEFAULT_PRECISION_BITS):
        self.bits = bits
        self._scale = 1 << bits
        self._lo = self._scale  # mantissas; value = m / 2**bits
        self._hi = self._scale

    def multiply(self, num: int, den: int) -> None:
        """Multiply by the exact nonnegative factor num/den."""
        if num < 0 or den <= 0:
            raise ValidationError("ProductAccumulator factors must be nonnegative")
        self._lo = (self._lo * num) // den
        self._hi = -((-self._hi * num) // den)

    def multiply_interval(self, lo: Fraction, hi: Fraction) -> None:
        if lo < 0:
            raise ValidationError("ProductAccumulator factors must be nonnegative")
        self._lo = (self._lo * lo.numerator) // lo.denominator
        self._hi = -((-self._hi * hi.numerator) // hi.denominator)

    def value(self) -> RationalInterval:
        return RationalInterval(
            Fraction(self._lo, self._scale), Fraction(self._hi, self._scale)
        )

    def snapshot(self) -> tuple[int, int]:
        """Raw mantissa pair, for cheap prefix tables."""
        return (self._lo, self._hi)

    @classmethod
    def interval_from_snapshot(cls, snap: tuple[int, int], bits: int) -> RationalInterval:
        lo, hi = snap
        scale = 1 << bits
        return RationalInterval(Fraction(lo, scale), Fraction(hi, scale))


def interval_div_snapshots(
    num: tuple[int, int], den: tuple[int, int], bits: int
) -> RationalInterval:
    """Certified quotient of two positive snapshot products: num / den."""
    nlo, nhi = num
    dlo, dhi = den
    if dlo <= 0:
        raise ValidationError("cannot divide by a product enclosure touching zero")
    return RationalInterval(Fraction(nlo, dhi), Fraction(nhi, dlo))
