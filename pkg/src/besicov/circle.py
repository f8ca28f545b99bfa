"""Exact arithmetic in Q(sqrt 5) and half-open interval sets on the circle.

Everything the rotation windows need stays inside the field Q(sqrt 5):
the rotation angle alpha = (sqrt 5 - 1)/2 satisfies alpha^2 = 1 - alpha,
so powers of alpha have small rational coordinates and all interval
endpoints admit exact comparisons (sign of p + q sqrt5 is decided by
comparing p^2 against 5 q^2).

Interval sets are finite unions of half-open arcs (a, b] on T = R/Z,
kept sorted, disjoint and merged; the family is closed under boolean
operations and rotation.  The point 0 is identified with 1, so an arc
ending at 1 contains the point 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ValidationError
from .intervals import RationalInterval

_APPROX_BITS = 120


@lru_cache(maxsize=4)
def sqrt5_bounds(bits: int = _APPROX_BITS) -> tuple[Fraction, Fraction]:
    """Rational lo < sqrt5 < hi with hi - lo = 2**-bits."""
    s = math.isqrt(5 << (2 * bits))
    return Fraction(s, 1 << bits), Fraction(s + 1, 1 << bits)


@dataclass(frozen=True)
class QSqrt5:
    """An exact element p + q*sqrt(5) of the real quadratic field."""

    p: Fraction
    q: Fraction

    def __post_init__(self):
        if not isinstance(self.p, Fraction):
            object.__setattr__(self, "p", Fraction(self.p))
        if not isinstance(self.q, Fraction):
            object.__setattr__(self, "q", Fraction(self.q))

    @classmethod
    def of(cls, x) -> "QSqrt5":
        if isinstance(x, QSqrt5):
            return x
        return cls(Fraction(x), Fraction(0))

    def __add__(self, other):
        o = QSqrt5.of(other)
        return QSqrt5(self.p + o.p, self.q + o.q)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt5(-self.p, -self.q)

    def __sub__(self, other):
        return self + (-QSqrt5.of(other))

    def __rsub__(self, other):
        return QSqrt5.of(other) + (-self)

    def __mul__(self, other):
        o = QSqrt5.of(other)
        return QSqrt5(self.p * o.p + 5 * self.q * o.q, self.p * o.q + self.q * o.p)

    __rmul__ = __mul__

    def conjugate(self) -> "QSqrt5":
        return QSqrt5(self.p, -self.q)

    def norm(self) -> Fraction:
        return self.p * self.p - 5 * self.q * self.q

    def __truediv__(self, other):
        o = QSqrt5.of(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt5)")
        inv = QSqrt5(o.p / n, -o.q / n)
        return self * inv

    def __pow__(self, k: int) -> "QSqrt5":
        if k < 0:
            return QSqrt5.of(1) / self ** (-k)
        out = QSqrt5.of(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def sign(self) -> int:
        """Exact sign of p + q*sqrt5."""
        if self.q == 0:
            return -1 if self.p < 0 else (0 if self.p == 0 else 1)
        if self.p == 0:
            return -1 if self.q < 0 else 1
        if self.p > 0 and self.q > 0:
            return 1
        if self.p < 0 and self.q < 0:
            return -1
        # opposite signs: compare p^2 with 5 q^2
        diff = self.p * self.p - 5 * self.q * self.q
        big_is_rational = 1 if diff > 0 else -1  # which term dominates
        if diff == 0:
            raise ValidationError("sqrt5 is irrational; p^2 == 5q^2 is impossible")
        return big_is_rational * (1 if self.p > 0 else -1)

    def __lt__(self, other):
        return (self - QSqrt5.of(other)).sign() < 0

    def __le__(self, other):
        return (self - QSqrt5.of(other)).sign() <= 0

    def __gt__(self, other):
        return (self - QSqrt5.of(other)).sign() > 0

    def __ge__(self, other):
        return (self - QSqrt5.of(other)).sign() >= 0

    def is_rational(self) -> bool:
        return self.q == 0

    def approx(self, bits: int = _APPROX_BITS) -> Fraction:
        """Rational approximation within 2**-bits * |q| of the true value."""
        lo, hi = sqrt5_bounds(bits)
        s = lo if self.q >= 0 else hi
        return self.p + self.q * s

    def enclosure(self, bits: int = _APPROX_BITS) -> RationalInterval:
        lo, hi = sqrt5_bounds(bits)
        if self.q >= 0:
            return RationalInterval(self.p + self.q * lo, self.p + self.q * hi)
        return RationalInterval(self.p + self.q * hi, self.p + self.q * lo)

    def __float__(self) -> float:
        f = self.__dict__.get("_float")
        if f is None:
            f = float(self.approx())
            object.__setattr__(self, "_float", f)
        return f

    def floor(self) -> int:
        n = math.floor(self.approx())
        # the approximation is within 2**-119 of the value; fix up exactly
        while (self - n).sign() < 0:
            n -= 1
        while (self - (n + 1)).sign() >= 0:
            n += 1
        return n

    def mod1(self) -> "QSqrt5":
        return self - self.floor()

    def __str__(self):
        if self.q == 0:
            return str(self.p)
        return f"{self.p}+{self.q}*sqrt5"


ZERO = QSqrt5.of(0)
ONE = QSqrt5.of(1)
#: alpha = (sqrt5 - 1)/2, the golden rotation angle; alpha^2 = 1 - alpha
ALPHA = QSqrt5(Fraction(-1, 2), Fraction(1, 2))
#: phi = (sqrt5 + 1)/2 = 1/alpha
PHI = QSqrt5(Fraction(1, 2), Fraction(1, 2))


@lru_cache(maxsize=512)
def alpha_power(n: int) -> QSqrt5:
    """alpha**n through the recursion alpha^{k+1} = b + (a-b) alpha.

    Writing alpha^k = a + b*alpha with integer a, b keeps coordinates small.
    """
    if n < 0:
        raise ValidationError("alpha_power needs n >= 0")
    a, b = 1, 0  # alpha^0 = 1 + 0*alpha
    for _ in range(n):
        a, b = b, a - b
    return QSqrt5.of(a) + ALPHA * b


@dataclass(frozen=True)
class CirclePoint:
    """A point of T = R/Z with exact Q(sqrt5) coordinate in [0, 1)."""

    value: QSqrt5

    def __post_init__(self):
        object.__setattr__(self, "value", QSqrt5.of(self.value).mod1())

    def __add__(self, other):
        o = other.value if isinstance(other, CirclePoint) else QSqrt5.of(other)
        return CirclePoint(self.value + o)

    def __sub__(self, other):
        o = other.value if isinstance(other, CirclePoint) else QSqrt5.of(other)
        return CirclePoint(self.value - o)

    def __float__(self):
        return float(self.value)


def rotation_point(k: int) -> CirclePoint:
    """c_k = k * alpha mod 1, computed exactly (k*alpha = (-k + k sqrt5)/2)."""
    return CirclePoint(QSqrt5(Fraction(-k, 2), Fraction(k, 2)))


class CircleIntervalSet:
    """A finite union of half-open arcs (a, b] subseteq (0, 1] on the circle.

    Canonical form: pieces sorted, disjoint, non-adjacent, with endpoints
    0 <= a < b <= 1.  An arc wrapping through 0 is stored as two pieces
    (a, 1] and (0, b]; ``interval_count`` reports it as a single arc.
    """

    __slots__ = ("pieces", "_measure", "_farrays")

    def __init__(self, pieces: tuple[tuple[QSqrt5, QSqrt5], ...]):
        self.pieces = pieces
        self._measure = None
        self._farrays = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def empty(cls) -> "CircleIntervalSet":
        return cls(())

    @classmethod
    def full(cls) -> "CircleIntervalSet":
        return cls(((ZERO, ONE),))

    @classmethod
    def from_arcs(cls, arcs) -> "CircleIntervalSet":
        """Build from (start, end) pairs meaning the ccw arc (start, end].

        Endpoints are reduced mod 1; start == end is rejected (use full()).
        """
        raw = []
        for start, end in arcs:
            a = QSqrt5.of(start).mod1()
            b = QSqrt5.of(end).mod1()
            if b == a:
                raise ValidationError("zero-length or full arc; use full() explicitly")
            if b.sign() == 0:
                b = ONE
            if a < b:
                raw.append((a, b))
            else:  # wraps through 0
                raw.append((a, ONE))
                if b.sign() != 0:
                    raw.append((ZERO, b))
        return cls._normalize(raw)

    @classmethod
    def _normalize(cls, raw) -> "CircleIntervalSet":
        if not raw:
            return cls.empty()
        raw.sort(key=lambda ab: float(ab[0]))
        # approx sort is only a preorder; fix rare near-ties exactly
        for i in range(1, len(raw)):
            j = i
            while j > 0 and raw[j][0] < raw[j - 1][0]:
                raw[j], raw[j - 1] = raw[j - 1], raw[j]
                j -= 1
        merged = [raw[0]]
        for a, b in raw[1:]:
            la, lb = merged[-1]
            if a <= lb:  # overlap or adjacency: (x, y] u (y, z] = (x, z]
                if b > lb:
                    merged[-1] = (la, b)
            else:
                merged.append((a, b))
        return cls(tuple(merged))

    # -- basic queries ------------------------------------------------------

    def is_empty(self) -> bool:
        return not self.pieces

    def measure(self) -> QSqrt5:
        if self._measure is None:
            total = ZERO
            for a, b in self.pieces:
                total = total + (b - a)
            self._measure = total
        return self._measure

    def piece_count(self) -> int:
        return len(self.pieces)

    def interval_count(self) -> int:
        """Number of arcs on the circle (a wrap pair counts once)."""
        n = len(self.pieces)
        if n >= 2 and self.pieces[0][0].sign() == 0 and self.pieces[-1][1] == ONE:
            return n - 1
        return n

    def contains(self, x) -> bool:
        """Membership of a circle point, boundary-exact: x in (a, b]."""
        v = x.value if isinstance(x, CirclePoint) else QSqrt5.of(x).mod1()
        if v.sign() == 0:
            # 0 == 1 lies in a final piece (a, 1]
            return bool(self.pieces) and self.pieces[-1][1] == ONE
        lo, hi = 0, len(self.pieces) - 1
        while lo <= hi:
            mid = (lo + hi) // 2
            a, b = self.pieces[mid]
            if v <= a:
                hi = mid - 1
            elif v > b:
                lo = mid + 1
            else:
                return True
        return False

    def __eq__(self, other):
        return isinstance(other, CircleIntervalSet) and self.pieces == other.pieces

    def __hash__(self):
        return hash(self.pieces)

    # -- set algebra ---------------------------------------------------------

    def _combine(self, other: "CircleIntervalSet", keep) -> "CircleIntervalSet":
        events = []
        for a, b in self.pieces:
            events.append((a, 0, +1))
            events.append((b, 0, -1))
        for a, b in other.pieces:
            events.append((a, 1, +1))
            events.append((b, 1, -1))
        events.sort(key=lambda e: float(e[0]))
        for i in range(1, len(events)):
            j = i
            while j > 0 and events[j][0] < events[j - 1][0]:
                events[j], events[j - 1] = events[j - 1], events[j]
                j -= 1
        out = []
        counts = [0, 0]
        idx = 0
        n = len(events)
        while idx < n:
            pos = events[idx][0]
            while idx < n and not (events[idx][0] > pos):
                counts[events[idx][1]] += events[idx][2]
                idx += 1
            nxt = events[idx][0] if idx < n else None
            if nxt is not None and keep(counts[0] > 0, counts[1] > 0):
                out.append((pos, nxt))
        return CircleIntervalSet._normalize(out)

    def union(self, other):
        return self._combine(other, lambda a, b: a or b)

    def intersection(self, other):
        return self._combine(other, lambda a, b: a and b)

    def difference(self, other):
        return self._combine(other, lambda a, b: a and not b)

    def symmetric_difference(self, other):
        return self._combine(other, lambda a, b: a != b)

    def complement(self):
        return CircleIntervalSet.full().difference(self)

    def translate(self, h) -> "CircleIntervalSet":
        """Rotate the whole set by h (mod 1)."""
        hv = h.value if isinstance(h, CirclePoint) else QSqrt5.of(h)
        if not self.pieces:
            return self
        raw = []
        for a, b in self.pieces:
            na = (a + hv).mod1()
            nb_len = b - a
            nb = na + nb_len
            if nb > ONE:
                raw.append((na, ONE))
                raw.append((ZERO, nb - 1))
            else:
                raw.append((na, nb))
        return CircleIntervalSet._normalize(raw)

    def __str__(self):
        inner = ", ".join(f"({float(a):.6f},{float(b):.6f}]" for a, b in self.pieces)
        return f"CircleIntervalSet[{inner}]"


def window_shift_distance(w: CircleIntervalSet, h) -> QSqrt5:
    """d_W(h) = measure of the symmetric difference of W and W + h, exact."""
    return w.symmetric_difference(w.translate(h)).measure()
