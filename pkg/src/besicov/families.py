"""Generators for the built-in B-set families.

Two families are built in:

* square-free: b_i = p_i^2 over the primes 2, 3, 5, ...
* Toeplitz: b_i = 2^{r_i} c_i with odd, pairwise coprime c_1 < c_2 < ...
  and strictly increasing exponents r_i, either r_i = i or
  r_i = floor(kappa * log2(c_1 ... c_i)) for a rational kappa > 0.

The floor of kappa*log2(X) is computed purely with integer arithmetic so
that family membership never depends on floating-point rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ValidationError
from .primes import first_primes, odd_primes

R_RULE_INDEX = "index"
R_RULE_KAPPA = "kappa-log2"
C_RULE_ODD_PRIMES = "odd-primes"
C_RULE_EXPLICIT = "explicit"


def floor_kappa_log2(kappa: Fraction, x: int) -> int:
    """floor(kappa * log2(x)) for an integer x >= 1, computed exactly.

    With kappa = u/v the answer is the largest m with 2**(m*v) <= x**u,
    which equals (x**u).bit_length() - 1, floor-divided by v: no integer
    multiple of v can fall strictly between floor(log2(x**u)) and
    log2(x**u) itself.
    """
    if x < 1:
        raise ValidationError("floor_kappa_log2 needs x >= 1")
    u, v = kappa.numerator, kappa.denominator
    if u <= 0:
        raise ValidationError("kappa must be positive")
    t = x**u
    return (t.bit_length() - 1) // v


def squarefree_elements(count: int) -> tuple[int, ...]:
    """Squares of the first ``count`` primes: 4, 9, 25, ..."""
    if count < 1:
        raise ValidationError("squarefree family needs count >= 1")
    return tuple(p * p for p in first_primes(count))


@dataclass(frozen=True)
class ToeplitzFamily:
    """A materialized prefix of the Toeplitz family b_i = 2^{r_i} c_i.

    ``cs`` and ``rs`` are 1-indexed conceptually; ``cs[0]`` is c_1.  One
    extra c beyond the requested truncation is always materialized because
    the gap bound at level n looks ahead to c_{n+1}.
    """

    cs: tuple[int, ...]
    rs: tuple[int, ...]
    kappa: Fraction | None = None
    c_rule: str = C_RULE_ODD_PRIMES
    r_rule: str = R_RULE_INDEX

    def __post_init__(self):
        if len(self.rs) > len(self.cs):
            raise ValidationError("more exponents than odd parts")
        prev = 2
        for c in self.cs:
            if c < 3 or c % 2 == 0:
                raise ValidationError(f"odd part {c} must be an odd integer >= 3")
            if c <= prev:
                raise ValidationError("odd parts must be strictly increasing")
            prev = c
        for i, c in enumerate(self.cs):
            for d in self.cs[i + 1 :]:
                if math.gcd(c, d) != 1:
                    raise ValidationError(f"odd parts {c}, {d} are not coprime")
        prev_r = -1
        for r in self.rs:
            if r < 0:
                raise ValidationError("exponents must be nonnegative")
            if r <= prev_r:
                raise ValidationError("exponents must be strictly increasing")
            prev_r = r

    @property
    def count(self) -> int:
        return len(self.rs)

    def c(self, i: int) -> int:
        return self.cs[i - 1]

    def r(self, i: int) -> int:
        return self.rs[i - 1]

    def b(self, i: int) -> int:
        return (1 << self.rs[i - 1]) * self.cs[i - 1]

    def elements(self, n: int | None = None) -> tuple[int, ...]:
        n = self.count if n is None else n
        return tuple(self.b(i) for i in range(1, n + 1))

    def prod_c(self, n: int) -> int:
        out = 1
        for c in self.cs[:n]:
            out *= c
        return out

    def ell(self, n: int) -> int:
        """lcm of the first n elements: 2^{r_n} * c_1 ... c_n."""
        if not 1 <= n <= self.count:
            raise ValidationError(f"level {n} outside materialized range")
        return (1 << self.rs[n - 1]) * self.prod_c(n)

    def gap_bound(self, n: int) -> Fraction:
        """max over 1 <= m <= n of (c_{m+1}/c_m - 1)^{-1}; needs c_{n+1}."""
        if n + 1 > len(self.cs):
            raise ValidationError(f"gap bound at level {n} needs c_{n+1} materialized")
        return max(
            Fraction(self.cs[m - 1], self.cs[m] - self.cs[m - 1]) for m in range(1, n + 1)
        )

    def extend(self, count: int) -> "ToeplitzFamily":
        """Same family materialized to at least ``count`` levels."""
        if count <= self.count:
            return self
        return make_toeplitz(
            count,
            kappa=self.kappa,
            c_rule=self.c_rule,
            r_rule=self.r_rule,
            c_list=self.cs if self.c_rule == C_RULE_EXPLICIT else None,
        )


def make_toeplitz(
    count: int,
    kappa: Fraction | None = None,
    c_rule: str = C_RULE_ODD_PRIMES,
    r_rule: str = R_RULE_INDEX,
    c_list: tuple[int, ...] | None = None,
) -> ToeplitzFamily:
    """Materialize ``count`` levels of a Toeplitz family (plus one lookahead c)."""
    if count < 1:
        raise ValidationError("toeplitz family needs count >= 1")
    if c_rule == C_RULE_ODD_PRIMES:
        cs = tuple(odd_primes(count + 1))
    elif c_rule == C_RULE_EXPLICIT:
        if not c_list:
            raise ValidationError("explicit c rule needs the odd parts")
        if len(c_list) < count + 1:
            raise ValidationError(
                f"explicit c rule needs {count + 1} odd parts for {count} levels"
            )
        cs = tuple(int(c) for c in c_list)
    else:
        raise ValidationError(f"unknown c rule {c_rule!r}")

    if r_rule == R_RULE_INDEX:
        rs = tuple(range(1, count + 1))
    elif r_rule == R_RULE_KAPPA:
        if kappa is None or kappa <= 0:
            raise ValidationError("kappa-log2 rule needs a positive rational kappa")
        prod = 1
        rs_list = []
        for c in cs[:count]:
            prod *= c
            rs_list.append(floor_kappa_log2(kappa, prod))
        rs = tuple(rs_list)
        for a, b in zip(rs, rs[1:]):
            if b <= a:
                raise ValidationError(
                    "kappa-log2 exponents are not strictly increasing; "
                    "the odd parts grow too slowly for this kappa"
                )
    else:
        raise ValidationError(f"unknown r rule {r_rule!r}")

    return ToeplitzFamily(cs=cs, rs=rs, kappa=kappa, c_rule=c_rule, r_rule=r_rule)
