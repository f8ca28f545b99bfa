"""B-sets, their sets of multiples, and exact density arithmetic.

A B-set is a primitive set B of integers >= 2 (no element divides another).
Its set of multiples M_B = union of b*Z has an exact rational density for
finite B, computed by inclusion-exclusion over subsets, and a certified
rational enclosure for the built-in infinite families, obtained from a
finite truncation plus an analytic tail bound.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import CertificationError, ResourceCapError, ValidationError
from .families import (
    C_RULE_EXPLICIT,
    C_RULE_ODD_PRIMES,
    R_RULE_INDEX,
    R_RULE_KAPPA,
    ToeplitzFamily,
    make_toeplitz,
    squarefree_elements,
)
from .intervals import RationalInterval
from .primes import first_primes

#: inclusion-exclusion enumerates 2^|B| subsets; refuse beyond this size
SUBSET_CAP = 20
#: eta words are materialized bit arrays; refuse beyond this many bits
PERIOD_BIT_CAP = 10**8
#: how many extra family elements are summed explicitly before the
#: analytic tail bound takes over in density enclosures
TAIL_EXTEND = 64

KIND_EXPLICIT = "explicit"
KIND_SQUAREFREE = "squarefree"
KIND_TOEPLITZ = "toeplitz"
KIND_ERDOS = "erdos-custom"

_FINITE_KINDS = (KIND_EXPLICIT,)
_FAMILY_KINDS = (KIND_SQUAREFREE, KIND_TOEPLITZ, KIND_ERDOS)


def lcm_of(values) -> int:
    """lcm of a list of integers; lcm of the empty list is 1."""
    return math.lcm(*values) if values else 1


def normalize_primitive(elements) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Reduce to the minimal elements under divisibility.

    Returns (kept, removed).  Removing a multiple of another element leaves
    the set of multiples M_B unchanged, so this is a pure normalization.
    """
    uniq = sorted(set(int(e) for e in elements))
    for e in uniq:
        if e < 2:
            raise ValidationError(f"B-set element {e} is < 2")
    kept, removed = [], []
    for e in uniq:
        if any(d != e and e % d == 0 for d in uniq):
            removed.append(e)
        else:
            kept.append(e)
    return tuple(kept), tuple(removed)


@dataclass(frozen=True)
class BSet:
    """A primitive B-set, either explicit or a materialized family prefix."""

    kind: str
    elements: tuple[int, ...]
    count: int | None = None
    kappa: Fraction | None = None
    c_rule: str = C_RULE_ODD_PRIMES
    r_rule: str = R_RULE_INDEX
    family: ToeplitzFamily | None = field(default=None, compare=False)
    notices: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.kind not in _FINITE_KINDS + _FAMILY_KINDS:
            raise ValidationError(f"unknown B-set kind {self.kind!r}")
        if not self.elements:
            raise ValidationError("B-set has no elements")
        kept, removed = normalize_primitive(self.elements)
        if removed:
            raise ValidationError(
                f"B-set elements are not primitive (remove {list(removed)}); "
                "construct via make_bset/parse_bset_spec to normalize"
            )
        object.__setattr__(self, "elements", kept)

    @property
    def is_finite(self) -> bool:
        """True when the elements *are* the whole B-set, not a truncation."""
        return self.kind == KIND_EXPLICIT

    @property
    def truncation_index(self) -> int:
        return len(self.elements)

    def period(self) -> int:
        return lcm_of(self.elements)

    def pairwise_coprime(self) -> bool:
        es = self.elements
        return all(
            math.gcd(es[i], es[j]) == 1
            for i in range(len(es))
            for j in range(i + 1, len(es))
        )

    def __str__(self) -> str:
        inner = ", ".join(str(e) for e in self.elements)
        return f"BSet[{self.kind}]{{{inner}}}"


def make_bset(kind: str, **kw) -> BSet:
    """Build a normalized BSet; the factory behind parse_bset_spec."""
    if kind == KIND_EXPLICIT or kind == KIND_ERDOS:
        elements = kw.get("elements")
        if not elements:
            raise ValidationError(f"{kind} B-set needs a non-empty element list")
        kept, removed = normalize_primitive(elements)
        notices = ()
        if removed:
            notices = (
                f"removed non-minimal elements {list(removed)} (divisible by kept ones)",
            )
        if kind == KIND_ERDOS:
            b = BSet(kind=kind, elements=kept, notices=notices)
            if not b.pairwise_coprime():
                raise ValidationError("erdos-custom elements must be pairwise coprime")
            return b
        return BSet(kind=kind, elements=kept, notices=notices)

    if kind == KIND_SQUAREFREE:
        count = kw.get("count")
        if not count or count < 1:
            raise ValidationError("squarefree B-set needs count >= 1")
        return BSet(kind=kind, elements=squarefree_elements(count), count=count)

    if kind == KIND_TOEPLITZ:
        count = kw.get("count")
        if not count or count < 1:
            raise ValidationError("toeplitz B-set needs count >= 1")
        kappa = kw.get("kappa")
        r_rule = kw.get("r_rule", R_RULE_INDEX)
        c_rule = kw.get("c_rule", C_RULE_ODD_PRIMES)
        fam = make_toeplitz(
            count,
            kappa=kappa,
            c_rule=c_rule,
            r_rule=r_rule,
            c_list=kw.get("c_list"),
        )
        return BSet(
            kind=kind,
            elements=fam.elements(),
            count=count,
            kappa=kappa,
            c_rule=c_rule,
            r_rule=r_rule,
            family=fam,
        )

    raise ValidationError(f"unknown B-set kind {kind!r}")


def parse_bset_spec(text: str) -> BSet:
    """Parse a B-set spec document (JSON object, UTF-8).

    Fields: ``kind`` always; ``elements`` for explicit/erdos-custom;
    ``count`` for families; ``kappa`` (rational string), ``c_rule``,
    ``r_rule`` and optional ``c`` list for the Toeplitz family.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"malformed B-set spec document: {e}") from e
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValidationError("B-set spec document must be an object with a 'kind' field")
    kind = doc["kind"]
    kw = {}
    if "elements" in doc:
        kw["elements"] = doc["elements"]
    if "count" in doc:
        kw["count"] = int(doc["count"])
    if "kappa" in doc and doc["kappa"] is not None:
        kw["kappa"] = Fraction(str(doc["kappa"]))
    if "r_rule" in doc:
        kw["r_rule"] = doc["r_rule"]
    if "c_rule" in doc:
        kw["c_rule"] = doc["c_rule"]
    if "c" in doc:
        kw["c_list"] = tuple(int(c) for c in doc["c"])
    return make_bset(kind, **kw)


def serialize_bset_spec(b: BSet) -> str:
    """Canonical spec document for ``b``; parse(serialize(b)) == b."""
    doc: dict = {"kind": b.kind}
    if b.kind in (KIND_EXPLICIT, KIND_ERDOS):
        doc["elements"] = list(b.elements)
    else:
        doc["count"] = b.count
    if b.kind == KIND_TOEPLITZ:
        doc["r_rule"] = b.r_rule
        doc["c_rule"] = b.c_rule
        if b.kappa is not None:
            doc["kappa"] = str(b.kappa)
        if b.c_rule == C_RULE_EXPLICIT:
            doc["c"] = list(b.family.cs)
    return json.dumps(doc, sort_keys=True) + "\n"


def divisors_in(b: BSet, r: int) -> tuple[int, ...]:
    """The sub-B-set of elements dividing r; every element divides 0."""
    if r == 0:
        return b.elements
    return tuple(e for e in b.elements if r % e == 0)


@dataclass(frozen=True, eq=False)
class PeriodicWord:
    """A 0/1 word of exact period ``period``, extended periodically to Z.

    bit i is 1 iff i is B-free for the finite B-set that built the word.
    """

    period: int
    bits: np.ndarray
    source: BSet | None = None

    def __post_init__(self):
        if self.period != len(self.bits):
            raise ValidationError("period does not match bit count")
        self.bits.setflags(write=False)

    def bit(self, i: int) -> int:
        return int(self.bits[i % self.period])

    def ones(self) -> int:
        return int(np.count_nonzero(self.bits))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PeriodicWord)
            and self.period == other.period
            and np.array_equal(self.bits, other.bits)
        )

    def segment(self, start: int, stop: int) -> np.ndarray:
        """Bits for indices start..stop-1 (any integers, period-extended)."""
        idx = np.arange(start, stop) % self.period
        return self.bits[idx]


def eta_word(b: BSet, period_cap: int = PERIOD_BIT_CAP) -> PeriodicWord:
    """The characteristic word of the B-free integers, one full period.

    bit i = 1 iff no element of B divides i; the word is lcm(B)-periodic.
    """
    period = b.period()
    if period > period_cap:
        raise ResourceCapError(
            f"eta word needs {period} bits, above the cap of {period_cap}"
        )
    bits = np.ones(period, dtype=np.uint8)
    for e in b.elements:
        bits[::e] = 0
    return PeriodicWord(period=period, bits=bits, source=b)


def _subset_density_numerator(elements: tuple[int, ...], big_l: int) -> int:
    """sum over nonempty S of (-1)^{|S|+1} * big_l/lcm(S), by DFS."""
    n = len(elements)
    total = 0

    def rec(start: int, lcm_so_far: int, sign: int):
        nonlocal total
        for j in range(start, n):
            l2 = math.lcm(lcm_so_far, elements[j])
            total += sign * (big_l // l2)
            rec(j + 1, l2, -sign)

    rec(0, 1, +1)
    return total


def density_mb(b: BSet, subset_cap: int = SUBSET_CAP) -> Fraction:
    """Exact density of M_B for the materialized (finite) element list."""
    return density_mb_of(b.elements, subset_cap=subset_cap)


def density_mb_of(elements, subset_cap: int = SUBSET_CAP) -> Fraction:
    elements = tuple(elements)
    if len(elements) > subset_cap:
        raise ResourceCapError(
            f"inclusion-exclusion over {len(elements)} elements exceeds cap {subset_cap}"
        )
    if not elements:
        return Fraction(0)
    big_l = lcm_of(elements)
    return Fraction(_subset_density_numerator(elements, big_l), big_l)


def _squarefree_tail_hi(n: int, extend: int) -> Fraction:
    """Certified upper bound for sum_{i>n} 1/p_i^2."""
    ps = first_primes(n + extend + 1)
    explicit = sum((Fraction(1, p * p) for p in ps[n : n + extend]), Fraction(0))
    # primes beyond p_{n+extend} are odd and >= p_{n+extend+1}; for odd k,
    # sum_{odd k >= m} 1/(k^2-1) telescopes to 1/(2(m-1)), and 1/k^2 < 1/(k^2-1)
    m = ps[n + extend]
    return explicit + Fraction(1, 2 * (m - 1))


def _toeplitz_tail_hi(fam: ToeplitzFamily, n: int, extend: int) -> Fraction:
    """Certified upper bound for sum_{i>n} 1/b_i via the geometric rule."""
    fam = fam.extend(n + extend)
    explicit = sum(
        (Fraction(1, fam.b(i)) for i in range(n + 1, n + extend + 1)), Fraction(0)
    )
    # r_i increases by >= 1 per step, so sum_{i>T} 2^{-r_i}/c_i <= 2^{-r_T}/c_{T+1}
    t = n + extend
    return explicit + Fraction(1, (1 << fam.r(t)) * fam.c(t + 1))


def density_mb_bounds(
    b: BSet,
    extend: int = TAIL_EXTEND,
    accept_truncation: bool = False,
    subset_cap: int = SUBSET_CAP,
) -> RationalInterval:
    """Certified enclosure of d(M_B) for family kinds; degenerate if finite.

    The lower bound is the exact density of the materialized truncation;
    the upper bound adds ``extend`` explicit extra terms of sum 1/b_i plus
    the family's closed-form tail bound.
    """
    n = b.truncation_index
    if b.kind == KIND_EXPLICIT:
        d = density_mb(b, subset_cap=subset_cap)
        return RationalInterval.exact(d)
    if b.kind == KIND_SQUAREFREE:
        lo = Fraction(1) - math.prod(
            (Fraction(e - 1, e) for e in b.elements), start=Fraction(1)
        )
        return RationalInterval(lo, lo + _squarefree_tail_hi(n, extend))
    if b.kind == KIND_TOEPLITZ:
        lo = density_mb(b, subset_cap=subset_cap)
        return RationalInterval(lo, lo + _toeplitz_tail_hi(b.family, n, extend))
    # erdos-custom: no certified closed-form tail is known for user families
    if not accept_truncation:
        raise CertificationError(
            "erdos-custom families carry no certified tail bound; pass "
            "accept_truncation=True to treat the materialized list as exact"
        )
    d = density_mb(b, subset_cap=subset_cap)
    return RationalInterval.exact(d)


def is_taut(b: BSet, subset_cap: int = SUBSET_CAP) -> bool:
    """True iff dropping any single element strictly lowers d(M_B)."""
    full = density_mb(b, subset_cap=subset_cap)
    for e in b.elements:
        rest = tuple(x for x in b.elements if x != e)
        if density_mb_of(rest, subset_cap=subset_cap) >= full:
            return False
    return True
