"""Prime generation helpers backed by a numpy sieve.

The square-free machinery needs primes up to ~2e7 to certify tight tail
bounds, so the sieve is vectorized and cached per upper limit.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=8)
def primes_upto(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (Eratosthenes)."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def first_primes(n: int) -> list[int]:
    """The first n primes."""
    if n <= 0:
        return []
    # p_n < n (ln n + ln ln n) for n >= 6; pad below that
    if n < 6:
        limit = 15
    else:
        limit = int(n * (math.log(n) + math.log(math.log(n)))) + 10
    ps = primes_upto(limit)
    while len(ps) < n:
        limit *= 2
        ps = primes_upto(limit)
    return [int(p) for p in ps[:n]]


def nth_prime(n: int) -> int:
    """The n-th prime, 1-indexed (nth_prime(1) == 2)."""
    if n < 1:
        raise ValueError("prime index must be >= 1")
    return first_primes(n)[-1]


def odd_primes(n: int) -> list[int]:
    """The first n odd primes: 3, 5, 7, ..."""
    return first_primes(n + 1)[1:]
