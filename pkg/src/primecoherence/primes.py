"""Ordered prime substrate."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument


@dataclass(frozen=True)
class PrimeSet:
    """The first ``n`` primes in ascending order."""

    values: np.ndarray

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    def __len__(self) -> int:
        return self.n

    def logs(self) -> np.ndarray:
        return np.log(self.values.astype(float))


def _sieve(limit: int) -> np.ndarray:
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if is_prime[i]:
            is_prime[i * i :: i] = False
    return np.flatnonzero(is_prime)


def _upper_bound(n: int) -> int:
    # p_n <= n (log n + log log n) holds for n >= 6
    if n < 6:
        return 13
    return int(n * (math.log(n) + math.log(math.log(n)))) + 1


def first_n_primes(n: int) -> PrimeSet:
    """Return the first ``n`` primes.

    Uses a sieve of Eratosthenes sized by the Rosser bound; the limit is
    doubled and the sieve rerun if it ever comes up short.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidArgument(f"n must be a positive integer, got {n!r}")
    n = int(n)
    limit = _upper_bound(n)
    found = _sieve(limit)
    while found.size < n:
        limit *= 2
        found = _sieve(limit)
    values = found[:n].astype(np.int64)
    values.setflags(write=False)
    return PrimeSet(values)
