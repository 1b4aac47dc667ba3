"""Prime sieving, factorisation primitives, modular arithmetic, and exact
counting of integers free of small prime factors ("rough" numbers).

All counts here are exact integer counts.  Real-valued cutoffs are mapped
to integer bounds once, through the snap-aware helpers below, so that a
cutoff computed as ``x ** beta`` cannot drift across an integer boundary
by a few ulps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DomainError, NotInvertibleError

#: Conventional smallest prime factor of 1; compares above every finite z.
INFINITY = math.inf

_SNAP = 1e-9


def int_floor(x: float) -> int:
    """Largest integer <= x, snapping near-integer x to the integer."""
    nearest = round(x)
    if abs(x - nearest) <= _SNAP * max(1.0, abs(x)):
        return int(nearest)
    return math.floor(x)


def int_lower(z: float) -> int:
    """Smallest integer t with t >= z (so integer p >= z iff p >= t)."""
    nearest = round(z)
    if abs(z - nearest) <= _SNAP * max(1.0, abs(z)):
        return int(nearest)
    return math.ceil(z)


def int_upper_strict(z: float) -> int:
    """Largest integer strictly below z (so integer p < z iff p <= it)."""
    nearest = round(z)
    if abs(z - nearest) <= _SNAP * max(1.0, abs(z)):
        return int(nearest) - 1
    return math.floor(z)


class FactorSieve:
    """Smallest-prime-factor table over [2, limit].

    ``spf[n]`` is the least prime dividing n, so ``spf[p] == p`` exactly
    for primes and ``spf[n] <= sqrt(n)`` for composite n.  The table is
    read-only after construction and safe to share between threads.

    Memory is 4 bytes per integer plus transient masks during the build,
    so a 10**8 table needs roughly 400 MB; the build walks base primes in
    ascending order, which keeps the first (smallest) writer per slot.
    """

    __slots__ = ("limit", "spf", "_primes")

    def __init__(self, limit: int) -> None:
        if limit < 2:
            raise DomainError(f"sieve limit must be >= 2, got {limit}")
        limit = int(limit)
        if limit >= 2**32:
            raise CapacityError("spf entries are stored as 32-bit values")
        spf = np.zeros(limit + 1, dtype=np.uint32)
        for p in range(2, math.isqrt(limit) + 1):
            if spf[p] == 0:
                window = spf[p * p :: p]
                window[window == 0] = p
        # untouched slots are 0, 1 and the primes; they are their own value
        rest = np.flatnonzero(spf == 0)
        spf[rest] = rest.astype(np.uint32)
        spf[1] = 1
        spf.setflags(write=False)
        self.limit = limit
        self.spf = spf
        self._primes: np.ndarray | None = None

    def primes(self, upto: float | None = None) -> np.ndarray:
        """Sorted array of the primes <= upto (default: the full limit)."""
        if self._primes is None:
            chunks = []
            step = 1 << 22
            for lo in range(2, self.spf.size, step):
                hi = min(lo + step, self.spf.size)
                seg = self.spf[lo:hi]
                local = np.flatnonzero(seg == np.arange(lo, hi, dtype=np.uint32))
                chunks.append((local + lo).astype(np.int64))
            self._primes = np.concatenate(chunks) if chunks else np.empty(0, np.int64)
        if upto is None:
            return self._primes
        bound = int_floor(upto)
        if bound >= self.limit:
            if bound > self.limit:
                raise CapacityError(
                    f"prime range {bound} exceeds sieve limit {self.limit}"
                )
            return self._primes
        cut = int(np.searchsorted(self._primes, bound, side="right"))
        return self._primes[:cut]

    def prime_pi(self, y: float) -> int:
        """Number of primes <= y."""
        if y < 2:
            return 0
        return int(self.primes(y).size)

    def is_prime(self, n: int) -> bool:
        if n < 2 or n > self.limit:
            return False
        return int(self.spf[n]) == n

    def smallest_prime_factor(self, n: int):
        """P(n): least prime factor of n >= 2; infinity for n = 1."""
        if n < 1 or n > self.limit:
            raise DomainError(f"n={n} outside sieve range [1, {self.limit}]")
        if n == 1:
            return INFINITY
        return int(self.spf[n])


def build_factor_sieve(limit: int) -> FactorSieve:
    """Construct the smallest-prime-factor table for [2, limit]."""
    return FactorSieve(limit)


def smallest_prime_factor(n: int, sieve: FactorSieve):
    return sieve.smallest_prime_factor(n)


def mod_inverse(n: int, m: int) -> int:
    """The unique u in [0, m) with u*n = 1 (mod m)."""
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    try:
        return pow(n, -1, m)
    except ValueError as exc:
        raise NotInvertibleError(f"{n} is not invertible modulo {m}") from exc


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation of n >= 1 by trial division."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        for q in (d, d + 2):
            while n % q == 0:
                out[q] = out.get(q, 0) + 1
                n //= q
        d += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(k: int) -> int:
    """Euler totient, computed from the factorisation of k."""
    if k < 1:
        raise DomainError(f"totient undefined for {k}")
    result = k
    for p in factorize(k):
        result = result // p * (p - 1)
    return result


def divisor_count(n: int) -> int:
    """tau(n): number of positive divisors."""
    out = 1
    for e in factorize(n).values():
        out *= e + 1
    return out


@dataclass(frozen=True)
class RoughCountQuery:
    """A rough-count request: integers n <= x with no prime factor below z.

    When the threshold is driven by an exponent, ``beta`` records it and
    z must equal x**beta up to 1e-12 relative tolerance.
    """

    x: float
    z: float
    beta: float | None = None

    def __post_init__(self) -> None:
        if self.x < 1:
            raise DomainError(f"x must be >= 1, got {self.x}")
        if self.z < 0:
            raise DomainError(f"z must be >= 0, got {self.z}")
        if self.beta is not None:
            expected = self.x**self.beta
            if abs(self.z - expected) > 1e-12 * max(1.0, abs(expected)):
                raise DomainError("z is inconsistent with x**beta")

    @classmethod
    def from_beta(cls, x: float, beta: float) -> "RoughCountQuery":
        return cls(x=x, z=x**beta, beta=beta)


def rough_count(query: RoughCountQuery, sieve: FactorSieve) -> int:
    """Exact number of z-rough integers in [1, x]; n = 1 always counts.

    n = 1 qualifies for every z because its smallest prime factor is
    infinite by convention; callers wanting the range [2, x] subtract the
    n = 1 contribution themselves.
    """
    limit = int_floor(query.x)
    if limit > sieve.limit:
        raise CapacityError(f"x={query.x} exceeds sieve limit {sieve.limit}")
    threshold = int_lower(query.z)
    if threshold <= 2:
        return limit
    return 1 + int(np.count_nonzero(sieve.spf[2 : limit + 1] >= threshold))


def _standalone_prime_pi(y: float) -> int:
    limit = int_floor(y)
    if limit < 2:
        return 0
    composite = np.zeros(limit + 1, dtype=bool)
    for p in range(2, math.isqrt(limit) + 1):
        if not composite[p]:
            composite[p * p :: p] = True
    return int(limit - 1 - np.count_nonzero(composite[2:]))


def primes_coprime_count(y: float, k: int, sieve: FactorSieve | None = None) -> int:
    """Number of primes p <= y with gcd(p, k) = 1."""
    if k < 1:
        raise DomainError(f"modulus must be >= 1, got {k}")
    if y < 2:
        return 0
    if sieve is not None and int_floor(y) <= sieve.limit:
        total = sieve.prime_pi(y)
    else:
        total = _standalone_prime_pi(y)
    dividing = sum(1 for p in factorize(k) if p <= int_floor(y))
    return total - dividing
