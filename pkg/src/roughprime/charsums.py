"""Interval and prime character sums, plus empirical bound profiles.

Sums are accumulated as integer multiplicity counts per root of unity and
converted to a complex number once at the end.  Bound profiles compare a
measured extremal value with a classical explicit bound shape; where the
underlying estimate hides an implicit constant the profile reports the
ratio rather than asserting a verdict.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .arith import FactorSieve, _standalone_prime_pi, int_floor
from .dirichlet import CharacterGroup, DirichletCharacter
from .errors import DomainError

LABELS = (
    "polya_vinogradov",
    "prime_sum_unconditional",
    "prime_sum_grh",
    "mean_value",
)


@dataclass
class BoundProfile:
    """Measured extremal value against a reference bound."""

    label: str
    params: dict = field(default_factory=dict)
    measured: float = 0.0
    bound: float = 0.0

    @property
    def ratio(self) -> float:
        if self.bound == 0:
            return math.inf if self.measured else 0.0
        return self.measured / self.bound

    @property
    def within_bound(self) -> bool:
        return self.ratio <= 1.0

    def as_record(self) -> dict:
        rec = {"label": self.label}
        rec.update(self.params)
        rec.update(
            measured=self.measured,
            bound=self.bound,
            ratio=self.ratio,
            within_bound=self.within_bound,
        )
        return rec


def _angles_to_complex(counter: dict[int, object], den: int) -> complex:
    return sum(
        (complex(w) * cmath.exp(2j * cmath.pi * a / den) for a, w in counter.items()),
        0j,
    )


def interval_sum(chi: DirichletCharacter, M: int, N: int) -> complex:
    """Sum of chi(n) over the window M < n <= M + N.

    Each residue class contributes its window count times one root of
    unity, so the accumulation is exact until the final rendering.
    """
    k = chi.group.modulus
    D = chi.group.exponent
    angles = chi.angles_row()
    counter: dict[int, int] = {}
    for u in range(k):
        a = int(angles[u])
        if a < 0:
            continue
        cnt = (M + N - u) // k - (M - u) // k
        if cnt:
            counter[a] = counter.get(a, 0) + cnt
    return _angles_to_complex(counter, D)


def _prefix_row(values: np.ndarray) -> np.ndarray:
    return np.concatenate([[0.0 + 0j], np.cumsum(values)])


def _diameter(points: np.ndarray) -> float:
    # max |P_i - P_j|; row-chunked to bound the temporary at ~16 MB
    best = 0.0
    step = max(1, (1 << 20) // max(points.size, 1))
    for lo in range(0, points.size, step):
        block = points[lo : lo + step, None] - points[None, :]
        best = max(best, float(np.abs(block).max()))
    return best


def pv_extremal(chi: DirichletCharacter) -> float:
    """max over M, N of |sum of chi over (M, M+N]|.

    The full-period sum of a non-principal character vanishes, so every
    window sum is a difference of two prefix sums over one period and the
    maximum is the diameter of the prefix-sum point set.
    """
    if chi.is_principal:
        raise DomainError("the window bound applies to non-principal characters")
    return _diameter(_prefix_row(chi.values_row()))


def pv_extremal_all(group: CharacterGroup) -> np.ndarray:
    """pv_extremal for every non-principal character, in characters() order."""
    vals = group.value_matrix()[1:]
    prefixes = np.concatenate(
        [np.zeros((vals.shape[0], 1), complex), np.cumsum(vals, axis=1)], axis=1
    )
    return np.array([_diameter(row) for row in prefixes])


def _primes_upto(y: float, sieve: FactorSieve | None) -> np.ndarray:
    if sieve is not None and int_floor(y) <= sieve.limit:
        return sieve.primes(y)
    limit = int_floor(y)
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    composite = np.zeros(limit + 1, dtype=bool)
    for p in range(2, math.isqrt(limit) + 1):
        if not composite[p]:
            composite[p * p :: p] = True
    return np.flatnonzero(~composite[2:]) + 2


def prime_residue_histogram(
    y: float, k: int, sieve: FactorSieve | None = None
) -> np.ndarray:
    """Counts of primes p <= y per residue class mod k (p | k included)."""
    primes = _primes_upto(y, sieve)
    if primes.size == 0:
        return np.zeros(k, dtype=np.int64)
    return np.bincount(primes % k, minlength=k).astype(np.int64)


def prime_sum(
    chi: DirichletCharacter, y: float, sieve: FactorSieve | None = None
) -> complex:
    """Sum of chi(p) over primes p <= y (p dividing k contributes zero)."""
    if y < 2:
        return 0j
    k = chi.group.modulus
    hist = prime_residue_histogram(y, k, sieve)
    angles = chi.angles_row()
    counter: dict[int, int] = {}
    for u in range(k):
        a = int(angles[u])
        if a >= 0 and hist[u]:
            counter[a] = counter.get(a, 0) + int(hist[u])
    return _angles_to_complex(counter, chi.group.exponent)


def prime_sums_all(
    group: CharacterGroup, y: float, sieve: FactorSieve | None = None
) -> np.ndarray:
    """Vector of prime character sums for every character at once."""
    hist = prime_residue_histogram(y, group.modulus, sieve)
    return group.value_matrix() @ hist.astype(complex)


def mean_value_sides(group: CharacterGroup, weights) -> tuple[float, float]:
    """Both sides of the quadratic mean-value inequality for the weights.

    Left: sum over all chi of |sum_{n<=N} a_n chi(n)|**2.
    Right: phi(k) * (N/k + 1) * sum |a_n|**2, with N = len(weights).
    """
    a = np.asarray(weights, dtype=complex)
    N = a.size
    k = group.modulus
    collapsed = np.zeros(k, dtype=complex)
    np.add.at(collapsed, (np.arange(1, N + 1)) % k, a)
    inner = group.value_matrix() @ collapsed
    lhs = float(np.sum(np.abs(inner) ** 2))
    rhs = group.phi * (N / k + 1.0) * float(np.sum(np.abs(a) ** 2))
    return lhs, rhs


def check_bound(
    label: str,
    group: CharacterGroup,
    *,
    y: float | None = None,
    exponent_a: float = 1.0,
    weights=None,
    sieve: FactorSieve | None = None,
) -> BoundProfile:
    """Measure the extremal quantity of one bound lemma and fill a profile.

    Implicit constants are taken as 1 with the classical explicit shapes
    (sqrt(k)*log k for the window bound, sqrt(y)*log(k*y) under GRH), so
    the honest reading of a profile is its ratio, not a hard verdict.
    """
    k = group.modulus
    if label == "polya_vinogradov":
        measured = float(pv_extremal_all(group).max())
        return BoundProfile(
            label, {"k": k}, measured, math.sqrt(k) * math.log(k)
        )
    if label in ("prime_sum_unconditional", "prime_sum_grh"):
        if y is None or y < 3:
            raise DomainError("prime-sum profiles need y >= 3")
        sums = prime_sums_all(group, y, sieve)
        measured = float(np.abs(sums[1:]).max())
        if label == "prime_sum_grh":
            bound = math.sqrt(y) * math.log(k * y)
            params = {"k": k, "y": y}
        else:
            bound = math.sqrt(k) * y / math.log(y) ** exponent_a
            params = {"k": k, "y": y, "A": exponent_a}
        return BoundProfile(label, params, measured, bound)
    if label == "mean_value":
        if weights is None:
            raise DomainError("mean_value profiles need a weight vector")
        lhs, rhs = mean_value_sides(group, weights)
        return BoundProfile(label, {"k": k, "N": len(weights)}, lhs, rhs)
    raise DomainError(f"unknown bound label {label!r}; expected one of {LABELS}")
