"""Sifted sequences on [1, x]: congruence-solution counts, bilinear
decompositions against the constant benchmark sequence, nested Buchstab
splits with their exact identities, regime validation, and the two-prime
coverage scan.

Throughout, the weighted sequence of interest attaches to each integer r
the number of primes p <= y, coprime to k, with r*p = a (mod k); the
benchmark is the constant sequence 1.  Counts and weighted sums over these
sequences are exact integers, densities are exact rationals, and only
predictor quantities are floating point.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

from .arith import (
    FactorSieve,
    RoughCountQuery,
    divisor_count,
    euler_phi,
    int_floor,
    int_lower,
    int_upper_strict,
    mod_inverse,
    primes_coprime_count,
    rough_count,
)
from .dirichlet import CharacterGroup, CyclotomicSum
from .errors import CapacityError, DomainError, ValidationError

LOG_REGIME = "log-modulus"
GRH_RANGE = "grh-range"
GRH_LOWER = "grh-lower"
REGIMES = (LOG_REGIME, GRH_RANGE, GRH_LOWER)


# --------------------------------------------------------------------------
# Parameters and sequences


@dataclass(frozen=True)
class QueryParams:
    """Inputs of a solution count: pairs (u, v) with min_u <= u <= x free of
    prime factors below z, v <= y prime, and u*v = a (mod k).

    Either z or beta must be given; with beta, z resolves to x**beta.
    min_u = 1 matches sequence support [1, x]; min_u = 2 drops the u = 1
    pairs.
    """

    k: int
    a: int
    x: float
    y: float
    z: float | None = None
    beta: float | None = None
    min_u: int = 1

    def __post_init__(self) -> None:
        if self.k <= 2:
            raise DomainError(f"modulus must be at least 3, got {self.k}")
        if math.gcd(self.a, self.k) != 1:
            raise DomainError(f"a={self.a} is not a unit modulo {self.k}")
        if self.x < 1:
            raise DomainError(f"x must be >= 1, got {self.x}")
        if self.y < 0:
            raise DomainError(f"y must be >= 0, got {self.y}")
        if self.min_u not in (1, 2):
            raise DomainError("min_u must be 1 or 2")
        if self.beta is not None:
            if not 0 < self.beta <= 0.5:
                raise DomainError("beta must lie in (0, 1/2]")
            resolved = self.x**self.beta
            if self.z is None:
                object.__setattr__(self, "z", resolved)
            elif abs(self.z - resolved) > 1e-12 * max(1.0, resolved):
                raise DomainError("z is inconsistent with x**beta")
        if self.z is None:
            raise DomainError("either z or beta is required")
        if self.z < 0:
            raise DomainError("z must be >= 0")

    @property
    def limit(self) -> int:
        return int_floor(self.x)

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "a": self.a,
            "x": self.x,
            "y": self.y,
            "z": self.z,
            "beta": self.beta,
            "min_u": self.min_u,
        }


class SiftingSequence:
    """Weights attached to the integers of [1, cutoff].

    ``weights[r]`` is the weight of r; index 0 is unused and forced to 0.
    The length of the weight array is authoritative for the support.
    """

    __slots__ = ("cutoff", "weights")

    def __init__(self, cutoff: float, weights: np.ndarray) -> None:
        w = np.array(weights)
        if w.ndim != 1 or w.size < 1:
            raise ValidationError("weights must be a nonempty 1-d array")
        w[0] = 0
        w.setflags(write=False)
        self.cutoff = float(cutoff)
        self.weights = w

    @classmethod
    def constant(cls, cutoff: float, value: int = 1) -> "SiftingSequence":
        limit = int_floor(cutoff)
        if limit < 1:
            raise DomainError("constant sequence needs cutoff >= 1")
        return cls(cutoff, np.full(limit + 1, value, dtype=np.int64))

    @property
    def limit(self) -> int:
        return self.weights.size - 1

    def total(self):
        return self.weights.sum().item()

    def subsequence(self, s: int) -> "SiftingSequence":
        """The sequence r -> weight(r * s), supported on [1, cutoff/s]."""
        if s < 1:
            raise DomainError("stride must be a positive integer")
        if s == 1:
            return self
        sub = self.weights[s::s]
        w = np.concatenate([self.weights[:1], sub])
        return SiftingSequence(self.cutoff / s, w)


def sifted_sum(seq: SiftingSequence, z: float, sieve: FactorSieve):
    """Sum of the weights over r in [1, cutoff] with no prime factor < z.

    r = 1 always participates (its smallest prime factor is infinite).
    """
    L = seq.limit
    if L < 1:
        return seq.weights.sum().item()
    if L > sieve.limit:
        raise CapacityError(f"sequence support {L} exceeds sieve {sieve.limit}")
    threshold = int_lower(z)
    if threshold <= 2:
        return seq.weights.sum().item()
    mask = sieve.spf[2 : L + 1] >= threshold
    return (seq.weights[1] + seq.weights[2:][mask].sum()).item()


def residue_prime_profile(params: QueryParams, sieve: FactorSieve) -> np.ndarray:
    """profile[rho] = #{p <= y prime, coprime to k, a * inverse(p) = rho (mod k)}."""
    k = params.k
    if int_floor(params.y) > sieve.limit:
        raise CapacityError(f"y={params.y} exceeds sieve limit {sieve.limit}")
    primes = sieve.primes(params.y)
    profile = np.zeros(k, dtype=np.int64)
    if primes.size == 0:
        return profile
    hist = np.bincount(primes % k, minlength=k)
    for u in range(k):
        if hist[u] and math.gcd(u, k) == 1:
            profile[params.a * mod_inverse(u, k) % k] += hist[u]
    return profile


def prime_cofactor_weights(params: QueryParams, sieve: FactorSieve) -> SiftingSequence:
    """Weight of r = number of primes p <= y, coprime to k, with
    r * p = a (mod k); the weight depends on r through r mod k only."""
    profile = residue_prime_profile(params, sieve)
    L = params.limit
    w = profile[np.arange(L + 1) % params.k]
    return SiftingSequence(params.x, w)


def buchstab_identity_residual(
    seq: SiftingSequence, z1: float, z2: float, sieve: FactorSieve
):
    """S(seq, z1) - S(seq, z2) + sum over primes z2 <= p < z1 of S(seq_p, p).

    The three terms satisfy an exact identity (each r sifted out between
    the two thresholds is counted once by its least prime factor), so the
    returned residual is identically zero for every weight vector.
    """
    if not 0 < z2 <= z1:
        raise DomainError("thresholds must satisfy 0 < z2 <= z1")
    total = sifted_sum(seq, z1, sieve) - sifted_sum(seq, z2, sieve)
    for p in _primes_between(sieve, z2, z1):
        total += sifted_sum(seq.subsequence(int(p)), int(p), sieve)
    return total


def _primes_between(sieve: FactorSieve, lo: float, hi: float) -> np.ndarray:
    """Primes p with lo <= p < hi."""
    top = int_upper_strict(hi)
    if top < 2:
        return np.empty(0, dtype=np.int64)
    ps = sieve.primes(min(top, sieve.limit))
    if top > sieve.limit:
        raise CapacityError(f"prime range up to {hi} exceeds sieve {sieve.limit}")
    start = int(np.searchsorted(ps, int_lower(lo), side="left"))
    return ps[start:]


# --------------------------------------------------------------------------
# Exact counts and main terms


def count_solutions(params: QueryParams, sieve: FactorSieve) -> int:
    """Exact number of pairs (u, v) described by the params."""
    L = params.limit
    if L > sieve.limit:
        raise CapacityError(f"x={params.x} exceeds sieve limit {sieve.limit}")
    profile = residue_prime_profile(params, sieve)
    threshold = int_lower(params.z)
    if threshold <= 2:
        rough = np.arange(2, L + 1)
    else:
        rough = np.flatnonzero(sieve.spf[2 : L + 1] >= threshold) + 2
    total = 0
    if rough.size:
        counts = np.bincount(rough % params.k, minlength=params.k)
        total = int(counts @ profile)
    if params.min_u == 1 and L >= 1:
        total += int(profile[1 % params.k])
    return total


def lambda_fraction(params: QueryParams, sieve: FactorSieve) -> Fraction:
    """Density of admissible primes per reduced residue class, exactly."""
    return Fraction(
        primes_coprime_count(params.y, params.k, sieve), euler_phi(params.k)
    )


def main_term(params: QueryParams, sieve: FactorSieve) -> float:
    """Predicted count: prime density per class times the rough count."""
    lam = lambda_fraction(params, sieve)
    phi_exact = rough_count(RoughCountQuery(params.x, params.z), sieve)
    return float(lam * phi_exact)


# --------------------------------------------------------------------------
# Bilinear decompositions


@dataclass(frozen=True)
class BilinearForm:
    """Weights a_m (and optionally b_n) applied to products m*n.

    The m-range is [1, M] by default or the dyadic window (M, 2M] when
    ``dyadic`` is set.  The divisor-function bound |a_m| <= tau(m) (and
    likewise for b_n) is checked on construction.
    """

    M: int
    a_m: dict
    b_n: dict | None = None
    dyadic: bool = False

    def __post_init__(self) -> None:
        if self.M < 1:
            raise ValidationError("M must be a positive integer")
        lo, hi = (self.M + 1, 2 * self.M) if self.dyadic else (1, self.M)
        for m, w in self.a_m.items():
            if not lo <= m <= hi:
                raise ValidationError(f"m={m} outside the declared range [{lo}, {hi}]")
            if abs(w) > divisor_count(m) + 1e-9:
                raise ValidationError(f"|a_{m}| exceeds the divisor bound tau({m})")
        if self.b_n is not None:
            for n, w in self.b_n.items():
                if n < 1:
                    raise ValidationError("n must be positive")
                if abs(w) > divisor_count(n) + 1e-9:
                    raise ValidationError(f"|b_{n}| exceeds the divisor bound tau({n})")

    def is_exact(self) -> bool:
        ws = list(self.a_m.values()) + list((self.b_n or {}).values())
        return all(isinstance(w, Rational) for w in ws)


@dataclass
class DecompositionReport:
    """Exact sum, density main term, and exact remainder of a comparison."""

    kind: str
    params: dict
    exact_sum: object
    main_term: object
    remainder: object
    lam: Fraction
    char_remainder: object | None = None
    prediction: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def remainders_match(self) -> bool | None:
        if self.char_remainder is None:
            return None
        return self.char_remainder == self.remainder

    def relative_error(self) -> float:
        if self.main_term == 0:
            return math.inf if self.exact_sum else 0.0
        return float(self.exact_sum / self.main_term) - 1.0

    def as_record(self) -> dict:
        rec = {"kind": self.kind, "params": dict(self.params)}
        rec["exact_sum"] = _to_jsonable(self.exact_sum)
        rec["main_term"] = _to_jsonable(self.main_term)
        rec["remainder"] = _to_jsonable(self.remainder)
        rec["lambda"] = _to_jsonable(self.lam)
        if self.char_remainder is not None:
            rec["char_remainder"] = _to_jsonable(self.char_remainder)
            rec["remainders_match"] = self.remainders_match
        if self.prediction is not None:
            rec["prediction"] = self.prediction
        rec.update({key: _to_jsonable(v) for key, v in self.extra.items()})
        return rec


def _to_jsonable(v):
    if isinstance(v, Fraction):
        return {"value": float(v), "exact": f"{v.numerator}/{v.denominator}"}
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, np.generic):
        return v.item()
    return v


def _inner_residue_counts(n_max: int, k: int) -> np.ndarray:
    """counts[u] = #{1 <= n <= n_max : n = u (mod k)}."""
    u = np.arange(k)
    counts = (n_max - u) // k + 1
    counts[0] = n_max // k
    counts[u > n_max] = 0
    return counts


def bilinear_decomposition(
    params: QueryParams,
    form: BilinearForm,
    sieve: FactorSieve,
    group: CharacterGroup,
) -> DecompositionReport:
    """Split sum_m a_m (b_n) c_{mn} over mn <= x into the density main term
    against the constant sequence plus a remainder, and recompute that
    remainder through the non-principal character sums.

    With rational weights both routes are exact and must coincide: the
    remainder equals (1/phi(k)) * sum over chi != chi0 of conj(chi(a))
    times (sum a_m b_n chi(mn)) times (sum over p <= y coprime to k of
    chi(p)).  Non-rational weights fall back to a floating character route.
    """
    k = params.k
    L = params.limit
    if L > sieve.limit:
        raise CapacityError(f"x={params.x} exceeds sieve limit {sieve.limit}")
    profile = residue_prime_profile(params, sieve)

    collapsed = [0] * k  # residue-collapsed products weights
    main_sum = 0
    for m, am in sorted(form.a_m.items()):
        if am == 0:
            continue
        n_max = L // m
        if n_max < 1:
            continue
        if form.b_n is None:
            counts = _inner_residue_counts(n_max, k)
            for u in range(k):
                if counts[u]:
                    collapsed[m * u % k] += am * int(counts[u])
            main_sum += am * n_max
        else:
            for n, bn in form.b_n.items():
                if bn and 1 <= n <= n_max:
                    collapsed[m * n % k] += am * bn
                    main_sum += am * bn

    exact_sum = sum(collapsed[rho] * int(profile[rho]) for rho in range(k))
    lam = lambda_fraction(params, sieve)
    exact_route = form.is_exact()
    if exact_route:
        main = lam * main_sum
    else:
        main = float(lam) * main_sum
    remainder = exact_sum - main

    hist = _coprime_prime_histogram(params, sieve)
    if exact_route:
        char_rem = _character_remainder_exact(group, params.a, collapsed, hist)
    else:
        char_rem = _character_remainder_float(group, params.a, collapsed, hist)

    return DecompositionReport(
        kind="bilinear-dyadic" if form.dyadic else "bilinear",
        params={**params.as_dict(), "M": form.M, "dyadic": form.dyadic},
        exact_sum=exact_sum,
        main_term=main,
        remainder=remainder,
        lam=lam,
        char_remainder=char_rem,
        extra={"exact_route": exact_route},
    )


def _coprime_prime_histogram(params: QueryParams, sieve: FactorSieve) -> np.ndarray:
    k = params.k
    primes = sieve.primes(params.y)
    hist = np.zeros(k, dtype=np.int64)
    if primes.size:
        hist = np.bincount(primes % k, minlength=k).astype(np.int64)
        for u in range(k):
            if hist[u] and math.gcd(u, k) != 1:
                hist[u] = 0  # primes dividing k carry character value zero
    return hist


def _character_remainder_exact(
    group: CharacterGroup, a: int, collapsed, hist
) -> Fraction:
    D = group.exponent
    k = group.modulus
    angle_rows = group.angle_matrix()
    total = CyclotomicSum(D)
    for row in range(1, group.phi):
        angles = angle_rows[row]
        left = CyclotomicSum(D)
        right = CyclotomicSum(D)
        for rho in range(k):
            ang = int(angles[rho])
            if ang < 0:
                continue
            if collapsed[rho]:
                left.add_root(ang, collapsed[rho])
            if hist[rho]:
                right.add_root(ang, int(hist[rho]))
        if left.coeffs and right.coeffs:
            shift = int(angles[a % k])
            total += (left * right).rotated(-shift)
    return total.rational() / group.phi


def _character_remainder_float(group: CharacterGroup, a: int, collapsed, hist):
    values = group.value_matrix()
    weights = np.asarray(collapsed, dtype=complex)
    prime_vec = values @ hist.astype(complex)
    pair_vec = values @ weights
    conj_a = np.conj(values[:, a % group.modulus])
    total = np.sum(conj_a[1:] * pair_vec[1:] * prime_vec[1:])
    return complex(total) / group.phi


# --------------------------------------------------------------------------
# Sifted-sum comparison over a weight window


def harman_compare(
    params: QueryParams, R: int, c_r: dict, sieve: FactorSieve
) -> DecompositionReport:
    """Compare sum_r c_r S(A_r, z) with the density-scaled constant-sequence
    analogue, r running over the window [R, 2R).

    Note the closed-open window: it contains its lower endpoint, so R = 1
    reduces to the plain sifted sums, in contrast with the half-open
    dyadic ranges (M, 2M] used by bilinear forms.
    """
    if R < 1:
        raise ValidationError("R must be a positive integer")
    for r, c in c_r.items():
        if not R <= r < 2 * R:
            raise ValidationError(f"r={r} outside the window [{R}, {2 * R})")
        if abs(c) > 1 + 1e-9:
            raise ValidationError(f"|c_{r}| exceeds 1")
    weighted = prime_cofactor_weights(params, sieve)
    benchmark = SiftingSequence.constant(params.x)
    lhs = 0
    units = 0
    for r, c in sorted(c_r.items()):
        if c == 0:
            continue
        lhs += c * sifted_sum(weighted.subsequence(r), params.z, sieve)
        units += c * sifted_sum(benchmark.subsequence(r), params.z, sieve)
    lam = lambda_fraction(params, sieve)
    exact = all(isinstance(c, Rational) for c in c_r.values())
    rhs = lam * units if exact else float(lam) * units
    return DecompositionReport(
        kind="sift-window",
        params={**params.as_dict(), "R": R},
        exact_sum=lhs,
        main_term=rhs,
        remainder=lhs - rhs,
        lam=lam,
        extra={"benchmark_side": units, "exact_route": exact},
    )


# --------------------------------------------------------------------------
# Nested Buchstab split


@dataclass(frozen=True)
class SiftSplit:
    """Components of the nested Buchstab split of S(seq, sqrt x).

    Branch 1 (delta <= 1/3) keeps two components and one identity:

        target = low - band,          band over primes in [z, sqrt x).

    Branch 2 keeps seven and three identities:

        target = low - band - band_high          (band over [z, T))
        band   = band_shallow - pair_total
        pair_total = pair_small + pair_large     (split at pq <= x**(1-delta))
    """

    branch: int
    target: object
    low: object
    band: object
    band_high: object | None = None
    band_shallow: object | None = None
    pair_total: object | None = None
    pair_small: object | None = None
    pair_large: object | None = None

    def residuals(self) -> dict:
        high = self.band_high if self.band_high is not None else 0
        out = {"target": self.target - (self.low - self.band - high)}
        if self.branch == 2:
            out["band"] = self.band - (self.band_shallow - self.pair_total)
            out["pair"] = self.pair_total - (self.pair_small + self.pair_large)
        return out

    def as_record(self) -> dict:
        keys = (
            "target",
            "low",
            "band",
            "band_high",
            "band_shallow",
            "pair_total",
            "pair_small",
            "pair_large",
        )
        return {key: getattr(self, key) for key in keys}


@dataclass(frozen=True)
class HarmanDecomposition:
    """Parallel Buchstab splits of the weighted and benchmark sequences.

    ``pair_large_interior`` is the benchmark pair_large further restricted
    to pairs with p*q**2 < x, the sub-sum whose summands can exceed the
    single surviving integer 1; it feeds the density-integral comparison.
    The identity components themselves are NOT clipped, otherwise the
    r = 1 atoms of the dropped region would break exactness.
    """

    params: dict
    delta: float
    x: float
    sqrt_cut: float
    low_cut: float
    mid_cut: float | None
    lam: Fraction
    weighted: SiftSplit
    benchmark: SiftSplit
    pair_large_interior: int | None = None

    def residuals(self) -> dict:
        out = {}
        for label, split in (("weighted", self.weighted), ("benchmark", self.benchmark)):
            for name, value in split.residuals().items():
                out[f"{label}_{name}"] = value
        return out


def _pair_ranges(sieve: FactorSieve, z: float, T: float):
    band_primes = _primes_between(sieve, z, T)
    return [(int(q), int(p)) for i, q in enumerate(band_primes) for p in band_primes[i + 1 :]]


def _split_sequence(
    seq: SiftingSequence,
    sieve: FactorSieve,
    x: float,
    delta: float,
    branch: int,
) -> SiftSplit:
    X = x**0.5
    z = x ** (1.0 - 2.0 * delta)
    target = sifted_sum(seq, X, sieve)
    low = sifted_sum(seq, z, sieve)
    if branch == 1:
        band = sum(
            sifted_sum(seq.subsequence(int(p)), int(p), sieve)
            for p in _primes_between(sieve, z, X)
        )
        return SiftSplit(branch=1, target=target, low=low, band=band)
    T = x**delta
    band = 0
    band_shallow = 0
    for p in _primes_between(sieve, z, T):
        sub = seq.subsequence(int(p))
        band += sifted_sum(sub, int(p), sieve)
        band_shallow += sifted_sum(sub, z, sieve)
    band_high = sum(
        sifted_sum(seq.subsequence(int(p)), int(p), sieve)
        for p in _primes_between(sieve, T, X)
    )
    cutoff = int_floor(x ** (1.0 - delta))
    pair_small = 0
    pair_large = 0
    for q, p in _pair_ranges(sieve, z, T):
        value = sifted_sum(seq.subsequence(p * q), q, sieve)
        if p * q <= cutoff:
            pair_small += value
        else:
            pair_large += value
    return SiftSplit(
        branch=2,
        target=target,
        low=low,
        band=band,
        band_high=band_high,
        band_shallow=band_shallow,
        pair_total=pair_small + pair_large,
        pair_small=pair_small,
        pair_large=pair_large,
    )


def harman_decompose(
    params: QueryParams, delta: float, sieve: FactorSieve
) -> HarmanDecomposition:
    """Decompose S(., sqrt x) for both sequences at sifting depth delta.

    delta in (1/4, 1/3] produces the two-component branch; (1/3, 2/5) the
    seven-component branch.  All component sums are exact, and the split
    identities hold with zero residual by construction of the enumeration.
    """
    if not 0.25 < delta < 0.4:
        raise DomainError("delta must lie in (1/4, 2/5)")
    branch = 1 if delta <= 1 / 3 + 1e-12 else 2
    x = params.x
    weighted = _split_sequence(
        prime_cofactor_weights(params, sieve), sieve, x, delta, branch
    )
    benchmark_seq = SiftingSequence.constant(x)
    benchmark = _split_sequence(benchmark_seq, sieve, x, delta, branch)
    interior = None
    if branch == 2:
        z = x ** (1.0 - 2.0 * delta)
        T = x**delta
        cutoff = int_floor(x ** (1.0 - delta))
        top = int_upper_strict(x)
        interior = 0
        for q, p in _pair_ranges(sieve, z, T):
            if p * q > cutoff and p * q * q <= top:
                interior += sifted_sum(benchmark_seq.subsequence(p * q), q, sieve)
    return HarmanDecomposition(
        params=params.as_dict(),
        delta=delta,
        x=x,
        sqrt_cut=x**0.5,
        low_cut=x ** (1.0 - 2.0 * delta),
        mid_cut=x**delta if branch == 2 else None,
        lam=lambda_fraction(params, sieve),
        weighted=weighted,
        benchmark=benchmark,
        pair_large_interior=interior,
    )


# --------------------------------------------------------------------------
# Regime validation and reports


@dataclass(frozen=True)
class RegimeConfig:
    """Parameter regime of one of the three supported estimates."""

    regime: str
    B: float | None = None
    C: float | None = None
    theta1: float | None = None
    theta2: float | None = None
    delta: float | None = None
    eps: float = 0.0
    beta: float | None = None

    def __post_init__(self) -> None:
        if self.regime not in REGIMES:
            raise DomainError(f"unknown regime {self.regime!r}; expected {REGIMES}")


@dataclass(frozen=True)
class ConstraintCheck:
    name: str
    satisfied: bool
    detail: str


@dataclass
class RegimeVerdict:
    regime: str
    checks: list[ConstraintCheck]
    windows: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return all(c.satisfied for c in self.checks)

    @property
    def violated(self) -> list[str]:
        return [c.name for c in self.checks if not c.satisfied]

    def as_record(self) -> dict:
        return {
            "regime": self.regime,
            "valid": self.valid,
            "violated": self.violated,
            "checks": [
                {"name": c.name, "satisfied": c.satisfied, "detail": c.detail}
                for c in self.checks
            ],
            "windows": self.windows,
        }


def validate_regime(config: RegimeConfig) -> RegimeVerdict:
    """List each regime constraint with its status and the derived windows."""
    checks: list[ConstraintCheck] = []
    windows: dict = {}
    if config.regime == LOG_REGIME:
        checks.append(ConstraintCheck("B_positive", (config.B or 0) > 0, f"B={config.B}"))
        checks.append(ConstraintCheck("C_positive", (config.C or 0) > 0, f"C={config.C}"))
        if config.beta is not None:
            checks.append(
                ConstraintCheck(
                    "beta_range", 0 < config.beta <= 0.5, f"beta={config.beta}"
                )
            )
    elif config.regime == GRH_RANGE:
        t1, t2 = config.theta1, config.theta2
        if t1 is None or t2 is None:
            raise DomainError("grh-range needs theta1 and theta2")
        cap = min((1 + t1) / 2, (2 + 3 * t1) / 5)
        checks.append(
            ConstraintCheck(
                "theta_positive", t1 > 0 and t2 > 0, f"theta1={t1}, theta2={t2}"
            )
        )
        checks.append(
            ConstraintCheck("theta2_window", t2 < cap, f"theta2={t2} < {cap:.6g}")
        )
        if config.beta is not None:
            checks.append(
                ConstraintCheck(
                    "beta_range", 0 < config.beta <= 0.5, f"beta={config.beta}"
                )
            )
            checks.append(
                ConstraintCheck(
                    "beta_spread",
                    config.beta < 1 + 2 * (t1 - t2),
                    f"beta={config.beta} < {1 + 2 * (t1 - t2):.6g}",
                )
            )
        windows["type_i_max_exponent"] = 1 + (t1 - 3 * t2) / 2
        windows["type_ii_window"] = (t2 - t1, 1 + t1 - t2)
    else:
        d = config.delta
        if d is None:
            raise DomainError("grh-lower needs delta")
        checks.append(
            ConstraintCheck("delta_range", 0.25 < d < 0.4, f"delta={d} in (1/4, 2/5)")
        )
        if 0.25 < d < 0.4:
            windows["branch"] = 1 if d <= 1 / 3 + 1e-12 else 2
            windows["type_i_max_exponent"] = 1 - 1.5 * d
            windows["type_ii_window"] = (d, 1 - d)
    return RegimeVerdict(config.regime, checks, windows)


def main_term_report(
    params: QueryParams, sieve: FactorSieve, config: RegimeConfig | None = None
) -> DecompositionReport:
    """Exact count against the density main term, with the regime's error
    prediction attached when a config is supplied (o(1) exponents read as 0)."""
    exact = count_solutions(params, sieve)
    lam = lambda_fraction(params, sieve)
    rough = rough_count(RoughCountQuery(params.x, params.z), sieve)
    if params.min_u == 2:
        rough -= 1  # drop the u = 1 atom from the predictor support
    main = lam * rough
    prediction = None
    if config is not None:
        if config.regime == LOG_REGIME:
            c_exp = config.C if config.C is not None else 1.0
            prediction = (
                params.x
                * params.y
                / (euler_phi(params.k) * math.log(max(params.y, 2.0)) ** c_exp)
            )
        else:
            prediction = params.x ** (1 - config.eps) * params.y / params.k
    report = DecompositionReport(
        kind="count-vs-main",
        params=params.as_dict(),
        exact_sum=exact,
        main_term=main,
        remainder=exact - main,
        lam=lam,
        prediction=prediction,
        extra={
            "rough_count": rough,
            "primes_coprime": primes_coprime_count(params.y, params.k, sieve),
            "relative_error": (float(exact / main) - 1.0)
            if main
            else (math.inf if exact else 0.0),
        },
    )
    return report


# --------------------------------------------------------------------------
# Two-prime coverage scan


def _scan_single(k: int, primes_all: np.ndarray) -> tuple[int, list[int]]:
    cut = int(np.searchsorted(primes_all, k, side="right"))
    ps = primes_all[:cut]
    ps = ps[k % ps != 0]
    units = np.flatnonzero(np.gcd(np.arange(k), k) == 1)
    if ps.size == 0:
        return k, units.tolist()
    covered = np.unique(np.outer(ps, ps).ravel() % k)
    return k, np.setdiff1d(units, covered).tolist()


def eosc_scan(
    k_min: int,
    k_max: int,
    sieve: FactorSieve,
    threads: int = 1,
    progress=None,
) -> list[tuple[int, list[int]]]:
    """For each modulus k in [k_min, k_max], the reduced residues NOT
    expressible as p1 * p2 (mod k) with primes p1 <= p2 <= k coprime to k.

    An empty list means every reduced residue class modulo k is covered by
    a product of two primes up to k.
    """
    if k_min < 3:
        raise DomainError("scan starts at k >= 3")
    if k_max > sieve.limit:
        raise CapacityError(f"k_max={k_max} exceeds sieve limit {sieve.limit}")
    ks = range(k_min, k_max + 1)
    primes_all = sieve.primes(k_max)
    results: list[tuple[int, list[int]]] = []
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for i, item in enumerate(pool.map(lambda k: _scan_single(k, primes_all), ks)):
                results.append(item)
                if progress and (i + 1) % 200 == 0:
                    progress(item[0])
    else:
        for i, k in enumerate(ks):
            results.append(_scan_single(k, primes_all))
            if progress and (i + 1) % 200 == 0:
                progress(k)
    return results
