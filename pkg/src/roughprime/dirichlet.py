"""Multiplicative character groups modulo k with exact root-of-unity values.

The unit group mod k is decomposed into cyclic components (one per odd
prime power, and the {sign} x {powers of 5} pair for a factor 2**e with
e >= 3).  A character is an exponent vector against the component
generators, and its value at a unit n is the root of unity

    exp(2*pi*i * angle / D),   D = lcm of the component orders,

where the integer ``angle`` is assembled from precomputed discrete-log
tables.  Carrying angles instead of floats lets every identity in this
package (orthogonality, full-period sums, remainder comparisons) be
tested with integer arithmetic and zero tolerance; complex values appear
only at output boundaries.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import euler_phi, factorize
from .errors import DomainError

__all__ = [
    "CharacterGroup",
    "DirichletCharacter",
    "CyclotomicSum",
    "build_character_group",
    "orthogonality_sum",
]


@dataclass(frozen=True)
class CyclicComponent:
    """One cyclic factor of the unit group, with its discrete-log table."""

    modulus: int  # prime-power modulus the table is indexed by
    order: int
    generator: int
    dlog: np.ndarray  # dlog[v % modulus] = exponent of generator, -1 on non-units


def _find_generator(q: int, order: int) -> int:
    factors = factorize(order)
    for g in range(2, q):
        if math.gcd(g, q) != 1:
            continue
        if all(pow(g, order // ell, q) != 1 for ell in factors):
            return g
    raise AssertionError("unit group of an odd prime power is cyclic")


def _odd_prime_power_component(p: int, e: int) -> CyclicComponent:
    q = p**e
    order = q // p * (p - 1)
    g = _find_generator(q, order)
    dlog = np.full(q, -1, dtype=np.int64)
    v = 1
    for j in range(order):
        dlog[v] = j
        v = v * g % q
    return CyclicComponent(q, order, g, dlog)


def _two_power_components(e: int) -> list[CyclicComponent]:
    if e <= 1:
        return []
    q = 1 << e
    if e == 2:
        dlog = np.full(4, -1, dtype=np.int64)
        dlog[1] = 0
        dlog[3] = 1
        return [CyclicComponent(4, 2, 3, dlog)]
    # odd residues mod 2**e are (+-1) * 5**j, uniquely
    half = 1 << (e - 2)
    sign = np.full(q, -1, dtype=np.int64)
    five = np.full(q, -1, dtype=np.int64)
    v = 1
    for j in range(half):
        sign[v] = 0
        five[v] = j
        sign[q - v] = 1
        five[q - v] = j
        v = v * 5 % q
    return [
        CyclicComponent(q, 2, q - 1, sign),
        CyclicComponent(q, half, 5, five),
    ]


class CharacterGroup:
    """All phi(k) multiplicative characters modulo k >= 3."""

    def __init__(self, k: int) -> None:
        if k <= 2:
            raise DomainError(f"character groups need a modulus >= 3, got {k}")
        components: list[CyclicComponent] = []
        for p, e in sorted(factorize(k).items()):
            if p == 2:
                components.extend(_two_power_components(e))
            else:
                components.append(_odd_prime_power_component(p, e))
        self.modulus = k
        self.components = tuple(components)
        self.orders = tuple(c.order for c in components)
        self.phi = math.prod(self.orders) if components else 1
        self.exponent = math.lcm(*self.orders) if components else 1
        if self.phi != euler_phi(k):
            raise AssertionError("component orders do not multiply to phi(k)")
        self._logs: np.ndarray | None = None
        self._angles: np.ndarray | None = None
        self._values: np.ndarray | None = None

    # ---------------------------------------------------------------- logs

    def dlog_vector(self, n: int) -> tuple[int, ...] | None:
        """Component discrete logs of n, or None when gcd(n, k) > 1."""
        n %= self.modulus
        if math.gcd(n, self.modulus) != 1:
            return None
        return tuple(int(c.dlog[n % c.modulus]) for c in self.components)

    def _log_matrix(self) -> np.ndarray:
        """(r, k) matrix of component logs per residue; -1 columns mark non-units."""
        if self._logs is None:
            res = np.arange(self.modulus)
            if self.components:
                rows = [c.dlog[res % c.modulus] for c in self.components]
                self._logs = np.stack(rows)
            else:
                self._logs = np.empty((0, self.modulus), dtype=np.int64)
        return self._logs

    def unit_mask(self) -> np.ndarray:
        return np.gcd(np.arange(self.modulus), self.modulus) == 1

    # ---------------------------------------------------------- characters

    def character(self, exponents) -> "DirichletCharacter":
        return DirichletCharacter(self, tuple(int(t) for t in exponents))

    def principal(self) -> "DirichletCharacter":
        return self.character((0,) * len(self.components))

    def characters(self) -> list["DirichletCharacter"]:
        """All characters, principal first (lexicographic exponent order)."""
        return [
            self.character(t)
            for t in itertools.product(*(range(d) for d in self.orders))
        ]

    def angle_matrix(self) -> np.ndarray:
        """(phi, k) integer angles out of ``exponent``; -1 marks value zero.

        Row order matches :meth:`characters`.  Intended for desk-scale
        moduli; memory grows as phi(k) * k.
        """
        if self._angles is None:
            D = self.exponent
            logs = self._log_matrix()
            exps = np.array(
                list(itertools.product(*(range(d) for d in self.orders))),
                dtype=np.int64,
            ).reshape(self.phi, len(self.orders))
            scale = np.array([D // d for d in self.orders], dtype=np.int64)
            angles = (exps * scale) @ logs % D
            angles[:, ~self.unit_mask()] = -1
            self._angles = angles
        return self._angles

    def value_matrix(self) -> np.ndarray:
        """(phi, k) complex character values, row order as characters()."""
        if self._values is None:
            angles = self.angle_matrix()
            vals = np.exp(2j * np.pi * angles / self.exponent)
            vals[angles < 0] = 0.0
            self._values = vals
        return self._values


def build_character_group(k: int) -> CharacterGroup:
    return CharacterGroup(k)


@dataclass(frozen=True)
class DirichletCharacter:
    """A character given by its exponent vector against the group generators."""

    group: CharacterGroup
    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.exponents) != len(self.group.orders):
            raise DomainError("exponent vector length mismatch")
        for t, d in zip(self.exponents, self.group.orders):
            if not 0 <= t < d:
                raise DomainError(f"exponent {t} outside [0, {d})")

    @property
    def is_principal(self) -> bool:
        return all(t == 0 for t in self.exponents)

    def angle_numerator(self, n: int) -> int | None:
        """Integer a with chi(n) = exp(2*pi*i*a/D), or None when chi(n) = 0."""
        logs = self.group.dlog_vector(n)
        if logs is None:
            return None
        D = self.group.exponent
        total = 0
        for t, d, l in zip(self.exponents, self.group.orders, logs):
            total += t * (D // d) * l
        return total % D

    def angle(self, n: int) -> Fraction | None:
        """chi(n) as an exact fraction of a full turn, None for value zero."""
        a = self.angle_numerator(n)
        if a is None:
            return None
        return Fraction(a, self.group.exponent)

    def value(self, n: int) -> complex:
        a = self.angle_numerator(n)
        if a is None:
            return 0j
        return cmath.exp(2j * cmath.pi * a / self.group.exponent)

    def angles_row(self) -> np.ndarray:
        """Angle numerators over residues [0, k); -1 where the value is zero."""
        D = self.group.exponent
        logs = self.group._log_matrix()
        scale = np.array(
            [t * (D // d) for t, d in zip(self.exponents, self.group.orders)],
            dtype=np.int64,
        )
        row = scale @ logs % D if len(scale) else np.zeros(self.group.modulus, np.int64)
        row[~self.group.unit_mask()] = -1
        return row

    def values_row(self) -> np.ndarray:
        row = self.angles_row()
        vals = np.exp(2j * np.pi * row / self.group.exponent)
        vals[row < 0] = 0.0
        return vals

    def conjugate(self) -> "DirichletCharacter":
        return self.group.character(
            tuple((-t) % d for t, d in zip(self.exponents, self.group.orders))
        )

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if other.group is not self.group:
            raise DomainError("characters live on different groups")
        return self.group.character(
            tuple(
                (s + t) % d
                for s, t, d in zip(self.exponents, other.exponents, self.group.orders)
            )
        )


def orthogonality_sum(group: CharacterGroup, a: int, r: int) -> int:
    """(1/phi(k)) * sum over all chi of conj(chi(a)) * chi(r), exactly.

    Per cyclic component of order d the summands are the roots of unity
    zeta_d**(t * delta) for t = 0..d-1; as a multiset these form the full
    set of (d/gcd(delta, d))-th roots repeated gcd(delta, d) times, so the
    component sum is exactly d when delta = 0 mod d and exactly 0
    otherwise.  The total is the product over components, hence the exact
    indicator of r = a (mod k), with no floating arithmetic anywhere.
    """
    if math.gcd(a, group.modulus) != 1:
        raise DomainError("a must be a unit modulo k")
    logs_a = group.dlog_vector(a)
    logs_r = group.dlog_vector(r)
    if logs_r is None:
        return 0
    for d, ea, er in zip(group.orders, logs_a, logs_r):
        if (er - ea) % d:
            return 0
    return 1


# --------------------------------------------------------------------------
# Exact sums of rational multiples of roots of unity


@lru_cache(maxsize=None)
def _cyclotomic_coeffs(n: int) -> tuple[int, ...]:
    """Ascending integer coefficients of the n-th cyclotomic polynomial."""
    from sympy import Symbol, cyclotomic_poly

    x = Symbol("x")
    desc = cyclotomic_poly(n, x).as_poly(x).all_coeffs()
    return tuple(int(c) for c in reversed(desc))


class CyclotomicSum:
    """Exact element of Q(zeta_D), stored as coefficients per angle a/D.

    Coefficients may be ints or Fractions.  Zero testing and extraction of
    rational values go through reduction modulo the D-th cyclotomic
    polynomial, which is exact integer/rational arithmetic.
    """

    __slots__ = ("den", "coeffs")

    def __init__(self, den: int, coeffs=None) -> None:
        if den < 1:
            raise DomainError("denominator must be positive")
        self.den = den
        self.coeffs: dict[int, object] = dict(coeffs) if coeffs else {}

    def add_root(self, angle_num: int, weight=1) -> None:
        """Accumulate weight * zeta_D**angle_num."""
        if weight == 0:
            return
        key = angle_num % self.den
        new = self.coeffs.get(key, 0) + weight
        if new == 0:
            self.coeffs.pop(key, None)
        else:
            self.coeffs[key] = new

    def __iadd__(self, other: "CyclotomicSum") -> "CyclotomicSum":
        if other.den != self.den:
            raise DomainError("mismatched root orders")
        for a, w in other.coeffs.items():
            self.add_root(a, w)
        return self

    def __mul__(self, other: "CyclotomicSum") -> "CyclotomicSum":
        if other.den != self.den:
            raise DomainError("mismatched root orders")
        out: dict[int, object] = {}
        D = self.den
        for a, wa in self.coeffs.items():
            for b, wb in other.coeffs.items():
                c = (a + b) % D
                acc = out.get(c, 0) + wa * wb
                if acc == 0:
                    out.pop(c, None)
                else:
                    out[c] = acc
        return CyclotomicSum(D, out)

    def rotated(self, shift: int) -> "CyclotomicSum":
        """Multiply by zeta_D**shift."""
        D = self.den
        return CyclotomicSum(D, {(a + shift) % D: w for a, w in self.coeffs.items()})

    def conjugate(self) -> "CyclotomicSum":
        D = self.den
        return CyclotomicSum(D, {(-a) % D: w for a, w in self.coeffs.items()})

    def scaled(self, factor) -> "CyclotomicSum":
        return CyclotomicSum(
            self.den, {a: w * factor for a, w in self.coeffs.items() if w * factor != 0}
        )

    def reduced(self) -> tuple:
        """Coefficients on the power basis 1, zeta, ..., zeta**(phi(D)-1)."""
        D = self.den
        vec: list = [0] * D
        for a, w in self.coeffs.items():
            vec[a] += w
        mod = _cyclotomic_coeffs(D)
        deg = len(mod) - 1
        for i in range(D - 1, deg - 1, -1):
            c = vec[i]
            if c:
                vec[i] = 0
                base = i - deg
                for j in range(deg):
                    vec[base + j] -= c * mod[j]
        return tuple(vec[:deg])

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.reduced())

    def rational(self) -> Fraction:
        """The value as an exact rational; raises if it is irrational."""
        red = self.reduced()
        if any(red[1:]):
            raise ArithmeticError("cyclotomic sum is not a rational number")
        return Fraction(red[0]) if red else Fraction(0)

    def to_complex(self) -> complex:
        D = self.den
        return sum(
            (complex(w) * cmath.exp(2j * cmath.pi * a / D) for a, w in self.coeffs.items()),
            0j,
        )
