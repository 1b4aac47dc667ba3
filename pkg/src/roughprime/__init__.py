"""Exact counting and sieve decompositions for products u * v = a (mod k)
with u free of small prime factors and v prime.

Module map:

* ``arith``      smallest-prime-factor sieve, totient, inverses, rough counts
* ``dirichlet``  character groups mod k with exact root-of-unity values
* ``charsums``   interval and prime character sums, bound profiles
* ``sieves``     sifted sequences, bilinear decompositions, Buchstab splits,
                 regime checks, two-prime coverage scan
* ``buchstab``   grid solution of the Buchstab delay differential equation
* ``integrals``  the two-dimensional density integrals and their constants
* ``cli``        command-line front end with JSON-lines / CSV reports
"""

from .arith import (
    INFINITY,
    FactorSieve,
    RoughCountQuery,
    build_factor_sieve,
    divisor_count,
    euler_phi,
    mod_inverse,
    primes_coprime_count,
    rough_count,
    smallest_prime_factor,
)
from .buchstab import BuchstabTable, phi_asymptotic
from .charsums import BoundProfile, check_bound, interval_sum, prime_sum, pv_extremal
from .dirichlet import (
    CharacterGroup,
    CyclotomicSum,
    DirichletCharacter,
    build_character_group,
    orthogonality_sum,
)
from .errors import CapacityError, DomainError, NotInvertibleError, ValidationError
from .integrals import IntegralResult, closed_form_bounds, compute_I, integrand
from .sieves import (
    BilinearForm,
    DecompositionReport,
    HarmanDecomposition,
    QueryParams,
    RegimeConfig,
    SiftingSequence,
    bilinear_decomposition,
    buchstab_identity_residual,
    count_solutions,
    eosc_scan,
    harman_compare,
    harman_decompose,
    main_term,
    main_term_report,
    prime_cofactor_weights,
    sifted_sum,
    validate_regime,
)

__version__ = "0.1.0"
