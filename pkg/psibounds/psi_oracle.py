"""
Exact Chebyshev functions psi_K(x) for K = Q and for quadratic fields.

psi_K(x) is the sum of log N(p) over prime-ideal powers p^m with norm at most
x. For a quadratic field it is computed twice: by enumerating the ideals above
each rational prime, and through the factorisation zeta_K = zeta * L(s, chi_D).
"""
import math
import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional

import numpy as np
from django.conf import settings

from .exceptions import DomainError, LimitExceeded, NotFundamental
from .field import FieldProfile, make_profile, rational_field
from .utils import compensated_cumsum

logger = logging.getLogger(__name__)


class PsiMethod(Enum):
    DIRECT_IDEALS = 'direct'
    CHARACTER_DECOMP = 'character'
    RATIONAL = 'rational'


@dataclass(frozen=True)
class PsiValue:
    x: float
    value: float
    method: PsiMethod
    prime_power_count: int


def _sieve_limit() -> int:
    return int(getattr(settings, 'PSIBOUNDS_SETTINGS', {}).get('SIEVE_LIMIT', 10 ** 8))


def _check_limit(limit: int):
    if limit > _sieve_limit():
        raise LimitExceeded(f'sieve limit {limit} above the memory guard {_sieve_limit()}')


def prime_sieve(limit: int) -> np.ndarray:
    """Boolean array, True at the primes <= limit."""
    limit = int(limit)
    _check_limit(limit)
    is_prime = np.ones(max(limit + 1, 2), dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return is_prime[:limit + 1]


def _prime_powers(p: int, limit: int, start: int = 1, step: int = 1):
    """p^start, p^(start+step), ... up to limit."""
    power = p ** start
    factor = p ** step
    while power <= limit:
        yield power
        power *= factor


def von_mangoldt_sieve(limit: int) -> np.ndarray:
    """Lambda(k) for k = 0..limit: log p when k is a power of p, 0 otherwise."""
    is_prime = prime_sieve(limit)
    primes = np.flatnonzero(is_prime)
    lam = np.zeros(limit + 1, dtype=np.float64)
    lam[primes] = np.log(primes)
    for p in primes[primes <= math.isqrt(limit)]:
        p = int(p)
        for power in _prime_powers(p, limit, start=2):
            lam[power] = math.log(p)
    return lam


class LambdaTable:
    """
    Immutable sieve data up to ``limit``: Lambda(k), its compensated running sum
    psi(k), and the primes.
    """

    def __init__(self, limit: int):
        self.limit = int(limit)
        self.lam = von_mangoldt_sieve(self.limit)
        self.primes = np.flatnonzero(self.lam > 0)
        self.primes = self.primes[self.lam[self.primes] == np.log(self.primes)]
        self.psi_values = compensated_cumsum(self.lam)
        for array in (self.lam, self.primes, self.psi_values):
            array.setflags(write=False)
        logger.debug(f'LambdaTable up to {self.limit}: {self.primes.size} primes')

    def von_mangoldt(self, k: int) -> float:
        return float(self.lam[k])

    def psi(self, x: float) -> float:
        k = math.floor(x)
        if k < 2:
            return 0.0
        if k > self.limit:
            raise LimitExceeded(f'x = {x:g} beyond the table limit {self.limit}')
        return float(self.psi_values[k])

    def prime_power_count(self, x: float) -> int:
        k = math.floor(x)
        return int(np.count_nonzero(self.lam[:k + 1])) if k >= 2 else 0


@lru_cache(maxsize=4)
def lambda_table(limit: int) -> LambdaTable:
    return LambdaTable(limit)


def _table_for(x: float) -> LambdaTable:
    limit = max(int(math.floor(x)), 2)
    _check_limit(limit)
    # round up so that nearby requests share one sieve
    size = 1 << max(10, (limit - 1).bit_length())
    return lambda_table(min(max(size, limit), max(_sieve_limit(), limit)))


def psi_Q(x: float) -> PsiValue:
    if x < 0:
        raise DomainError(f'psi requires x ≥ 0 (got {x:g})')
    if x < 2:
        return PsiValue(x, 0.0, PsiMethod.RATIONAL, 0)
    table = _table_for(x)
    return PsiValue(x, table.psi(x), PsiMethod.RATIONAL, table.prime_power_count(x))


# Quadratic characters

def _kronecker_two(D: int) -> int:
    if D % 2 == 0:
        return 0
    return 1 if D % 8 in (1, 7) else -1


def jacobi_symbol(a: int, n: int) -> int:
    """(a/n) for odd n >= 1."""
    if n <= 0 or n % 2 == 0:
        raise DomainError(f'jacobi_symbol needs an odd positive modulus (got {n})')
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker_symbol(D: int, n: int) -> int:
    """The Kronecker symbol (D/n) for n >= 1."""
    if n < 1:
        raise DomainError(f'kronecker_symbol requires n ≥ 1 (got {n})')
    result = 1
    while n % 2 == 0:
        n //= 2
        result *= _kronecker_two(D)
        if result == 0:
            return 0
    return result * jacobi_symbol(D, n)


def is_fundamental_discriminant(D: int) -> bool:
    """D = 1 mod 4 squarefree, or D = 4m with m = 2, 3 mod 4 squarefree (D != 1)."""
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return _is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _is_squarefree(m)
    return False


def _is_squarefree(m: int) -> bool:
    m = abs(m)
    if m % 4 == 0:
        return False
    if m % 2 == 0:
        m //= 2
    p = 3
    while p * p <= m:
        if m % (p * p) == 0:
            return False
        if m % p == 0:
            m //= p
        p += 2
    return True


@dataclass(frozen=True)
class QuadraticField:
    disc: int

    @classmethod
    def from_disc(cls, D: int) -> 'QuadraticField':
        if not is_fundamental_discriminant(D):
            raise NotFundamental(f'{D} is not a fundamental discriminant')
        return cls(int(D))

    @property
    def profile(self) -> FieldProfile:
        r1, r2 = (2, 0) if self.disc > 0 else (0, 1)
        return make_profile(2, abs(self.disc), r1, r2)

    @property
    def label(self) -> str:
        return f'Q(sqrt({self.disc // 4 if self.disc % 4 == 0 else self.disc}))'

    def splitting(self, p: int) -> int:
        """1 if p splits, -1 if p is inert, 0 if p ramifies."""
        D = self.disc
        if D % p == 0:
            return 0
        if p == 2:
            return 1 if D % 8 == 1 else -1
        # Euler's criterion: D is a square mod p iff p splits
        return 1 if pow(D % p, (p - 1) // 2, p) == 1 else -1

    def character_table(self) -> np.ndarray:
        """chi_D(k) for k = 0..|D|-1; chi_D is periodic modulo |D|."""
        modulus = abs(self.disc)
        return np.array([kronecker_symbol(self.disc, k) if k else 0 for k in range(modulus)], dtype=np.int8)


def _check_x(x: float):
    if x < 0:
        raise DomainError(f'psi requires x ≥ 0 (got {x:g})')
    _check_limit(math.floor(x))


def lambda_K_direct(field: QuadraticField, limit: int) -> np.ndarray:
    """Lambda_K summed over the ideals of each norm k <= limit, from the splitting of each prime."""
    _check_limit(limit)
    table = _table_for(limit)
    primes = table.primes[table.primes <= limit]
    weights = np.zeros(limit + 1, dtype=np.float64)
    for p in primes:
        p = int(p)
        log_p = math.log(p)
        kind = field.splitting(p)
        if kind == 1:
            # two conjugate primes of norm p
            for power in _prime_powers(p, limit):
                weights[power] += 2 * log_p
        elif kind == 0:
            for power in _prime_powers(p, limit):
                weights[power] += log_p
        else:
            # one prime of norm p^2, weighted by log N(p) = 2 log p
            for power in _prime_powers(p, limit, start=2, step=2):
                weights[power] += 2 * log_p
    return weights


def lambda_K_character(field: QuadraticField, limit: int) -> np.ndarray:
    """Lambda(k) (1 + chi_D(k)) for k <= limit."""
    _check_limit(limit)
    lam = _table_for(limit).lam[:limit + 1]
    chi = field.character_table()
    k = np.arange(limit + 1)
    return lam * (1 + chi[k % abs(field.disc)])


def psi_quadratic_grid(field: QuadraticField, limit: int):
    """psi_K(k) for every integer k <= limit, by both methods."""
    direct = compensated_cumsum(lambda_K_direct(field, limit))
    character = compensated_cumsum(lambda_K_character(field, limit))
    return direct, character


def psi_quadratic(field: QuadraticField, x: float, method: PsiMethod = PsiMethod.DIRECT_IDEALS) -> PsiValue:
    _check_x(x)
    k = math.floor(x)
    if k < 2:
        return PsiValue(x, 0.0, method, 0)
    if method is PsiMethod.DIRECT_IDEALS:
        weights = lambda_K_direct(field, k)
    elif method is PsiMethod.CHARACTER_DECOMP:
        weights = lambda_K_character(field, k)
    else:
        raise DomainError(f'{method.value} is not a quadratic-field method')
    value = compensated_cumsum(weights)[-1]
    return PsiValue(x, float(value), method, int(np.count_nonzero(weights)))


# Empirical check of a bound

@dataclass
class VerificationReport:
    field: str
    formula: str
    x_max: int
    max_ratio: float
    argmax_x: float
    psi_at_argmax: float
    bound_at_argmax: float
    points: int

    @property
    def passed(self) -> bool:
        return self.max_ratio < 1

    def to_dict(self):
        return {
            'field': self.field,
            'formula': self.formula,
            'x_max': self.x_max,
            'max_ratio': self.max_ratio,
            'argmax_x': self.argmax_x,
            'psi_at_argmax': self.psi_at_argmax,
            'bound_at_argmax': self.bound_at_argmax,
            'points': self.points,
            'pass': self.passed,
        }


def verify_bound(field: Optional[QuadraticField], formula, x_max: int, stride: int = 1) -> VerificationReport:
    """
    max |psi_K(x) - x| / bound(x) over the validity range up to x_max.

    psi_K is a step function, so both x = k and the left limit x -> (k+1)- are
    checked at every sampled integer k. ``field`` is a QuadraticField, or None
    for the rationals.
    """
    # imported here: theorems pulls in the T-selection machinery
    from .theorems import BoundFormula, evaluate_on_grid

    if formula is BoundFormula.THM25:
        raise DomainError('thm2.5 depends on T and kappa; verify eq1.1 to eq1.5 instead')
    x_max = int(x_max)
    start = max(int(math.ceil(formula.validity_min_x)), 2)
    if x_max <= start:
        raise DomainError(f'{formula.identifier} requires x_max > {start} (got {x_max})')
    _check_limit(x_max + 1)

    if field is None:
        profile = rational_field()
        psi = _table_for(x_max + 1).psi_values[:x_max + 2]
        label = 'Q'
    else:
        profile = field.profile
        psi, _ = psi_quadratic_grid(field, x_max + 1)
        label = field.label

    ks = np.arange(start, x_max + 1, stride, dtype=np.int64)
    bound_here = evaluate_on_grid(formula, profile, ks)
    bound_next = evaluate_on_grid(formula, profile, ks + 1)
    ratio_here = np.abs(psi[ks] - ks) / bound_here
    ratio_left = np.abs(psi[ks] - (ks + 1)) / bound_next
    # the left limit at x_max + 1 lies outside the range
    ratio_left[ks == x_max] = 0.0

    i_here, i_left = int(np.argmax(ratio_here)), int(np.argmax(ratio_left))
    if ratio_here[i_here] >= ratio_left[i_left]:
        k = int(ks[i_here])
        report = VerificationReport(label, formula.identifier, x_max, float(ratio_here[i_here]),
                                    float(k), float(psi[k]), float(bound_here[i_here]), 2 * ks.size)
    else:
        k = int(ks[i_left])
        report = VerificationReport(label, formula.identifier, x_max, float(ratio_left[i_left]),
                                    float(k + 1), float(psi[k]), float(bound_next[i_left]), 2 * ks.size)

    log_method = logger.info if report.passed else logger.error
    log_method(f'verify {label} {formula.identifier} up to {x_max}: max ratio {report.max_ratio:.6f} '
               f'at x = {report.argmax_x:g}')
    return report
