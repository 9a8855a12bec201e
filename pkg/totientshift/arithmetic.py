'''
Exact integer arithmetic: primality, factorization, Euler's totient, the
radical and a smallest-prime-factor sieve for batch factorization.
'''
import logging
log = logging.getLogger(__name__)

import dataclasses
from math import gcd, isqrt, prod

import numpy as np
from sympy import factorint, isprime
from sympy.ntheory.primetest import mr

from .config import get_config
from .exceptions import IntegerWidthError, InvalidArgumentError, ResourceLimitError


#: sympy's test is deterministic below this bound.
DETERMINISTIC_LIMIT = 2 ** 64

#: Every composite below PRIMALITY_LIMIT fails Miller-Rabin for one of these
#: bases.
WIDE_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
PRIMALITY_LIMIT = 3_317_044_064_679_887_385_961_981

SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n):
    '''
    Deterministic primality test

    Parameters
    ----------
    n : int
        Integer to test.

    Returns
    -------
    bool
        True if n is prime.

    Raises
    ------
    IntegerWidthError
        If n has no small factor and is too large for a proven answer.
    '''
    if n < 2:
        return False
    for p in SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < DETERMINISTIC_LIMIT:
        return isprime(n)
    if n >= PRIMALITY_LIMIT:
        raise IntegerWidthError(f'{n} exceeds the deterministic primality range')
    return mr(n, WIDE_BASES)


def prime_sieve(limit):
    '''
    Return a boolean mask where mask[i] is True if i is prime, 0 <= i <= limit
    '''
    mask = np.ones(max(limit, 1) + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if mask[p]:
            mask[p * p::p] = False
    return mask[:limit + 1]


@dataclasses.dataclass(frozen=True)
class Factorization:
    '''
    Prime factorization of a positive integer

    Attributes
    ----------
    factors : tuple of (int, int)
        (prime, exponent) pairs with strictly increasing primes. The empty
        tuple represents 1.
    '''
    factors: tuple = ()

    @classmethod
    def from_primes(cls, primes):
        counts = {}
        for p in primes:
            counts[p] = counts.get(p, 0) + 1
        return cls(tuple(sorted(counts.items())))

    @property
    def value(self):
        return prod(p ** e for p, e in self.factors)

    @property
    def primes(self):
        return tuple(p for p, _ in self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    def __mul__(self, other):
        if not isinstance(other, Factorization):
            return NotImplemented
        counts = dict(self.factors)
        for p, e in other.factors:
            counts[p] = counts.get(p, 0) + e
        return Factorization(tuple(sorted(counts.items())))

    def is_valid(self):
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1 or not is_prime(p):
                return False
            last = p
        return True


class SpfTable:
    '''
    Smallest-prime-factor table for 2 <= n <= limit

    The table is immutable once built and can be shared by workers.
    '''

    def __init__(self, spf):
        spf.setflags(write=False)
        self._spf = spf

    @property
    def limit(self):
        return len(self._spf) - 1

    def __getitem__(self, n):
        if not 2 <= n <= self.limit:
            raise KeyError(n)
        return int(self._spf[n])

    def __contains__(self, n):
        return 2 <= n <= self.limit

    def factorize(self, n):
        primes = []
        while n > 1:
            p = int(self._spf[n])
            primes.append(p)
            n //= p
        return Factorization.from_primes(primes)

    def __repr__(self):
        return f'<SpfTable up to {self.limit}>'


def build_spf(limit, memory_limit=None):
    '''
    Sieve the smallest prime factor of every integer up to `limit`

    Parameters
    ----------
    limit : int
        Largest integer covered. Must be at least 2.
    memory_limit : {None, int}
        Largest limit allowed. Defaults to the configured
        `spf_memory_limit`.

    Raises
    ------
    ResourceLimitError
        If `limit` exceeds the memory budget.
    '''
    if memory_limit is None:
        memory_limit = get_config().spf_memory_limit
    if limit < 2:
        raise InvalidArgumentError(f'SPF limit must be at least 2, got {limit}')
    if limit > memory_limit:
        raise ResourceLimitError(f'SPF limit {limit} exceeds memory budget of {memory_limit}')
    if limit >= 2 ** 32:
        raise IntegerWidthError(f'SPF limit {limit} does not fit in uint32')

    spf = np.zeros(limit + 1, dtype=np.uint32)
    for p in range(2, isqrt(limit) + 1):
        if spf[p] == 0:
            # Strided view; masked assignment writes through to spf.
            block = spf[p * p::p]
            block[block == 0] = p
    unset = np.flatnonzero(spf == 0)
    spf[unset] = unset
    log.debug('Built SPF table up to %d', limit)
    return SpfTable(spf)


def factorize(n, hint=None):
    '''
    Factor a positive integer

    Parameters
    ----------
    n : int
        Integer to factor, n >= 1.
    hint : {None, SpfTable}
        If provided and n is within the table, the table is used. Otherwise
        n is handed to `sympy.factorint`.

    Returns
    -------
    Factorization
    '''
    if n < 1:
        raise InvalidArgumentError(f'Can only factor positive integers, got {n}')
    if hint is not None and n in hint:
        return hint.factorize(n)
    factors = factorint(n)
    return Factorization(tuple(sorted((int(p), int(e)) for p, e in factors.items())))


def _as_factorization(f):
    if isinstance(f, Factorization):
        return f
    return factorize(f)


def radical(f):
    '''
    Product of the distinct primes of `f` (a Factorization or an integer)
    '''
    return prod(_as_factorization(f).primes)


def euler_phi(f):
    '''
    Euler's totient of `f` (a Factorization or an integer)
    '''
    return prod(p ** (e - 1) * (p - 1) for p, e in _as_factorization(f))


__all__ = [
    'gcd', 'is_prime', 'prime_sieve', 'Factorization', 'SpfTable',
    'build_spf', 'factorize', 'radical', 'euler_phi', 'PRIMALITY_LIMIT',
    'SMALL_PRIMES',
]
