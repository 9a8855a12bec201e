'''
Linear polynomial families and admissibility certificates.

A family f_1, ..., f_m is admissible when no prime divides the product
f_1(n)...f_m(n) for every n. The family built from A(d) consists of
(kd + 1)x + 1 for 0 <= k < family_size.
'''
import logging
log = logging.getLogger(__name__)

import dataclasses
import enum
import functools
from math import gcd, log10, prod
from typing import Optional, Tuple

import numpy as np

from .arithmetic import factorize, is_prime, prime_sieve
from .exceptions import InvalidArgumentError
from . import parallel


class Method(enum.Enum):
    RESIDUE = 'residue'
    COPRIMALITY = 'coprimality'
    BOTH = 'both'


@dataclasses.dataclass(frozen=True)
class LinearPolynomial:
    a: int
    b: int

    def __post_init__(self):
        if self.a < 1:
            raise InvalidArgumentError(f'Leading coefficient must be positive, got {self.a}')

    def __call__(self, x):
        return self.a * x + self.b

    def root_class(self, p):
        '''
        Residue class mod p on which this polynomial vanishes

        Returns None if there is no root and p if every class is a root
        (p divides both coefficients).
        '''
        if self.a % p:
            return (-self.b * pow(self.a, -1, p)) % p
        if self.b % p == 0:
            return p
        return None

    def __str__(self):
        if self.b == 0:
            return f'{self.a}x'
        sign = '+' if self.b > 0 else '-'
        return f'{self.a}x {sign} {abs(self.b)}'


@dataclasses.dataclass(frozen=True)
class PolynomialFamily:
    polys: Tuple[LinearPolynomial, ...]
    d: Optional[int] = None
    family_size: Optional[int] = None

    def __post_init__(self):
        if not self.polys:
            raise InvalidArgumentError('A polynomial family cannot be empty')
        if self.family_size is None:
            object.__setattr__(self, 'family_size', len(self.polys))

    @classmethod
    def from_coeffs(cls, text):
        '''
        Parse a family written as "a,b:a,b:...", e.g. "1,0:1,1" for {x, x+1}
        '''
        polys = []
        for item in text.split(':'):
            try:
                a, b = (int(v) for v in item.split(','))
            except ValueError:
                raise InvalidArgumentError(f'Cannot parse polynomial {item!r}; expected "a,b"')
            polys.append(LinearPolynomial(a, b))
        return cls(tuple(polys))

    @property
    def coefficients(self):
        return [p.a for p in self.polys]

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __str__(self):
        return '{' + ', '.join(str(p) for p in self.polys) + '}'


@dataclasses.dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    method: Method
    obstruction_prime: Optional[int] = None
    certificate: Optional[Tuple[int, int]] = None
    certificate_gcd: Optional[int] = None
    inconclusive: bool = False

    def as_record(self):
        '''
        Flat record for output

        Certificate integers have thousands of digits, so they are written
        as hexadecimal strings together with their decimal digit counts.
        '''
        record = {
            'admissible': self.admissible,
            'inconclusive': self.inconclusive,
            'method': self.method.value,
            'obstruction_prime': self.obstruction_prime,
        }
        if self.certificate is not None:
            p1, pp1 = self.certificate
            record['certificate_gcd'] = self.certificate_gcd
            record['p1_digits'] = decimal_digits(p1)
            record['pp1_digits'] = decimal_digits(pp1)
            record['p1'] = hex(p1)
            record['pp1'] = hex(pp1)
        return record


def decimal_digits(n):
    '''
    Number of decimal digits of n, without converting n to a string
    '''
    n = abs(n)
    if n < 10:
        return 1
    k = int((n.bit_length() - 1) * log10(2))
    while k > 0 and 10 ** k > n:
        k -= 1
    while 10 ** (k + 1) <= n:
        k += 1
    return k + 1


def build_family(d, family_size=50):
    '''
    Family {(kd + 1)x + 1 : 0 <= k < family_size}
    '''
    if d < 1:
        raise InvalidArgumentError(f'd must be positive, got {d}')
    if family_size < 2:
        raise InvalidArgumentError(f'family_size must be at least 2, got {family_size}')
    polys = tuple(LinearPolynomial(k * d + 1, 1) for k in range(family_size))
    return PolynomialFamily(polys, d=d, family_size=family_size)


def candidate_primes(fam):
    '''
    Primes that could be a fixed divisor of the family

    A polynomial with p not dividing its leading coefficient vanishes on
    exactly one class mod p, so a prime larger than the number of
    polynomials can only be a fixed divisor if it divides both coefficients
    of some member.
    '''
    mask = prime_sieve(len(fam))
    primes = {int(p) for p in np.flatnonzero(mask)}
    for poly in fam:
        g = gcd(poly.a, poly.b)
        if g > 1:
            primes.update(factorize(g).primes)
    return sorted(primes)


def covers_all_classes(fam, p):
    covered = set()
    for poly in fam:
        root = poly.root_class(p)
        if root == p:
            return True
        if root is not None:
            covered.add(root)
    return len(covered) == p


def check_admissible_residue(fam):
    for p in candidate_primes(fam):
        if covers_all_classes(fam, p):
            log.info('%s has fixed prime divisor %d', fam, p)
            return AdmissibilityReport(False, Method.RESIDUE, obstruction_prime=p)
    return AdmissibilityReport(True, Method.RESIDUE)


def coprimality_certificate(fam):
    '''
    Return (P(1), P(P(1))) for P(x) = prod(a x + 1), as exact integers
    '''
    bad = [str(p) for p in fam if p.b != 1]
    if bad:
        raise InvalidArgumentError('Coprimality certificate requires constant term 1; '
                                   f'got {", ".join(bad)}')
    p1 = prod(p.a + 1 for p in fam)
    pp1 = prod(p.a * p1 + 1 for p in fam)
    return p1, pp1


def check_admissible_coprimality(fam):
    '''
    Admissibility via gcd(P(1), P(P(1))) = 1

    Any prime dividing P(n) for every n divides both P(1) and P(P(1)), so a
    gcd of 1 certifies admissibility. A larger gcd proves nothing and the
    report is marked inconclusive.
    '''
    p1, pp1 = coprimality_certificate(fam)
    g = gcd(p1, pp1)
    return AdmissibilityReport(admissible=(g == 1), method=Method.COPRIMALITY,
                               certificate=(p1, pp1), certificate_gcd=g,
                               inconclusive=(g != 1))


def check_admissible(fam, method=Method.BOTH):
    method = Method(method)
    if method == Method.RESIDUE:
        return check_admissible_residue(fam)
    if method == Method.COPRIMALITY:
        return check_admissible_coprimality(fam)
    residue = check_admissible_residue(fam)
    if any(p.b != 1 for p in fam):
        log.info('No coprimality certificate for %s; constant terms differ from 1', fam)
        return dataclasses.replace(residue, method=Method.BOTH)
    cert = check_admissible_coprimality(fam)
    if cert.admissible and not residue.admissible:
        # The certificate is a proof; disagreement is a bug.
        raise AssertionError(f'Certificate and residue test disagree for {fam}')
    return dataclasses.replace(residue, method=Method.BOTH,
                               certificate=cert.certificate,
                               certificate_gcd=cert.certificate_gcd)


def _scan_chunk(polys, min_hits, bounds):
    lb, ub = bounds
    hits = []
    for n in range(lb, ub):
        indices = [i for i, poly in enumerate(polys) if is_prime(poly(n))]
        if len(indices) >= min_hits:
            hits.append((n, indices))
    return hits


def scan_simultaneous_primes(fam, n_limit, min_hits=2, jobs=1, chunk_size=65536):
    '''
    Find n <= n_limit where at least `min_hits` members are prime

    Parameters
    ----------
    fam : PolynomialFamily
        Family to scan. Must be admissible.
    n_limit : int
        Largest n scanned; n runs from 1.
    min_hits : int
        Minimum number of members that must be prime simultaneously.
    jobs : int
        Number of worker processes.

    Returns
    -------
    list of (int, list of int)
        n and the indices of the members prime at n, ordered by n.
    '''
    if min_hits < 2:
        raise InvalidArgumentError(f'min_hits must be at least 2, got {min_hits}')
    report = check_admissible_residue(fam)
    if not report.admissible:
        raise InvalidArgumentError(f'{fam} is not admissible '
                                   f'(fixed prime divisor {report.obstruction_prime})')
    if min_hits > len(fam):
        return []

    fn = functools.partial(_scan_chunk, fam.polys, min_hits)
    chunks = parallel.split_range(1, n_limit + 1, chunk_size)
    hits = []
    for result in parallel.map_ordered(fn, chunks, jobs=jobs):
        hits.extend(result)
    log.info('Found %d n <= %d with at least %d prime members', len(hits), n_limit, min_hits)
    return hits
