'''
Evaluation of the shift bound kappa_d

For 0 <= k2 < k1 < family_size set a1 = k1 d + 1, a2 = k2 d + 1,
g = gcd(a1, a2), a1' = a1 / g and a2' = a2 / g. Each pair contributes

    d (k1 - k2) / g * rad(a1 a2 / g)

and kappa_d is the largest contribution. The shift actually realized by a
pair is h = s (a1' - a2') with s = rad(a1' a2'), which never exceeds the
pair's contribution.
'''
import logging
log = logging.getLogger(__name__)

import dataclasses
import functools
from math import gcd

import numpy as np

from .arithmetic import build_spf, factorize, radical
from .exceptions import InvalidArgumentError, ResourceLimitError, VerificationError
from . import parallel


DEFAULT_FAMILY_SIZE = 50

#: Largest value the vectorized path may produce.
INT64_LIMIT = 2 ** 63

#: Values as printed in the published table (d = 2..51).
PUBLISHED_KAPPA = {
    2: 227950, 3: 762120, 4: 1910900, 5: 3705990, 6: 6414480,
    7: 9506770, 8: 15169800, 9: 21580650, 10: 29582750, 11: 34729310,
    12: 51059232, 13: 64900550, 14: 81031650, 15: 93549750,
    # Printed as 12'0877'440.
    16: 120877440,
    17: 144970050, 18: 172052550, 19: 190261896, 20: 208224480,
    21: 272127030, 22: 313911312, 23: 337307880, 24: 407477400,
    25: 460516250, 26: 486298150, 27: 545455944, 28: 646820300,
    29: 675761016, 30: 795443250, 31: 825322920, 32: 965248800,
    33: 1058536050, 34: 1157648150, 35: 1110432750, 36: 1373988960,
    37: 1491697550, 38: 1425958094, 39: 1642680936, 40: 1884442560,
    41: 2022423810, 42: 2181407550, 43: 2201405640, 44: 2507943900,
    45: 2682771750, 46: 2865437520, 47: 2874316584, 48: 3255610800,
    49: 3463263650, 50: 3679563750, 51: 3665785650,
}


@dataclasses.dataclass(frozen=True)
class PairCandidate:
    d: int
    k1: int
    k2: int
    a1: int
    a2: int
    g: int
    a1p: int
    a2p: int
    s: int
    pair_value: int
    pair_h: int

    def as_record(self):
        return dataclasses.asdict(self)

    def check(self):
        '''
        Verify every invariant of the pair exactly

        Raises
        ------
        VerificationError
            Listing every invariant that failed.
        '''
        failures = []
        d, k1, k2 = self.d, self.k1, self.k2

        def expect(condition, message):
            if not condition:
                failures.append(message)

        expect(k1 > k2 >= 0, f'need k1 > k2 >= 0, got ({k1}, {k2})')
        expect(self.a1 == k1 * d + 1, 'a1 != k1 d + 1')
        expect(self.a2 == k2 * d + 1, 'a2 != k2 d + 1')
        expect(self.g == gcd(self.a1, self.a2), 'g != gcd(a1, a2)')
        expect(self.a1p * self.g == self.a1 and self.a2p * self.g == self.a2,
               'a1p, a2p are not a1 / g, a2 / g')
        expect(self.a1p > self.a2p, 'a1p <= a2p')
        expect(gcd(self.g, d) == 1, 'gcd(g, d) != 1')
        expect((k1 - k2) % self.g == 0, 'g does not divide k1 - k2')
        expect(self.s == radical(self.a1p * self.a2p), 's != rad(a1p a2p)')
        rad_quotient = radical(self.a1 * self.a2 // self.g)
        expect(rad_quotient == radical(self.a1 * self.a2), 'rad(a1 a2 / g) != rad(a1 a2)')
        expect(self.pair_value == d * ((k1 - k2) // self.g) * rad_quotient,
               'pair_value does not match its definition')
        expect(self.pair_h == self.s * (self.a1p - self.a2p),
               'pair_h != s (a1p - a2p)')
        expect(self.pair_value % d == 0, 'd does not divide pair_value')
        expect(self.pair_h % d == 0, 'd does not divide pair_h')
        expect(self.pair_h <= self.pair_value, 'pair_h > pair_value')
        if failures:
            raise VerificationError(failures)


@dataclasses.dataclass(frozen=True)
class KappaRow:
    d: int
    kappa: int
    argmax: PairCandidate
    trivial_bound: int
    family_size: int = DEFAULT_FAMILY_SIZE

    def as_record(self):
        return {
            'd': self.d,
            'kappa': self.kappa,
            'k1': self.argmax.k1,
            'k2': self.argmax.k2,
            'a1': self.argmax.a1,
            'a2': self.argmax.a2,
            'g': self.argmax.g,
            's': self.argmax.s,
            'pair_h': self.argmax.pair_h,
            'trivial_bound': self.trivial_bound,
        }


def _validate(d, family_size):
    if d < 1:
        raise InvalidArgumentError(f'd must be positive, got {d}')
    if family_size < 2:
        raise InvalidArgumentError(f'family_size must be at least 2, got {family_size}')


def trivial_bound(d, family_size=DEFAULT_FAMILY_SIZE):
    '''
    Closed-form upper bound on kappa_d

    For the default family size this is 49 d (48 d + 1)(49 d + 1). Other
    family sizes f use (f - 1) d ((f - 2) d + 1)((f - 1) d + 1).
    '''
    _validate(d, family_size)
    f = family_size
    return (f - 1) * d * ((f - 2) * d + 1) * ((f - 1) * d + 1)


def pair_candidate(d, k1, k2, spf=None):
    '''
    Compute every quantity derived from the pair (k1, k2)

    Parameters
    ----------
    d : int
        Positive integer.
    k1, k2 : int
        Family indices with k1 > k2 >= 0.
    spf : {None, SpfTable}
        Optional table used to factor a1 and a2.
    '''
    if d < 1:
        raise InvalidArgumentError(f'd must be positive, got {d}')
    if not k1 > k2 >= 0:
        raise InvalidArgumentError(f'Need k1 > k2 >= 0, got k1={k1}, k2={k2}')
    a1, a2 = k1 * d + 1, k2 * d + 1
    g = gcd(a1, a2)
    a1p, a2p = a1 // g, a2 // g
    f1, f2 = factorize(a1, spf), factorize(a2, spf)
    # a1 a2 / g = a1 a2' = a1' a2 has the same primes as a1 a2.
    rad_quotient = radical(f1 * f2)
    s = radical(factorize(a1p, spf) * factorize(a2p, spf))
    return PairCandidate(
        d=d, k1=k1, k2=k2, a1=a1, a2=a2, g=g, a1p=a1p, a2p=a2p, s=s,
        pair_value=d * ((k1 - k2) // g) * rad_quotient,
        pair_h=s * (a1p - a2p),
    )


def _spf_for(d, family_size):
    limit = max((family_size - 1) * d + 1, 2)
    try:
        return build_spf(limit)
    except ResourceLimitError:
        log.warning('Factoring family coefficients up to %d without a sieve', limit)
        return None


def _pair_values_int64(d, family_size, radicals):
    # Rows of tril_indices are k1 and columns k2, ordered lexicographically
    # by (k1, k2) so argmax returns the smallest maximizing pair.
    k1, k2 = np.tril_indices(family_size, -1)
    k = np.arange(family_size, dtype=np.int64)
    a = k * d + 1
    rad = np.asarray(radicals, dtype=np.int64)
    g = np.gcd(a[k1], a[k2])
    # rad(a1 a2) = lcm(rad(a1), rad(a2))
    lcm = rad[k1] // np.gcd(rad[k1], rad[k2]) * rad[k2]
    values = d * ((k1 - k2) // g) * lcm
    return k1, k2, values


def _best_pair_exact(d, family_size, radicals):
    best, best_pair = -1, None
    for k1 in range(1, family_size):
        a1 = k1 * d + 1
        for k2 in range(k1):
            a2 = k2 * d + 1
            r1, r2 = radicals[k1], radicals[k2]
            value = d * ((k1 - k2) // gcd(a1, a2)) * (r1 // gcd(r1, r2) * r2)
            if value > best:
                best, best_pair = value, (k1, k2)
    return best_pair


def kappa(d, family_size=DEFAULT_FAMILY_SIZE, spf=None):
    '''
    Evaluate kappa_d and the pair attaining it

    Ties are broken by the lexicographically smallest (k1, k2).

    Parameters
    ----------
    d : int
        Positive integer.
    family_size : int
        Number of polynomials in the family (k runs over 0..family_size-1).
    spf : {None, SpfTable}
        Table covering (family_size - 1) d + 1. Built on demand if missing
        or too small.

    Returns
    -------
    KappaRow
    '''
    _validate(d, family_size)
    if spf is None or (family_size - 1) * d + 1 not in spf:
        spf = _spf_for(d, family_size)
    bound = trivial_bound(d, family_size)
    radicals = [radical(factorize(k * d + 1, spf)) for k in range(family_size)]

    if bound < INT64_LIMIT:
        k1, k2, values = _pair_values_int64(d, family_size, radicals)
        i = int(np.argmax(values))
        best = int(k1[i]), int(k2[i])
    else:
        log.debug('Bound for d=%d exceeds int64, using exact integers', d)
        best = _best_pair_exact(d, family_size, radicals)

    pair = pair_candidate(d, *best, spf=spf)
    return KappaRow(d=d, kappa=pair.pair_value, argmax=pair,
                    trivial_bound=bound, family_size=family_size)


def kappa_naive(d, family_size=DEFAULT_FAMILY_SIZE):
    '''
    Evaluate kappa_d by factoring a1 a2 / g directly for every pair
    '''
    _validate(d, family_size)
    best = None
    for k1 in range(1, family_size):
        for k2 in range(k1):
            a1, a2 = k1 * d + 1, k2 * d + 1
            g = gcd(a1, a2)
            value = d * ((k1 - k2) // g) * radical(factorize(a1 * a2 // g))
            if best is None or value > best[0]:
                best = value, k1, k2
    pair = pair_candidate(d, best[1], best[2])
    return KappaRow(d=d, kappa=best[0], argmax=pair,
                    trivial_bound=trivial_bound(d, family_size),
                    family_size=family_size)


def _kappa_block(family_size, bounds):
    lb, ub = bounds
    spf = _spf_for(ub - 1, family_size)
    return [kappa(d, family_size, spf) for d in range(lb, ub)]


def kappa_table(d_from, d_to, family_size=DEFAULT_FAMILY_SIZE, jobs=1,
                block_size=None, cb=None):
    '''
    Evaluate kappa_d for every d_from <= d <= d_to

    Parameters
    ----------
    d_from, d_to : int
        Inclusive range of d.
    family_size : int
        Number of polynomials in the family.
    jobs : int
        Number of worker processes. Affects runtime only.
    block_size : {None, int}
        Number of consecutive d values handled per task.
    cb : {None, callable}
        Progress callback receiving the completed fraction.

    Returns
    -------
    list of KappaRow
        Rows in ascending order of d.
    '''
    if d_from < 1:
        raise InvalidArgumentError(f'd_from must be positive, got {d_from}')
    if d_from > d_to:
        raise InvalidArgumentError(f'Empty range: d_from={d_from} > d_to={d_to}')
    _validate(d_from, family_size)
    n = d_to - d_from + 1
    if block_size is None:
        block_size = max(1, min(256, -(-n // max(jobs, 1))))
    blocks = parallel.split_range(d_from, d_to + 1, block_size)
    fn = functools.partial(_kappa_block, family_size)
    rows = []
    for block in parallel.map_ordered(fn, blocks, jobs=jobs, cb=cb):
        rows.extend(block)
    log.info('Evaluated kappa_d for %d <= d <= %d', d_from, d_to)
    return rows


def compare_published(rows):
    '''
    List rows whose value differs from the published table

    Returns
    -------
    list of (int, int, int)
        (d, computed, published) for every mismatch. Rows outside the
        published range are ignored.
    '''
    mismatches = []
    for row in rows:
        published = PUBLISHED_KAPPA.get(row.d)
        if published is not None and row.family_size == DEFAULT_FAMILY_SIZE \
                and published != row.kappa:
            mismatches.append((row.d, row.kappa, published))
    return mismatches


def monotonicity_breaks(rows):
    '''
    Return every d whose kappa_d is smaller than kappa_{d-1}
    '''
    by_d = {row.d: row.kappa for row in rows}
    return [d for d in sorted(by_d) if d - 1 in by_d and by_d[d] < by_d[d - 1]]
