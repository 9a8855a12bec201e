'''
Construction and exact verification of totient witnesses.

For a pair (a1, a2) from A(d), l coprime to d and r with p1 = a1' r + 1 and
p2 = a2' r + 1 both prime,

    m1 = a2' l s p1,    m2 = a1' l s p2

satisfy phi(d m1) = phi(d m2) and m2 - m1 = l s (a1' - a2') = l h. Taking
n = min(m1, m2) gives phi(d) phi(n) = phi(d n) = phi(d (n + l h)).
'''
import logging
log = logging.getLogger(__name__)

import dataclasses
import enum
import functools
from math import gcd

import numpy as np

from .arithmetic import (Factorization, SMALL_PRIMES, euler_phi, factorize,
                         is_prime, prime_sieve)
from .config import get_config
from .exceptions import (InvalidArgumentError, SearchBudgetExceeded,
                         TotientShiftError, VerificationError)
from .kappa import DEFAULT_FAMILY_SIZE, PairCandidate, kappa, pair_candidate
from . import parallel


#: Values above this are filtered with Python integers instead of int64.
WHEEL_LIMIT = 2 ** 62


class PairStrategy(enum.Enum):
    ARGMAX = 'argmax'
    FIXED = 'fixed'
    SCAN_BEST = 'scan-best'

    @classmethod
    def _missing_(cls, value):
        if isinstance(value, str):
            value = value.replace('_', '-').lower()
            for member in cls:
                if member.value == value:
                    return member
        return None


@dataclasses.dataclass(frozen=True)
class Witness:
    d: int
    l: int
    pair: PairCandidate
    r: int
    p1: int
    p2: int
    m1: int
    m2: int
    n: int
    h: int
    phi_common: int
    family_size: int = DEFAULT_FAMILY_SIZE
    pair_strategy: str = PairStrategy.FIXED.value

    def to_record(self):
        return {
            'd': self.d,
            'l': self.l,
            'k1': self.pair.k1,
            'k2': self.pair.k2,
            'pair': self.pair.as_record(),
            'r': self.r,
            'p1': self.p1,
            'p2': self.p2,
            'm1': self.m1,
            'm2': self.m2,
            'n': self.n,
            'h': self.h,
            'phi_common': self.phi_common,
            'family_size': self.family_size,
            'pair_strategy': self.pair_strategy,
        }

    @classmethod
    def from_record(cls, record):
        try:
            pair_record = dict(record['pair'])
            fields = {f.name: record[f.name] for f in dataclasses.fields(cls)
                      if f.name != 'pair'}
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidArgumentError(f'Malformed witness record: {e}')
        for name, value in [*pair_record.items(), *fields.items()]:
            if name == 'pair_strategy':
                continue
            if not isinstance(value, int) or isinstance(value, bool):
                raise InvalidArgumentError(f'Witness field {name} must be an integer, '
                                           f'got {value!r}')
        try:
            pair = PairCandidate(**pair_record)
        except TypeError as e:
            raise InvalidArgumentError(f'Malformed witness pair: {e}')
        return cls(pair=pair, **fields)


def _check_coprime(d, l):
    if d < 1 or l < 1:
        raise InvalidArgumentError(f'd and l must be positive, got d={d}, l={l}')
    if gcd(d, l) != 1:
        raise InvalidArgumentError(f'l must be coprime to d; gcd({d}, {l}) = {gcd(d, l)}')


def _wheel_filter(a1p, a2p, lb, ub):
    r = np.arange(lb, ub, dtype=np.int64)
    keep = np.ones(len(r), dtype=bool)
    for q in SMALL_PRIMES:
        rq = r % q
        for a in (a1p, a2p):
            divisible = ((a % q) * rq + 1) % q == 0
            # The value may be the small prime itself.
            keep &= ~divisible | (a * r + 1 == q)
    return [int(x) for x in r[keep]]


def _find_r_chunk(a1p, a2p, bounds):
    lb, ub = bounds
    if a1p * ub + 1 < WHEEL_LIMIT:
        candidates = _wheel_filter(a1p, a2p, lb, ub)
    else:
        candidates = range(lb, ub)
    return [r for r in candidates if is_prime(a1p * r + 1) and is_prime(a2p * r + 1)]


def find_r(pair, l, r_start, r_limit, jobs=1, chunk_size=None, cb=None):
    '''
    Find every r making a1' r + 1 and a2' r + 1 simultaneously prime

    Parameters
    ----------
    pair : PairCandidate
        Pair supplying a1' and a2'.
    l : int
        Positive integer coprime to pair.d.
    r_start : int
        Only r > max(r_start, a1, l) are considered.
    r_limit : int
        Largest r considered.
    jobs : int
        Number of worker processes.

    Returns
    -------
    list of int
        Qualifying r in ascending order. An empty window gives an empty
        list.
    '''
    _check_coprime(pair.d, l)
    if r_limit <= r_start:
        raise InvalidArgumentError(f'r_limit ({r_limit}) must exceed r_start ({r_start})')
    if chunk_size is None:
        chunk_size = get_config().chunk_size
    lower = max(r_start, pair.a1, l)
    chunks = parallel.split_range(lower + 1, r_limit + 1, chunk_size)
    fn = functools.partial(_find_r_chunk, pair.a1p, pair.a2p)
    hits = []
    for result in parallel.map_ordered(fn, chunks, jobs=jobs, cb=cb):
        hits.extend(result)
    log.debug('Found %d r in (%d, %d]', len(hits), lower, r_limit)
    return hits


def build_witness(pair, l, r, family_size=DEFAULT_FAMILY_SIZE,
                  pair_strategy=PairStrategy.FIXED, kappa_value=None):
    '''
    Assemble the witness for (pair, l, r) and verify it

    Raises
    ------
    InvalidArgumentError
        If r is not an admissible choice for the pair.
    VerificationError
        If any identity fails to hold exactly.
    '''
    d = pair.d
    _check_coprime(d, l)
    if r <= max(pair.a1, l):
        raise InvalidArgumentError(f'r must exceed max(a1, l) = {max(pair.a1, l)}, got {r}')
    p1, p2 = pair.a1p * r + 1, pair.a2p * r + 1
    if not (is_prime(p1) and is_prime(p2)):
        raise InvalidArgumentError(f'r={r} does not give a prime pair ({p1}, {p2})')

    s = pair.s
    m1 = pair.a2p * l * s * p1
    m2 = pair.a1p * l * s * p2
    n = min(m1, m2)

    # Assemble phi(d n) from known blocks; p1 and p2 are certified above.
    blocks = factorize(d) * factorize(l * s)
    if n == m1:
        f_dn = blocks * factorize(pair.a2p) * Factorization(((p1, 1),))
    else:
        f_dn = blocks * factorize(pair.a1p) * Factorization(((p2, 1),))
    if f_dn.value != d * n:
        raise VerificationError(f'Assembled factorization of d n does not multiply to {d * n}')

    witness = Witness(
        d=d, l=l, pair=pair, r=r, p1=p1, p2=p2, m1=m1, m2=m2, n=n,
        h=pair.pair_h, phi_common=euler_phi(f_dn), family_size=family_size,
        pair_strategy=PairStrategy(pair_strategy).value,
    )
    verify_witness(witness, kappa_value)
    return witness


def verify_witness(witness, kappa_value=None):
    '''
    Recompute every invariant of a witness from scratch

    Parameters
    ----------
    witness : Witness
        Witness to check. Only d, l, k1, k2, r and family_size are trusted;
        every other field is recomputed and compared.
    kappa_value : {None, int}
        kappa_d for the witness' d and family size. Computed if None.

    Raises
    ------
    VerificationError
        Listing every failed check.
    '''
    w = witness
    failures = []

    def expect(condition, message):
        if not condition:
            failures.append(message)

    try:
        _check_coprime(w.d, w.l)
        pair = pair_candidate(w.d, w.pair.k1, w.pair.k2)
    except InvalidArgumentError as e:
        raise VerificationError(str(e))

    d, l, r = w.d, w.l, w.r
    expect(w.pair == pair, 'stored pair does not match recomputed pair')
    expect(pair.k1 < w.family_size, 'k1 outside the family')
    expect(r > max(pair.a1, l), f'r={r} does not exceed max(a1, l)')
    expect(w.p1 == pair.a1p * r + 1, 'p1 != a1p r + 1')
    expect(w.p2 == pair.a2p * r + 1, 'p2 != a2p r + 1')
    try:
        expect(is_prime(w.p1), f'p1={w.p1} is not prime')
        expect(is_prime(w.p2), f'p2={w.p2} is not prime')
    except TotientShiftError as e:
        failures.append(str(e))
    expect(w.p1 != w.p2, 'p1 == p2')
    expect(w.p1 > d and w.p2 > d, 'p1 or p2 does not exceed d')

    s = pair.s
    expect(w.m1 == pair.a2p * l * s * w.p1, 'm1 != a2p l s p1')
    expect(w.m2 == pair.a1p * l * s * w.p2, 'm2 != a1p l s p2')
    expect(w.h == pair.pair_h, 'h != s (a1p - a2p)')
    expect(w.n == min(w.m1, w.m2), 'n != min(m1, m2)')
    expect(max(w.m1, w.m2) - min(w.m1, w.m2) == l * w.h, '|m2 - m1| != l h')
    expect(w.h % d == 0, 'd does not divide h')
    if kappa_value is None:
        try:
            kappa_value = kappa(d, w.family_size).kappa
        except InvalidArgumentError as e:
            failures.append(f'cannot evaluate kappa_d: {e}')
    if kappa_value is not None:
        expect(w.h <= kappa_value, f'h={w.h} exceeds kappa_d={kappa_value}')

    for name, value in (('a1p', pair.a1p), ('a2p', pair.a2p), ('s', s),
                        ('l', l), ('m1', w.m1), ('m2', w.m2)):
        expect(gcd(d, value) == 1, f'{name} is not coprime to d')

    if failures or min(w.m1, w.m2) < 1:
        raise VerificationError(failures or ['m1 and m2 must be positive'])

    try:
        phi_d = euler_phi(factorize(d))
        phi_dm1 = euler_phi(factorize(d * w.m1))
        phi_dm2 = euler_phi(factorize(d * w.m2))
        phi_n = euler_phi(factorize(w.n))
        phi_ls = euler_phi(factorize(l * s))
    except TotientShiftError as e:
        raise VerificationError(str(e))

    expect(phi_dm1 == phi_dm2, 'phi(d m1) != phi(d m2)')
    expect(w.phi_common == phi_dm1, 'phi_common != phi(d m1)')
    expect(phi_d * phi_n == euler_phi(factorize(d * w.n)), 'phi(d) phi(n) != phi(d n)')
    expect(euler_phi(factorize(d * (w.n + l * w.h))) == w.phi_common,
           'phi(d (n + l h)) != phi_common')
    chain = phi_d * pair.a1p * pair.a2p * r * phi_ls
    expect(phi_d * pair.a2p * phi_ls * (w.p1 - 1) == chain, 'structural chain fails for m1')
    expect(phi_d * pair.a1p * phi_ls * (w.p2 - 1) == chain, 'structural chain fails for m2')
    expect(chain == phi_dm1, 'structural chain disagrees with factorization')
    if failures:
        raise VerificationError(failures)


def _pair_counts(pairs, lb, ub, memory_limit):
    r = np.arange(lb, ub, dtype=np.int64)
    a_max = max(p.a1p for p in pairs)
    limit = a_max * (ub - 1) + 1
    if limit <= memory_limit:
        mask = prime_sieve(limit)
        return [int(np.count_nonzero(mask[p.a1p * r + 1] & mask[p.a2p * r + 1]))
                for p in pairs]
    return [sum(1 for x in range(lb, ub)
                if is_prime(p.a1p * x + 1) and is_prime(p.a2p * x + 1))
            for p in pairs]


def select_pair(d, strategy=PairStrategy.ARGMAX, k1=None, k2=None, l=1,
                family_size=DEFAULT_FAMILY_SIZE, window=None):
    '''
    Choose the pair (k1, k2) used to build witnesses

    Parameters
    ----------
    strategy : PairStrategy
        `argmax` uses the pair attaining kappa_d, `fixed` uses (k1, k2) and
        `scan-best` picks the pair with the most prime pairs in a common
        trial window of r values.
    window : {None, int}
        Width of the scan-best trial window.
    '''
    strategy = PairStrategy(strategy)
    if strategy == PairStrategy.ARGMAX:
        return kappa(d, family_size).argmax
    if strategy == PairStrategy.FIXED:
        if k1 is None or k2 is None:
            raise InvalidArgumentError('The fixed strategy requires k1 and k2')
        if k1 >= family_size:
            raise InvalidArgumentError(f'k1 must be below the family size {family_size}')
        return pair_candidate(d, k1, k2)

    cfg = get_config()
    if window is None:
        window = cfg.scan_best_window
    pairs = [pair_candidate(d, i, j) for i in range(1, family_size) for j in range(i)]
    lb = max((family_size - 1) * d + 1, l) + 1
    counts = _pair_counts(pairs, lb, lb + window, cfg.spf_memory_limit)
    # Pairs are listed in lexicographic (k1, k2) order; argmax keeps the
    # first of equal counts.
    best = int(np.argmax(counts))
    log.info('scan-best selected (k1, k2) = (%d, %d) with %d prime pairs in %d trials',
             pairs[best].k1, pairs[best].k2, counts[best], window)
    return pairs[best]


def search_r(pair, l, count, r_start=None, initial_span=None, growth=None,
             budget=None, jobs=1):
    '''
    Collect the first `count` qualifying r, widening the window as needed

    Raises
    ------
    SearchBudgetExceeded
        If more than `budget` candidates are examined first.
    '''
    cfg = get_config()
    initial_span = initial_span or cfg.r_initial_span
    growth = growth or cfg.r_growth
    budget = budget or cfg.r_budget

    lower = max(r_start or 0, pair.a1, l)
    span, examined, found = initial_span, 0, []
    while len(found) < count:
        span = min(span, budget - examined)
        if span <= 0:
            raise SearchBudgetExceeded(
                f'Found {len(found)} of {count} r after examining {examined} candidates')
        found.extend(find_r(pair, l, lower, lower + span, jobs=jobs))
        examined += span
        lower += span
        if len(found) < count:
            log.info('Widening r search beyond %d (%d of %d found)', lower, len(found), count)
        span *= growth
    return found[:count]


def stream_witnesses(d, l, count, pair_strategy=PairStrategy.ARGMAX, k1=None,
                     k2=None, family_size=DEFAULT_FAMILY_SIZE, r_start=None,
                     budget=None, jobs=1):
    '''
    Build `count` verified witnesses sharing one pair, in increasing r

    Parameters
    ----------
    d, l : int
        Positive, coprime integers.
    count : int
        Number of witnesses.
    pair_strategy : PairStrategy
        How the pair is chosen; see `select_pair`.
    r_start : {None, int}
        Only r > r_start are used.
    budget : {None, int}
        Maximum number of r candidates examined.

    Returns
    -------
    list of Witness
    '''
    _check_coprime(d, l)
    if count < 1:
        raise InvalidArgumentError(f'count must be positive, got {count}')
    strategy = PairStrategy(pair_strategy)
    pair = select_pair(d, strategy, k1, k2, l=l, family_size=family_size)
    rs = search_r(pair, l, count, r_start=r_start, budget=budget, jobs=jobs)
    kappa_value = kappa(d, family_size).kappa
    witnesses = []
    for r in rs:
        witnesses.append(build_witness(pair, l, r, family_size, strategy, kappa_value))
    log.info('Built %d witnesses for d=%d, l=%d with h=%d', len(witnesses), d, l, pair.pair_h)
    return witnesses
