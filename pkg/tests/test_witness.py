import dataclasses
import json

import pytest

from totientshift.arithmetic import euler_phi, factorize, is_prime
from totientshift.exceptions import (InvalidArgumentError, SearchBudgetExceeded,
                                     VerificationError)
from totientshift.kappa import kappa, pair_candidate
from totientshift.witness import (PairStrategy, Witness, build_witness, find_r,
                                  search_r, select_pair, stream_witnesses,
                                  verify_witness)


def test_find_r_first_hit(pair_d2):
    assert find_r(pair_d2, 1, 98, 108) == [108]
    hits = find_r(pair_d2, 1, 0, 400)
    assert hits[0] == 108
    assert hits == sorted(hits)
    for r in hits:
        assert is_prime(97 * r + 1) and is_prime(47 * r + 1)


def test_find_r_matches_linear_scan(pair_d2):
    expected = [r for r in range(98, 5001)
                if is_prime(97 * r + 1) and is_prime(47 * r + 1)]
    assert find_r(pair_d2, 1, 0, 5000) == expected
    assert find_r(pair_d2, 1, 0, 5000, jobs=3, chunk_size=300) == expected


def test_find_r_small_primes_not_filtered(pair_d1):
    # r = 6 gives (13, 7); both are small primes.
    assert find_r(pair_d1, 1, 2, 20) == [6, 18]


def test_find_r_empty_window(pair_d2):
    assert find_r(pair_d2, 1, 0, 97) == []


def test_find_r_invalid(pair_d2):
    with pytest.raises(InvalidArgumentError):
        find_r(pair_d2, 2, 0, 1000)
    with pytest.raises(InvalidArgumentError):
        find_r(pair_d2, 1, 500, 400)


def test_build_witness_d2(pair_d2):
    w = build_witness(pair_d2, 1, 108)
    assert (w.p1, w.p2) == (10477, 5077)
    assert w.m1 == 47 * 4559 * 10477 == 2244938221
    assert w.m2 == 97 * 4559 * 5077 == 2245166171
    assert w.h == 227950
    assert w.n == w.m1
    assert w.m2 - w.m1 == w.l * w.h
    assert w.phi_common == 2174314752
    assert euler_phi(factorize(2 * w.m1)) == euler_phi(factorize(2 * w.m2)) == 2174314752


def test_build_witness_d1(pair_d1):
    w = build_witness(pair_d1, 1, 6)
    assert (w.pair.a1p, w.pair.a2p, w.pair.s) == (2, 1, 2)
    assert (w.m1, w.m2, w.h) == (26, 28, 2)
    assert w.phi_common == 12
    assert (w.m2 - w.m1) % w.d == 0


def test_build_witness_rejects_bad_r(pair_d2):
    with pytest.raises(InvalidArgumentError):
        build_witness(pair_d2, 1, 100)
    with pytest.raises(InvalidArgumentError):
        build_witness(pair_d2, 1, 96)


def check_chain(w):
    d, n, h, l = w.d, w.n, w.h, w.l
    phi = lambda x: euler_phi(factorize(x))
    assert phi(d) * phi(n) == phi(d * n) == phi(d * (n + l * h))
    assert h % d == 0
    assert h <= kappa(d).kappa
    assert (max(w.m1, w.m2) - min(w.m1, w.m2)) // l == h
    assert w.p1 > d and w.p2 > d


@pytest.mark.parametrize('d, l', [(2, 1), (3, 1), (5, 2), (10, 3)])
def test_stream_witnesses(d, l):
    witnesses = stream_witnesses(d, l, 3)
    assert len(witnesses) == 3
    rs = [w.r for w in witnesses]
    assert rs == sorted(set(rs))
    assert len({w.n for w in witnesses}) == 3
    assert len({w.pair for w in witnesses}) == 1
    for w in witnesses:
        assert w.pair_strategy == 'argmax'
        check_chain(w)


def test_stream_witnesses_d2_headline():
    witnesses = stream_witnesses(2, 1, 3, PairStrategy.ARGMAX)
    assert all(w.h == 227950 for w in witnesses)
    assert witnesses[0].r == 108


def test_stream_witnesses_fixed():
    (w,) = stream_witnesses(3, 1, 1, 'fixed', k1=48, k2=24)
    assert w.h == pair_candidate(3, 48, 24).pair_h
    assert (w.pair.a1, w.pair.a2) == (145, 73)
    check_chain(w)


def test_stream_witnesses_r_start():
    (w,) = stream_witnesses(2, 1, 1, r_start=108)
    assert w.r > 108


def test_stream_witnesses_rejects_common_factor():
    with pytest.raises(InvalidArgumentError):
        stream_witnesses(2, 2, 1)


def test_search_budget(pair_d2):
    with pytest.raises(SearchBudgetExceeded):
        search_r(pair_d2, 1, 1, budget=10)
    assert search_r(pair_d2, 1, 2, initial_span=4) == find_r(pair_d2, 1, 0, 10 ** 5)[:2]


def test_select_pair():
    assert select_pair(2) == kappa(2).argmax
    assert select_pair(2, 'fixed', 48, 23) == pair_candidate(2, 48, 23)
    with pytest.raises(InvalidArgumentError):
        select_pair(2, 'fixed')
    with pytest.raises(InvalidArgumentError):
        select_pair(2, 'fixed', 50, 1)


def test_select_pair_scan_best():
    first = select_pair(3, 'scan-best', window=300)
    assert select_pair(3, PairStrategy.SCAN_BEST, window=300) == first
    first.check()
    (w,) = stream_witnesses(3, 1, 1, 'scan_best')
    assert w.pair_strategy == 'scan-best'
    check_chain(w)


def test_witness_record_round_trip(pair_d2):
    w = build_witness(pair_d2, 1, 108)
    record = json.loads(json.dumps(w.to_record()))
    assert record['k1'] == 48 and record['k2'] == 23
    assert Witness.from_record(record) == w
    with pytest.raises(InvalidArgumentError):
        Witness.from_record({'d': 2})
    record['pair']['k1'] = '48'
    with pytest.raises(InvalidArgumentError, match='k1'):
        Witness.from_record(record)


def test_verify_witness_bad_family_size(pair_d2):
    w = dataclasses.replace(build_witness(pair_d2, 1, 108), family_size=1)
    with pytest.raises(VerificationError) as excinfo:
        verify_witness(w)
    assert any('kappa' in f for f in excinfo.value.failures)


@pytest.mark.parametrize('field, delta', [
    ('m1', 1),
    ('m2', -1),
    ('h', 2),
    ('phi_common', 1),
    ('n', 1),
    ('p1', 2),
])
def test_verify_witness_detects_tampering(pair_d2, field, delta):
    w = build_witness(pair_d2, 1, 108)
    verify_witness(w)
    tampered = dataclasses.replace(w, **{field: getattr(w, field) + delta})
    with pytest.raises(VerificationError) as excinfo:
        verify_witness(tampered)
    assert excinfo.value.failures


def test_verify_witness_composite_r(pair_d2):
    w = build_witness(pair_d2, 1, 108)
    p1, p2 = 97 * 100 + 1, 47 * 100 + 1
    tampered = dataclasses.replace(w, r=100, p1=p1, p2=p2,
                                   m1=47 * 4559 * p1, m2=97 * 4559 * p2)
    with pytest.raises(VerificationError) as excinfo:
        verify_witness(tampered)
    assert any('not prime' in f for f in excinfo.value.failures)
