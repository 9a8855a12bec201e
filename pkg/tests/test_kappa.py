from math import gcd

import pytest

from totientshift.arithmetic import factorize, radical
from totientshift.exceptions import InvalidArgumentError
from totientshift.kappa import (INT64_LIMIT, KappaRow, compare_published,
                                kappa, kappa_naive, kappa_table,
                                monotonicity_breaks, pair_candidate,
                                trivial_bound)


def test_pair_candidate_d2(pair_d2):
    assert (pair_d2.a1, pair_d2.a2, pair_d2.g) == (97, 47, 1)
    assert (pair_d2.a1p, pair_d2.a2p) == (97, 47)
    assert pair_d2.s == 4559
    assert pair_d2.pair_value == 227950
    assert pair_d2.pair_h == 227950
    pair_d2.check()


def test_pair_candidate_d3():
    pair = pair_candidate(3, 48, 24)
    assert (pair.a1, pair.a2, pair.g) == (145, 73, 1)
    assert pair.pair_value == 72 * radical(145 * 73) == 762120


def test_pair_candidate_d1(pair_d1):
    assert (pair_d1.a1, pair_d1.a2, pair_d1.g) == (2, 1, 1)
    assert pair_d1.pair_value == 2
    # s = rad(2 * 1) = 2
    assert pair_d1.s == 2
    assert pair_d1.pair_h == 2


def test_pair_candidate_with_common_factor():
    pair = pair_candidate(2, 7, 1)
    assert (pair.a1, pair.a2, pair.g) == (15, 3, 3)
    assert (pair.a1p, pair.a2p, pair.s) == (5, 1, 5)
    assert pair.pair_value == 60
    assert pair.pair_h == 20
    pair.check()


@pytest.mark.parametrize('k1, k2', [(3, 3), (2, 5), (1, -1)])
def test_pair_candidate_invalid(k1, k2):
    with pytest.raises(InvalidArgumentError):
        pair_candidate(2, k1, k2)


def test_pair_invariants_exact():
    for d in range(1, 31):
        for k1 in range(1, 50):
            for k2 in range(k1):
                pair_candidate(d, k1, k2).check()


def lcm(a, b):
    return a // gcd(a, b) * b


def test_pair_invariants_wide(spf_table):
    d_max = 1000
    rad = [0, 1] + [radical(factorize(n, spf_table)) for n in range(2, 49 * d_max + 2)]

    for d in range(1, d_max + 1):
        bound = trivial_bound(d)
        a = [k * d + 1 for k in range(50)]
        best = 0
        for k1 in range(1, 50):
            a1 = a[k1]
            for k2 in range(k1):
                a2 = a[k2]
                g = gcd(a1, a2)
                assert (k1 - k2) % g == 0
                assert gcd(g, d) == 1
                a1p, a2p = a1 // g, a2 // g
                assert (a1p - a2p) % d == 0
                # a1 a2 / g = a1 a2p
                rad_quotient = lcm(rad[a1], rad[a2p])
                assert rad_quotient == lcm(rad[a1], rad[a2])
                pair_value = d * ((k1 - k2) // g) * rad_quotient
                assert pair_value % d == 0
                pair_h = lcm(rad[a1p], rad[a2p]) * (a1p - a2p)
                assert pair_h % d == 0
                assert pair_h <= pair_value <= bound
                best = max(best, pair_value)
        if d % 100 == 0:
            assert kappa(d, spf=spf_table).kappa == best


@pytest.mark.parametrize('d, expected', [
    (1, 120050),
    (2, 941094),
    (51, 15300127500),
])
def test_trivial_bound(d, expected):
    assert trivial_bound(d) == expected


def test_trivial_bound_family_size():
    assert trivial_bound(2, 50) == 49 * 2 * 97 * 99
    assert trivial_bound(1, 2) == 1 * 1 * 1 * 2


@pytest.mark.parametrize('d, expected', [
    (2, 227950),
    (3, 762120),
    (16, 120877440),
    (25, 460516250),
    (51, 3665785650),
])
def test_kappa(d, expected):
    row = kappa(d)
    assert isinstance(row, KappaRow)
    assert row.kappa == expected
    assert row.argmax.pair_value == expected
    assert row.kappa < row.trivial_bound


def test_kappa_d2_argmax():
    row = kappa(2)
    assert (row.argmax.k1, row.argmax.k2) == (48, 23)
    assert row.as_record() == {
        'd': 2, 'kappa': 227950, 'k1': 48, 'k2': 23, 'a1': 97, 'a2': 47,
        'g': 1, 's': 4559, 'pair_h': 227950, 'trivial_bound': 941094,
    }


def test_kappa_small_family():
    row = kappa(1, family_size=2)
    assert row.kappa == 2
    assert (row.argmax.k1, row.argmax.k2) == (1, 0)


@pytest.mark.parametrize('d, family_size', [(0, 50), (2, 1)])
def test_kappa_invalid(d, family_size):
    with pytest.raises(InvalidArgumentError):
        kappa(d, family_size)


def test_kappa_matches_naive(spf_table):
    for d in range(1, 201):
        fast = kappa(d, spf=spf_table)
        naive = kappa_naive(d)
        assert fast.kappa == naive.kappa, d
        assert fast.argmax == naive.argmax, d


def test_kappa_exact_path():
    # Beyond d ~ 43000 the bound no longer fits in int64.
    d = 50_000
    assert trivial_bound(d) >= INT64_LIMIT
    row = kappa(d)
    assert row.kappa == kappa_naive(d).kappa
    assert row.kappa < row.trivial_bound


def test_kappa_table_published(published_kappa):
    rows = kappa_table(2, 51)
    assert [row.d for row in rows] == list(range(2, 52))
    assert {row.d: row.kappa for row in rows} == published_kappa
    assert compare_published(rows) == []


def test_kappa_table_single_row():
    rows = kappa_table(2, 2)
    assert len(rows) == 1
    assert rows[0].kappa == 227950


def test_kappa_table_matches_kappa():
    rows = kappa_table(5, 40, block_size=7)
    assert rows == [kappa(d) for d in range(5, 41)]


def test_kappa_table_jobs():
    expected = kappa_table(2, 120)
    assert kappa_table(2, 120, jobs=4) == expected
    assert kappa_table(2, 120, jobs=8, block_size=3) == expected


def test_kappa_table_progress():
    progress = []
    kappa_table(2, 20, block_size=5, cb=progress.append)
    assert progress[-1] == 1
    assert progress == sorted(progress)


def test_kappa_table_empty_range():
    with pytest.raises(InvalidArgumentError):
        kappa_table(5, 4)


def test_kappa_bound_holds():
    for row in kappa_table(2, 10_000, jobs=4):
        assert row.kappa < row.trivial_bound, row.d
        assert row.kappa % row.d == 0


def test_not_monotone():
    rows = kappa_table(2, 51)
    by_d = {row.d: row.kappa for row in rows}
    assert by_d[35] < by_d[34]
    assert by_d[38] < by_d[37]
    assert by_d[51] < by_d[50]
    assert monotonicity_breaks(rows) == [35, 38, 51]


def test_compare_published_reports_mismatch():
    row = kappa(16)
    altered = KappaRow(d=16, kappa=row.kappa + 1, argmax=row.argmax,
                       trivial_bound=row.trivial_bound)
    assert compare_published([altered]) == [(16, row.kappa + 1, 120877440)]
