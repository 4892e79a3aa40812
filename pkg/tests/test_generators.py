import pytest

from oracles import brute_counts
from sptcong.errors import OracleCeilingExceeded
from sptcong.generators import (
    Statistic,
    enumerate_oracle,
    m2spt_series,
    overpartition_series,
    partition_series,
    podd_series,
    spt_series,
    sptbar1_exhaustive,
    sptbar1_series,
    statistic_series,
)

N = 41


@pytest.fixture(scope="module")
def series():
    return {s: statistic_series(s, 400) for s in Statistic}


def test_partition_examples():
    p = partition_series(60)
    assert p.q_coeff(0) == 1
    assert p.q_coeff(5) == 7
    assert p.q_coeff(50) == brute_counts(50)["p"] == 204226


def test_spt_examples():
    s = spt_series(10)
    assert s.q_coeff(5) == 14
    assert s.q_coeff(1) == 1
    assert s.q_coeff(4) == brute_counts(4)["spt"] == 10


def test_overpartition_examples():
    assert overpartition_series(10).q_coeff(4) == 14
    s = sptbar1_series(10)
    assert s.q_coeff(4) == 20
    assert s.q_coeff(6) == brute_counts(6)["sptbar1"] == sptbar1_exhaustive(6)


def test_m2_examples():
    assert m2spt_series(12).q_coeff(7) == 3
    assert podd_series(12).q_coeff(7) == 7
    assert m2spt_series(12).q_coeff(10) == brute_counts(10)["m2spt"]


def test_enumerate_oracle_examples():
    assert enumerate_oracle(Statistic.SPT, 5) == 14
    assert enumerate_oracle(Statistic.SPTBAR1, 4) == 20
    assert enumerate_oracle("m2spt", 7) == 3
    with pytest.raises(OracleCeilingExceeded):
        enumerate_oracle(Statistic.SPT, 500, ceiling=40)


@pytest.mark.parametrize("stat", list(Statistic), ids=lambda s: s.value)
def test_series_match_independent_enumeration(series, stat):
    for n in range(N):
        want = brute_counts(n)[stat.value]
        assert series[stat].q_coeff(n) == want, n
        assert enumerate_oracle(stat, n) == want, n


def test_sptbar1_oracle_matches_overpartition_listing():
    for n in range(1, 12):
        assert enumerate_oracle(Statistic.SPTBAR1, n) == sptbar1_exhaustive(n)


def test_spt_dominates_p(series):
    spt, p = series[Statistic.SPT], series[Statistic.P]
    assert all(spt.q_coeff(n) >= p.q_coeff(n) for n in range(1, 400))


def test_nonnegative_integers(series):
    for s in series.values():
        assert s.is_integral
        assert all(c >= 0 for _, c in s)


def test_classical_congruences_on_range():
    spt = spt_series(5001)
    for ell, b in ((5, 4), (7, 5), (13, 6)):
        assert all(spt.q_coeff(ell * n + b) % ell == 0 for n in range((5000 - b) // ell + 1))


def test_precision_validation():
    with pytest.raises(ValueError):
        spt_series(0)
