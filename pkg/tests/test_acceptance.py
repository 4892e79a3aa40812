"""The twelve acceptance criteria, each at its stated range and tolerance."""

import random
import time

import pytest

import properties
from acceptance_log import criterion
from oracles import brute_counts
from sptcong import cache
from sptcong.generators import Statistic, enumerate_oracle, statistic_series
from sptcong.numtheory import TRIVIAL, CharacterSpec, kronecker
from sptcong.verify import (
    Family,
    Identity,
    check_congruence_family,
    check_eigenform,
    check_gbar_ladder,
    check_hecke_congruence,
    check_identity,
    check_principal_ladder,
    classical_family,
    garvan_pair_family,
    m2spt_odd_family,
    m2spt_square_family,
    spt_odd_family,
    spt_square_family,
    sptbar1_odd_family,
    sptbar1_square_family,
    sturm_certify,
)


@pytest.fixture
def cold():
    cache.clear_memory()
    yield
    cache.clear_memory()


def _verified(rep):
    assert rep.status == "verified", (rep.claim_id, rep.first_failure, rep.notes)
    assert rep.checked > 0


def test_criterion_01_classical(cold):
    with criterion(1, "spt(5n+4), spt(7n+5), spt(13n+6) to 50000 in under 20 s"):
        t0 = time.perf_counter()
        for ell in (5, 7, 13):
            _verified(check_congruence_family(classical_family(ell), 50_000))
        assert time.perf_counter() - t0 < 20


def test_criterion_02_spt_families(cold):
    with criterion(2, "spt square and odd-power families to 10^5 in under 60 s"):
        t0 = time.perf_counter()
        for ell, m in ((5, 1), (7, 1), (11, 1), (13, 1), (5, 2)):
            _verified(check_congruence_family(spt_square_family(ell, m), 100_000))
        for ell in (5, 7, 11, 13):
            fam = spt_odd_family(ell, 1)
            assert fam.factor == kronecker(3, ell)
            _verified(check_congruence_family(fam, 100_000))
        assert time.perf_counter() - t0 < 60


def test_criterion_03_hecke_mstar():
    with criterion(3, "F_m of M* vanishes mod ell^m (5,1), (5,2) at N=96 and (7,1) at N=200"):
        for ell, m, N in ((5, 1, 96), (5, 2, 96), (7, 1, 200)):
            rep = check_hecke_congruence("mstar", ell, m, N)
            _verified(rep)
            assert rep.parameters["source_precision"] == ell ** (2 * m) * N


def test_criterion_04_sptbar1():
    with criterion(4, "sptbar1 square and odd-power families to 5*10^4"):
        for ell, m in ((3, 1), (3, 2), (5, 1)):
            _verified(check_congruence_family(sptbar1_square_family(ell, m), 50_000))
        for ell in (3, 5):
            _verified(check_congruence_family(sptbar1_odd_family(ell, 1), 50_000))


def test_criterion_05_m2spt():
    with criterion(5, "M2spt square and odd-power families with the (2/ell) sign"):
        for ell, m in ((3, 1), (3, 2), (5, 1)):
            _verified(check_congruence_family(m2spt_square_family(ell, m), 50_000))
        for ell in (3, 5):
            fam = m2spt_odd_family(ell, 1)
            assert fam.factor == kronecker(2, ell)
            _verified(check_congruence_family(fam, 50_000))


def test_criterion_06_identities():
    with criterion(6, "identities 4Mbar+fbar, M2 class numbers, eta quotient, both decompositions"):
        for ident, N in ((Identity.FOUR_MBAR_PLUS_FBAR, 400), (Identity.M2_CLASS_NUMBERS, 2000),
                         (Identity.CLASS_NUMBER_ETA, 500), (Identity.MBAR_DECOMPOSITION, 300),
                         (Identity.M2_DECOMPOSITION, 300)):
            _verified(check_identity(ident, N))


def test_criterion_07_eigenforms():
    with criterion(7, "Mbar and M2 are T(ell^2) eigenforms with eigenvalue ell+1, ell = 3, 5, 7"):
        for name in ("mbar", "m2"):
            for ell in (3, 5, 7):
                _verified(check_eigenform(name, ell, ell + 1, N=200))


def test_criterion_08_ladders():
    with criterion(8, "principal-part ladders for M* and Gbar"):
        for ell in (5, 7, 11, 13):
            for m in (1, 2):
                _verified(check_principal_ladder(ell, m))
        for m in (1, 2):
            _verified(check_gbar_ladder(3, m))


def test_criterion_09_sturm(cold):
    with criterion(9, "Sturm certificates with positive margin in under 120 s"):
        t0 = time.perf_counter()
        cases = [(5, 1, Family.SPT), (7, 1, Family.SPT), (3, 1, Family.OVERPARTITION),
                 (3, 2, Family.OVERPARTITION), (5, 1, Family.OVERPARTITION)]
        for ell, m, fam in cases:
            rep = sturm_certify(ell, m, fam)
            _verified(rep)
            assert rep.parameters["margin"] > 0
        assert time.perf_counter() - t0 < 120


def test_criterion_10_oracles():
    with criterion(10, "all six generating functions equal enumeration for n <= 40"):
        for stat in Statistic:
            s = statistic_series(stat, 41)
            for n in range(41):
                assert s.q_coeff(n) == enumerate_oracle(stat, n) == brute_counts(n)[stat.value]


def test_criterion_11_properties():
    with criterion(11, "ring, derivation, Hecke and closed-form property suites"):
        for seed in range(200):
            rng = random.Random(seed)
            a, b, c = (properties.random_series(rng, integral=False) for _ in range(3))
            properties.check_ring_laws(a, b, c)
            properties.check_inverse(a)
            i, j = properties.random_series(rng), properties.random_series(rng)
            properties.check_derivation(i, j)
            properties.check_dilate_rescale(i, j, rng.randint(1, 30))
            properties.check_precision_soundness(rng)
        for seed in range(50):
            rng = random.Random(1000 + seed)
            ell = rng.choice([3, 5, 7])
            F = properties.random_progression_series(rng, ell, 1, 8)
            G = properties.random_progression_series(rng, ell, 1, 8)
            properties.check_hecke_linear(F, G, rng.randint(-9, 9), rng.randint(-9, 9), ell,
                                          CharacterSpec(-4))
            ell, p = rng.choice([(3, 5), (5, 7), (3, 7)])
            H = properties.random_progression_series(rng, ell * p, 1, 3)
            properties.check_hecke_commute(H, ell, p, TRIVIAL)
        for seed in range(50):
            F0, ell, m, character = properties.closed_form_case(random.Random(2000 + seed))
            assert properties.check_closed_forms(F0, ell, m, character) > 0


def test_criterion_12_garvan():
    with criterion(12, "spt(125n+99) + 5 spt(5n+4) = 0 mod 125 for n <= 300"):
        rep = check_congruence_family(garvan_pair_family(3), range(0, 301))
        _verified(rep)
        assert rep.checked == 301
