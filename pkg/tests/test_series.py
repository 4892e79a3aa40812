import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import properties
from oracles import euler_product, long_division_inverse, naive_mul
from sptcong.errors import (
    DenominatorDivisibleByEll,
    IndivisibleExponent,
    NonIntegralExponent,
    ZeroLeadingCoefficient,
)
from sptcong.forms import eta_quotient
from sptcong.series import (
    INF,
    UNIT,
    QSeries,
    add,
    dilate,
    invert,
    is_zero_mod,
    mul,
    pow,
    q_derivative,
    reduce_mod,
    rescale_exponents,
    restrict_progression,
    scale,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def Q(coeffs, prec=INF):
    return QSeries.from_q(coeffs, prec)


def test_add_identity_and_cancellation():
    a = Q({0: 1, 1: 1})
    assert add(a, QSeries.zero()) == a
    s = add(Q({-1: 1}), Q({-1: -1, 1: 1}))
    assert s == Q({1: 1})
    assert -UNIT not in s.coeffs


def test_m_from_s_first_coefficient():
    # spt(1) = p(1) = 1 gives 1 + 23/12 at q^23
    S = Q({23: 1}, 24)
    corr = scale(Q({23: 23}, 24), Fraction(1, 12))
    assert add(S, corr).q_coeff(23) == Fraction(35, 12)


def test_mul_geometric_inverse():
    geo = Q({k: 1 for k in range(20)}, 20)
    assert mul(Q({0: 1, 1: -1}), geo) == Q({0: 1}, 20)


def test_reciprocal_eta_quotients():
    prod = mul(eta_quotient(((8, 1), (16, -2)), 60), eta_quotient(((16, 2), (8, -1)), 60))
    assert prod.agrees_with(QSeries.one())
    assert prod.q_precision >= 59


def test_overpartition_quotient():
    s = eta_quotient(((2, 1), (1, -2)), 10)
    assert [s.q_coeff(k) for k in range(5)] == [1, 2, 4, 8, 14]


def test_invert_examples():
    assert invert(Q({0: 1, 1: -1}), precision=UNIT * 15) == Q({k: 1 for k in range(15)}, 15)
    euler = QSeries.from_dense(euler_product(30))
    assert invert(euler).q_coeff(5) == 7
    got = invert(Q({1: 1, 2: 1}, 12))
    want = long_division_inverse({UNIT: 1, 2 * UNIT: 1}, UNIT, 11)
    assert got.q_precision == 10
    assert got == QSeries(want, got.precision)
    assert got.q_coeff(-1) == 1 and got.q_coeff(0) == -1


def test_invert_zero_leading():
    with pytest.raises(ZeroLeadingCoefficient):
        invert(QSeries.zero(UNIT * 5))


def test_pow_examples():
    assert pow(Q({0: 3, 2: 5}, 10), 0) == QSeries.one()
    assert pow(Q({0: 1, 1: 1}), 2) == Q({0: 1, 1: 2, 2: 1})
    eta24 = eta_quotient(((24, 1),), 800)
    assert pow(eta24, 25).min_index == 600


def test_q_derivative_examples():
    assert q_derivative(Q({0: 7})).is_zero()
    p = invert(QSeries.from_dense(euler_product(20)))
    assert q_derivative(p).q_coeff(5) == 35
    with pytest.raises(NonIntegralExponent):
        q_derivative(QSeries({1: 1}))


def test_dilate_restrict_rescale():
    assert dilate(Q({0: 1, 1: 1}), 2) == Q({0: 1, 2: 1})
    assert restrict_progression(Q({0: 1, 1: 1, 2: 1}), 0, 2) == Q({0: 1, 2: 1})
    assert rescale_exponents(Q({24: 1}), 24) == Q({1: 1})
    with pytest.raises(IndivisibleExponent) as err:
        rescale_exponents(Q({0: 1, 3: 1}), 2)
    assert "3" in str(err.value)


def test_reduce_mod_examples():
    assert reduce_mod(Q({0: Fraction(35, 12)}), 5).is_zero()
    assert is_zero_mod(Q({0: 25, 3: -50}, 10), 5, 2)
    with pytest.raises(DenominatorDivisibleByEll):
        reduce_mod(Q({0: Fraction(1, 5)}), 5)


def test_precision_propagation():
    a = Q({0: 1, 1: 2}, 5)
    b = Q({2: 1}, 7)
    assert mul(a, b).q_precision == 7
    assert add(a, b).q_precision == 5
    assert mul(a, QSeries.one()).q_precision == 5


def test_mul_matches_naive_convolution():
    rng = random.Random(11)
    for _ in range(30):
        a = properties.random_series(rng, integral=False)
        b = properties.random_series(rng, integral=False)
        got = mul(a, b)
        want = naive_mul(a.coeffs, b.coeffs, got.precision)
        assert got.coeffs == want


def test_large_product_matches_dense_path():
    # Kronecker-substitution path against the schoolbook sum
    e = QSeries.from_dense(euler_product(400))
    sq = mul(e, e)
    assert [sq.q_coeff(k) for k in range(400)] == euler_product(400, 2)


def test_json_round_trip():
    s = QSeries({-24: Fraction(-3, 7), 5: 2}, 100)
    assert QSeries.from_json(s.to_json()) == s
    exact = Q({1: 1})
    assert QSeries.from_json(exact.to_json()) == exact
    assert exact.to_json_obj()["precision"] is None


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_ring_laws(seed):
    rng = random.Random(seed)
    a, b, c = (properties.random_series(rng, integral=False) for _ in range(3))
    properties.check_ring_laws(a, b, c)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_inverse_property(seed):
    properties.check_inverse(properties.random_series(random.Random(seed), integral=False))


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(min_value=1, max_value=30))
def test_dilate_rescale_property(seed, t):
    rng = random.Random(seed)
    properties.check_dilate_rescale(properties.random_series(rng), properties.random_series(rng), t)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_derivation_property(seed):
    rng = random.Random(seed)
    properties.check_derivation(properties.random_series(rng), properties.random_series(rng))


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_precision_soundness(seed):
    properties.check_precision_soundness(random.Random(seed))
