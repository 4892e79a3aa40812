import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import properties
from oracles import kronecker_oracle
from sptcong.errors import InsufficientPrecision, PreconditionViolation
from sptcong.forms import FormName, form
from sptcong.hecke import (
    HeckeSpec,
    HeckeTriple,
    apply_T_ell_squared,
    apply_T_power,
    build_F_m,
    prop22_closed_form,
)
from sptcong.numtheory import CHI_3, TRIVIAL, CharacterSpec
from sptcong.series import UNIT, QSeries, add, scale, sub

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def naive_T(coeffs: dict, prec: int, ell: int, chi_ell: int) -> dict:
    """T(ell^2) from the three-term formula, on q-exponent dicts."""
    out = {}
    lo = min(coeffs) if coeffs else 0
    for n in range(min(lo, 0) * ell * ell, prec // (ell * ell)):
        v = Fraction(coeffs.get(ell * ell * n, 0))
        v += chi_ell * kronecker_oracle(-n, ell) * coeffs.get(n, 0)
        if n % (ell * ell) == 0:
            v += ell * coeffs.get(n // (ell * ell), 0)
        if v:
            out[n] = v
    return out


def test_principal_monomial():
    got = apply_T_ell_squared(QSeries.from_q({-1: 1}), 5, CHI_3)
    assert got == QSeries.from_q({-25: 5, -1: -1})


def test_zero_maps_to_zero():
    z = QSeries.zero(UNIT * 500)
    assert apply_T_ell_squared(z, 7, CHI_3).is_zero()
    assert build_F_m(HeckeTriple(z, 5, CHI_3), 3).is_zero()


def test_mbar_eigenform():
    mbar = form(FormName.MBAR, N=9 * 200)
    assert apply_T_ell_squared(mbar, 3).agrees_with(scale(mbar, 4))
    assert apply_T_ell_squared(mbar, 3).q_precision == 200


def test_matches_naive_formula():
    rng = random.Random(5)
    for ell, D in ((3, 1), (5, 3), (7, -4), (11, 12)):
        src = {n: rng.randint(-9, 9) for n in range(-3, 1500)}
        F = QSeries.from_q(src, 1500)
        got = apply_T_ell_squared(F, ell, CharacterSpec(D))
        want = naive_T(src, 1500, ell, kronecker_oracle(D, ell))
        assert got.q_coeffs() == want
        assert got.q_precision == 1500 // (ell * ell)


def test_power_zero_and_ladder():
    mstar = form(FormName.MSTAR, N=625 * 2)
    triple = HeckeTriple(mstar, 5, CHI_3)
    assert apply_T_power(triple, 0) is mstar
    top = apply_T_power(triple, 2, n_out=2)
    assert top.truncate_q(2) == QSeries.from_q({-625: 25, -25: -5, -1: 1}, 2)


def test_power_orders_agree():
    mstar = form(FormName.MSTAR, N=3 ** 6 * 20)
    for m in (2, 3):
        a = apply_T_power(HeckeTriple(mstar, 3, TRIVIAL), m, order="outer")
        b = apply_T_power(HeckeTriple(mstar, 3, TRIVIAL), m, order="inner")
        assert a.agrees_with(b)


def test_power_needs_source():
    triple = HeckeTriple(form(FormName.MSTAR, N=100), 5, CHI_3)
    with pytest.raises(InsufficientPrecision) as err:
        apply_T_power(triple, 2, n_out=10)
    assert err.value.required == 6250


def test_F1_for_mstar():
    mstar = form(FormName.MSTAR, N=25 * 40)
    triple = HeckeTriple(mstar, 5, CHI_3)
    want = add(apply_T_ell_squared(mstar, 5, CHI_3), mstar)
    assert build_F_m(triple, 1) == want.truncate(build_F_m(triple, 1).precision)


def test_closed_form_preconditions():
    a0 = QSeries.from_q({n: 1 for n in range(2000)}, 2000).q_coeff
    with pytest.raises(PreconditionViolation):
        prop22_closed_form(a0, 5, CHI_3, 1, 10, "ii")
    with pytest.raises(PreconditionViolation):
        prop22_closed_form(a0, 5, CHI_3, 1, 25, "iii")
    with pytest.raises(PreconditionViolation):
        prop22_closed_form(a0, 5, CHI_3, 0, 1, "i")


def test_closed_form_m1_expansion():
    rng = random.Random(3)
    src = {n: rng.randint(-9, 9) for n in range(0, 4000)}
    F = QSeries.from_q(src, 4000)
    ell, chi = 7, CHI_3(7)
    F1 = build_F_m(HeckeTriple(F, ell, CHI_3), 1)
    for n in range(1, 80):
        if n % ell:
            want = src[ell * ell * n] + (1 - kronecker_oracle(-n, ell)) * (-chi) * src[n]
            assert F1.q_coeff(n) == want
            assert prop22_closed_form(F.q_coeff, ell, CHI_3, 1, n, "ii") == want


def test_spec_validation():
    with pytest.raises(ValueError):
        HeckeSpec(2)
    with pytest.raises(ValueError):
        HeckeSpec(9)
    with pytest.raises(ValueError):
        HeckeSpec(3, 1, CHI_3)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_closed_forms_random_series(seed):
    F0, ell, m, character = properties.closed_form_case(random.Random(seed))
    assert properties.check_closed_forms(F0, ell, m, character) > 0


@settings(max_examples=100, deadline=None)
@given(seeds, st.integers(-20, 20), st.integers(-20, 20), st.sampled_from([3, 5, 7, 11]))
def test_linearity(seed, x, y, ell):
    rng = random.Random(seed)
    F = properties.random_progression_series(rng, ell, 1, 8)
    G = properties.random_progression_series(rng, ell, 1, 8)
    properties.check_hecke_linear(F, G, x, y, ell, CharacterSpec(-4))


@settings(max_examples=50, deadline=None)
@given(seeds, st.sampled_from([(3, 5), (5, 7), (3, 7)]))
def test_commutation(seed, pair):
    ell, p = pair
    F = properties.random_progression_series(random.Random(seed), ell * p, 1, 3)
    properties.check_hecke_commute(F, ell, p, TRIVIAL)


@pytest.mark.parametrize("ell", [5, 7, 11, 13])
@pytest.mark.parametrize("m", [1, 2])
def test_mstar_ladder(ell, m):
    L = ell ** (2 * m)
    chi = CHI_3(ell)
    n_out = max(1, min(23, 60_000 // L))
    mstar = form(FormName.MSTAR, N=L * n_out)
    triple = HeckeTriple(mstar, ell, CHI_3)
    comb = sub(build_F_m(triple, m), scale(mstar, chi ** m * ell ** m)).truncate_q(n_out)
    assert comb == QSeries.from_q({-L: ell ** m, -1: -(chi ** m) * ell ** m}, n_out)
