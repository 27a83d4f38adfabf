from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from krpoly.errors import InconsistencyError, InvalidParametersError
from krpoly.exact import LaurentPoly, Q
from krpoly.polynomials import (
    Route,
    cn_eval,
    cn_polynomial,
    cn_via_coefficients,
    cn_via_divisors,
    cn_via_gf,
    deviation,
    divisor_term,
    gf_series,
    kr_coefficients,
)
from krpoly.verify import structural_problems
from naive import cn_table, evaluate

NAIVE = cn_table(12)


def test_coefficients_small_n():
    assert kr_coefficients(1).c == (-2, 1)
    assert kr_coefficients(2).c == (0, -1, 1)
    assert cn_via_coefficients(1) == (Q - 1) ** 2
    assert cn_via_coefficients(2) == (Q - 1) * (Q ** 3 - 1)
    assert cn_via_coefficients(3) == (Q - 1) * (Q ** 2 - 1) * (Q ** 3 + 1)


def test_divisor_route_small_n():
    assert cn_via_divisors(1) == LaurentPoly({1: 1, 0: -2, -1: 1})
    one_minus_qinv = LaurentPoly({0: 1, -1: -1})
    three = one_minus_qinv * (LaurentPoly({3: 1, -2: -1}) + LaurentPoly({0: 1, 1: -1}))
    assert cn_via_divisors(3) == three
    assert cn_via_divisors(3).shift(3) == (Q - 1) * (Q ** 2 - 1) * (Q ** 3 + 1)


def test_divisor_term_negative_gap_flips_sign():
    # n=3, r=3: 2n/r - r = -1, term (q^-1 - 1)/q^-1 = 1 - q
    assert divisor_term(3, 3) == LaurentPoly({0: 1, 1: -1})
    with pytest.raises(InvalidParametersError):
        divisor_term(3, 2)


def test_gf_route_small_n():
    assert cn_via_gf(1) == [LaurentPoly({1: 1, 0: -2, -1: 1})]
    assert cn_via_gf(2)[1] == LaurentPoly({2: 1, 1: -1, -1: -1, -2: 1})
    assert gf_series(0).coefficients() == [LaurentPoly.constant(1)]


def test_gf_cap():
    with pytest.raises(InvalidParametersError):
        cn_via_gf(10, max_order=5)


@pytest.mark.parametrize("n", range(1, 13))
@pytest.mark.parametrize("route", list(Route))
def test_routes_match_naive_expansion(n, route):
    assert cn_polynomial(n, route) == LaurentPoly(NAIVE[n])


def test_triple_agreement_to_120():
    gf = cn_via_gf(120)
    for n in range(1, 121):
        a = cn_via_coefficients(n)
        assert a == cn_via_divisors(n).shift(n) == gf[n - 1].shift(n), n


@pytest.mark.parametrize(
    "n,q0,expected",
    [(1, 2, 1), (2, 3, 52), (6, 2, 2079), (3, 2, 27), (3, 3, 448), (10, 4, 824631361533), (12, 5, 47683740226562496)],
)
def test_cn_eval(n, q0, expected):
    assert cn_eval(n, q0) == expected
    assert evaluate(NAIVE[n], q0) == expected


def test_cn_eval_routes_agree_on_rationals():
    for q0 in (Fraction(7, 3), Fraction(-1, 2), 3):
        assert cn_eval(9, q0, "coeffs") == cn_eval(9, q0, "divisors") == cn_eval(9, q0, "gf")


@pytest.mark.parametrize("n,q0,expected", [(6, 2, Fraction(31, 64)), (3, 2, Fraction(-5, 8)), (10, 2, Fraction(-513, 1024))])
def test_deviation(n, q0, expected):
    assert deviation(n, q0) == expected
    assert evaluate(NAIVE[n], q0) / Fraction(q0) ** n - (1 - Fraction(1, q0)) * Fraction(q0) ** n == expected


@given(st.integers(1, 400))
def test_structure(n):
    assert structural_problems(n, cn_via_coefficients(n)) == []


@given(st.integers(1, 3000))
def test_coefficient_range(n):
    c = kr_coefficients(n).c
    assert c[0] in (-2, 0, 2)
    assert all(-2 <= x <= 2 for x in c)
    assert c[n] == 1


def test_structural_problems_detects_damage():
    assert structural_problems(2, cn_via_coefficients(2) + Q) != []
    assert "not palindromic" in structural_problems(2, cn_via_coefficients(2) + LaurentPoly({1: 1, 2: -1}))
    assert "(q - 1)^2 does not divide" in structural_problems(1, (Q - 1) * (Q - 2))


@pytest.mark.parametrize("n", [0, -3])
def test_invalid_n(n):
    with pytest.raises(InvalidParametersError):
        cn_via_divisors(n)
