import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from krpoly.numtheory import (
    PROBABLE,
    PROVED,
    ek_members,
    factorize,
    is_prime,
    iter_phi,
    lemma1_sign,
    odd_divisors,
    phi_decompose,
    primality,
    psi_beta,
)
from naive import is_prime_trial


@pytest.mark.parametrize("m,expected", [(31, True), (17, True), (125, False), (0, False), (1, False), (2, True)])
def test_is_prime_examples(m, expected):
    assert is_prime(m) is expected


def test_is_prime_matches_trial_division():
    assert [m for m in range(5000) if is_prime(m)] == [m for m in range(5000) if is_prime_trial(m)]


def test_is_prime_known_pseudoprimes():
    # strong pseudoprimes to several bases, Carmichael numbers
    for m in (561, 1105, 3215031751, 3825123056546413051, 318665857834031151167461, 341550071728321):
        assert is_prime(m) == sympy.isprime(m)


def test_large_primality_matches_sympy_and_is_probable():
    rng = random.Random(7)
    for _ in range(300):
        m = rng.randrange(1 << 64, 1 << 160) | 1
        assert is_prime(m) == sympy.isprime(m)
    ok, certainty = primality(2 ** 127 - 1)
    assert ok and certainty == PROBABLE
    assert primality(2 ** 61 - 1) == (True, PROVED)
    assert primality(2 ** 67 - 1) == (False, PROVED)


def test_factorize_matches_sympy():
    rng = random.Random(3)
    for m in [rng.randrange(1, 10 ** 15) for _ in range(100)] + [2 ** 64 + 1, (2 ** 31 - 1) * (2 ** 61 - 1)]:
        assert factorize(m) == sympy.factorint(m)


@pytest.mark.parametrize("two_n,expected", [(12, [1, 3]), (2, [1]), (90, [1, 3, 5, 9, 15, 45])])
def test_odd_divisors_examples(two_n, expected):
    assert odd_divisors(two_n) == expected


@given(st.integers(1, 20000))
def test_odd_divisors_brute_force(n):
    two_n = 2 * n
    divs = odd_divisors(two_n)
    assert divs == [r for r in range(1, two_n + 1, 2) if two_n % r == 0]
    assert all(two_n % r == 0 and (two_n // r) * r == two_n for r in divs)


def test_odd_divisors_rejects_odd():
    with pytest.raises(ValueError):
        odd_divisors(9)


def test_psi_beta_examples():
    assert psi_beta(8).psi == 0 and psi_beta(8).beta == -8
    pb = psi_beta(6)
    assert (pb.psi, pb.beta) == (3, 0)
    pb = psi_beta(10)
    assert (pb.psi, pb.beta) == (4, 0)


def test_psi_beta_is_half_integer_in_general():
    # 15: h=0, psi=min(2,3)=2, beta=(15-2-1)/2=6; 12: h=2, psi=min(8,3)=3, beta=(8-3-1)/2=2
    assert psi_beta(15).beta == 6
    assert psi_beta(12).beta == 2
    # 21 = 3*7: psi = 2, beta = (21 - 3)/2 = 9; 45: psi=2, beta=(45-3)/2=21
    assert psi_beta(45).beta == 21


def test_beta_is_integral():
    # psi and 2n/psi always share parity, so the halving is exact
    assert all(psi_beta(n).beta.denominator == 1 for n in range(1, 3000))


@pytest.mark.parametrize("n,h,p,k", [(6, 2, 3, 1), (3, 1, 3, -1), (10, 2, 5, -1), (12, 3, 3, 5)])
def test_phi_decompose_examples(n, h, p, k):
    d = phi_decompose(n)
    assert (d.h, d.p, d.k) == (h, p, k)


@pytest.mark.parametrize("n", [1, 2, 8, 45, 90, 1024])
def test_phi_decompose_rejects(n):
    assert phi_decompose(n) is None


@given(st.integers(1, 50000))
def test_phi_decompose_properties(n):
    d = phi_decompose(n)
    odd = n
    while odd % 2 == 0:
        odd //= 2
    assert (d is not None) == (odd >= 3 and is_prime_trial(odd))
    if d is not None:
        assert d.k % 2 == 1
        assert 2 * n == 2 ** d.h * d.p and n * 2 == d.p * (d.p + d.k)
        assert odd_divisors(2 * n) == [1, d.p]


def test_iter_phi_agrees_with_phi_decompose():
    assert list(iter_phi(3000)) == [d for d in (phi_decompose(n) for n in range(1, 3001)) if d]
    assert list(iter_phi(2)) == []


def test_ek_examples():
    assert [d.n for d in ek_members(1, 8)] == [6, 28, 496, 8128]
    assert [d.p for d in ek_members(1, 8)] == [3, 7, 31, 127]
    assert [d.n for d in ek_members(-1, 9)] == [3, 10, 136, 32896]
    assert [d.p for d in ek_members(3, 9)] == [5, 13, 29, 61, 509]
    assert [d.h for d in ek_members(3, 9)] == [3, 4, 5, 6, 9]


def test_ek_five():
    # p = 2^h - 5 for h <= 12: 3, 11, 27, 59, 123, 251, 507, 1019, 2043, 4091
    assert [d.p for d in ek_members(5, 12)] == [p for p in (2 ** h - 5 for h in range(1, 13)) if p >= 3 and is_prime_trial(p)]
    assert [d.p for d in ek_members(5, 12)] == [3, 11, 59, 251, 1019, 4091]


@pytest.mark.parametrize("k", [0, 2, -4])
def test_ek_even_is_empty(k):
    assert ek_members(k, 20) == []


@pytest.mark.parametrize("k", [1, -1, 3, -3, 5, -5, 7, 9, -15])
def test_ek_members_satisfy_lemma1(k):
    for d in ek_members(k, 40):
        assert phi_decompose(d.n).k == k
        assert psi_beta(d.n).beta == Fraction(abs(k) - 1, 2)
        assert lemma1_sign(d.n) == (1 if k > 0 else -1)
