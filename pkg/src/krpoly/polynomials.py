"""Three independent constructions of the ideal-count polynomials C_n(q).

* :func:`cn_via_coefficients` -- the explicit +-1 coefficient pattern indexed
  by representations ``n = r(r + 2i +- 1)/2``;
* :func:`cn_via_divisors` -- the odd-divisor sum, returning ``q^-n C_n(q)``;
* :func:`cn_via_gf` -- expansion of the infinite product
  ``prod_m (1 - t^m)^2 / ((1 - q t^m)(1 - q^-1 t^m))``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .errors import InconsistencyError, InvalidParametersError
from .exact import (
    Factor,
    LaurentPoly,
    RationalLike,
    TruncatedSeries,
    as_rational,
    div_by_power,
    laurent_eval,
    series_mul_factor,
)
from .numtheory import odd_divisors

GF_MAX_ORDER = 500


class Route(str, enum.Enum):
    COEFFS = "coeffs"
    DIVISORS = "divisors"
    GF = "gf"


@dataclass(frozen=True)
class KrCoefficients:
    """``c[i]`` for ``i = 0..n`` in ``C_n = c0 q^n + sum_i c_i (q^(n+i) + q^(n-i))``."""

    n: int
    c: Tuple[int, ...]

    def polynomial(self) -> LaurentPoly:
        n = self.n
        terms = {n: self.c[0]}
        for i in range(1, n + 1):
            if self.c[i]:
                terms[n + i] = self.c[i]
                terms[n - i] = self.c[i]
        return LaurentPoly(terms)


def _check_n(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InvalidParametersError(f"n must be an integer >= 1, got {n!r}")


def kr_coefficients(n: int) -> KrCoefficients:
    """Accumulate c_{n,i} over every representation of n.

    r runs over ``1 <= r(r+1)/2 <= n``; for each r dividing 2n the two
    families give ``i = (2n/r - r - 1)/2`` with weight ``(-1)^r`` and
    ``i = (2n/r - r + 1)/2`` with weight ``(-1)^(r-1)``.
    """
    _check_n(n)
    c = [0] * (n + 1)
    two_n = 2 * n
    r = 1
    while r * (r + 1) // 2 <= n:
        sgn = -1 if r % 2 else 1  # (-1)^r
        if r * (r + 1) // 2 == n:
            c[0] += 2 * sgn
        if two_n % r == 0:
            cof = two_n // r
            # r and the cofactor must have opposite parity for i to be integral
            if (cof - r) % 2:
                i1 = (cof - r - 1) // 2
                if i1 >= 1:
                    c[i1] += sgn
                i2 = (cof - r + 1) // 2
                if i2 >= 1:
                    c[i2] -= sgn
        r += 1
    return KrCoefficients(n, tuple(c))


def cn_via_coefficients(n: int) -> LaurentPoly:
    """C_n(q) from its coefficient pattern (an ordinary polynomial of degree 2n)."""
    return kr_coefficients(n).polynomial()


def divisor_term(n: int, r: int) -> LaurentPoly:
    """``(q^d - 1) / q^((d-1)/2)`` with ``d = 2n/r - r``, as a Laurent polynomial.

    Equals ``q^((d+1)/2) - q^(-(d-1)/2)``; for negative d the two monomials
    swap order and the term changes sign by itself.
    """
    two_n = 2 * n
    if two_n % r or r % 2 == 0:
        raise InvalidParametersError(f"{r} is not an odd divisor of {two_n}")
    d = two_n // r - r
    if d % 2 == 0:
        raise InconsistencyError(f"even exponent gap {d} for r={r}; factorization is wrong", n=n)
    return LaurentPoly({(d + 1) // 2: 1}) - LaurentPoly({-(d - 1) // 2: 1})


_ONE_MINUS_QINV = LaurentPoly({0: 1, -1: -1})


def cn_via_divisors(n: int) -> LaurentPoly:
    """``q^-n C_n(q)`` as ``(1 - 1/q) * sum_r (q^(2n/r - r) - 1) / q^((2n/r - r - 1)/2)``.

    r runs over the odd divisors of 2n.
    """
    _check_n(n)
    total = LaurentPoly()
    for r in odd_divisors(2 * n):
        total = total + divisor_term(n, r)
    return total * _ONE_MINUS_QINV


def gf_series(order: int, max_order: int = GF_MAX_ORDER) -> TruncatedSeries:
    """The full product truncated modulo ``t^(order+1)``."""
    if order < 0:
        raise InvalidParametersError("order must be >= 0")
    if order > max_order:
        raise InvalidParametersError(
            f"generating-function order {order} exceeds the cap {max_order}; raise max_order explicitly"
        )
    s = TruncatedSeries.one(order)
    for m in range(1, order + 1):
        s = series_mul_factor(s, Factor.SQUARE, m)
        s = series_mul_factor(s, Factor.INV_Q, m)
        s = series_mul_factor(s, Factor.INV_QINV, m)
    return s


def cn_via_gf(N: int, max_order: int = GF_MAX_ORDER) -> List[LaurentPoly]:
    """``[q^-n C_n(q) for n in 1..N]`` read off the product expansion."""
    s = gf_series(N, max_order=max_order)
    return [s.coefficient(n) for n in range(1, N + 1)]


def cn_polynomial(n: int, route: Route | str = Route.DIVISORS) -> LaurentPoly:
    """C_n(q) as an ordinary polynomial by the chosen route."""
    route = Route(route)
    if route is Route.COEFFS:
        return cn_via_coefficients(n)
    if route is Route.DIVISORS:
        return cn_via_divisors(n).shift(n)
    _check_n(n)
    return cn_via_gf(n, max_order=max(n, GF_MAX_ORDER))[n - 1].shift(n)


def cn_eval(n: int, q0: RationalLike, route: Route | str = Route.DIVISORS) -> Fraction:
    """Exact C_n(q0)."""
    _check_n(n)
    q0 = as_rational(q0)
    route = Route(route)
    if route is Route.DIVISORS:
        # q^n * (q^-n C_n) without expanding the shift first
        return laurent_eval(cn_via_divisors(n), q0) * q0 ** n
    return laurent_eval(cn_polynomial(n, route), q0)


def deviation_polynomial(n: int) -> LaurentPoly:
    """``q^-n C_n(q) - (1 - 1/q) q^n`` as a Laurent polynomial."""
    return cn_via_divisors(n) - LaurentPoly({n: 1, n - 1: -1})


def deviation(n: int, q0: RationalLike) -> Fraction:
    """Exact ``D_n(q0) = C_n(q0)/q0^n - (1 - 1/q0) q0^n`` by polynomial evaluation."""
    _check_n(n)
    q0 = as_rational(q0)
    if q0 == 0:
        raise InvalidParametersError("q0 must be nonzero")
    return laurent_eval(deviation_polynomial(n), q0)
