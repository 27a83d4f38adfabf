"""Exact substrate: rationals, Laurent polynomials in q, truncated series in t.

Integers are Python ``int`` and rationals are :class:`fractions.Fraction`.
Laurent polynomials are sparse ``{exponent: coefficient}`` maps; truncated
series in ``t`` keep a dense integer band (rows = powers of t, columns =
powers of q) so that the generating-function product stays fast.
"""
from __future__ import annotations

import enum
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

import numpy as np

from .errors import ZeroEvaluationPointError

RationalLike = Union[int, Fraction, str]

# int64 headroom kept by the dense series kernel before it switches to Python ints
_INT64_SAFE = 1 << 62


def as_rational(value: RationalLike) -> Fraction:
    """Parse ``3``, ``"7/2"``, ``Fraction(7, 2)`` into a normalized Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(x: Fraction) -> str:
    """Canonical "num/den" text; the denominator is always written."""
    return f"{x.numerator}/{x.denominator}"


def _coprime_fraction(num: int, den: int) -> Fraction:
    # Caller guarantees gcd(num, den) == 1 and den > 0; skips a quadratic gcd.
    f = object.__new__(Fraction)
    f._numerator = num
    f._denominator = den
    return f


def _prime_factors_small(m: int) -> list:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def div_by_power(num: int, base: int, exp: int) -> Fraction:
    """Return ``num / base**exp`` in lowest terms.

    Only the primes of ``base`` can be shared with the numerator, so the
    reduction strips them one at a time instead of running a gcd on two
    numbers with millions of bits.
    """
    if base == 0:
        raise ZeroDivisionError("base must be nonzero")
    if exp < 0:
        return Fraction(num * base ** (-exp))
    sign = -1 if base < 0 and exp % 2 else 1
    base = abs(base)
    if num == 0:
        return Fraction(0)
    if base == 1 or exp == 0:
        return Fraction(sign * num)
    den_exps = {}
    for p in _prime_factors_small(base):
        v, b = 0, base
        while b % p == 0:
            b //= p
            v += 1
        den_exps[p] = v * exp
    for p in den_exps:
        while den_exps[p] and num % p == 0:
            num //= p
            den_exps[p] -= 1
    den = 1
    for p, e in den_exps.items():
        den *= p ** e
    return _coprime_fraction(sign * num, den)


class LaurentPoly:
    """Integer Laurent polynomial in q, immutable, zero coefficients dropped."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Union[Mapping[int, int], Iterable[Tuple[int, int]], None] = None):
        acc: Dict[int, int] = {}
        if coeffs is not None:
            items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
            for e, c in items:
                acc[int(e)] = acc.get(int(e), 0) + int(c)
        self._c = {e: c for e, c in acc.items() if c}

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def _raw(cls, d: Dict[int, int]) -> "LaurentPoly":
        obj = object.__new__(cls)
        obj._c = d
        return obj

    # -- inspection -------------------------------------------------------
    def coeff(self, exponent: int) -> int:
        return self._c.get(exponent, 0)

    def terms(self) -> list:
        """Sorted ``(exponent, coefficient)`` pairs."""
        return sorted(self._c.items())

    def as_dict(self) -> Dict[int, int]:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def degree(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no degree")
        return max(self._c)

    def valuation(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no valuation")
        return min(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(self.terms())

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return LaurentPoly.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = dict(self._c)
        for e, c in other._c.items():
            v = d.get(e, 0) + c
            if v:
                d[e] = v
            else:
                d.pop(e, None)
        return LaurentPoly._raw(d)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return laurent_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not Laurent polynomials in general")
        out = LaurentPoly.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``q**k``."""
        return LaurentPoly._raw({e + k: c for e, c in self._c.items()})

    def reflect(self) -> "LaurentPoly":
        """Substitute ``q -> 1/q`` (negate every exponent)."""
        return LaurentPoly._raw({-e: c for e, c in self._c.items()})

    def divmod_linear(self, root: int) -> Tuple["LaurentPoly", int]:
        """Divide a polynomial (no negative exponents) by ``q - root``.

        Returns ``(quotient, remainder)`` by synthetic division.
        """
        if not self._c:
            return LaurentPoly(), 0
        if self.valuation() < 0:
            raise ValueError("synthetic division needs a polynomial without negative exponents")
        deg = self.degree()
        quot: Dict[int, int] = {}
        carry = 0
        for e in range(deg, -1, -1):
            carry = carry * root + self._c.get(e, 0)
            if e > 0 and carry:
                quot[e - 1] = carry
        return LaurentPoly._raw(quot), carry

    def __call__(self, q0: RationalLike) -> Fraction:
        return laurent_eval(self, q0)

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._c == other._c
        if isinstance(other, int) and not isinstance(other, bool):
            return self._c == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __repr__(self):
        return f"LaurentPoly({self.terms()!r})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e, c in sorted(self._c.items(), reverse=True):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "q" if e == 1 else f"q^{e}"
                body = var if mag == 1 else f"{mag}*{var}"
            parts.append(("-" if c < 0 else "+", body))
        head_sign, head = parts[0]
        text = ("-" if head_sign == "-" else "") + head
        for s, body in parts[1:]:
            text += f" {s} {body}"
        return text


Q = LaurentPoly.monomial(1)


def laurent_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Exact product of two Laurent polynomials."""
    if len(a._c) < len(b._c):
        a, b = b, a
    out: Dict[int, int] = {}
    for eb, cb in b._c.items():
        for ea, ca in a._c.items():
            e = ea + eb
            out[e] = out.get(e, 0) + ca * cb
    return LaurentPoly._raw({e: c for e, c in out.items() if c})


def laurent_eval(a: LaurentPoly, q0: RationalLike) -> Fraction:
    """Exact value of ``a`` at ``q = q0``.

    Raises ZeroEvaluationPointError when ``q0 == 0`` and ``a`` has a term with
    a negative exponent.
    """
    q0 = as_rational(q0)
    if not a._c:
        return Fraction(0)
    lo, hi = a.valuation(), a.degree()
    if q0 == 0:
        if lo < 0:
            raise ZeroEvaluationPointError("cannot evaluate a negative power of q at q = 0")
        return Fraction(a._c.get(0, 0))
    num_q, den_q = q0.numerator, q0.denominator
    span = hi - lo
    # a(q) = q^lo * sum_e c_e * num^(e-lo) * den^(hi-e) / den^span
    total = 0
    for e, c in a._c.items():
        total += c * num_q ** (e - lo) * den_q ** (hi - e)
    if den_q == 1:
        return div_by_power(total, num_q, -lo)
    return Fraction(total, den_q ** span) * q0 ** lo


class Factor(enum.Enum):
    """The three factor shapes of the ideal-count generating product."""

    SQUARE = "(1 - t^m)^2"
    INV_Q = "1/(1 - q t^m)"
    INV_QINV = "1/(1 - q^-1 t^m)"


class TruncatedSeries:
    """Power series in t modulo ``t^(order+1)`` with Laurent-in-q coefficients.

    Stored densely: ``data[j, col]`` is the coefficient of ``t^j q^(lo+col)``.
    The array is int64 while values are provably small and switches to
    Python-int object arrays before anything could overflow.
    """

    __slots__ = ("order", "_lo", "_data")

    def __init__(self, order: int, coefficients: Sequence[LaurentPoly] = ()):
        if order < 0:
            raise ValueError("order must be non-negative")
        if len(coefficients) > order + 1:
            raise ValueError(f"{len(coefficients)} coefficients given for order {order}")
        exps = [e for c in coefficients for e, _ in c._c.items()]
        lo = min(exps) if exps else 0
        hi = max(exps) if exps else 0
        big = any(abs(v) >= _INT64_SAFE for c in coefficients for v in c._c.values())
        data = np.zeros((order + 1, hi - lo + 1), dtype=object if big else np.int64)
        for j, c in enumerate(coefficients):
            for e, v in c._c.items():
                data[j, e - lo] = v
        self.order = order
        self._lo = lo
        self._data = data

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls(order, [LaurentPoly.constant(1)])

    @classmethod
    def _from_array(cls, order: int, lo: int, data: np.ndarray) -> "TruncatedSeries":
        obj = object.__new__(cls)
        obj.order = order
        nz = np.nonzero(np.any(data != 0, axis=0))[0]
        if nz.size == 0:
            obj._lo = 0
            obj._data = np.zeros((order + 1, 1), dtype=data.dtype)
        else:
            obj._lo = lo + int(nz[0])
            obj._data = data[:, nz[0]: nz[-1] + 1].copy()
        return obj

    def coefficient(self, j: int) -> LaurentPoly:
        """Coefficient of ``t^j`` as a Laurent polynomial in q."""
        if not 0 <= j <= self.order:
            raise IndexError(f"t^{j} is outside the truncation order {self.order}")
        row = self._data[j]
        return LaurentPoly._raw({self._lo + int(c): int(row[c]) for c in np.nonzero(row)[0]})

    def coefficients(self) -> list:
        return [self.coefficient(j) for j in range(self.order + 1)]

    @property
    def exact_dtype(self) -> bool:
        """True when the kernel has fallen back to unbounded Python ints."""
        return self._data.dtype == object

    def max_abs_coefficient(self) -> int:
        return int(np.abs(self._data).max()) if self._data.size else 0

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.coefficients() == other.coefficients()

    def __repr__(self):
        return f"TruncatedSeries(order={self.order}, coefficients={self.coefficients()!r})"


def _widen(data: np.ndarray, left: int, right: int, bound: int) -> np.ndarray:
    dtype = object if (data.dtype == object or bound >= _INT64_SAFE) else np.int64
    out = np.zeros((data.shape[0], data.shape[1] + left + right), dtype=dtype)
    out[:, left: left + data.shape[1]] = data
    return out


def series_mul_factor(s: TruncatedSeries, factor: Factor, m: int) -> TruncatedSeries:
    """Multiply ``s`` by one factor of the product, exactly modulo ``t^(N+1)``.

    ``(1 - t^m)^2`` is applied as two subtractions of the ``t^m``-shifted
    series; the inverse factors solve ``(1 - q^{+-1} t^m) x = s`` row by row,
    which is the truncated geometric series ``sum_j q^{+-j} t^{mj}``.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    factor = Factor(factor)
    n = s.order
    if m > n:
        return s
    cur_max = s.max_abs_coefficient()
    if factor is Factor.SQUARE:
        data = _widen(s._data, 0, 0, cur_max * 4)
        for _ in range(2):
            # in-place descending update keeps rows j - m untouched until used
            for j in range(n, m - 1, -1):
                data[j] -= data[j - m]
        return TruncatedSeries._from_array(n, s._lo, data)
    reach = n // m
    if factor is Factor.INV_Q:
        data = _widen(s._data, 0, reach, cur_max * (reach + 1))
        lo = s._lo
        for j in range(m, n + 1):
            data[j, 1:] += data[j - m, :-1]
    else:
        data = _widen(s._data, reach, 0, cur_max * (reach + 1))
        lo = s._lo - reach
        for j in range(m, n + 1):
            data[j, :-1] += data[j - m, 1:]
    return TruncatedSeries._from_array(n, lo, data)
