"""Primality, factorization, odd divisors, psi/beta, membership in Phi and E_k."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

PROVED = "proved"
PROBABLE = "probable"

# Miller-Rabin with these bases is exact below 3.3e24, so certainly below 2^64.
_DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71)
_TRIAL_LIMIT = 10 ** 12
_EXTRA_MR_ROUNDS = 8


def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas_probable_prime(n: int) -> bool:
    """Strong Lucas test with Selfridge's parameter choice (method A)."""
    r = math.isqrt(n)
    if r * r == n:
        return False
    D = 5
    while True:
        j = _jacobi(D, n)
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -D - 2 if D > 0 else -D + 2
    P, Q = 1, (1 - D) // 4
    d, s = n + 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # Binary ladder for U_d, V_d.
    U, V, Qk = 0, 2, 1
    inv2 = (n + 1) // 2
    for bit in bin(d)[2:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (P * U + V) * inv2 % n, (D * U + P * V) * inv2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if V == 0:
            return True
    return False


def primality(m: int) -> Tuple[bool, str]:
    """Return ``(is_prime, certainty)`` where certainty is "proved" or "probable".

    Below 2^64 the verdict is exact. Above, a number is reported prime only
    if it passes base-2 Miller-Rabin, a strong Lucas test (together the
    Baillie-PSW test) and a few extra random-base Miller-Rabin rounds.
    """
    if m < 2:
        return False, PROVED
    for p in _SMALL_PRIMES:
        if m == p:
            return True, PROVED
        if m % p == 0:
            return False, PROVED
    if m < 73 * 73:
        return True, PROVED
    if m < 1 << 64:
        return all(_strong_probable_prime(m, a) for a in _DETERMINISTIC_BASES), PROVED
    if not _strong_probable_prime(m, 2):
        return False, PROVED
    if not _strong_lucas_probable_prime(m):
        return False, PROVED
    rng = random.Random(m)
    for _ in range(_EXTRA_MR_ROUNDS):
        if not _strong_probable_prime(m, rng.randrange(3, m - 1)):
            return False, PROVED
    return True, PROBABLE


def is_prime(m: int) -> bool:
    if m < 0:
        raise ValueError("is_prime expects a non-negative integer")
    return primality(m)[0]


def _pollard_brent(n: int, seed: int) -> int:
    rng = random.Random(seed)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = 0
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(m: int) -> Dict[int, int]:
    """Prime factorization ``{p: e}`` of ``m >= 1``.

    Trial division settles anything up to 10^12; larger cofactors go to
    Pollard-Brent rho after the small primes are removed.
    """
    if m < 1:
        raise ValueError("factorize expects m >= 1")
    out: Dict[int, int] = {}
    for p in (2, 3):
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
    limit = math.isqrt(m) if m <= _TRIAL_LIMIT else 10 ** 4
    d = 5
    while d <= limit and d * d <= m:
        for p in (d, d + 2):
            while m % p == 0:
                out[p] = out.get(p, 0) + 1
                m //= p
        d += 6
    if m == 1:
        return dict(sorted(out.items()))
    if d * d > m:
        out[m] = out.get(m, 0) + 1
        return dict(sorted(out.items()))
    stack = [m]
    while stack:
        x = stack.pop()
        if x == 1:
            continue
        if is_prime(x):
            out[x] = out.get(x, 0) + 1
            continue
        f = _pollard_brent(x, seed=x)
        stack.extend((f, x // f))
    return dict(sorted(out.items()))


def two_adic(n: int) -> Tuple[int, int]:
    """Split ``n >= 1`` as ``(a, odd)`` with ``n = 2^a * odd``."""
    a = (n & -n).bit_length() - 1
    return a, n >> a


def odd_divisors(two_n: int) -> List[int]:
    """All odd divisors of ``two_n``, ascending."""
    if two_n < 2 or two_n % 2:
        raise ValueError("odd_divisors expects an even integer >= 2")
    _, odd = two_adic(two_n)
    divs = [1]
    for p, e in factorize(odd).items():
        divs = [d * p ** i for d in divs for i in range(e + 1)]
    return sorted(divs)


@dataclass(frozen=True)
class PsiBeta:
    n: int
    psi: int
    beta: Fraction


def psi_beta(n: int) -> PsiBeta:
    """psi(n) and beta(n).

    For a power of two, psi = 0 and beta = -n. Otherwise, with n = 2^h * m and
    p1 the least odd prime factor, psi = min(2^(h+1), p1) and
    beta = (2n/psi - psi - 1) / 2.
    """
    if n < 1:
        raise ValueError("psi_beta expects n >= 1")
    h, odd = two_adic(n)
    if odd == 1:
        return PsiBeta(n, 0, Fraction(-n))
    p1 = min(factorize(odd))
    psi = min(2 ** (h + 1), p1)
    return PsiBeta(n, psi, Fraction(2 * n // psi - psi - 1, 2))


def lemma1_sign(n: int) -> int:
    """(-1)^(2n/psi(n)) for n with an odd prime factor."""
    pb = psi_beta(n)
    if pb.psi == 0:
        raise ValueError(f"{n} is a power of two; 2n/psi(n) is undefined")
    return -1 if (2 * n // pb.psi) % 2 else 1


@dataclass(frozen=True)
class PhiDecomposition:
    """``2n = 2^h * p`` with p an odd prime and ``k = 2^h - p``."""

    n: int
    h: int
    p: int
    k: int
    certainty: str = PROVED

    def __post_init__(self):
        if 2 * self.n != (1 << self.h) * self.p or self.k != (1 << self.h) - self.p:
            raise ValueError(f"inconsistent decomposition {self!r}")


def phi_decompose(n: int) -> Optional[PhiDecomposition]:
    """Decompose ``n = 2^a * p`` (p odd prime); None when n is not in Phi."""
    if n < 1:
        raise ValueError("phi_decompose expects n >= 1")
    a, odd = two_adic(n)
    if odd < 3:
        return None
    ok, certainty = primality(odd)
    if not ok:
        return None
    h = a + 1
    return PhiDecomposition(n=n, h=h, p=odd, k=(1 << h) - odd, certainty=certainty)


def iter_phi(max_n: int, start: int = 1) -> Iterator[PhiDecomposition]:
    """Every member of Phi in ``[start, max_n]``, ascending."""
    if max_n < 3:
        return
    lo = max(start, 3)
    sieve = bytearray([1]) * (max_n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(max_n) + 1):
        if sieve[i]:
            sieve[i * i:: i] = bytearray(len(range(i * i, max_n + 1, i)))
    for n in range(lo, max_n + 1):
        a, odd = two_adic(n)
        if odd >= 3 and sieve[odd]:
            h = a + 1
            yield PhiDecomposition(n=n, h=h, p=odd, k=(1 << h) - odd)


def ek_members(k: int, limit_h: int) -> List[PhiDecomposition]:
    """Members n = p(p+k)/2 of E_k with p = 2^h - k prime, 1 <= h <= limit_h.

    Even k (including 0) gives an empty list: p odd and 2^h even force k odd.
    """
    if limit_h < 1:
        raise ValueError("limit_h must be >= 1")
    if k % 2 == 0:
        return []
    out = []
    for h in range(1, limit_h + 1):
        p = (1 << h) - k
        if p < 3:
            continue
        ok, certainty = primality(p)
        if ok:
            out.append(PhiDecomposition(n=p * (p + k) // 2, h=h, p=p, k=k, certainty=certainty))
    return out


def sign(x) -> int:
    return (x > 0) - (x < 0)
