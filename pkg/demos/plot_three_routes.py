"""
Three ways to the same polynomial
=================================

C_n(q) can be read off a closed coefficient rule, summed over odd
divisors of 2n, or pulled out of an infinite product.  All three
agree, and the result is palindromic with a double root at q = 1.
"""

from krpoly import Q, cn_via_coefficients, cn_via_divisors, cn_via_gf

n = 6
a = cn_via_coefficients(n)
b = cn_via_divisors(n).shift(n)
c = cn_via_gf(n)[n - 1].shift(n)
print("C_6(q) =", a)
print("routes agree:", a == b == c)

# divide out (q - 1)^2 twice by synthetic division
quot, rem = a.divmod_linear(1)
quot, rem2 = quot.divmod_linear(1)
print("C_6(q) / (q - 1)^2 =", quot, " remainders:", rem, rem2)

# palindromy: q^(2n) C_n(1/q) == C_n(q)
print("palindromic:", a.reflect().shift(2 * n) == a)

# a few values
for q0 in (2, 3, 5):
    print(f"C_{n}({q0}) =", a(q0))
