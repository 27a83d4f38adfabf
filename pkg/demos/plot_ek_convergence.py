"""
Deviations along E_k
====================

Members of E_k are n = p(p+k)/2 with p an odd prime and p + k a power
of two.  The deviation D_n(q) approaches L_q(k), and the gap is exactly
-(q - 1)/q^n.
"""

from fractions import Fraction

from krpoly import ek_members, limit_candidate
from krpoly.limits import ek_search_report

k = -3
print("first members of E_-3:", [d.n for d in ek_members(k, 12)])
print("L_2(-3) =", limit_candidate(k, 2))

for rec in ek_search_report(k, 8, q0=2):
    gap = rec.deviation - rec.limit
    print(f"n={rec.n:6d}  D_n(2)={float(rec.deviation): .12f}  gap == -2^-n: {gap == Fraction(-1, 2 ** rec.n)}")

# the same family at q = 3
for rec in ek_search_report(k, 5, q0=3):
    print(f"q=3 n={rec.n:4d}  D_n(3)={float(rec.deviation): .10f}  limit {float(rec.limit): .10f}")
