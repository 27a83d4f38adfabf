"""
Clusters of deviations and the perfect-number filter
====================================================

Scanning every n in Phi groups the deviations by k.  The k = 1 group is
made of even perfect numbers and the k = -1 group of triangular numbers
of Fermat primes, and a single inequality on |D_n(2)| picks exactly
these out.
"""

from krpoly import scan_phi
from krpoly.limits import criterion_scan

report = scan_phi(20000, q0=2)
for g in report.ordered_groups()[:6]:
    print(f"k={g.k:3d}  limit={str(g.limit):>8}  members={g.members[:6]}")

print("largest residual:", report.max_abs_residual())

flagged = [row.n for row in criterion_scan(10000) if row.flagged]
print("flagged by |D_n(2)| <= 1/2 + 2^-n:", flagged)
