"""
Counting ideals by brute force
==============================

For tiny n and q we enumerate commuting invertible matrices with a
cyclic vector and divide by |GL_n(F_q)|.  The count matches the
polynomial value.
"""

import time

from krpoly import cn_eval, count_ideals_bruteforce

for n, q in [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2), (2, 5)]:
    t0 = time.perf_counter()
    brute = count_ideals_bruteforce(n, q)
    print(f"n={n} q={q}: brute force {brute:4d}  polynomial {cn_eval(n, q)}"
          f"  ({time.perf_counter() - t0:.2f}s)")

# (3, 3) takes roughly ten seconds; uncomment to run it
# print(count_ideals_bruteforce(3, 3))
