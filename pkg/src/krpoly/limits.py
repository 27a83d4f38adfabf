"""Limit candidates, scans of the deviation family over Phi, and the Fermat/Mersenne criterion.

For n in Phi with n = p(p+k)/2 the deviation

    D_n(q) = C_n(q)/q^n - (1 - 1/q) q^n

equals ``L_q(k) - (q - 1)/q^n`` where

    L_q(k) = sign(k) (q - 1)(q^|k| - 1) / q^((|k| + 1)/2).

Large-n quantities are only ever materialized on demand: reports keep
``(n, k, q)`` and compute exact rationals from them when asked.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InconsistencyError, InvalidParametersError
from .exact import RationalLike, as_rational, div_by_power
from .numtheory import PROBABLE, PhiDecomposition, ek_members, iter_phi, sign
from .polynomials import deviation as direct_deviation

WORKERS_ENV = "KRPOLY_WORKERS"
DEFAULT_CROSSCHECK = 2000


def _check_q(q0: Fraction) -> None:
    if q0 < 2:
        raise InvalidParametersError(f"q must be >= 2, got {q0}")


def limit_candidate(k: int, q0: RationalLike) -> Fraction:
    """``L_q(k) = sign(k) (q-1)(q^|k| - 1) / q^((|k|+1)/2)`` for odd k."""
    q0 = as_rational(q0)
    _check_q(q0)
    if k % 2 == 0:
        raise InvalidParametersError(
            f"k={k} is even; p odd and p + k a power of 2 force k odd, so E_k is empty"
        )
    a = abs(k)
    half = (a + 1) // 2
    if q0.denominator == 1:
        q = q0.numerator
        return div_by_power(sign(k) * (q - 1) * (q ** a - 1), q, half)
    return sign(k) * (q0 - 1) * (q0 ** a - 1) / q0 ** half


def residual(n: int, q0: RationalLike) -> Fraction:
    """``D_n(q) - L_q(k) = -(1 - 1/q)/q^(n-1) = -(q - 1)/q^n``."""
    q0 = as_rational(q0)
    if q0.denominator == 1:
        return div_by_power(-(q0.numerator - 1), q0.numerator, n)
    return -(q0 - 1) / q0 ** n


def closed_form_deviation(dec: PhiDecomposition, q0: RationalLike) -> Fraction:
    """Deviation of ``dec.n`` from its k alone, as one exact rational."""
    q0 = as_rational(q0)
    _check_q(q0)
    k, n = dec.k, dec.n
    a = abs(k)
    half = (a + 1) // 2
    if q0.denominator == 1 and n >= half:
        q = q0.numerator
        num = sign(k) * (q - 1) * (q ** a - 1) * q ** (n - half) - (q - 1)
        return div_by_power(num, q, n)
    return limit_candidate(k, q0) + residual(n, q0)


def nearest_candidate_k(value: Fraction, q0: RationalLike) -> int:
    """Odd k whose limit candidate is closest to ``value`` (ties go to smaller |k|)."""
    q0 = as_rational(q0)
    s = 1 if value >= 0 else -1
    target = abs(value)

    def mag(m: int) -> Fraction:
        return abs(limit_candidate(m, q0))

    # candidates grow with |k|: bracket by doubling, then bisect over odd m
    hi = 1
    while mag(hi) < target:
        hi = 2 * hi + 1
    lo = 1
    if hi > 1:
        lo = (hi - 1) // 2
        while hi - lo > 2:
            mid = (lo + hi) // 2
            mid += 1 - mid % 2
            if mag(mid) < target:
                lo = mid
            else:
                hi = mid
    # now mag(lo) < target <= mag(hi) or hi == 1
    if hi == 1 or abs(target - mag(lo)) > abs(mag(hi) - target):
        return s * hi
    return s * lo


@dataclass(frozen=True)
class DeviationRecord:
    """One member of Phi with its deviation, closed form and residual.

    ``direct`` is the deviation obtained by evaluating C_n(q) itself; it is
    only filled in for indices inside the crosscheck bound.
    """

    decomposition: PhiDecomposition
    q: Fraction
    direct: Optional[Fraction] = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return self.decomposition.n

    @property
    def k(self) -> int:
        return self.decomposition.k

    @property
    def crosschecked(self) -> bool:
        return self.direct is not None

    @cached_property
    def limit(self) -> Fraction:
        return limit_candidate(self.k, self.q)

    @cached_property
    def closed_form(self) -> Fraction:
        return closed_form_deviation(self.decomposition, self.q)

    @cached_property
    def residual(self) -> Fraction:
        return residual(self.n, self.q)

    @property
    def deviation(self) -> Fraction:
        return self.direct if self.direct is not None else self.closed_form


def _record(dec: PhiDecomposition, q0: Fraction, crosscheck_bound: int) -> DeviationRecord:
    if dec.n > crosscheck_bound:
        return DeviationRecord(dec, q0)
    rec = DeviationRecord(dec, q0, direct_deviation(dec.n, q0))
    if rec.direct != rec.closed_form:
        raise InconsistencyError(
            f"n={dec.n}: direct deviation {rec.direct} != closed form {rec.closed_form}", n=dec.n
        )
    if rec.direct - rec.limit != rec.residual:
        raise InconsistencyError(f"n={dec.n}: residual is not -(q-1)/q^n", n=dec.n)
    nearest = nearest_candidate_k(rec.direct, q0)
    if nearest != dec.k:
        raise InconsistencyError(f"n={dec.n}: nearest limit candidate is k={nearest}, not k={dec.k}", n=dec.n)
    return rec


@dataclass
class ClusterGroup:
    k: int
    q: Fraction
    members: List[int]

    @property
    def count(self) -> int:
        return len(self.members)

    @cached_property
    def limit(self) -> Fraction:
        return limit_candidate(self.k, self.q)

    @property
    def max_residual_exponent(self) -> int:
        """max |residual| over the group is ``(q - 1) * q^(-this)``."""
        return min(self.members)

    @cached_property
    def max_abs_residual(self) -> Fraction:
        return -residual(min(self.members), self.q)


@dataclass
class ClusterReport:
    q: Fraction
    max_n: int
    crosscheck_bound: int
    groups: Dict[int, ClusterGroup]
    records: List[DeviationRecord]

    @property
    def largest_k(self) -> Optional[int]:
        return max(self.groups) if self.groups else None

    @property
    def smallest_k(self) -> Optional[int]:
        return min(self.groups) if self.groups else None

    def ordered_groups(self) -> List[ClusterGroup]:
        """Sorted by |k|, negative before positive."""
        return [self.groups[k] for k in sorted(self.groups, key=lambda k: (abs(k), k))]

    def max_abs_residual(self) -> Fraction:
        if not self.groups:
            return Fraction(0)
        return -residual(min(g.max_residual_exponent for g in self.groups.values()), self.q)

    def certainty_counts(self) -> Dict[str, int]:
        probable = sum(1 for r in self.records if r.decomposition.certainty == PROBABLE)
        return {"proved": len(self.records) - probable, "probable": probable}


def _scan_chunk(args: Tuple[int, int, Fraction, int]) -> List[DeviationRecord]:
    lo, hi, q0, crosscheck_bound = args
    return [_record(dec, q0, crosscheck_bound) for dec in iter_phi(hi, start=lo)]


def _chunks(max_n: int, workers: int) -> List[Tuple[int, int]]:
    if workers <= 1:
        return [(1, max_n)]
    step = max(1, -(-max_n // (4 * workers)))
    return [(lo, min(lo + step - 1, max_n)) for lo in range(1, max_n + 1, step)]


def resolve_workers(workers: Optional[int] = None) -> int:
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    return max(1, workers)


def scan_phi(
    max_n: int,
    q0: RationalLike = 2,
    crosscheck_bound: int = DEFAULT_CROSSCHECK,
    workers: Optional[int] = None,
) -> ClusterReport:
    """Group every n <= max_n in Phi by its k.

    Indices up to ``crosscheck_bound`` are also evaluated through the
    polynomial and must match the closed form exactly, and their nearest
    limit candidate must be their own k; any mismatch raises
    InconsistencyError naming n.
    """
    q0 = as_rational(q0)
    _check_q(q0)
    if max_n < 0:
        raise InvalidParametersError("max_n must be >= 0")
    crosscheck_bound = min(crosscheck_bound, max_n)
    workers = resolve_workers(workers)
    jobs = [(lo, hi, q0, crosscheck_bound) for lo, hi in _chunks(max_n, workers)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_chunk, jobs))
    else:
        parts = [_scan_chunk(j) for j in jobs]
    records = [r for part in parts for r in part]
    groups: Dict[int, ClusterGroup] = {}
    for rec in records:
        groups.setdefault(rec.k, ClusterGroup(rec.k, q0, [])).members.append(rec.n)
    return ClusterReport(q=q0, max_n=max_n, crosscheck_bound=crosscheck_bound, groups=groups, records=records)


@dataclass(frozen=True)
class CriterionRow:
    decomposition: PhiDecomposition
    abs_deviation: Fraction
    threshold: Fraction
    flagged: bool

    @property
    def n(self) -> int:
        return self.decomposition.n


def criterion_threshold(n: int, epsilon_exponent: Optional[int] = None) -> Fraction:
    """``1/2 + 2^-n`` by default, or ``1/2 + 2^-epsilon_exponent`` when given."""
    e = n if epsilon_exponent is None else epsilon_exponent
    return Fraction(1, 2) + Fraction(1, 2 ** e)


def criterion_scan(
    max_n: int,
    epsilon_exponent: Optional[int] = None,
    crosscheck_bound: int = DEFAULT_CROSSCHECK,
) -> List[CriterionRow]:
    """Rows ``(n, |D_n(2)|, flagged)`` for n in Phi, n <= max_n.

    n is flagged when ``|D_n(2)| <= 1/2 + 2^-n``. Deviations come from the
    polynomial itself up to ``crosscheck_bound`` and from the closed form
    beyond it; the flag never looks at k.
    """
    rows = []
    for dec in iter_phi(max_n):
        if dec.n <= crosscheck_bound:
            dev = direct_deviation(dec.n, 2)
        else:
            dev = closed_form_deviation(dec, 2)
        thr = criterion_threshold(dec.n, epsilon_exponent)
        rows.append(CriterionRow(dec, abs(dev), thr, abs(dev) <= thr))
    return rows


def ek_search_report(
    k: int, limit_h: int, q0: RationalLike = 2, crosscheck_bound: int = DEFAULT_CROSSCHECK
) -> List[DeviationRecord]:
    """Deviation records along E_k for 1 <= h <= limit_h.

    The residuals shrink like ``q^-n``, so the deviations converge to
    ``limit_candidate(k, q0)`` as long as E_k keeps producing members.
    """
    q0 = as_rational(q0)
    _check_q(q0)
    return [_record(dec, q0, crosscheck_bound) for dec in ek_members(k, limit_h)]


def divergence_witness(records: Sequence[DeviationRecord], bound: Fraction) -> List[DeviationRecord]:
    """Records whose |deviation| already exceeds ``bound``."""
    return [r for r in records if abs(r.deviation) > bound]
