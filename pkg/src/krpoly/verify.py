"""Cross-route and identity checks used by the ``verify`` command and the tests."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .exact import LaurentPoly, RationalLike, as_rational
from .limits import closed_form_deviation
from .numtheory import PhiDecomposition, lemma1_sign, psi_beta, sign
from .oracle import count_ideals_bruteforce
from .polynomials import cn_eval, cn_via_coefficients, cn_via_divisors, cn_via_gf, deviation


def first_difference(a: LaurentPoly, b: LaurentPoly) -> Optional[int]:
    """Smallest exponent where the two polynomials differ, None if equal."""
    diff = a - b
    return None if diff.is_zero() else diff.valuation()


def structural_problems(n: int, poly: LaurentPoly, eval_points: Sequence[int] = (2, 3, 5)) -> List[str]:
    """Ways in which ``poly`` (claimed to be C_n) breaks the known shape."""
    problems = []
    if poly.is_zero():
        return ["zero polynomial"]
    if poly.degree() != 2 * n:
        problems.append(f"degree {poly.degree()} != {2 * n}")
    if poly.valuation() != 0:
        problems.append(f"lowest exponent {poly.valuation()} != 0")
    if poly.coeff(2 * n) != 1:
        problems.append(f"leading coefficient {poly.coeff(2 * n)} != 1")
    if poly.reflect().shift(2 * n) != poly:
        problems.append("not palindromic")
    quot, rem = poly.divmod_linear(1)
    if rem:
        problems.append("C_n(1) != 0")
    elif quot.divmod_linear(1)[1]:
        problems.append("(q - 1)^2 does not divide")
    for q0 in eval_points:
        if poly(q0) <= 0:
            problems.append(f"C_n({q0}) <= 0")
    return problems


@dataclass
class RouteRow:
    n: int
    coeffs_vs_divisors: Optional[int]
    coeffs_vs_gf: Optional[int]
    gf_checked: bool
    problems: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.coeffs_vs_divisors is None and self.coeffs_vs_gf is None and not self.problems


def route_rows(max_n: int, gf_max: int, progress: Optional[Callable[[str], None]] = None) -> List[RouteRow]:
    gf = cn_via_gf(gf_max) if gf_max >= 1 else []
    rows = []
    for n in range(1, max_n + 1):
        base = cn_via_coefficients(n)
        div = cn_via_divisors(n).shift(n)
        gf_poly = gf[n - 1].shift(n) if n <= gf_max else None
        rows.append(RouteRow(
            n=n,
            coeffs_vs_divisors=first_difference(base, div),
            coeffs_vs_gf=None if gf_poly is None else first_difference(base, gf_poly),
            gf_checked=gf_poly is not None,
            problems=structural_problems(n, base),
        ))
        if progress and n % 50 == 0:
            progress(f"verified n <= {n}")
    return rows


@dataclass
class OracleRow:
    n: int
    q: int
    bruteforce: int
    formula: int

    @property
    def ok(self) -> bool:
        return self.bruteforce == self.formula


def oracle_rows(pairs: Iterable[Tuple[int, int]], budget: int) -> List[OracleRow]:
    out = []
    for n, q in pairs:
        f = cn_eval(n, q)
        out.append(OracleRow(n, q, count_ideals_bruteforce(n, q, budget=budget), int(f)))
    return out


def lemma1_holds(dec: PhiDecomposition) -> bool:
    pb = psi_beta(dec.n)
    return pb.beta == Fraction(abs(dec.k) - 1, 2) and lemma1_sign(dec.n) == sign(dec.k)


def lemma4_holds(dec: PhiDecomposition, q0: RationalLike) -> bool:
    """Direct polynomial deviation equals the closed form in k and n."""
    q0 = as_rational(q0)
    return deviation(dec.n, q0) == closed_form_deviation(dec, q0)
