"""Exact computation of the Kassel-Reutenauer ideal counts C_n(q) and the
limit points of the deviation family they generate over n = 2^a p."""

__version__ = "0.1.0"

from .errors import (
    BudgetExceededError,
    InconsistencyError,
    InvalidParametersError,
    KrError,
    ZeroEvaluationPointError,
)
from .exact import (
    Factor,
    LaurentPoly,
    Q,
    TruncatedSeries,
    as_rational,
    format_rational,
    laurent_eval,
    laurent_mul,
    series_mul_factor,
)
from .numtheory import (
    PhiDecomposition,
    PsiBeta,
    ek_members,
    factorize,
    is_prime,
    odd_divisors,
    phi_decompose,
    primality,
    psi_beta,
)
from .polynomials import (
    KrCoefficients,
    Route,
    cn_eval,
    cn_polynomial,
    cn_via_coefficients,
    cn_via_divisors,
    cn_via_gf,
    deviation,
    kr_coefficients,
)
from .oracle import count_ideals_bruteforce
from .limits import (
    ClusterReport,
    CriterionRow,
    DeviationRecord,
    closed_form_deviation,
    criterion_scan,
    ek_search_report,
    limit_candidate,
    nearest_candidate_k,
    residual,
    scan_phi,
)
