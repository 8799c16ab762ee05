"""Closed-form quantities for dominating sets in G(n, p), evaluated in log space.

Notation: ``X_r`` is the number of dominating sets of size ``r``,
``q = 1/(1-p)`` and ``d = n p``. Powers ``(1-p)^k`` are always formed as
``exp(k * log1p(-p))`` so nothing underflows before the final exponent,
and ``ln(1 - e^a)`` goes through :func:`log1mexp`.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

from .errors import DomainError

SPARSE_SEARCH = "sparse_search"
DENSE_CLOSED_FORM = "dense_closed_form"
VERY_DENSE = "very_dense"

NEG_INF = float("-inf")
_BOUNDARY_RTOL = 1e-12


def log1mexp(a):
    """``ln(1 - exp(a))`` for ``a <= 0``, accurate on both ends."""
    if a > 0:
        raise DomainError(f"log1mexp needs a <= 0, got {a}")
    if a == 0:
        return NEG_INF
    if a > -math.log(2):
        return math.log(-math.expm1(a))
    return math.log1p(-math.exp(a))


def log_expm1(x):
    """``ln(exp(x) - 1)`` for ``x > 0`` without overflow."""
    if x <= 0:
        raise DomainError(f"log_expm1 needs x > 0, got {x}")
    if x > 30.0:
        return x + math.log1p(-math.exp(-x))
    return math.log(math.expm1(x))


def logsumexp(xs):
    xs = list(xs)
    if not xs:
        return NEG_INF
    top = max(xs)
    if math.isinf(top):
        return top
    return top + math.log(math.fsum(math.exp(x - top) for x in xs))


def log_binom(n, k):
    if k < 0 or k > n:
        return NEG_INF
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _log_miss(p):
    # ln(1-p)
    return math.log1p(-p)


def _check_p(p, *, allow_zero=True):
    if math.isnan(p) or not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    if p == 1.0:
        raise DomainError("p = 1 leaves q = 1/(1-p) undefined")
    if not allow_zero and p == 0.0:
        raise DomainError("p must be positive")


def _check_size(n, r):
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n}")
    if int(r) != r or not 0 <= r <= n:
        raise DomainError(f"need 0 <= r <= n, got r={r}, n={n}")


def log_set_dominates(n, p, r):
    """ln P(a fixed r-set dominates) = (n - r) ln(1 - (1-p)^r)."""
    if n == r:
        return 0.0
    return (n - r) * log1mexp(r * _log_miss(p))


def log_expected_dominating_sets(n, p, r):
    """ln E(X_r) = ln C(n, r) + (n - r) ln(1 - (1-p)^r); ``-inf`` when E(X_r) = 0."""
    _check_size(n, r)
    _check_p(p)
    return log_binom(n, r) + log_set_dominates(n, p, r)


def _check_sparse_regime(n, p):
    _check_p(p, allow_zero=False)
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    d = n * p
    if d <= 1.0:
        raise DomainError(
            f"d = n p = {d:g} <= 1: the threshold 1/d is not below E(X_n) = 1, "
            "so the critical size is undefined in this regime"
        )
    return d


def critical_r_hat(n, p):
    """One less than the first r with E(X_r) >= 1/d."""
    d = _check_sparse_regime(n, p)
    threshold = -math.log(d)
    for r in range(1, n + 1):
        if log_expected_dominating_sets(n, p, r) >= threshold:
            return r - 1
    raise AssertionError("unreachable: E(X_n) = 1 >= 1/d")


def dense_r_hat(n, p):
    """Closed form log_q(n ln q / ln^2 n) for the dense range e <= q <= n."""
    if math.isnan(p) or not 0.0 < p < 1.0:
        raise DomainError(f"dense closed form needs 0 < p < 1, got {p}")
    if n < 3:
        raise DomainError(f"dense closed form needs n >= 3, got {n}")
    log_q = -_log_miss(p)
    if log_q < 1.0:
        raise DomainError(f"dense closed form needs q >= e, got q = {math.exp(log_q):g}")
    if log_q > math.log(n):
        raise DomainError(f"q = {math.exp(log_q):g} > n = {n}: very dense regime")
    log_n = math.log(n)
    if n * log_q <= log_n ** 2:
        raise DomainError("n ln q <= ln^2 n: closed form is not positive")
    return (log_n + math.log(log_q) - 2.0 * math.log(log_n)) / log_q


@dataclass(frozen=True)
class ConcentrationPrediction:
    n: int
    p: float
    r_hat: int
    interval: tuple
    log_E_at_r_hat: float
    log_E_at_r_hat_plus_1: float
    log_E_at_r_hat_plus_2: float
    log_threshold: float | None
    regime: str
    r_hat_source: str
    dense_r_hat: float | None

    def to_dict(self):
        out = asdict(self)
        out["interval"] = list(self.interval)
        return out


def predicted_interval(n, p):
    """Two-point prediction (r_hat + 1, r_hat + 2) for D(G(n, p)).

    ``q >= n`` is the very dense case where a single vertex usually
    dominates; the interval is (1, 2) and ``r_hat`` is reported as 0.
    Everywhere else ``r_hat`` comes from the expectation search; the
    closed form is carried along as a diagnostic when ``q >= e``.
    """
    _check_p(p, allow_zero=False)
    if int(n) != n or n < 3:
        raise DomainError(f"n must be an integer >= 3, got {n}")
    n = int(n)
    log_q = -_log_miss(p)
    # q == n sits on the boundary; p = 1 - 1/n must land here despite rounding
    if log_q >= math.log(n) * (1.0 - _BOUNDARY_RTOL):
        lE = [log_expected_dominating_sets(n, p, r) for r in (0, 1, 2)]
        return ConcentrationPrediction(
            n, p, 0, (1, 2), lE[0], lE[1], lE[2], None, VERY_DENSE, "very_dense_rule", None
        )
    r_hat = critical_r_hat(n, p)
    lE = [log_expected_dominating_sets(n, p, min(r, n)) for r in (r_hat, r_hat + 1, r_hat + 2)]
    dense = None
    regime = SPARSE_SEARCH
    if log_q >= 1.0:
        regime = DENSE_CLOSED_FORM
        dense = dense_r_hat(n, p)
    return ConcentrationPrediction(
        n, p, r_hat, (r_hat + 1, r_hat + 2), lE[0], lE[1], lE[2], -math.log(n * p),
        regime, "search", dense,
    )


class ExpectationJump(NamedTuple):
    log_ratio: float
    asymptotic: float


def log_expectation_ratio(n, p, r, alpha):
    """ln E(X_{r+alpha}) - ln E(X_r), with the approximation alpha ln^2 d alongside."""
    _check_size(n, r)
    _check_size(n, r + alpha)
    lo = log_expected_dominating_sets(n, p, r)
    hi = log_expected_dominating_sets(n, p, r + alpha)
    if math.isinf(lo) and math.isinf(hi):
        raise DomainError("both expectations are zero; their ratio is undefined")
    d = n * p
    approx = alpha * math.log(d) ** 2 if d > 0 else float("nan")
    if alpha == 0:
        return ExpectationJump(0.0, approx)
    return ExpectationJump(hi - lo, approx)


def log_variance_term(n, p, r, s):
    """ln of C(r,s) C(n-r,r-s) (1 - 2(1-p)^r + (1-p)^(2r-s))^(n-2r+s).

    The base is rewritten as ``(1-a)^2 + a^2((1-p)^(-s) - 1)`` with
    ``a = (1-p)^r``, a sum of two non-negative terms, so it can be combined
    with logaddexp without cancellation.
    """
    _check_size(n, r)
    _check_p(p)
    if 2 * r > n:
        raise DomainError(f"variance terms need r <= n/2, got r={r}, n={n}")
    if int(s) != s or not 0 <= s <= r:
        raise DomainError(f"need 0 <= s <= r, got s={s}, r={r}")
    exponent = n - 2 * r + s
    log_comb = log_binom(r, s) + log_binom(n - r, r - s)
    if exponent == 0:
        return log_comb
    log_a = r * _log_miss(p)
    first = 2.0 * log1mexp(log_a)
    if s == 0 or p == 0.0:
        second = NEG_INF
    else:
        second = 2.0 * log_a + log_expm1(-s * _log_miss(p))
    base = logsumexp([first, second])
    if math.isinf(base):
        return NEG_INF
    return log_comb + exponent * base


def log_second_moment_bound(n, p, r):
    """ln of C(n, r) * sum_s f(s), an upper bound on E(X_r^2)."""
    terms = [log_variance_term(n, p, r, s) for s in range(r + 1)]
    return log_binom(n, r) + logsumexp(terms)


def chebyshev_nonexistence_bound(n, p, r):
    """Upper bound on P(X_r = 0) from Chebyshev with the second-moment bound."""
    if not 1 <= r <= n / 2:
        raise DomainError(f"need 1 <= r <= n/2, got r={r}, n={n}")
    if math.isnan(p) or not 0.0 < p < 1.0:
        raise DomainError(f"p must lie strictly between 0 and 1, got {p}")
    log_e = log_expected_dominating_sets(n, p, r)
    if math.isinf(log_e):
        raise DomainError("E(X_r) = 0")
    excess = log_second_moment_bound(n, p, r) - 2.0 * log_e
    if excess >= math.log(2.0):
        return 1.0
    return min(1.0, max(0.0, math.expm1(excess)))


def talagrand_tail_product_bound(n, b, t):
    """exp(-t^2 / (4 (n - b))), bounding P(D <= b) P(D >= b + t)."""
    if b >= n:
        raise DomainError(f"need b < n, got b={b}, n={n}")
    if t < 0:
        raise DomainError(f"need t >= 0, got {t}")
    return math.exp(-t * t / (4.0 * (n - b)))


class CrucialLaw(NamedTuple):
    p_star: float
    mu: float


def crucial_edge_law(n, p, r):
    """Conditional probability that an outside vertex is crucial, and the mean count.

    Given that a fixed r-set dominates, each of the n - r outside vertices is
    crucial independently with probability r p (1-p)^(r-1) / (1 - (1-p)^r).
    """
    if int(r) != r or not 1 <= r <= n:
        raise DomainError(f"need 1 <= r <= n, got r={r}, n={n}")
    if math.isnan(p) or not 0.0 < p < 1.0:
        raise DomainError(f"p must lie strictly between 0 and 1, got {p}")
    lm = _log_miss(p)
    p_star = math.exp(math.log(r * p) + (r - 1) * lm - log1mexp(r * lm))
    p_star = min(p_star, 1.0)
    return CrucialLaw(p_star, (n - r) * p_star)


def survival_probability(c_size, p_del):
    """(1 - p_del)^c_size: chance that none of c_size crucial edges is deleted."""
    if int(c_size) != c_size or c_size < 0:
        raise DomainError(f"crucial count must be a non-negative integer, got {c_size}")
    if math.isnan(p_del) or not 0.0 <= p_del <= 1.0:
        raise DomainError(f"deletion probability must lie in [0, 1], got {p_del}")
    if c_size == 0:
        return 1.0
    if p_del == 1.0:
        return 0.0
    return math.exp(c_size * math.log1p(-p_del))


def deletion_probability(n, p, x):
    """x / (n sqrt p)."""
    if n <= 0 or not 0.0 < p <= 1.0:
        raise DomainError(f"need n > 0 and 0 < p <= 1, got n={n}, p={p}")
    value = x / (n * math.sqrt(p))
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"deletion probability {value:g} outside [0, 1]")
    return value
