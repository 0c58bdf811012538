"""Binomial tail probabilities and the geometric tail bound.

Row erasure counts are Binomial(n, theta). This module computes exact tails in
log domain (log-gamma terms, compensated summation), the closed-form
probabilities for the max/min per-row erasure count across ``t`` independent
rows, the geometric-series upper bound on the upper tail, and the sparsity
budget implied by an erasure rate.

Threshold convention: ``P(X >= c)`` sums the pmf from ``ceil(c)`` upward and
``P(X <= c)`` up to ``floor(c)``. Real thresholds within 1e-9 of an integer
are treated as that integer before rounding, so expressions like ``400*0.35``
keep their exact-math value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "TailBoundResult",
    "binom_tail_upper",
    "binom_tail_lower",
    "lemma_tail_bound",
    "prob_mmax_below",
    "prob_mmin_below",
    "support_budget",
]

# snap guard for float thresholds that are integers in exact arithmetic
_SNAP = 1e-9


def _ceil_snapped(v: float) -> int:
    return math.ceil(v - _SNAP)


def _floor_snapped(v: float) -> int:
    return math.floor(v + _SNAP)


def _validate_n_theta(n: int, theta: float):
    if not isinstance(n, (int,)) or isinstance(n, bool):
        raise ValueError("n must be an integer")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not (0.0 <= theta <= 1.0) or math.isnan(theta):
        raise ValueError(f"theta must lie in [0, 1], got {theta}")


def _log_pmf(n: int, j: int, theta: float) -> float:
    """log P(X = j) for X ~ Binomial(n, theta), theta strictly inside (0, 1)."""
    log_comb = math.lgamma(n + 1) - math.lgamma(j + 1) - math.lgamma(n - j + 1)
    return log_comb + j * math.log(theta) + (n - j) * math.log1p(-theta)


def binom_tail_upper(n: int, theta: float, threshold: float) -> float:
    """P(X >= threshold) for X ~ Binomial(n, theta).

    Summation starts at ``ceil(threshold)`` (snapped); thresholds at or below
    zero give 1, thresholds above ``n`` give 0.
    """
    _validate_n_theta(n, theta)
    j = _ceil_snapped(threshold)
    if j <= 0:
        return 1.0
    if j > n:
        return 0.0
    if theta == 0.0:
        return 0.0  # X is identically 0 and j >= 1
    if theta == 1.0:
        return 1.0  # X is identically n and j <= n
    terms = [math.exp(_log_pmf(n, y, theta)) for y in range(j, n + 1)]
    return min(1.0, math.fsum(terms))


def binom_tail_lower(n: int, theta: float, threshold: float) -> float:
    """P(X <= threshold); summation runs up to ``floor(threshold)`` (snapped).

    Satisfies the reflection identity
    ``binom_tail_lower(n, theta, c) == binom_tail_upper(n, 1-theta, n-c)``.
    """
    _validate_n_theta(n, theta)
    j = _floor_snapped(threshold)
    if j < 0:
        return 0.0
    if j >= n:
        return 1.0
    if theta == 0.0:
        return 1.0  # X identically 0 and j >= 0
    if theta == 1.0:
        return 0.0  # X identically n and j < n
    terms = [math.exp(_log_pmf(n, y, theta)) for y in range(0, j + 1)]
    return min(1.0, math.fsum(terms))


@dataclass(frozen=True)
class TailBoundResult:
    """Exact upper tail next to its geometric-series bound.

    ``valid`` is true when the bound's term ratio is strictly below one, i.e.
    the geometric sum converges and ``lemma_bound`` is finite.
    """

    exact_tail: float
    lemma_bound: float
    geometric_prefactor: float
    valid: bool


def lemma_tail_bound(n: int, theta: float, k: float) -> TailBoundResult:
    """Geometric-series bound on P(X >= n*k) for X ~ Binomial(n, theta).

    With ``j = ceil(n*k)``, consecutive pmf terms beyond ``j`` shrink by at
    least ``r = (n-j)*theta / ((j+1)*(1-theta))``, so when ``r < 1`` the tail
    is at most ``pmf(j) / (1 - r)``. Requires ``0 < theta < k < 1``.
    """
    _validate_n_theta(n, theta)
    if not (0.0 < theta < k < 1.0):
        raise ValueError(f"need 0 < theta < k < 1, got theta={theta}, k={k}")
    j = _ceil_snapped(n * k)
    j = max(j, 0)
    if j > n:
        # k < 1 makes this unreachable, kept as a guard
        return TailBoundResult(0.0, 0.0, 1.0, True)
    r = (n - j) * theta / ((j + 1) * (1.0 - theta))
    exact = binom_tail_upper(n, theta, n * k)
    if r >= 1.0:
        return TailBoundResult(exact, math.inf, math.inf, False)
    prefactor = 1.0 / (1.0 - r)
    bound = prefactor * math.exp(_log_pmf(n, j, theta))
    return TailBoundResult(exact, bound, prefactor, True)


def prob_mmax_below(n: int, t: int, theta: float, c: float) -> float:
    """P(max of t iid Binomial(n, theta) draws < c), in log domain.

    This is the probability that every row's erasure count stays below ``c``,
    i.e. ``(1 - P(X >= c))**t`` computed as ``exp(t*log1p(-tail))``.
    """
    if t < 1:
        raise ValueError(f"t must be positive, got {t}")
    tail = binom_tail_upper(n, theta, c)
    if tail >= 1.0:
        return 0.0
    if tail == 0.0:
        return 1.0
    return math.exp(t * math.log1p(-tail))


def prob_mmin_below(n: int, t: int, theta: float, c: float) -> float:
    """P(min of t iid Binomial(n, theta) draws < c) = 1 - P(X >= c)**t."""
    if t < 1:
        raise ValueError(f"t must be positive, got {t}")
    tail = binom_tail_upper(n, theta, c)
    if tail == 0.0:
        return 1.0
    if tail >= 1.0:
        return 0.0
    return -math.expm1(t * math.log(tail))


def support_budget(theta: float, t: int) -> tuple[int, int]:
    """Largest per-row support with a recovery guarantee at erasure rate theta.

    Returns ``(per_row, total)`` with ``per_row = ceil(1/(2*theta)) - 1`` and
    ``total = t * per_row``. The snap guard keeps exact reciprocals (e.g.
    ``theta = 1/6``) from rounding up spuriously.
    """
    if t < 1:
        raise ValueError(f"t must be positive, got {t}")
    if not (0.0 < theta <= 1.0) or math.isnan(theta):
        raise ValueError(f"theta must lie in (0, 1], got {theta}")
    per_row = _ceil_snapped(1.0 / (2.0 * theta)) - 1
    per_row = max(per_row, 0)
    return per_row, t * per_row
