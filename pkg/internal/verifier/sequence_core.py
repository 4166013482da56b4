"""
Exact k-generalized Lucas numbers.

L_n = L_(n-1) + ... + L_(n-k) with L_(2-k) = ... = L_(-1) = 0, L_0 = 2, L_1 = 1.
Terms live in one contiguous list per k; index n is stored at slot n + k - 2.
"""

import logging

from typing import Any

from mpmath import iv

from .algebraic import AlgebraicContext
from .constants import BINET_RESIDUAL_BOUND, SHARP_ESTIMATE_FACTOR
from .errors import DomainError, PrecisionError
from .precision import (
    certainly_less,
    certainly_less_equal,
    width,
    working_precision,
)

logger = logging.getLogger(__name__)

# Widest residual enclosure still tight enough to decide |e| < 1.5.
MAX_RESIDUAL_WIDTH = 0.25


class KLucasContext:
    """Memo table of L_n^(k) extended with a sliding window sum.

    Extension is single-writer; once ``extend_to`` has run for the largest n a
    stage needs, reads are safe to share between workers.
    """

    def __init__(self, k: int) -> None:
        if k < 2:
            raise DomainError(f"k-generalized Lucas numbers need k >= 2, got {k}")
        self.__k = k
        self.__terms = [0] * (k - 2) + [2, 1]
        self.__window = 3

    @property
    def k(self) -> int:
        return self.__k

    @property
    def n_max(self) -> int:
        """Largest index currently in the table."""
        return len(self.__terms) - self.__k + 1

    def slot(self, n: int) -> int:
        return n + self.__k - 2

    def extend_to(self, n_max: int) -> None:
        terms, k = self.__terms, self.__k
        while len(terms) <= self.slot(n_max):
            term = self.__window
            self.__window += term - terms[-k]
            terms.append(term)

    def term(self, n: int) -> int:
        if n < 2 - self.__k:
            raise DomainError(f"L_n^({self.__k}) is defined for n >= {2 - self.__k}, got {n}")
        self.extend_to(n)
        return self.__terms[self.slot(n)]

    def terms(self, n_min: int, n_max: int) -> list[int]:
        self.extend_to(n_max)
        return self.__terms[self.slot(max(n_min, 2 - self.__k)) : self.slot(n_max) + 1]


def lucas_term(ctx: KLucasContext, n: int) -> int:
    return ctx.term(n)


def power_identity_check(ctx: KLucasContext, n: int) -> bool:
    """L_n = 3 * 2^(n-2) for 2 <= n <= k."""
    if not 2 <= n <= ctx.k:
        raise DomainError(f"the power identity holds for 2 <= n <= {ctx.k}, got n={n}")
    return ctx.term(n) == 3 << (n - 2)


def _check_pair(ctx: KLucasContext, alg: AlgebraicContext) -> None:
    if ctx.k != alg.k:
        raise DomainError(f"sequence for k={ctx.k} paired with alpha for k={alg.k}")


def _dominant_term(alg: AlgebraicContext, n: int) -> Any:
    return alg.f_alpha * alg.two_alpha_minus_one * alg.alpha ** (n - 1)


def binet_residual(ctx: KLucasContext, alg: AlgebraicContext, n: int) -> Any:
    """e_k(n) = L_n - f_k(alpha)(2 alpha - 1) alpha^(n-1) as an interval."""
    _check_pair(ctx, alg)
    value = ctx.term(n)
    with working_precision(alg.prec.bits):
        residual = iv.mpf(value) - _dominant_term(alg, n)
        if not certainly_less(width(residual), MAX_RESIDUAL_WIDTH):
            raise PrecisionError(
                f"residual e_{ctx.k}({n}) too wide at {alg.prec.bits} bits",
                bits=alg.prec.bits,
            )
    return residual


def residual_within_bound(residual: Any) -> bool:
    return certainly_less(abs(residual), BINET_RESIDUAL_BOUND)


def sharp_estimate_check(ctx: KLucasContext, alg: AlgebraicContext, n: int) -> bool:
    """|f_k(alpha)(2 alpha - 1) alpha^(n-1) - 3 * 2^(n-2)| < 3 * 2^(n-2) * 36 / 2^(k/2)."""
    _check_pair(ctx, alg)
    if n < 2 - ctx.k:
        raise DomainError(f"n must be >= {2 - ctx.k}, got {n}")
    if n > 0 and n * n >= 1 << ctx.k:
        raise DomainError(f"the sharp estimate needs n < 2^(k/2), got k={ctx.k}, n={n}")

    with working_precision(alg.prec.bits):
        power = iv.mpf(2) ** (n - 2)
        lhs = abs(_dominant_term(alg, n) - 3 * power)
        rhs = 3 * power * SHARP_ESTIMATE_FACTOR / iv.sqrt(iv.mpf(2) ** ctx.k)
        if certainly_less(lhs, rhs):
            return True
        if certainly_less_equal(rhs, lhs):
            return False
    raise PrecisionError(
        f"sharp estimate for k={ctx.k}, n={n} undecided at {alg.prec.bits} bits",
        bits=alg.prec.bits,
    )


def growth_envelope_check(ctx: KLucasContext, alg: AlgebraicContext, n: int) -> bool:
    """alpha^(n-1) <= L_n <= 2 alpha^n for n >= 1."""
    _check_pair(ctx, alg)
    if n < 1:
        raise DomainError(f"the growth envelope is stated for n >= 1, got {n}")
    value = ctx.term(n)
    with working_precision(alg.prec.bits):
        value = iv.mpf(value)
        below = certainly_less_equal(alg.alpha ** (n - 1), value)
        above = certainly_less_equal(value, 2 * alg.alpha**n)
    return below and above


def appendix_terms(k: int, n_max: int) -> list[int]:
    """The published search table: ``[0]*(k-2) + [2, 1]`` grown by full k-sums.

    Slot i holds L_(i+2-k). The published search labels slot i as n = i + 3 - k,
    one more than the recurrence index; only the labels differ, values agree.
    """
    if k < 2:
        raise DomainError("k must be at least 2")
    table = [0] * (k - 2) + [2, 1]
    for _ in range(len(table), n_max + k - 1):
        table.append(sum(table[-k:]))
    return table
