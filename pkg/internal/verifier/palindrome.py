"""
Palindromic concatenations of two distinct repdigits, d1^l d2^m d1^l.
"""

import logging

from dataclasses import dataclass

from .constants import (
    SCREEN_ELL_LIMIT,
    SCREEN_TWO_ADIC_ELL_PLUS_M,
    SCREEN_TWO_ADIC_N,
    SMALL_CASE_ELL_MAX,
    SMALL_CASE_M_MAX,
    SMALL_CASE_N_MIN,
)
from .errors import DomainError

logger = logging.getLogger(__name__)

LEADING_DIGITS = range(1, 10)
DIGITS = range(0, 10)


@dataclass(frozen=True, order=True)
class PalindromeDecomposition:
    d1: int
    d2: int
    ell: int
    m: int

    def __post_init__(self) -> None:
        if self.d1 not in LEADING_DIGITS:
            raise DomainError(f"d1 must be a digit 1..9, got {self.d1}")
        if self.d2 not in DIGITS:
            raise DomainError(f"d2 must be a digit 0..9, got {self.d2}")
        if self.d1 == self.d2:
            raise DomainError("d1 and d2 must differ")
        if self.ell < 1 or self.m < 1:
            raise DomainError(f"block lengths must be >= 1, got l={self.ell}, m={self.m}")

    @property
    def digit_count(self) -> int:
        return 2 * self.ell + self.m

    @property
    def digits(self) -> str:
        outer = str(self.d1) * self.ell
        return outer + str(self.d2) * self.m + outer

    @property
    def middle_factor(self) -> int:
        """d1 * 10^l - (d1 - d2), the numerator of the second and fourth forms."""
        return self.d1 * 10**self.ell - (self.d1 - self.d2)

    def as_dict(self) -> dict[str, int]:
        return {"d1": self.d1, "d2": self.d2, "ell": self.ell, "m": self.m}


@dataclass(frozen=True)
class PowerCaseHit:
    decomposition: PalindromeDecomposition
    value: int
    n: int


def compose(dec: PalindromeDecomposition) -> int:
    ell, m = dec.ell, dec.m
    ninefold = (
        dec.d1 * (10**ell - 1) * 10 ** (ell + m)
        + dec.d2 * (10**m - 1) * 10**ell
        + dec.d1 * (10**ell - 1)
    )
    return ninefold // 9


def decompose(value: int) -> PalindromeDecomposition | None:
    """Witness (d1, d2, l, m) for ``value``, smallest l first, or None."""
    if value <= 0:
        return None
    digits = str(value)
    size = len(digits)
    for ell in range(1, (size - 1) // 2 + 1):
        m = size - 2 * ell
        outer, middle, tail = digits[:ell], digits[ell : ell + m], digits[ell + m :]
        if outer != tail or outer[0] == middle[0]:
            continue
        if outer.count(outer[0]) == ell and middle.count(middle[0]) == m:
            return PalindromeDecomposition(int(outer[0]), int(middle[0]), ell, m)
    return None


def passes_sixteen_screen(n: int, ell: int) -> bool:
    """False when 16 | 27 * 2^(n-2) and 16 | 10^l but 16 cannot divide d1 (10^l - 1)."""
    return not (n >= SMALL_CASE_N_MIN and ell >= SCREEN_ELL_LIMIT)


def passes_two_adic_screen(n: int, ell: int, m: int) -> bool:
    """False when 2^14 | 27 * 2^(n-2) and 2^14 | 10^(l+m) but not the tail term."""
    return not (n >= SCREEN_TWO_ADIC_N and ell + m >= SCREEN_TWO_ADIC_ELL_PLUS_M)


def small_case_filter(n: int, ell: int, m: int) -> bool:
    """True when the (n, l, m) cell survives the divisibility screens."""
    return passes_sixteen_screen(n, ell) and passes_two_adic_screen(n, ell, m)


def iter_decompositions(ell_max: int, m_max: int):
    for d1 in LEADING_DIGITS:
        for d2 in DIGITS:
            if d2 == d1:
                continue
            for ell in range(1, ell_max + 1):
                for m in range(1, m_max + 1):
                    yield PalindromeDecomposition(d1, d2, ell, m)


def candidate_count(ell_max: int, m_max: int) -> int:
    return len(LEADING_DIGITS) * (len(DIGITS) - 1) * ell_max * m_max


def power_case_search(
    ell_max: int = SMALL_CASE_ELL_MAX, m_max: int = SMALL_CASE_M_MAX
) -> list[PowerCaseHit]:
    """Palindromes equal to 3 * 2^(n-2), the only values L_n takes for n <= k."""
    if ell_max < 1 or m_max < 1:
        raise DomainError("ell_max and m_max must be >= 1")
    hits = list[PowerCaseHit]()
    for dec in iter_decompositions(ell_max, m_max):
        value = compose(dec)
        if value % 3:
            continue
        power = value // 3
        if (power & (power - 1)) == 0:
            hits.append(PowerCaseHit(dec, value, power.bit_length() + 1))
    logger.debug("power case l<=%d m<=%d: %d hits", ell_max, m_max, len(hits))
    return hits
