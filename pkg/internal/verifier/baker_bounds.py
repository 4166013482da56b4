"""
The four linear forms in three logarithms and their Matveev lower bounds,
plus the closed-form exponent bounds derived from them.

Matveev values and the symbolic bounds are coarse envelopes evaluated in
double precision after an outward-rounded ``mpmath.iv`` product; they are not
certificates. The lattice reductions carry the certified arithmetic.
"""

import logging
import math

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from mpmath import iv

from .algebraic import (
    AlgebraicContext,
    alpha_height_bound,
    gamma1_height_chain,
    gamma2_height_chain,
    height_bound_gamma1_case,
    log_height_rational,
)
from .constants import (
    CASE2_BRANCH_A_FACTOR,
    CASE2_BRANCH_A_LOG_N,
    CASE2_BRANCH_B_FACTOR,
    CASE2_BRANCH_B_LOG_N,
    ELL_BOUND_FACTOR,
    G1_GAMMA_NUMERATOR,
    G2_GAMMA_NUMERATOR,
    MATVEEV_A_FLOOR,
    MATVEEV_BASE,
    MATVEEV_FACTOR,
    M_BOUND_FACTOR,
    N_BOUND_FACTOR,
    THEOREM_K_MIN,
    Branch,
    FormKind,
)
from .errors import DomainError, PrecisionError
from .palindrome import PalindromeDecomposition
from .precision import excludes_zero, interval, working_precision

logger = logging.getLogger(__name__)

MATVEEV_BITS = 128
CLOSURE_START = 1e40
CLOSURE_MAX_STEPS = 500


@dataclass(frozen=True)
class GammaDescriptor:
    label: str
    value: Any
    log: Any
    height: float
    A: float

    def as_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "log": float(self.log.mid),
            "height": self.height,
            "A": self.A,
        }


@dataclass(frozen=True)
class LinearFormSpec:
    kind: FormKind
    gammas: tuple[GammaDescriptor, ...]
    coeffs: tuple[int, ...]
    t: int
    D: int
    B: int

    def __post_init__(self) -> None:
        if not len(self.gammas) == len(self.coeffs) == self.t == 3:
            raise DomainError("linear forms here have exactly three logarithms")
        if self.B < max(abs(b) for b in self.coeffs):
            raise DomainError(f"B={self.B} does not dominate the coefficients {self.coeffs}")
        for gamma in self.gammas:
            log_magnitude = max(abs(float(gamma.log.a)), abs(float(gamma.log.b)))
            admissible = max(self.D * gamma.height, log_magnitude, MATVEEV_A_FLOOR)
            if gamma.A < admissible:
                raise DomainError(
                    f"A={gamma.A} for {gamma.label} is below max(Dh, |log|, 0.16)={admissible}"
                )

    @property
    def A(self) -> tuple[float, ...]:
        return tuple(gamma.A for gamma in self.gammas)

    def as_dict(self) -> dict[str, Any]:
        return {
            "kind": str(self.kind),
            "t": self.t,
            "D": self.D,
            "B": self.B,
            "coeffs": list(self.coeffs),
            "gammas": [gamma.as_dict() for gamma in self.gammas],
        }


def _rational_gamma(label: str, value: Fraction, A: float) -> GammaDescriptor:
    with working_precision(MATVEEV_BITS):
        enclosure = interval(value)
        return GammaDescriptor(
            label,
            enclosure,
            iv.log(enclosure),
            log_height_rational(value.numerator, value.denominator),
            A,
        )


def _check_common(k: int, d1: int, d2: int, ell: int, m: int, n: int) -> PalindromeDecomposition:
    if k < THEOREM_K_MIN:
        raise DomainError(f"linear forms are set up for k >= {THEOREM_K_MIN}, got {k}")
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    return PalindromeDecomposition(d1, d2, ell, m)


def _alpha_gammas(
    kind: FormKind,
    k: int,
    dec: PalindromeDecomposition,
    alg: AlgebraicContext,
    log_n_bound: float,
) -> tuple[GammaDescriptor, GammaDescriptor, GammaDescriptor]:
    if alg is None or alg.k != k:
        raise DomainError(f"{kind} needs the algebraic context for k={k}")
    log_alpha_high = float(alg.log_alpha.b)

    with working_precision(alg.prec.bits):
        core = 9 * alg.f_alpha * alg.two_alpha_minus_one
        if kind is FormKind.G1:
            gamma1 = core / dec.d1
            height = gamma1_height_chain(k, log_alpha_high)
        else:
            gamma1 = core / dec.middle_factor
            height = gamma2_height_chain(k, dec.ell, log_alpha_high)
        first = GammaDescriptor(
            "gamma1",
            gamma1,
            iv.log(gamma1),
            height,
            height_bound_gamma1_case(kind, k=k, log_n_bound=log_n_bound),
        )
        second = GammaDescriptor("alpha", alg.alpha, alg.log_alpha, log_alpha_high / k, alpha_height_bound())
        ten = iv.mpf(10)
        third = GammaDescriptor("10", ten, iv.log(ten), math.log(10), k * math.log(10))
    return first, second, third


def build_gamma(
    kind: FormKind | str,
    k: int,
    d1: int,
    d2: int,
    ell: int,
    m: int,
    n: int,
    alg: AlgebraicContext | None = None,
    n_bound: float | int | None = None,
) -> LinearFormSpec:
    """Populate one of the four forms with the published A_i and B = max(n, |b_i|).

    ``n_bound`` feeds the log n factor of the G2 and G4 A_1; it defaults to n.
    """
    try:
        kind = FormKind(kind)
    except ValueError:
        raise DomainError(f"unknown linear form {kind!r}")
    dec = _check_common(k, d1, d2, ell, m, n)
    log_n_bound = math.log(n_bound if n_bound is not None else n)

    match kind:
        case FormKind.G1:
            gammas = _alpha_gammas(kind, k, dec, alg, log_n_bound)
            coeffs, D = (1, n - 1, -(2 * ell + m)), k
        case FormKind.G2:
            gammas = _alpha_gammas(kind, k, dec, alg, log_n_bound)
            coeffs, D = (1, n - 1, -(ell + m)), k
        case FormKind.G3:
            gammas = (
                _rational_gamma("d1/27", Fraction(d1, 27), height_bound_gamma1_case(kind)),
                _rational_gamma("10", Fraction(10), math.log(10)),
                _rational_gamma("2", Fraction(2), math.log(2)),
            )
            coeffs, D = (1, 2 * ell + m, -(n - 2)), 1
        case FormKind.G4:
            gammas = (
                _rational_gamma(
                    "(d1*10^l-(d1-d2))/27",
                    Fraction(dec.middle_factor, 27),
                    height_bound_gamma1_case(kind, log_n_bound=log_n_bound),
                ),
                _rational_gamma("10", Fraction(10), math.log(10)),
                _rational_gamma("2", Fraction(2), math.log(2)),
            )
            coeffs, D = (1, ell + m, -(n - 2)), 1

    B = max(n, *(abs(b) for b in coeffs))
    return LinearFormSpec(kind, gammas, coeffs, 3, D, B)


def matveev_lower_bound(spec: LinearFormSpec) -> float:
    """-1.4 * 30^(t+3) * t^4.5 * D^2 (1 + log D)(1 + log B) A_1 ... A_t."""
    if any(a <= 0 for a in spec.A):
        raise DomainError("Matveev needs positive A_i")
    if spec.B < 2:
        raise DomainError("Matveev needs B >= 2")
    t, D = spec.t, spec.D
    with working_precision(MATVEEV_BITS):
        magnitude = (
            interval(Fraction(str(MATVEEV_FACTOR)))
            * iv.mpf(MATVEEV_BASE) ** (t + 3)
            * iv.mpf(t) ** interval(Fraction(9, 2))
            * iv.mpf(D) ** 2
            * (1 + iv.log(iv.mpf(D)))
            * (1 + iv.log(iv.mpf(spec.B)))
        )
        for a in spec.A:
            magnitude *= iv.mpf(a)
        return math.nextafter(-float(magnitude.b), -math.inf)


def nonvanishing_check(
    kind: FormKind | str,
    k: int,
    d1: int,
    d2: int,
    ell: int,
    m: int,
    n: int,
    alg: AlgebraicContext | None = None,
) -> bool:
    """Gamma != 0 for the given cell.

    The rational forms vanish only if a power of 10 times an integer equals
    27 * 2^(n-2); the left side is divisible by 5, the right side never is.
    The algebraic forms are checked by excluding 0 from a certified enclosure.
    """
    try:
        kind = FormKind(kind)
    except ValueError:
        raise DomainError(f"unknown linear form {kind!r}")
    dec = _check_common(k, d1, d2, ell, m, n)

    if kind.is_rational:
        exponent = dec.digit_count if kind is FormKind.G3 else dec.ell + dec.m
        # 5 | 10^exponent * (d1 or d1*10^l - (d1 - d2)) while 5 does not divide 27 * 2^(n-2)
        return exponent >= 1

    spec = build_gamma(kind, k, d1, d2, ell, m, n, alg)
    with working_precision(alg.prec.bits):
        gamma = iv.mpf(1)
        for descriptor, b in zip(spec.gammas, spec.coeffs):
            gamma *= descriptor.value**b
        gamma -= 1
        if excludes_zero(gamma):
            return True
    raise PrecisionError(
        f"{kind} at k={k}, n={n} not separated from 0 at {alg.prec.bits} bits",
        bits=alg.prec.bits,
    )


def _require_k(k: float) -> None:
    if k < THEOREM_K_MIN:
        raise DomainError(f"bounds are stated for k >= {THEOREM_K_MIN}, got {k}")


def bound_ell(k: int, n_bound: float) -> float:
    _require_k(k)
    return ELL_BOUND_FACTOR * k**4 * math.log(k) ** 2 * math.log(n_bound)


def bound_m(k: int, n_bound: float) -> float:
    _require_k(k)
    return M_BOUND_FACTOR * float(k) ** 8 * math.log(k) ** 3 * math.log(n_bound) ** 2


def bound_n(k: float) -> float:
    _require_k(k)
    return N_BOUND_FACTOR * float(k) ** 8 * math.log(k) ** 5


def ell_from_matveev(k: int, n: int, alg: AlgebraicContext) -> float:
    """l from |Gamma_1| < 11 / 10^l against the computed Matveev bound."""
    spec = build_gamma(FormKind.G1, k, 1, 0, 1, 1, n, alg)
    return (math.log(G1_GAMMA_NUMERATOR) - matveev_lower_bound(spec)) / math.log(10)


def m_from_matveev(k: int, n: int, alg: AlgebraicContext, ell: int = 1) -> float:
    """m from |Gamma_2| < 12 / 10^m against the computed Matveev bound."""
    spec = build_gamma(FormKind.G2, k, 1, 0, ell, 1, n, alg)
    return (math.log(G2_GAMMA_NUMERATOR) - matveev_lower_bound(spec)) / math.log(10)


def case2_k_bounds(
    branch: Branch | str,
    n_bound: float | None = None,
    log_n: float | None = None,
) -> float:
    """k bound of each branch of the large-k lemma at a given n (or log n)."""
    try:
        branch = Branch(branch)
    except ValueError:
        raise DomainError(f"unknown branch {branch!r}")
    if log_n is None:
        if n_bound is None or n_bound <= 1:
            raise DomainError("case2_k_bounds needs n_bound > 1 or log_n")
        log_n = math.log(n_bound)
    if branch is Branch.A:
        return CASE2_BRANCH_A_FACTOR * log_n
    return CASE2_BRANCH_B_FACTOR * log_n**2


def case2_closure(branch: Branch | str) -> float:
    """Largest fixed point of k = bound(log n) with log n < c log k."""
    try:
        branch = Branch(branch)
    except ValueError:
        raise DomainError(f"unknown branch {branch!r}")
    slope = CASE2_BRANCH_A_LOG_N if branch is Branch.A else CASE2_BRANCH_B_LOG_N
    k = CLOSURE_START
    for _ in range(CLOSURE_MAX_STEPS):
        nxt = case2_k_bounds(branch, log_n=slope * math.log(k))
        if abs(nxt - k) <= 1e-12 * k:
            return nxt
        k = nxt
    return k


def case2_n_bound(k: float) -> float:
    """n < 1.63e29 k^8 (log k)^5, also valid above k = 1500."""
    return bound_n(k)
