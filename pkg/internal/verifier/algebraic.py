"""
Certified constants attached to the dominant root alpha of
Psi_k(x) = x^k - x^(k-1) - ... - x - 1.

alpha is located as a root of g(x) = x^k (x - 2) + 1 = (x - 1) Psi_k(x), which
has the sign of Psi_k on x > 1 and no cancellation-prone sum of k terms. The
point estimate comes from bisection plus Newton in ``mpmath.mp``; the returned
enclosure is then certified with ``mpmath.iv`` by a sign change of g and by
the bounds 2(1 - 2^-k) < alpha < 2.
"""

import logging
import math

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, TypeVar

from mpmath import iv, mp

from .constants import (
    ALPHA_A,
    G1_A1_OFFSET,
    G1_A1_SLOPE,
    G2_A1_FACTOR,
    G3_A1,
    G4_A1_FACTOR,
    FormKind,
)
from .errors import DomainError, PrecisionError
from .precision import (
    PrecisionContext,
    certainly_less,
    certainly_positive,
    interval,
    working_precision,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")

BISECTION_WIDTH = mp.mpf("1e-3")
NEWTON_MAX_STEPS = 400
ENCLOSURE_SLACK_BITS = 8
MAX_RETRY_BITS = 1 << 16


@dataclass(frozen=True)
class AlgebraicContext:
    k: int
    prec: PrecisionContext
    alpha: Any
    f_alpha: Any
    two_alpha_minus_one: Any
    log_alpha: Any

    def log_alpha_bounds(self) -> tuple[float, float]:
        return float(self.log_alpha.a), float(self.log_alpha.b)


def _g(k: int, x: Any) -> Any:
    return x**k * (x - 2) + 1


def _g_prime(k: int, x: Any) -> Any:
    return x ** (k - 1) * ((k + 1) * x - 2 * k)


def _lower_root_bound(k: int) -> Fraction:
    return 2 * (1 - Fraction(1, 2**k))


def _f_interval(k: int, x: Any) -> Any:
    return (x - 1) / (2 + (k + 1) * (x - 2))


def _point_root(k: int, bits: int) -> Any:
    """alpha to roughly ``bits`` bits, as an ``mp.mpf``."""
    lo = mp.mpf(2) - mp.mpf(2) ** (1 - k)
    hi = mp.mpf(2)
    while hi - lo > BISECTION_WIDTH:
        mid = (lo + hi) / 2
        if _g(k, mid) < 0:
            lo = mid
        else:
            hi = mid

    # g is convex right of 2(k - 1)/(k + 1) < alpha, so Newton from hi
    # decreases monotonically onto the root.
    x = hi
    tolerance = mp.mpf(2) ** (-(bits + 16))
    for _ in range(NEWTON_MAX_STEPS):
        step = _g(k, x) / _g_prime(k, x)
        x -= step
        if abs(step) < tolerance:
            break
    else:
        raise PrecisionError(f"Newton iteration for k={k} did not settle", bits=bits)
    return x


def isolate_alpha(k: int, prec: PrecisionContext | None = None) -> AlgebraicContext:
    if k < 2:
        raise DomainError(f"Psi_k needs k >= 2, got {k}")
    prec = prec or PrecisionContext.for_k(k)
    bits = prec.bits

    with working_precision(bits + 32 + k.bit_length()):
        x = _point_root(k, bits)
        radius = mp.mpf(2) ** (-(bits - ENCLOSURE_SLACK_BITS)) / 4
        lo, hi = x - radius, x + radius

        g_lo = _g(k, iv.mpf(lo))
        g_hi = _g(k, iv.mpf(hi))
        if not (certainly_less(g_lo, 0) and certainly_positive(g_hi)):
            raise PrecisionError(f"no certified sign change of Psi_{k} at {bits} bits", bits=bits)
        if not certainly_less(interval(_lower_root_bound(k)), iv.mpf(lo)):
            raise PrecisionError(f"alpha({k}) not separated from 2(1 - 2^-k) at {bits} bits", bits=bits)
        if not certainly_less(iv.mpf(hi), 2):
            raise PrecisionError(f"alpha({k}) not separated from 2 at {bits} bits", bits=bits)

    with working_precision(bits):
        alpha = iv.mpf([lo, hi])
        ctx = AlgebraicContext(
            k=k,
            prec=prec,
            alpha=alpha,
            f_alpha=_f_interval(k, alpha),
            two_alpha_minus_one=2 * alpha - 1,
            log_alpha=iv.log(alpha),
        )
    evaluate_f(ctx)
    logger.debug("isolated alpha(%d) at %d bits", k, bits)
    return ctx


def evaluate_f(ctx: AlgebraicContext) -> Any:
    """f_k(alpha) = (alpha - 1)/(2 + (k + 1)(alpha - 2)), certified inside (1/2, 3/4)."""
    with working_precision(ctx.prec.bits):
        f = _f_interval(ctx.k, ctx.alpha)
        if not (certainly_less(interval(Fraction(1, 2)), f) and certainly_less(f, interval(Fraction(3, 4)))):
            raise PrecisionError(
                f"f_{ctx.k}(alpha) not certified inside (1/2, 3/4) at {ctx.prec.bits} bits",
                bits=ctx.prec.bits,
            )
    return f


def fk(k: int, x: int | Fraction) -> Fraction:
    """Exact f_k at a rational point; f_k(2) = 1/2 for every k."""
    x = Fraction(x)
    denominator = 2 + (k + 1) * (x - 2)
    if denominator == 0:
        raise DomainError(f"f_{k} has a pole at {x}")
    return (x - 1) / denominator


def psi_sign_certificate(k: int, prec: PrecisionContext | None = None) -> bool:
    """Psi_k < 0 at 2(1 - 2^-k) and Psi_k > 0 at 2.

    Psi_k has a single positive root by Descartes' rule of signs, so this sign
    change pins alpha inside the published interval.
    """
    if k < 2:
        raise DomainError(f"Psi_k needs k >= 2, got {k}")
    prec = prec or PrecisionContext.for_k(k)
    with working_precision(prec.bits):
        at_lower = _g(k, interval(_lower_root_bound(k)))
        at_two = _g(k, iv.mpf(2))
        if certainly_less(at_lower, 0) and certainly_positive(at_two):
            return True
        if (at_lower < 0) is None:
            raise PrecisionError(f"sign of Psi_{k} at 2(1 - 2^-k) undecided", bits=prec.bits)
    return False


def log_height_rational(p: int, q: int) -> float:
    """h(p/q) = log max{|p|, q} for p/q in lowest terms."""
    if q == 0:
        raise DomainError("height of p/0 is undefined")
    if q < 0:
        p, q = -p, -q
    g = math.gcd(p, q)
    p, q = p // g, q // g
    return math.log(max(abs(p), q))


def gamma1_height_chain(k: int, log_alpha: float) -> float:
    """Component sum bounding h(9 f_k(alpha)(2 alpha - 1)/d1).

    h(9) + h(f_k(alpha)) + h(9) + 2 h(2) + h(1) + h(alpha) with
    h(f_k(alpha)) < 2 log k folded into the 3 log k term.
    """
    return 2 * math.log(9) + 3 * math.log(k) + 2 * math.log(2) + math.log(1) + log_alpha / k


def gamma2_height_chain(k: int, ell: int, log_alpha: float) -> float:
    """Component sum bounding h(9 f_k(alpha)(2 alpha - 1)/(d1 10^l - (d1 - d2)))."""
    return (
        3 * math.log(9)
        + 3 * math.log(2)
        + ell * math.log(10)
        + 2 * math.log(k)
        + log_alpha / k
    )


def height_bound_gamma1_case(
    kind: FormKind | str,
    k: int | None = None,
    ell: int | None = None,
    d1: int | None = None,
    d2: int | None = None,
    log_n_bound: float | None = None,
) -> float:
    """The published A_1 for each linear form (D times a height bound of gamma_1)."""
    try:
        kind = FormKind(kind)
    except ValueError:
        raise DomainError(f"unknown linear form {kind!r}")

    match kind:
        case FormKind.G1:
            _require(k is not None and k >= 2, "G1 needs k >= 2")
            return G1_A1_SLOPE * k * math.log(k) + G1_A1_OFFSET
        case FormKind.G2:
            _require(k is not None and k >= 2, "G2 needs k >= 2")
            _require(log_n_bound is not None and log_n_bound > 0, "G2 needs log n > 0")
            return G2_A1_FACTOR * k**5 * math.log(k) ** 2 * log_n_bound
        case FormKind.G3:
            return G3_A1
        case FormKind.G4:
            _require(log_n_bound is not None and log_n_bound > 0, "G4 needs log n > 0")
            return G4_A1_FACTOR * log_n_bound


def alpha_height_bound() -> float:
    return ALPHA_A


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DomainError(message)


def with_precision_retry(
    compute: Callable[[PrecisionContext], T],
    prec: PrecisionContext,
    max_bits: int = MAX_RETRY_BITS,
) -> T:
    """Call ``compute`` and double the precision on every PrecisionError."""
    while True:
        try:
            return compute(prec)
        except PrecisionError as exc:
            if prec.bits * 2 > max_bits:
                raise
            logger.info("%s; retrying at %d bits", exc, prec.bits * 2)
            prec = prec.doubled()
