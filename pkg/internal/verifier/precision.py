"""
Working precision and certified comparisons on top of ``mpmath.iv``.

Interval comparisons in mpmath are three-valued: ``x < y`` is ``True`` when it
holds for every point of both intervals, ``False`` when it fails for every
point, and ``None`` otherwise. Everything that must be certified goes through
the ``certainly_*`` helpers so an undecided comparison never reads as false.
"""

import logging
import sys
import threading

from contextlib import contextmanager
from dataclasses import dataclass, replace
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Any, Iterator

from mpmath import iv, mp

from .errors import DomainError, PrecisionError

logger = logging.getLogger(__name__)

MIN_BITS = 128
DEFAULT_BITS = 256
# Guard bits above log2 C when scaled logarithms must be floored exactly.
SCALE_GUARD_BITS = 64

# mp and iv are process-wide contexts.
_precision_lock = threading.RLock()


@dataclass(frozen=True)
class PrecisionContext:
    bits: int = DEFAULT_BITS
    rounding: str = "outward"

    def __post_init__(self) -> None:
        if self.bits < MIN_BITS:
            raise DomainError(f"precision must be at least {MIN_BITS} bits, got {self.bits}")
        if self.rounding != "outward":
            raise DomainError("only outward rounded intervals are supported")

    @classmethod
    def for_k(cls, k: int, bits: int = DEFAULT_BITS) -> "PrecisionContext":
        # 2(1 - 2^-k) and 2 only separate from alpha once bits exceed k.
        return cls(max(bits, k + SCALE_GUARD_BITS))

    @classmethod
    def for_scale(cls, C: int, bits: int = DEFAULT_BITS) -> "PrecisionContext":
        return cls(max(bits, C.bit_length() + SCALE_GUARD_BITS))

    def at_least(self, bits: int) -> "PrecisionContext":
        return self if bits <= self.bits else replace(self, bits=bits)

    def doubled(self) -> "PrecisionContext":
        return replace(self, bits=self.bits * 2)


@contextmanager
def working_precision(bits: int) -> Iterator[None]:
    """Set both the point and the interval context to ``bits`` bits."""
    with _precision_lock:
        saved = mp.prec, iv.prec
        mp.prec = bits
        iv.prec = bits
        try:
            yield
        finally:
            mp.prec, iv.prec = saved


def interval(value: Any) -> Any:
    """Outward enclosure of an int, Fraction, decimal string or interval."""
    if isinstance(value, Fraction):
        return iv.mpf(value.numerator) / iv.mpf(value.denominator)
    return iv.mpf(value)


def width(x: Any) -> Any:
    return x.b - x.a


def certainly_less(x: Any, y: Any) -> bool:
    return (x < y) is True


def certainly_less_equal(x: Any, y: Any) -> bool:
    return (x <= y) is True


def certainly_positive(x: Any) -> bool:
    return (x > 0) is True


def excludes_zero(x: Any) -> bool:
    return (x > 0) is True or (x < 0) is True


def _floor_endpoint(endpoint: Any) -> int:
    # int() truncates toward zero on a zero-width interval.
    floor = int(endpoint)
    if (endpoint < floor) is True:
        floor -= 1
    return floor


def certified_floor(x: Any) -> int:
    """floor(x) for every point of the enclosure, or PrecisionError."""
    low, high = _floor_endpoint(x.a), _floor_endpoint(x.b)
    if low != high:
        raise PrecisionError(
            f"enclosure of width {mp.nstr(mp.mpf(width(x)), 5)} straddles an integer",
            bits=iv.prec,
        )
    return low


def floor_of_upper(x: Any) -> int:
    """floor of the upper endpoint, a valid integer upper bound for x."""
    return _floor_endpoint(x.b)


def parse_scale(text: str | int) -> int:
    """Exact integer for a decimal scale such as ``"1.3e867"``."""
    if isinstance(text, int):
        value = text
    else:
        try:
            decimal = Decimal(str(text).strip())
        except InvalidOperation:
            raise DomainError(f"{text!r} is not a decimal number")
        if not decimal.is_finite() or decimal != decimal.to_integral_value():
            raise DomainError(f"{text!r} is not an integer scale")
        value = int(decimal)
    if value <= 0:
        raise DomainError(f"scale must be positive, got {text!r}")
    return value


def parse_decimal_fraction(text: str) -> Fraction:
    try:
        return Fraction(Decimal(text))
    except (InvalidOperation, ValueError):
        raise DomainError(f"{text!r} is not a finite decimal number")


def scientific(x: Any, digits: int = 6) -> str:
    """Short decimal rendering of an int, Fraction or interval midpoint."""
    with working_precision(max(mp.prec, 64)):
        if isinstance(x, int | Fraction):
            x = interval(x)
        return mp.nstr(mp.mpf(x.mid), digits)


@contextmanager
def unlimited_int_digits() -> Iterator[None]:
    """Lift the interpreter's int/str conversion cap for exact terms."""
    saved = sys.get_int_max_str_digits()
    sys.set_int_max_str_digits(0)
    try:
        yield
    finally:
        sys.set_int_max_str_digits(saved)


def decimal_string(value: int) -> str:
    with unlimited_int_digits():
        return str(value)


def _directed_digits(endpoint: Any, digits: int, upward: bool) -> str:
    point = mp.mpf(endpoint)
    if not point:
        return "0"
    exponent = int(mp.floor(mp.log10(abs(point))))
    shift = digits - 1 - exponent
    scaled = iv.mpf(endpoint) * iv.mpf(10) ** shift
    # Outward rounding keeps scaled.a below and scaled.b above the exact product.
    mantissa = -_floor_endpoint(-scaled.b) if upward else _floor_endpoint(scaled.a)
    return str(Decimal(f"{mantissa}E{-shift}"))


def enclosure_strings(x: Any, digits: int) -> dict[str, str]:
    """Endpoints to ``digits`` significant digits, lower rounded down and upper up."""
    with working_precision(max(64, 4 * digits + 16)):
        return {
            "lower": _directed_digits(x.a, digits, upward=False),
            "upper": _directed_digits(x.b, digits, upward=True),
        }
