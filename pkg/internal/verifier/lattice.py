"""
Approximation lattices, exact LLL reduction and the bound on H they certify.

Bases are kept as exact Python integers throughout. Gram-Schmidt data is the
integral form (d_i, lambda_ij) so every division in the reduction is exact and
``ReducedBasis`` exposes mu_ij and ||b*_i||^2 as ``Fraction`` values.

Basis vectors are the columns of the approximation matrix; ``Lattice.basis[i]``
is the column b_i.
"""

import logging
import math

from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from mpmath import iv

from .algebraic import AlgebraicContext, isolate_alpha
from .constants import PUBLISHED_ROUNDS, FormKind, PublishedRound
from .errors import DomainError, PrecisionError
from .palindrome import DIGITS, LEADING_DIGITS, PalindromeDecomposition
from .precision import (
    DEFAULT_BITS,
    SCALE_GUARD_BITS,
    PrecisionContext,
    certainly_positive,
    certified_floor,
    floor_of_upper,
    interval,
    parse_decimal_fraction,
    parse_scale,
    scientific,
    working_precision,
)

logger = logging.getLogger(__name__)

LOVASZ_DELTA = Fraction(3, 4)
LAMBDA_RULES = ("nearest", "fractional")


@dataclass(frozen=True)
class ReductionPolicy:
    lovasz_delta: Fraction = LOVASZ_DELTA
    escalation_factor: int = 10**3
    max_escalations: int = 5
    min_slack_ratio: Fraction = Fraction(1, 10)
    # Distance of the last non-integral z_i used for lambda when y is off the lattice.
    lambda_rule: str = "fractional"

    def __post_init__(self) -> None:
        if not Fraction(1, 4) < self.lovasz_delta < 1:
            raise DomainError(f"Lovasz constant must lie in (1/4, 1), got {self.lovasz_delta}")
        if self.escalation_factor < 2:
            raise DomainError("escalation factor must be at least 2")
        if self.max_escalations < 0:
            raise DomainError("max_escalations must be >= 0")
        if self.min_slack_ratio < 0:
            raise DomainError("min_slack_ratio must be >= 0")
        if self.lambda_rule not in LAMBDA_RULES:
            raise DomainError(f"lambda_rule must be one of {LAMBDA_RULES}, got {self.lambda_rule!r}")

    @property
    def largest_factor(self) -> int:
        return self.escalation_factor**self.max_escalations


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def _determinant(rows: list[list[int]]) -> int:
    """Bareiss fraction-free elimination."""
    a = [list(row) for row in rows]
    size, sign, previous = len(a), 1, 1
    for i in range(size - 1):
        if a[i][i] == 0:
            pivot = next((r for r in range(i + 1, size) if a[r][i] != 0), None)
            if pivot is None:
                return 0
            a[i], a[pivot] = a[pivot], a[i]
            sign = -sign
        for r in range(i + 1, size):
            for c in range(i + 1, size):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // previous
        previous = a[i][i]
    return sign * a[-1][-1]


def _solve(columns: Sequence[Sequence[int]], y: Sequence[int]) -> list[Fraction]:
    """z with sum z_i * columns[i] = y, by exact Gauss-Jordan elimination."""
    size = len(columns)
    augmented = [[Fraction(columns[c][r]) for c in range(size)] + [Fraction(y[r])] for r in range(size)]
    for i in range(size):
        pivot = next(r for r in range(i, size) if augmented[r][i] != 0)
        augmented[i], augmented[pivot] = augmented[pivot], augmented[i]
        for r in range(size):
            if r != i and augmented[r][i] != 0:
                factor = augmented[r][i] / augmented[i][i]
                augmented[r] = [x - factor * p for x, p in zip(augmented[r], augmented[i])]
    return [augmented[i][-1] / augmented[i][i] for i in range(size)]


@dataclass(frozen=True)
class Lattice:
    basis: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        dim = len(self.basis)
        if dim == 0 or any(len(column) != dim for column in self.basis):
            raise DomainError("a lattice basis must be a square list of columns")
        if self.determinant == 0:
            raise DomainError("basis columns are linearly dependent")

    @classmethod
    def from_columns(cls, columns: Iterable[Iterable[int]]) -> "Lattice":
        return cls(tuple(tuple(int(x) for x in column) for column in columns))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Lattice":
        return cls.from_columns(zip(*rows))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def rows(self) -> list[list[int]]:
        return [list(row) for row in zip(*self.basis)]

    @property
    def determinant(self) -> int:
        return _determinant(self.rows)


@dataclass(frozen=True)
class ReducedBasis:
    basis: tuple[tuple[int, ...], ...]
    gram_mu: tuple[tuple[Fraction, ...], ...]
    gso_norms: tuple[Fraction, ...]
    transform: tuple[tuple[int, ...], ...]

    @property
    def lattice(self) -> Lattice:
        return Lattice(self.basis)

    @property
    def first_norm_sq(self) -> int:
        return _dot(self.basis[0], self.basis[0])

    def is_size_reduced(self) -> bool:
        return all(
            abs(self.gram_mu[i][j]) <= Fraction(1, 2)
            for i in range(len(self.basis))
            for j in range(i)
        )

    def satisfies_lovasz(self, delta: Fraction = LOVASZ_DELTA) -> bool:
        norms, mu = self.gso_norms, self.gram_mu
        return all(
            norms[i] + mu[i][i - 1] ** 2 * norms[i - 1] >= delta * norms[i - 1]
            for i in range(1, len(norms))
        )


def lll_reduce(lat: Lattice, delta: Fraction = LOVASZ_DELTA) -> ReducedBasis:
    """Integral LLL: the Gram-Schmidt data never leaves Z.

    d[i] is the Gram determinant of b_0..b_(i-1) and lam[i][j] = d[j+1] mu_ij.
    """
    b = [list(column) for column in lat.basis]
    n = lat.dim
    transform = [[int(i == j) for j in range(n)] for i in range(n)]
    p, q = delta.numerator, delta.denominator
    d = [1] + [0] * n
    lam = [[0] * n for _ in range(n)]

    def gram_schmidt_row(k: int) -> None:
        for j in range(k + 1):
            u = _dot(b[k], b[j])
            for i in range(j):
                u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
            if j < k:
                lam[k][j] = u
            elif u == 0:
                raise DomainError("basis columns are linearly dependent")
            else:
                d[k + 1] = u

    def size_reduce(k: int, l: int) -> None:
        if 2 * abs(lam[k][l]) <= d[l + 1]:
            return
        r = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
        b[k] = [x - r * y for x, y in zip(b[k], b[l])]
        transform[k] = [x - r * y for x, y in zip(transform[k], transform[l])]
        lam[k][l] -= r * d[l + 1]
        for i in range(l):
            lam[k][i] -= r * lam[l][i]

    def swap(k: int, k_max: int) -> None:
        b[k], b[k - 1] = b[k - 1], b[k]
        transform[k], transform[k - 1] = transform[k - 1], transform[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        mu = lam[k][k - 1]
        new_d = (d[k - 1] * d[k + 1] + mu * mu) // d[k]
        for i in range(k + 1, k_max + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - mu * t) // d[k]
            lam[i][k - 1] = (new_d * t + mu * lam[i][k]) // d[k + 1]
        d[k] = new_d

    gram_schmidt_row(0)
    k, k_max, swaps = 1, 0, 0
    while k < n:
        if k > k_max:
            k_max = k
            gram_schmidt_row(k)
        size_reduce(k, k - 1)
        if q * d[k + 1] * d[k - 1] < p * d[k] ** 2 - q * lam[k][k - 1] ** 2:
            swap(k, k_max)
            swaps += 1
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                size_reduce(k, l)
            k += 1

    logger.debug("LLL dim=%d finished after %d swaps", n, swaps)
    return ReducedBasis(
        basis=tuple(tuple(column) for column in b),
        gram_mu=tuple(
            tuple(Fraction(lam[i][j], d[j + 1]) if j < i else Fraction(int(i == j)) for j in range(n))
            for i in range(n)
        ),
        gso_norms=tuple(Fraction(d[i + 1], d[i]) for i in range(n)),
        transform=tuple(tuple(row) for row in transform),
    )


def build_approx_lattice(etas: Sequence[Any], C: int | str) -> Lattice:
    """Identity block over a bottom row of floor(C * eta_i).

    Each eta is an ``mpmath.iv`` enclosure (or an exact int/Fraction) tight
    enough for C * eta not to straddle an integer; otherwise PrecisionError.
    """
    C = parse_scale(C)
    dim = len(etas)
    if dim < 2:
        raise DomainError("an approximation lattice needs at least two logarithms")

    with working_precision(PrecisionContext.for_scale(C).bits):
        scale = iv.mpf(C)
        bottom = [certified_floor(scale * interval(eta)) for eta in etas]

    columns = []
    for i in range(dim):
        column = [0] * dim
        if i < dim - 1:
            column[i] = 1
        column[-1] = bottom[i]
        columns.append(column)
    if bottom[-1] == 0:
        raise PrecisionError(f"floor(C * eta_last) vanished at C={scientific(C)}")
    return Lattice.from_columns(columns)


@dataclass(frozen=True)
class LemmaBound:
    H: float
    H_floor: int
    slack_ratio: float
    S: Fraction
    T: Fraction


@dataclass(frozen=True)
class ReductionCertificate:
    lattice: Lattice
    reduced: ReducedBasis
    c1_sq: Fraction
    lambda_sq: Fraction
    delta_sq: Fraction
    C: int | None = None
    eta_rows: tuple[Any, ...] = ()
    bound: LemmaBound | None = None

    @property
    def c1(self) -> Any:
        return _sqrt(self.c1_sq)

    @property
    def delta(self) -> Any:
        return _sqrt(self.delta_sq)

    @property
    def S(self) -> Fraction | None:
        return self.bound.S if self.bound else None

    @property
    def T(self) -> Fraction | None:
        return self.bound.T if self.bound else None

    @property
    def H_bound(self) -> float | None:
        return self.bound.H if self.bound else None


def _sqrt(value: Fraction) -> Any:
    with working_precision(max(DEFAULT_BITS, value.numerator.bit_length() // 2 + SCALE_GUARD_BITS)):
        return iv.sqrt(interval(value))


def _lambda(z: list[Fraction], rule: str) -> Fraction:
    for zi in reversed(z):
        if zi.denominator == 1:
            continue
        fractional = zi - math.floor(zi)
        if rule == "fractional":
            return fractional
        return min(fractional, 1 - fractional)
    # y is itself a lattice point
    return Fraction(1)


def certificate(
    lat: Lattice,
    y: Sequence[int] | None = None,
    lambda_rule: str = "fractional",
    lovasz_delta: Fraction = LOVASZ_DELTA,
    reduced: ReducedBasis | None = None,
) -> ReductionCertificate:
    """c1 = max_j ||b_1|| / ||b*_j|| and delta = lambda ||b_1|| / c1.

    delta^2 collapses to lambda^2 * min_j ||b*_j||^2 and is kept exact.
    """
    if lambda_rule not in LAMBDA_RULES:
        raise DomainError(f"lambda_rule must be one of {LAMBDA_RULES}, got {lambda_rule!r}")
    if y is not None and len(y) != lat.dim:
        raise DomainError(f"y has {len(y)} entries, the lattice has dimension {lat.dim}")
    reduced = reduced or lll_reduce(lat, lovasz_delta)
    if y is None or not any(y):
        lambda_sq = Fraction(1)
    else:
        lambda_sq = _lambda(_solve(reduced.basis, y), lambda_rule) ** 2

    shortest_gso = min(reduced.gso_norms)
    c1_sq = Fraction(reduced.first_norm_sq) / shortest_gso
    return ReductionCertificate(
        lattice=lat,
        reduced=reduced,
        c1_sq=c1_sq,
        lambda_sq=lambda_sq,
        delta_sq=lambda_sq * shortest_gso,
    )


def _widened(value: float) -> Any:
    """Enclosure of a real constant given as its nearest double."""
    return iv.mpf([math.nextafter(value, -math.inf), math.nextafter(value, math.inf)])


def lemma_bound(
    delta_sq: Fraction,
    S: Fraction,
    T: Fraction,
    C: int,
    c3: int | float | Fraction,
    c4: float,
) -> LemmaBound | None:
    """H <= (log(C c3) - log(sqrt(delta^2 - S) - T)) / c4 when delta^2 - S > T^2."""
    if c4 <= 0 or c3 <= 0:
        raise DomainError("c3 and c4 must be positive")
    excess = delta_sq - S - T * T
    if excess <= 0:
        return None

    bits = max(
        DEFAULT_BITS,
        C.bit_length(),
        delta_sq.numerator.bit_length() - delta_sq.denominator.bit_length(),
    ) + SCALE_GUARD_BITS
    with working_precision(bits):
        t = interval(T)
        # sqrt(delta^2 - S) - T without cancellation
        slack = interval(excess) / (iv.sqrt(interval(delta_sq - S)) + t)
        if not certainly_positive(slack):
            raise PrecisionError("lemma slack not separated from zero", bits=bits)
        H = (iv.log(interval(C * Fraction(c3))) - iv.log(slack)) / _widened(float(c4))
        return LemmaBound(
            H=math.nextafter(float(H.b), math.inf),
            H_floor=floor_of_upper(H),
            slack_ratio=float((slack / t).mid),
            S=S,
            T=T,
        )


def lemma_inputs(X: Sequence[int | Fraction]) -> tuple[Fraction, Fraction]:
    """S = X_1^2 + ... + X_(dim-1)^2 and T = (1 + X_1 + ... + X_dim) / 2."""
    S = sum((Fraction(x) ** 2 for x in X[:-1]), Fraction(0))
    T = (1 + sum((Fraction(x) for x in X), Fraction(0))) / 2
    return S, T


def reduce_bound(
    cert: ReductionCertificate,
    X: Sequence[int | Fraction],
    c3: int | float | Fraction,
    c4: float,
    C: int | str | None = None,
) -> LemmaBound | None:
    if len(X) != cert.lattice.dim:
        raise DomainError(f"{len(X)} coefficient bounds for a lattice of dimension {cert.lattice.dim}")
    C = parse_scale(C) if C is not None else cert.C
    if C is None:
        raise DomainError("the scaling constant C is unknown for this certificate")
    S, T = lemma_inputs(X)
    return lemma_bound(cert.delta_sq, S, T, C, c3, c4)


@dataclass(frozen=True)
class ReplayResult:
    label: str
    printed: int
    bound: LemmaBound

    @property
    def agrees(self) -> bool:
        return abs(self.bound.H_floor - self.printed) <= 1

    def as_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "printed": self.printed,
            "H": self.bound.H,
            "H_floor": self.bound.H_floor,
            "agrees": self.agrees,
        }


def replay_published_round(published: PublishedRound | str) -> ReplayResult:
    """Feed a printed (C, delta, S, T, c3, c4) tuple through the lemma verbatim."""
    if isinstance(published, str):
        try:
            published = PUBLISHED_ROUNDS[published]
        except KeyError:
            raise DomainError(f"no published round named {published!r}")
    delta = parse_decimal_fraction(published.delta)
    bound = lemma_bound(
        delta * delta,
        parse_decimal_fraction(published.S),
        parse_decimal_fraction(published.T),
        parse_scale(published.C),
        published.c3,
        math.log(published.c4_base),
    )
    if bound is None:
        raise DomainError(f"published data for {published.label} does not satisfy delta^2 > T^2 + S")
    if abs(bound.H_floor - published.printed) > 1:
        logger.warning(
            "replay of %s gives %d, printed value is %d", published.label, bound.H_floor, published.printed
        )
    return ReplayResult(published.label, published.printed, bound)


def degenerate_exponents(d1: int, d2: int, ell: int) -> tuple[int, int] | None:
    """(a, b) with (d1 10^l - (d1 - d2))/27 = 2^a 5^b, or None."""
    N = PalindromeDecomposition(d1, d2, ell, 1).middle_factor
    if N % 27:
        return None
    rest, a, b = N // 27, 0, 0
    while rest % 2 == 0:
        rest, a = rest // 2, a + 1
    while rest % 5 == 0:
        rest, b = rest // 5, b + 1
    return (a, b) if rest == 1 else None


def approximation_etas(
    kind: FormKind | str,
    d1: int,
    d2: int | None = None,
    ell: int | None = None,
    alg: AlgebraicContext | None = None,
    bits: int = DEFAULT_BITS,
) -> tuple[Any, ...]:
    """The logarithms whose integer combination the form approximates.

    Coordinates line up with (n - 1, l-block exponent, 1) for the algebraic
    forms and (1, digit exponent, n - 2) for the rational ones.
    """
    kind = FormKind(kind)
    if kind in (FormKind.G2, FormKind.G4):
        if d2 is None or ell is None:
            raise DomainError(f"{kind} needs d2 and l")
        N = PalindromeDecomposition(d1, d2, ell, 1).middle_factor
    elif d1 not in LEADING_DIGITS:
        raise DomainError(f"d1 must be a digit 1..9, got {d1}")

    match kind:
        case FormKind.G1 | FormKind.G2:
            if alg is None:
                raise DomainError(f"{kind} needs the algebraic context")
            denominator = d1 if kind is FormKind.G1 else N
            with working_precision(alg.prec.bits):
                gamma = 9 * alg.f_alpha * alg.two_alpha_minus_one / denominator
                return alg.log_alpha, -iv.log(iv.mpf(10)), iv.log(gamma)
        case FormKind.G3:
            with working_precision(bits):
                return iv.log(interval(Fraction(d1, 27))), iv.log(iv.mpf(10)), -iv.log(iv.mpf(2))
        case FormKind.G4:
            with working_precision(bits):
                return iv.log(interval(Fraction(N, 27))), iv.log(iv.mpf(10)), -iv.log(iv.mpf(2))


def _coefficient_bound(n_bound: int | float | str) -> int:
    if isinstance(n_bound, str):
        return parse_scale(n_bound)
    if isinstance(n_bound, float):
        if not math.isfinite(n_bound) or n_bound <= 0:
            raise DomainError(f"coefficient bound must be finite and positive, got {n_bound}")
        return math.ceil(n_bound)
    if n_bound <= 0:
        raise DomainError(f"coefficient bound must be positive, got {n_bound}")
    return int(n_bound)


@dataclass(frozen=True, order=True)
class CellKey:
    k: int
    d1: int
    d2: int
    ell: int


@dataclass(frozen=True)
class CellResult:
    kind: FormKind
    key: CellKey
    C_used: int
    delta_sq: Fraction | None
    bound: LemmaBound | None
    attempts: int
    degenerate: bool = False

    @property
    def resolved(self) -> bool:
        return self.bound is not None

    @property
    def H(self) -> float | None:
        return self.bound.H if self.bound else None

    @property
    def H_floor(self) -> int | None:
        return self.bound.H_floor if self.bound else None

    def as_dict(self) -> dict[str, Any]:
        k, d1, d2, ell = self.key.k, self.key.d1, self.key.d2, self.key.ell
        return {
            "k": k or None,
            "d1": d1,
            "d2": d2 if d2 >= 0 else None,
            "ell": ell or None,
            "C_used": scientific(self.C_used),
            "delta": scientific(_sqrt(self.delta_sq)) if self.delta_sq else None,
            "S": scientific(self.bound.S) if self.bound else None,
            "T": scientific(self.bound.T) if self.bound else None,
            "H": self.H,
            "attempts": self.attempts,
            "degenerate": self.degenerate,
        }


def reduction_cell(
    kind: FormKind | str,
    d1: int,
    C: int | str,
    n_bound: int | float | str,
    c3: int | float,
    c4: float,
    *,
    k: int = 0,
    d2: int | None = None,
    ell: int | None = None,
    alg: AlgebraicContext | None = None,
    policy: ReductionPolicy | None = None,
) -> CellResult:
    """Reduce one cell, enlarging C until the certificate has enough slack.

    The smallest valid H over all attempts is kept. Rational forms whose
    gamma_1 is 2^a 5^b collapse to a 2x2 lattice over (log 2, log 5).
    """
    kind = FormKind(kind)
    policy = policy or ReductionPolicy()
    C = parse_scale(C)
    X = _coefficient_bound(n_bound)
    key = CellKey(k, d1, -1 if d2 is None else d2, ell or 0)

    exponents = degenerate_exponents(d1, d2, ell) if kind is FormKind.G4 else None
    if exponents is not None:
        a, b = exponents
        coefficient_bounds = (2 * X + a, X + b)
    else:
        coefficient_bounds = (X, X, X)

    best: LemmaBound | None = None
    C_used, delta_sq, attempts = C, None, 0
    for attempt in range(policy.max_escalations + 1):
        C_try = C * policy.escalation_factor**attempt
        attempts = attempt + 1
        bits = PrecisionContext.for_scale(C_try).bits
        if exponents is not None:
            with working_precision(bits):
                etas = (iv.log(iv.mpf(2)), iv.log(iv.mpf(5)))
        else:
            etas = approximation_etas(kind, d1, d2, ell, alg, bits)
        lat = build_approx_lattice(etas, C_try)
        cert = certificate(lat, lambda_rule=policy.lambda_rule, lovasz_delta=policy.lovasz_delta)
        bound = lemma_bound(cert.delta_sq, *lemma_inputs(coefficient_bounds), C_try, c3, c4)
        if bound is not None and (best is None or bound.H < best.H):
            best, C_used, delta_sq = bound, C_try, cert.delta_sq
        if bound is not None and bound.slack_ratio >= policy.min_slack_ratio:
            break
        logger.debug("%s cell %s escalating past C=%s", kind, key, scientific(C_try))

    if best is None:
        logger.warning("%s cell %s unresolved after %d attempts", kind, key, attempts)
    return CellResult(kind, key, C_used, delta_sq, best, attempts, exponents is not None)


@dataclass
class RoundSummary:
    form: FormKind
    C: int
    n_bound: int
    c3: int | float
    c4: float
    cells: list[CellResult] = field(default_factory=list)

    @property
    def unresolved(self) -> list[CellKey]:
        return [cell.key for cell in self.cells if not cell.resolved]

    @property
    def resolved(self) -> bool:
        return bool(self.cells) and not self.unresolved

    @property
    def max_H(self) -> float | None:
        values = [cell.H for cell in self.cells if cell.resolved]
        return max(values) if values else None

    @property
    def max_H_floor(self) -> int | None:
        values = [cell.H_floor for cell in self.cells if cell.resolved]
        return max(values) if values else None

    @property
    def escalated(self) -> int:
        return sum(cell.attempts > 1 for cell in self.cells)

    def as_dict(self, include_cells: bool = True) -> dict[str, Any]:
        report = {
            "form": str(self.form),
            "C": scientific(self.C),
            "n_bound": scientific(self.n_bound),
            "c3": self.c3,
            "c4": self.c4,
            "max_H": self.max_H,
            "max_H_floor": self.max_H_floor,
            "cell_count": len(self.cells),
            "escalated": self.escalated,
            "unresolved": [cell.as_dict() for cell in self.cells if not cell.resolved],
        }
        if include_cells:
            report["cells"] = [cell.as_dict() for cell in self.cells]
        return report


@dataclass(frozen=True)
class _Batch:
    kind: FormKind
    k: int
    cells: tuple[tuple[int, int | None, int | None], ...]
    C: int
    n_bound: int
    c3: int | float
    c4: float
    policy: ReductionPolicy
    precision_bits: int


def _run_batch(batch: _Batch) -> list[CellResult]:
    alg = None
    if not batch.kind.is_rational:
        top = batch.C * batch.policy.largest_factor
        prec = PrecisionContext.for_k(batch.k, batch.precision_bits).at_least(
            PrecisionContext.for_scale(top).bits
        )
        alg = isolate_alpha(batch.k, prec)
    return [
        reduction_cell(
            batch.kind, d1, batch.C, batch.n_bound, batch.c3, batch.c4,
            k=batch.k, d2=d2, ell=ell, alg=alg, policy=batch.policy,
        )
        for d1, d2, ell in batch.cells
    ]


def _cells(kind: FormKind, d1_range: Iterable[int], d2_range: Iterable[int], ell_range: Iterable[int]):
    if kind in (FormKind.G1, FormKind.G3):
        return [(d1, None, None) for d1 in d1_range]
    return [
        (d1, d2, ell)
        for d1 in d1_range
        for d2 in d2_range
        if d2 != d1
        for ell in ell_range
    ]


def _chunks(items: list, size: int) -> Iterable[tuple]:
    for start in range(0, len(items), size):
        yield tuple(items[start : start + size])


def reduction_round(
    form_kind: FormKind | str,
    k_range: Iterable[int] | None,
    d_ranges: tuple[Iterable[int], Iterable[int]] = (LEADING_DIGITS, DIGITS),
    ell_range: Iterable[int] = (1,),
    C: int | str = 10**20,
    n_bound: int | float | str = 10**6,
    c3: int | float = 1,
    c4: float = math.log(10),
    policy: ReductionPolicy | None = None,
    parallelism: int = 1,
    precision_bits: int = DEFAULT_BITS,
) -> RoundSummary:
    """Every (k, d1, d2, l) cell of one form, fanned out over worker processes.

    The algebraic forms are swept per k; the rational ones ignore k. Cells are
    merged in key order so the summary does not depend on scheduling.
    """
    kind = FormKind(form_kind)
    policy = policy or ReductionPolicy()
    C = parse_scale(C)
    X = _coefficient_bound(n_bound)
    d1_range, d2_range = d_ranges
    cells = _cells(kind, list(d1_range), list(d2_range), list(ell_range))

    if not cells:
        raise DomainError(f"{kind} round has no cells")

    if kind.is_rational:
        chunk = max(1, math.ceil(len(cells) / max(1, parallelism * 4)))
        batches = [
            _Batch(kind, 0, part, C, X, c3, c4, policy, precision_bits)
            for part in _chunks(cells, chunk)
        ]
    else:
        ks = list(k_range or ())
        if not ks or min(ks) < 3:
            raise DomainError("algebraic forms need a nonempty k range inside k >= 3")
        batches = [_Batch(kind, k, tuple(cells), C, X, c3, c4, policy, precision_bits) for k in ks]

    logger.info("%s round: %d batches, C=%s", kind, len(batches), scientific(C))
    if parallelism > 1 and len(batches) > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as executor:
            results = [cell for part in executor.map(_run_batch, batches) for cell in part]
    else:
        results = [cell for batch in batches for cell in _run_batch(batch)]

    summary = RoundSummary(kind, C, X, c3, c4, sorted(results, key=lambda cell: cell.key))
    if summary.unresolved:
        logger.warning("%s round left %d cells unresolved", kind, len(summary.unresolved))
    logger.info(
        "%s round done: max H %s, %d cells escalated", kind, summary.max_H, summary.escalated
    )
    return summary

