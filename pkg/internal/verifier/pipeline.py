"""
End-to-end reproduction of the non-existence proof.

Stages run in order and each returns a plain dict: the digit-count window,
the n <= k power case, the k <= 1500 reductions plus exhaustive search, and
the symbolic k > 1500 bound chain. ``run_all`` assembles them into a versioned
report and decides the verdict.
"""

import hashlib
import logging
import math
import time

from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Iterator

from django.utils import timezone
from rest_framework.renderers import JSONRenderer

from . import conf
from .algebraic import isolate_alpha
from .baker_bounds import bound_n, case2_closure, case2_n_bound
from .constants import (
    CASE1_K_MAX,
    CASE1_N_BOUND,
    CASE2_K_MIN,
    CASE2_PUBLISHED_K,
    CASE2_PUBLISHED_N,
    CASE2_ROUND1_C,
    CASE2_ROUND2_C,
    CASE2_ROUND2_N_BOUND,
    G1_ROUND_C,
    G1_ROUND_C3,
    G2_ROUND_C,
    G2_ROUND_C3,
    G3_ROUND_C3,
    G4_ROUND_C3,
    N_MIN_ASSUMED,
    N_MIN_SEARCHED,
    PUBLISHED_CASE2_K_CAP,
    PUBLISHED_CASE2_ROUND1,
    PUBLISHED_CASE2_ROUND2,
    PUBLISHED_ELL_CAP,
    PUBLISHED_M_CAP,
    PUBLISHED_N_CAP,
    PUBLISHED_ROUNDS,
    SMALL_CASE_ELL_MAX,
    SMALL_CASE_M_MAX,
    SMALL_CASE_N_MIN,
    SCREEN_TWO_ADIC_N,
    THEOREM_K_MIN,
    APPENDIX_N_MAX,
    Branch,
    FormKind,
)
from .errors import DomainError, VerifierError
from .lattice import ReductionPolicy, RoundSummary, reduction_round, replay_published_round
from .palindrome import (
    DIGITS,
    LEADING_DIGITS,
    candidate_count,
    compose,
    decompose,
    iter_decompositions,
    passes_sixteen_screen,
    passes_two_adic_screen,
    power_case_search,
)
from .precision import decimal_string, parse_scale, scientific
from .sequence_core import KLucasContext, appendix_terms, power_identity_check

logger = logging.getLogger(__name__)

LOG2_10 = math.log2(10)
CASE2_MODES = ("lattice", "mixed", "replay")
PASSED, FAILED, UNRESOLVED = "passed", "failed", "unresolved"
VERDICT_FULL = "no solutions"
VERDICT_DESK = "no solutions (desk scale)"
VERDICT_INCONCLUSIVE = "inconclusive"
VERDICT_FOUND = "solutions found"
CONTROL_N_MAX = 30
DIGEST_EDGE_DIGITS = 20
SWEEP_K_VALUES = (3, 4, 10, 60)


@dataclass(frozen=True)
class RunConfig:
    k_min: int = THEOREM_K_MIN
    k_max: int = 60
    n_cap: int = 400
    n_min: int = N_MIN_SEARCHED
    precision_bits: int = 256
    parallelism: int = 1
    output_path: str | None = None
    reduction_k_min: int = THEOREM_K_MIN
    reduction_k_max: int = 60
    gamma2_ell_max: int | None = 3
    case2_mode: str = "mixed"

    def __post_init__(self) -> None:
        if self.k_min < THEOREM_K_MIN:
            raise DomainError(f"k_min must be >= {THEOREM_K_MIN}, got {self.k_min}")
        if self.k_min > self.k_max:
            raise DomainError(f"k_min={self.k_min} exceeds k_max={self.k_max}")
        if self.k_max > CASE1_K_MAX:
            raise DomainError(f"the enumerated range ends at k = {CASE1_K_MAX}, got {self.k_max}")
        if self.n_cap < N_MIN_ASSUMED:
            raise DomainError(f"n_cap must be >= {N_MIN_ASSUMED}, got {self.n_cap}")
        if not 2 <= self.n_min <= self.n_cap:
            raise DomainError(f"n_min must lie in [2, n_cap], got {self.n_min}")
        if not THEOREM_K_MIN <= self.reduction_k_min <= self.reduction_k_max <= CASE1_K_MAX:
            raise DomainError("reduction k range must lie inside [3, 1500]")
        if self.gamma2_ell_max is not None and self.gamma2_ell_max < 1:
            raise DomainError("gamma2_ell_max must be >= 1")
        if self.case2_mode not in CASE2_MODES:
            raise DomainError(f"case2_mode must be one of {CASE2_MODES}")
        if self.parallelism < 1:
            raise DomainError("parallelism must be >= 1")

    @property
    def scale(self) -> str:
        covers = (
            self.k_min == THEOREM_K_MIN
            and self.k_max == CASE1_K_MAX
            and self.n_cap >= PUBLISHED_N_CAP
            and self.n_min <= N_MIN_SEARCHED
            and self.reduction_k_min == THEOREM_K_MIN
            and self.reduction_k_max == CASE1_K_MAX
            and self.gamma2_ell_max is None
            and self.case2_mode == "lattice"
        )
        return "full" if covers else "desk"

    def as_dict(self) -> dict[str, Any]:
        return asdict(self) | {"scale": self.scale}


PRESETS = {
    "desk": dict[str, Any](),
    "full": dict[str, Any](
        k_max=CASE1_K_MAX,
        n_cap=PUBLISHED_N_CAP,
        reduction_k_max=CASE1_K_MAX,
        gamma2_ell_max=None,
        case2_mode="lattice",
    ),
}


def preset(name: str, **overrides: Any) -> RunConfig:
    if name not in PRESETS:
        raise DomainError(f"unknown preset {name!r}, expected one of {sorted(PRESETS)}")
    values = {
        "precision_bits": int(conf.verifier_setting("PRECISION_BITS")),
        "parallelism": int(conf.verifier_setting("PARALLELISM")),
    }
    return RunConfig(**(values | PRESETS[name] | overrides))


@contextmanager
def _stage(name: str) -> Iterator[None]:
    started = time.perf_counter()
    logger.info("stage %s started", name)
    try:
        yield
    finally:
        logger.info("stage %s finished in %.2fs", name, time.perf_counter() - started)


def digit_bound_check(k: int, n: int, ell: int, m: int) -> bool:
    """2l + m - 3 < n < 5(2l + m) + 1."""
    digits = 2 * ell + m
    return digits - 3 < n < 5 * digits + 1


def growth_window(value: int, log_alpha_low: float, log_alpha_high: float) -> tuple[int, int]:
    """n compatible with alpha^(n-1) <= value <= 2 alpha^n."""
    low = math.ceil((math.log(value) - math.log(2)) / log_alpha_high)
    high = math.floor(math.log(value) / log_alpha_low + 1)
    return low, high


def digit_bound_sweep(
    k_values: tuple[int, ...] = SWEEP_K_VALUES,
    ell_max: int = SMALL_CASE_ELL_MAX,
    m_max: int = SMALL_CASE_M_MAX,
) -> dict[str, Any]:
    """Every synthetic palindrome's growth window for n sits inside the digit window."""
    checked, violations = 0, list[dict[str, int]]()
    for k in k_values:
        low_log, high_log = isolate_alpha(k).log_alpha_bounds()
        for dec in iter_decompositions(ell_max, m_max):
            low, high = growth_window(compose(dec), low_log, high_log)
            for n in range(max(low, N_MIN_ASSUMED), high + 1):
                checked += 1
                if not digit_bound_check(k, n, dec.ell, dec.m):
                    violations.append({"k": k, "n": n} | dec.as_dict())
    if violations:
        logger.warning("digit window violated in %d cells", len(violations))
    return {
        "status": FAILED if violations else PASSED,
        "k_values": list(k_values),
        "checked": checked,
        "violations": violations,
    }


def run_small_case() -> dict[str, Any]:
    """L_n = 3 * 2^(n-2) for n <= k is never such a palindrome."""
    ell_box = max(ell for ell in range(1, 10) if passes_sixteen_screen(SMALL_CASE_N_MIN, ell))
    m_box = max(m for m in range(1, 20) if passes_two_adic_screen(SCREEN_TWO_ADIC_N, 1, m))

    below_screens = [
        n for n in range(2, SCREEN_TWO_ADIC_N) if decompose(3 << (n - 2)) is not None
    ]
    hits = power_case_search(SMALL_CASE_ELL_MAX, SMALL_CASE_M_MAX)
    widened = power_case_search(SMALL_CASE_ELL_MAX + 1, SMALL_CASE_M_MAX + 1)
    found = [*(hit.n for hit in hits), *(hit.n for hit in widened), *below_screens]
    return {
        "status": FAILED if found else PASSED,
        "screened_box": {"ell_max": ell_box, "m_max": m_box},
        "candidates": candidate_count(SMALL_CASE_ELL_MAX, SMALL_CASE_M_MAX),
        "widened_candidates": candidate_count(SMALL_CASE_ELL_MAX + 1, SMALL_CASE_M_MAX + 1),
        "hits": [_hit(hit.value, hit.n, None, hit.decomposition.as_dict()) for hit in hits],
        "widened_hits": [_hit(hit.value, hit.n, None, hit.decomposition.as_dict()) for hit in widened],
        "unscreened_hits": below_screens,
    }


def describe_value(value: int, digest_digits: int | None = None) -> str | dict[str, Any]:
    """Decimal string, or a digest once the value exceeds ``digest_digits`` digits."""
    digest_digits = digest_digits or int(conf.verifier_setting("REPORT_DIGEST_DIGITS"))
    digits = decimal_string(value)
    if len(digits) <= digest_digits:
        return digits
    return {
        "digits": len(digits),
        "head": digits[:DIGEST_EDGE_DIGITS],
        "tail": digits[-DIGEST_EDGE_DIGITS:],
        "sha256": hashlib.sha256(digits.encode()).hexdigest(),
    }


def _hit(
    value: int,
    n: int,
    k: int | None,
    decomposition: dict[str, int],
    digest_digits: int | None = None,
) -> dict[str, Any]:
    return {
        "k": k,
        "n": n,
        "value": describe_value(value, digest_digits),
        "decomposition": decomposition,
    }


def classical_lucas_control(n_max: int = CONTROL_N_MAX) -> list[int]:
    """Indices n <= n_max whose classical Lucas number decomposes (expected none)."""
    ctx = KLucasContext(2)
    return [n for n in range(0, n_max + 1) if decompose(ctx.term(n)) is not None]


def _search_k(task: tuple[int, int, int, int]) -> dict[str, Any]:
    k, n_min, n_max, digest_digits = task
    ctx = KLucasContext(k)
    ctx.extend_to(n_max)
    identities, hits, discrepancies = 0, [], []
    for n in range(2, min(k, n_max) + 1):
        identities += 1
        if not power_identity_check(ctx, n):
            discrepancies.append({"k": k, "n": n, "check": "power identity"})

    appendix = None
    for n, value in enumerate(ctx.terms(n_min, n_max), start=n_min):
        dec = decompose(value)
        if dec is None:
            continue
        appendix = appendix or appendix_terms(k, n_max)
        if compose(dec) != value or appendix[ctx.slot(n)] != value:
            discrepancies.append({"k": k, "n": n, "check": "hit recomputation"})
            continue
        hits.append(_hit(value, n, k, dec.as_dict(), digest_digits))
    return {
        "k": k,
        "terms": n_max - n_min + 1,
        "identities": identities,
        "hits": hits,
        "discrepancies": discrepancies,
    }


def exhaustive_search(
    k_min: int, k_max: int, n_min: int, n_max: int, parallelism: int = 1
) -> dict[str, Any]:
    digest_digits = int(conf.verifier_setting("REPORT_DIGEST_DIGITS"))
    tasks = [(k, n_min, n_max, digest_digits) for k in range(k_min, k_max + 1)]
    if parallelism > 1 and len(tasks) > 1:
        chunksize = max(1, len(tasks) // (4 * parallelism))
        with ProcessPoolExecutor(max_workers=parallelism) as executor:
            results = list(executor.map(_search_k, tasks, chunksize=chunksize))
    else:
        results = [_search_k(task) for task in tasks]
    hits = [hit for result in results for hit in result["hits"]]
    discrepancies = [item for result in results for item in result["discrepancies"]]
    return {
        "k_range": [k_min, k_max],
        "n_range": [n_min, n_max],
        "terms_checked": sum(result["terms"] for result in results),
        "power_identities_checked": sum(result["identities"] for result in results),
        "hits": hits,
        "discrepancies": discrepancies,
    }


def _round_report(summary: RoundSummary) -> dict[str, Any]:
    return summary.as_dict(include_cells=False)


def run_case1(cfg: RunConfig, policy: ReductionPolicy | None = None) -> dict[str, Any]:
    """Reduce l and m for k <= 1500, derive the n cap, then enumerate."""
    policy = policy or conf.reduction_policy()
    X = parse_scale(CASE1_N_BOUND)
    symbolic_n = bound_n(CASE1_K_MAX)
    report: dict[str, Any] = {
        "n_bound": CASE1_N_BOUND,
        "n_bound_from_k_max": scientific(int(symbolic_n)),
        "n_bound_consistent": symbolic_n <= X,
        "published_caps": {"ell": PUBLISHED_ELL_CAP, "m": PUBLISHED_M_CAP, "n": PUBLISHED_N_CAP},
    }
    if N_MIN_SEARCHED < N_MIN_ASSUMED:
        logger.warning(
            "searching from n = %d although the bounds assume n >= %d", N_MIN_SEARCHED, N_MIN_ASSUMED
        )
    k_range = range(cfg.reduction_k_min, cfg.reduction_k_max + 1)
    common = dict(policy=policy, parallelism=cfg.parallelism, precision_bits=cfg.precision_bits)

    gamma1 = reduction_round(
        FormKind.G1, k_range, (LEADING_DIGITS, DIGITS), (1,),
        G1_ROUND_C, X, G1_ROUND_C3, math.log(10), **common,
    )
    report["gamma1"] = _round_report(gamma1)
    status = PASSED if gamma1.resolved else UNRESOLVED

    derived_n_cap = None
    if gamma1.resolved:
        ell_cap = gamma1.max_H_floor
        ell_limit = min(ell_cap, cfg.gamma2_ell_max or ell_cap)
        gamma2 = reduction_round(
            FormKind.G2, k_range, (LEADING_DIGITS, DIGITS), range(1, ell_limit + 1),
            G2_ROUND_C, X, G2_ROUND_C3, math.log(10), **common,
        )
        report["gamma2"] = _round_report(gamma2) | {"ell_range": [1, ell_limit]}
        if gamma2.resolved:
            m_cap = gamma2.max_H_floor
            derived_n_cap = 5 * (2 * ell_cap + m_cap) + 1
            report["caps"] = {"ell": ell_cap, "m": m_cap, "n": derived_n_cap}
            if derived_n_cap > APPENDIX_N_MAX:
                logger.warning(
                    "derived n cap %d exceeds the published table limit n <= %d",
                    derived_n_cap, APPENDIX_N_MAX,
                )
        else:
            status = UNRESOLVED

    n_limit = cfg.n_cap
    if cfg.scale == "full" and derived_n_cap is not None:
        n_limit = max(cfg.n_cap, derived_n_cap)
    search = exhaustive_search(cfg.k_min, cfg.k_max, cfg.n_min, n_limit, cfg.parallelism)
    report["search"] = search
    report["search_covers_derived_cap"] = derived_n_cap is not None and n_limit >= derived_n_cap
    report["k2_control"] = classical_lucas_control()
    report["hits"] = search["hits"]

    if search["discrepancies"]:
        logger.error("search recomputation disagreed in %d cases", len(search["discrepancies"]))
        status = FAILED
    if search["hits"] or report["k2_control"]:
        status = FAILED
    report["status"] = status
    return report


def _round_bound(
    cfg: RunConfig,
    policy: ReductionPolicy,
    kind: FormKind,
    C: str,
    X: int,
    c3: int,
    use_lattice: bool,
    published: str,
    ell_limit: int | None = None,
) -> tuple[float | None, dict[str, Any]]:
    if not use_lattice:
        replay = replay_published_round(published)
        return replay.bound.H, {"source": "published", "replay": replay.as_dict()}
    ell_range = range(1, ell_limit + 1) if ell_limit else (1,)
    summary = reduction_round(
        kind, None, (LEADING_DIGITS, DIGITS), ell_range, C, X, c3, math.log(2),
        policy=policy, parallelism=cfg.parallelism, precision_bits=cfg.precision_bits,
    )
    details = {"source": "lattice"} | _round_report(summary)
    if ell_limit:
        details["ell_range"] = [1, ell_limit]
    return (summary.max_H if summary.resolved else None), details


def _case2_round(
    cfg: RunConfig, policy: ReductionPolicy, C: str, X: int, label: str
) -> dict[str, Any]:
    gamma4_lattice = cfg.case2_mode == "lattice"
    gamma3_lattice = cfg.case2_mode != "replay"

    H3, gamma3 = _round_bound(
        cfg, policy, FormKind.G3, C, X, G3_ROUND_C3, gamma3_lattice, f"{label}-G3"
    )
    result = {"C": C, "n_bound": scientific(X), "gamma3": gamma3}
    if H3 is None:
        return result | {"status": UNRESOLVED}

    ell_cap = math.floor(H3 / LOG2_10)
    H4, gamma4 = _round_bound(
        cfg, policy, FormKind.G4, C, X, G4_ROUND_C3, gamma4_lattice, f"{label}-G4", ell_cap
    )
    result |= {"min_bound": H3, "ell_cap": ell_cap, "gamma4": gamma4}
    if H4 is None:
        return result | {"status": UNRESOLVED}

    k_a, k_b = math.floor(2 * H3), math.floor(2 * H4)
    return result | {"status": PASSED, "k_cap": {"a": k_a, "b": k_b}, "k_bound": max(k_a, k_b)}


def run_case2(cfg: RunConfig, policy: ReductionPolicy | None = None) -> dict[str, Any]:
    """Chain the large-k bounds through two reduction rounds to k < 1501."""
    policy = policy or conf.reduction_policy()
    closure = {branch.value: case2_closure(branch) for branch in Branch}
    closure_ok = all(closure[b.value] <= CASE2_PUBLISHED_K[b] for b in Branch)
    derived_n = case2_n_bound(max(closure.values()))
    X1 = max(parse_scale(CASE2_PUBLISHED_N), math.ceil(derived_n))

    report: dict[str, Any] = {
        "closure": {branch: f"{value:.4g}" for branch, value in closure.items()},
        "closure_within_published": closure_ok,
        "n_bound": scientific(X1),
        "n_bound_derived": f"{derived_n:.4g}",
        "mode": cfg.case2_mode,
        "published": {
            "round1": PUBLISHED_CASE2_ROUND1,
            "k_cap": PUBLISHED_CASE2_K_CAP,
            "round2": PUBLISHED_CASE2_ROUND2,
        },
    }
    first = _case2_round(cfg, policy, CASE2_ROUND1_C, X1, "case2-round1")
    report["round1"] = first
    if first["status"] != PASSED:
        return report | {"status": UNRESOLVED, "contradiction": False}
    if first["k_bound"] != PUBLISHED_CASE2_K_CAP:
        logger.info(
            "first round caps k at %d, published value %d", first["k_bound"], PUBLISHED_CASE2_K_CAP
        )

    X2 = max(parse_scale(CASE2_ROUND2_N_BOUND), math.ceil(case2_n_bound(first["k_bound"])))
    second = _case2_round(cfg, policy, CASE2_ROUND2_C, X2, "case2-round2")
    report["round2"] = second
    if second["status"] != PASSED:
        return report | {"status": UNRESOLVED, "contradiction": False}

    contradiction = second["k_bound"] < CASE2_K_MIN
    if not contradiction:
        logger.warning("second round leaves k <= %d, no contradiction", second["k_bound"])
    status = PASSED if contradiction and closure_ok else FAILED
    return report | {"status": status, "contradiction": contradiction}


def published_replays() -> list[dict[str, Any]]:
    return [replay_published_round(label).as_dict() for label in PUBLISHED_ROUNDS]


def _guarded(name: str, stage: Any, *args: Any) -> dict[str, Any]:
    with _stage(name):
        try:
            return stage(*args)
        except VerifierError as exc:
            logger.warning("stage %s did not resolve: %s", name, exc)
            return {"status": UNRESOLVED, "error": str(exc)}
        except Exception as exc:
            logger.exception("stage %s failed", name)
            return {"status": FAILED, "error": f"{type(exc).__name__}: {exc}"}


def verdict(stages: dict[str, dict[str, Any]], scale: str) -> str:
    hit_keys = ("hits", "widened_hits", "unscreened_hits")
    if any(stage.get(key) for stage in stages.values() for key in hit_keys):
        return VERDICT_FOUND
    if any(stage.get("status") != PASSED for stage in stages.values()):
        return VERDICT_INCONCLUSIVE
    return VERDICT_FULL if scale == "full" else VERDICT_DESK


def run_all(cfg: RunConfig, policy: ReductionPolicy | None = None) -> dict[str, Any]:
    policy = policy or conf.reduction_policy()
    logger.info("verification run at %s scale: %s", cfg.scale, cfg.as_dict())
    stages = {
        "digit_bounds": _guarded("digit_bounds", digit_bound_sweep),
        "small_case": _guarded("small_case", run_small_case),
        "case1": _guarded("case1", run_case1, cfg, policy),
        "case2": _guarded("case2", run_case2, cfg, policy),
    }
    report = {
        "schema_version": int(conf.verifier_setting("REPORT_SCHEMA_VERSION")),
        "generated_at": timezone.now().isoformat(),
        "config": cfg.as_dict(),
        "stages": stages,
        "published_replays": published_replays(),
        "verdict": verdict(stages, cfg.scale),
    }
    logger.info("verdict: %s", report["verdict"])
    if cfg.output_path:
        write_report(report, cfg.output_path)
    return report


def write_report(report: dict[str, Any], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(JSONRenderer().render(report, renderer_context={"indent": 2}))
    logger.info("report written to %s", path)
    return path
