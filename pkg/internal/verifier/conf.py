"""
Typed access to ``settings.VERIFIER``.
"""

from fractions import Fraction
from pathlib import Path
from typing import Any

from django.conf import settings

from .lattice import ReductionPolicy

DEFAULTS = dict[str, Any](
    PRECISION_BITS=256,
    MAX_PRECISION_BITS=1 << 14,
    PARALLELISM=1,
    LOVASZ_DELTA="3/4",
    C_ESCALATION_FACTOR=10**3,
    MAX_ESCALATIONS=5,
    MIN_SLACK_RATIO="1/10",
    LAMBDA_RULE="fractional",
    REPORT_DIGEST_DIGITS=10_000,
    REPORT_SCHEMA_VERSION=1,
    REPORT_DIR="reports",
)


def verifier_setting(name: str) -> Any:
    return getattr(settings, "VERIFIER", {}).get(name, DEFAULTS[name])


def reduction_policy() -> ReductionPolicy:
    return ReductionPolicy(
        lovasz_delta=Fraction(verifier_setting("LOVASZ_DELTA")),
        escalation_factor=int(verifier_setting("C_ESCALATION_FACTOR")),
        max_escalations=int(verifier_setting("MAX_ESCALATIONS")),
        min_slack_ratio=Fraction(verifier_setting("MIN_SLACK_RATIO")),
        lambda_rule=verifier_setting("LAMBDA_RULE"),
    )


def report_dir() -> Path:
    return Path(verifier_setting("REPORT_DIR"))
