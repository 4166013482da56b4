from typing import Any, override

from rest_framework import serializers
from rest_framework.serializers import ModelSerializer, Serializer

from internal.verifier.constants import FormKind
from internal.verifier.errors import DomainError
from internal.verifier.models import VerificationRun
from internal.verifier.pipeline import CASE2_MODES, PRESETS, RunConfig

MAX_VALUE_DIGITS = 4000


class TermQuerySerializer(Serializer):
    k = serializers.IntegerField(min_value=2, max_value=10_000)
    n = serializers.IntegerField(max_value=100_000)

    @override
    def validate(self, attrs: dict[str, Any]) -> dict[str, Any]:
        if attrs["n"] < 2 - attrs["k"]:
            raise serializers.ValidationError({"n": f"n must be >= {2 - attrs['k']}"})
        return attrs


class AlphaQuerySerializer(Serializer):
    k = serializers.IntegerField(min_value=2, max_value=5_000)
    digits = serializers.IntegerField(min_value=5, max_value=1_000, default=30)
    bits = serializers.IntegerField(min_value=128, max_value=1 << 14, required=False)


class PalindromeCheckSerializer(Serializer):
    value = serializers.RegexField(r"^[1-9][0-9]*$", max_length=MAX_VALUE_DIGITS)

    def validate_value(self, value: str) -> int:
        return int(value)


class PowerCaseQuerySerializer(Serializer):
    ell_max = serializers.IntegerField(min_value=1, max_value=6, default=3)
    m_max = serializers.IntegerField(min_value=1, max_value=24, default=12)


class PalindromeDecompositionSerializer(Serializer):
    d1 = serializers.IntegerField()
    d2 = serializers.IntegerField()
    ell = serializers.IntegerField()
    m = serializers.IntegerField()
    digits = serializers.CharField()


class MatveevQuerySerializer(Serializer):
    kind = serializers.ChoiceField(choices=[kind.value for kind in FormKind])
    k = serializers.IntegerField(min_value=3, max_value=5_000)
    n = serializers.IntegerField(min_value=2)
    d1 = serializers.IntegerField(min_value=1, max_value=9, default=1)
    d2 = serializers.IntegerField(min_value=0, max_value=9, default=0)
    ell = serializers.IntegerField(min_value=1, default=1)
    m = serializers.IntegerField(min_value=1, default=1)

    @override
    def validate(self, attrs: dict[str, Any]) -> dict[str, Any]:
        if attrs["d1"] == attrs["d2"]:
            raise serializers.ValidationError({"d2": "d1 and d2 must differ"})
        return attrs


class RunConfigSerializer(Serializer):
    """Flat run configuration, as read from a TOML file or a request body."""

    k_min = serializers.IntegerField(min_value=3, default=3)
    k_max = serializers.IntegerField(min_value=3, max_value=1500, default=60)
    n_cap = serializers.IntegerField(min_value=8, default=400)
    n_min = serializers.IntegerField(min_value=2, default=7)
    precision_bits = serializers.IntegerField(min_value=128, max_value=1 << 14, required=False)
    parallelism = serializers.IntegerField(min_value=1, required=False)
    out = serializers.CharField(required=False, source="output_path")
    reduction_k_min = serializers.IntegerField(min_value=3, max_value=1500, default=3)
    reduction_k_max = serializers.IntegerField(min_value=3, max_value=1500, default=60)
    gamma2_ell_max = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=3)
    case2_mode = serializers.ChoiceField(choices=CASE2_MODES, default="mixed")

    @override
    def validate(self, attrs: dict[str, Any]) -> dict[str, Any]:
        if attrs["k_min"] > attrs["k_max"]:
            raise serializers.ValidationError({"k_min": "k_min must not exceed k_max"})
        if attrs["reduction_k_min"] > attrs["reduction_k_max"]:
            raise serializers.ValidationError(
                {"reduction_k_min": "reduction_k_min must not exceed reduction_k_max"}
            )
        return attrs

    def to_run_config(self, **defaults: Any) -> RunConfig:
        try:
            return RunConfig(**(defaults | self.validated_data))
        except DomainError as exc:
            raise serializers.ValidationError(str(exc))


class ExecuteRunSerializer(Serializer):
    preset = serializers.ChoiceField(choices=sorted(PRESETS), default="desk")


class VerificationRunSerializer(ModelSerializer):
    class Meta:
        model = VerificationRun
        fields = (
            "id",
            "preset",
            "verdict",
            "schema_version",
            "report",
            "created_at",
        )
        read_only_fields = fields
