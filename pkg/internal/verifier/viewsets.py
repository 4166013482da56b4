from contextlib import contextmanager
from http import HTTPMethod
from typing import Any, Iterator

from drf_yasg.utils import swagger_auto_schema
from rest_framework import mixins, status
from rest_framework.decorators import action
from rest_framework.exceptions import APIException, ValidationError
from rest_framework.response import Response
from rest_framework.serializers import Serializer
from rest_framework.viewsets import GenericViewSet, ViewSet

from internal.verifier import conf, pipeline
from internal.verifier.algebraic import isolate_alpha
from internal.verifier.baker_bounds import build_gamma, matveev_lower_bound
from internal.verifier.constants import FormKind
from internal.verifier.errors import DomainError, PrecisionError
from internal.verifier.models import VerificationRun
from internal.verifier.palindrome import candidate_count, decompose, power_case_search
from internal.verifier.precision import PrecisionContext, decimal_string, enclosure_strings
from internal.verifier.sequence_core import KLucasContext

from .serializers import (
    AlphaQuerySerializer,
    ExecuteRunSerializer,
    MatveevQuerySerializer,
    PalindromeCheckSerializer,
    PalindromeDecompositionSerializer,
    PowerCaseQuerySerializer,
    TermQuerySerializer,
    VerificationRunSerializer,
)


class PrecisionExhausted(APIException):
    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY
    default_detail = "The result could not be certified at the available precision."
    default_code = "precision_exhausted"


@contextmanager
def verifier_errors() -> Iterator[None]:
    try:
        yield
    except DomainError as exc:
        raise ValidationError(str(exc))
    except PrecisionError as exc:
        raise PrecisionExhausted(str(exc))


def validated_query(serializer_class: type[Serializer], request) -> dict[str, Any]:
    serializer = serializer_class(data=request.query_params)
    serializer.is_valid(raise_exception=True)
    return serializer.validated_data


class SequenceViewSet(ViewSet):
    @swagger_auto_schema(query_serializer=TermQuerySerializer)
    @action(methods=[HTTPMethod.GET], detail=False)
    def term(self, request):
        query = validated_query(TermQuerySerializer, request)
        with verifier_errors():
            value = KLucasContext(query["k"]).term(query["n"])
        return Response(
            {"k": query["k"], "n": query["n"], "value": decimal_string(value)},
            status=status.HTTP_200_OK,
        )


class AlphaViewSet(ViewSet):
    @swagger_auto_schema(query_serializer=AlphaQuerySerializer)
    def list(self, request):
        query = validated_query(AlphaQuerySerializer, request)
        k, digits = query["k"], query["digits"]
        bits = query.get("bits") or int(conf.verifier_setting("PRECISION_BITS"))
        with verifier_errors():
            alg = isolate_alpha(k, PrecisionContext.for_k(k, bits))

        data = {
            "k": k,
            "bits": alg.prec.bits,
            "alpha": enclosure_strings(alg.alpha, digits),
            "f_alpha": enclosure_strings(alg.f_alpha, digits),
            "log_alpha": enclosure_strings(alg.log_alpha, digits),
        }
        return Response(data, status=status.HTTP_200_OK)


class PalindromeViewSet(ViewSet):
    @swagger_auto_schema(query_serializer=PalindromeCheckSerializer)
    @action(methods=[HTTPMethod.GET], detail=False)
    def check(self, request):
        value = validated_query(PalindromeCheckSerializer, request)["value"]
        decomposition = None
        if (dec := decompose(value)) is not None:
            decomposition = PalindromeDecompositionSerializer(
                dec.as_dict() | {"digits": dec.digits}
            ).data
        return Response({"decomposition": decomposition}, status=status.HTTP_200_OK)

    @swagger_auto_schema(query_serializer=PowerCaseQuerySerializer)
    @action(methods=[HTTPMethod.GET], detail=False, url_path="power-case")
    def power_case(self, request):
        query = validated_query(PowerCaseQuerySerializer, request)
        hits = power_case_search(query["ell_max"], query["m_max"])
        return Response(
            {
                "searched": candidate_count(query["ell_max"], query["m_max"]),
                "hits": [
                    hit.decomposition.as_dict() | {"n": hit.n, "value": str(hit.value)}
                    for hit in hits
                ],
            },
            status=status.HTTP_200_OK,
        )


class MatveevViewSet(ViewSet):
    @swagger_auto_schema(query_serializer=MatveevQuerySerializer)
    def list(self, request):
        query = validated_query(MatveevQuerySerializer, request)
        kind = FormKind(query["kind"])
        with verifier_errors():
            alg = None if kind.is_rational else isolate_alpha(query["k"])
            spec = build_gamma(alg=alg, **query)
            bound = matveev_lower_bound(spec)
        return Response(spec.as_dict() | {"lower_bound": bound}, status=status.HTTP_200_OK)


class VerificationRunViewSet(
    mixins.ListModelMixin,
    mixins.RetrieveModelMixin,
    mixins.DestroyModelMixin,
    GenericViewSet,
):
    queryset = VerificationRun.objects.all()

    serializer_class = VerificationRunSerializer

    @swagger_auto_schema(request_body=ExecuteRunSerializer)
    @action(methods=[HTTPMethod.POST], detail=False)
    def execute(self, request):
        serializer = ExecuteRunSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        name = serializer.validated_data["preset"]

        with verifier_errors():
            report = pipeline.run_all(pipeline.preset(name))
        run = VerificationRun.objects.create(
            preset=name,
            verdict=report["verdict"],
            schema_version=report["schema_version"],
            report=report,
        )
        return Response(
            VerificationRunSerializer(run).data, status=status.HTTP_201_CREATED
        )
