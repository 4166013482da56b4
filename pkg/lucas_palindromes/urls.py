"""
URL configuration for lucas_palindromes project.

``/api/`` exposes the verifier operations and stored runs, ``/docs/`` serves
the generated Swagger UI.
"""

from django.urls import include, path

from internal.verifier import urls as verifier_urls

from rest_framework import permissions
from drf_yasg.views import get_schema_view
from drf_yasg import openapi

schema_view = get_schema_view(
    openapi.Info(
        title="k-Lucas Palindrome Verifier API",
        default_version="v1",
        description=(
            "Exact k-generalized Lucas arithmetic, certified constants, "
            "Matveev bounds and stored verification runs."
        ),
        license=openapi.License(name="BSD License"),
    ),
    public=True,
    permission_classes=(permissions.AllowAny,),
)


urlpatterns = [
    path("api/", include(verifier_urls)),
    path(
        "docs/",
        schema_view.with_ui("swagger", cache_timeout=0),
        name="schema-swagger-ui",
    ),
]
