from rest_framework.routers import DefaultRouter

from . import viewsets

router = DefaultRouter()
router.register("sequence", viewsets.SequenceViewSet, basename="sequence")
router.register("alpha", viewsets.AlphaViewSet, basename="alpha")
router.register("palindrome", viewsets.PalindromeViewSet, basename="palindrome")
router.register("matveev", viewsets.MatveevViewSet, basename="matveev")
router.register("runs", viewsets.VerificationRunViewSet, basename="runs")

urlpatterns = [
    *router.urls,
]
