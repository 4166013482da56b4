from unittest.mock import patch

from django.test import TestCase
from rest_framework import status
from rest_framework.test import APIClient

from internal.verifier.errors import DomainError, PrecisionError
from internal.verifier.models import VerificationRun
from internal.verifier.pipeline import VERDICT_DESK


class SequenceApiTests(TestCase):
    def setUp(self):
        self.client = APIClient()

    def test_term(self):
        response = self.client.get("/api/sequence/term/", {"k": 3, "n": 8})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.json(), {"k": 3, "n": 8, "value": "118"})

    def test_term_beyond_int_string_limit(self):
        response = self.client.get("/api/sequence/term/", {"k": 2, "n": 100_000})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        value = response.json()["value"]
        self.assertEqual(len(value), 20899)
        self.assertTrue(value.isdigit())

    def test_term_below_seed(self):
        response = self.client.get("/api/sequence/term/", {"k": 3, "n": -5})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn("n", response.json())

    def test_alpha(self):
        response = self.client.get("/api/alpha/", {"k": 3, "digits": 20})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        data = response.json()
        self.assertTrue(data["alpha"]["lower"].startswith("1.83928675521416"))
        self.assertTrue(data["f_alpha"]["lower"].startswith("0.6"))
        self.assertEqual(data["bits"], 256)

    def test_alpha_rejects_small_k(self):
        response = self.client.get("/api/alpha/", {"k": 1})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)


class PalindromeApiTests(TestCase):
    def setUp(self):
        self.client = APIClient()

    def test_check(self):
        response = self.client.get("/api/palindrome/check/", {"value": "44944"})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(
            response.json()["decomposition"],
            {"d1": 4, "d2": 9, "ell": 2, "m": 1, "digits": "44944"},
        )

    def test_check_without_decomposition(self):
        response = self.client.get("/api/palindrome/check/", {"value": "199"})
        self.assertEqual(response.json(), {"decomposition": None})

    def test_check_rejects_non_integers(self):
        for value in ("abc", "0121", "-121"):
            response = self.client.get("/api/palindrome/check/", {"value": value})
            self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST, value)

    def test_power_case(self):
        response = self.client.get("/api/palindrome/power-case/")
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.json(), {"searched": 2916, "hits": []})

    def test_power_case_limits(self):
        response = self.client.get("/api/palindrome/power-case/", {"ell_max": 7})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)


class MatveevApiTests(TestCase):
    def setUp(self):
        self.client = APIClient()

    def test_rational_form(self):
        response = self.client.get("/api/matveev/", {"kind": "G3", "k": 3, "n": 8})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        data = response.json()
        self.assertAlmostEqual(data["lower_bound"] / -3.8659e12, 1, places=3)
        self.assertEqual(data["coeffs"], [1, 3, -6])

    def test_algebraic_form(self):
        response = self.client.get("/api/matveev/", {"kind": "G2", "k": 4, "n": 20, "ell": 2})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.json()["D"], 4)

    def test_equal_digits(self):
        response = self.client.get("/api/matveev/", {"kind": "G3", "k": 3, "n": 8, "d1": 2, "d2": 2})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)


class VerificationRunApiTests(TestCase):
    def setUp(self):
        self.client = APIClient()

    @patch("internal.verifier.pipeline.run_all")
    def test_execute_stores_run(self, run_all):
        run_all.return_value = {"verdict": VERDICT_DESK, "schema_version": 1, "stages": {}}
        with self.settings(VERIFIER={"PARALLELISM": 1}):
            response = self.client.post("/api/runs/execute/", {"preset": "desk"}, format="json")
        self.assertEqual(response.status_code, status.HTTP_201_CREATED)
        self.assertEqual(response.json()["verdict"], VERDICT_DESK)
        self.assertEqual(run_all.call_args.args[0].scale, "desk")

        run = VerificationRun.objects.get()
        self.assertEqual(run.report["stages"], {})

        listing = self.client.get("/api/runs/")
        self.assertEqual([item["id"] for item in listing.json()], [run.pk])
        detail = self.client.get(f"/api/runs/{run.pk}/")
        self.assertEqual(detail.json()["preset"], "desk")
        deleted = self.client.delete(f"/api/runs/{run.pk}/")
        self.assertEqual(deleted.status_code, status.HTTP_204_NO_CONTENT)
        self.assertFalse(VerificationRun.objects.exists())

    def test_unknown_preset(self):
        response = self.client.post("/api/runs/execute/", {"preset": "huge"}, format="json")
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)

    @patch("internal.verifier.pipeline.run_all")
    def test_library_errors_map_to_status_codes(self, run_all):
        run_all.side_effect = DomainError("bad range")
        response = self.client.post("/api/runs/execute/", {}, format="json")
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)

        run_all.side_effect = PrecisionError("too coarse", bits=256)
        response = self.client.post("/api/runs/execute/", {}, format="json")
        self.assertEqual(response.status_code, status.HTTP_422_UNPROCESSABLE_ENTITY)
        self.assertEqual(response.json()["detail"], "too coarse")
        self.assertFalse(VerificationRun.objects.exists())


class SchemaTests(TestCase):
    def test_openapi_document(self):
        response = APIClient().get("/docs/", {"format": "openapi"})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
