import json
import tempfile

from io import StringIO
from pathlib import Path
from unittest.mock import patch

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from internal.verifier.management.base import parse_range
from internal.verifier.models import VerificationRun
from internal.verifier.pipeline import VERDICT_DESK, VERDICT_INCONCLUSIVE


def run(*args):
    out = StringIO()
    call_command(*args, stdout=out)
    return out.getvalue()


class ParseRangeTests(SimpleTestCase):
    def test_inclusive(self):
        self.assertEqual(parse_range("3:5"), range(3, 6))
        self.assertEqual(parse_range("7:7"), range(7, 8))

    def test_invalid(self):
        for text in ("3", "a:b", "5:3", "1:2:3"):
            with self.subTest(text=text), self.assertRaises(CommandError):
                parse_range(text)


class SequenceCommandTests(SimpleTestCase):
    def test_single_term(self):
        self.assertEqual(run("seq", "--k", "3", "--n", "8").strip(), "L_8^(3) = 118")

    def test_json_single_term(self):
        data = json.loads(run("seq", "--k", "3", "--n", "8", "--json"))
        self.assertEqual(data, {"k": 3, "n": 8, "value": "118"})

    def test_json_range(self):
        data = json.loads(run("seq", "--k", "2", "--n", "5", "--n-max", "6", "--json"))
        self.assertEqual(data, [{"k": 2, "n": 5, "value": "11"}, {"k": 2, "n": 6, "value": "18"}])

    def test_term_beyond_int_string_limit(self):
        # L_100000^(2) has 20899 digits and L_n mod 10 repeats with period 12.
        data = json.loads(run("seq", "--k", "2", "--n", "100000", "--json"))
        self.assertEqual(len(data["value"]), 20899)
        self.assertTrue(data["value"].isdigit())
        self.assertTrue(data["value"].endswith("7"))

    def test_empty_range(self):
        with self.assertRaises(CommandError):
            run("seq", "--k", "3", "--n", "9", "--n-max", "8")

    def test_domain_error_becomes_command_error(self):
        with self.assertRaises(CommandError):
            run("seq", "--k", "3", "--n", "-5")


class AlphaCommandTests(SimpleTestCase):
    def test_json(self):
        data = json.loads(run("alpha", "--k", "3", "--digits", "20", "--json"))
        self.assertTrue(data["alpha"]["lower"].startswith("1.83928675521416"))
        self.assertTrue(data["sign_certificate"])
        self.assertEqual(data["bits"], 256)

    def test_text(self):
        output = run("alpha", "--k", "2", "--digits", "12")
        self.assertIn("k=2 at 256 bits", output)
        self.assertIn("1.61803398875", output)


class PalindromeCommandTests(SimpleTestCase):
    def test_check(self):
        self.assertEqual(run("pal", "--check", "1221").strip(), "d1=1 d2=2 l=1 m=2")
        self.assertEqual(run("pal", "--check", "123").strip(), "none")

    def test_check_rejects_non_digits(self):
        with self.assertRaises(CommandError):
            run("pal", "--check", "12a1")

    def test_check_beyond_int_string_limit(self):
        value = "1" * 3000 + "2" * 3000 + "1" * 3000
        self.assertEqual(run("pal", "--check", value).strip(), "d1=1 d2=2 l=3000 m=3000")

    def test_power_case(self):
        self.assertEqual(json.loads(run("pal", "--power-case")), {"searched": 2916, "hits": []})
        data = json.loads(run("pal", "--power-case", "--ell-max", "1", "--m-max", "1"))
        self.assertEqual(data, {"searched": 81, "hits": []})


class MatveevCommandTests(SimpleTestCase):
    def test_rational_form(self):
        self.assertTrue(
            run("matveev", "--kind", "G3", "--k", "3", "--n", "8").startswith("log|G3| > -3.86")
        )

    def test_algebraic_form_json(self):
        data = json.loads(run("matveev", "--kind", "G1", "--k", "3", "--n", "8", "--json"))
        self.assertEqual(data["D"], 3)
        self.assertEqual(data["coeffs"], [1, 7, -3])
        self.assertLess(data["lower_bound"], 0)

    def test_invalid_digits(self):
        with self.assertRaises(CommandError):
            run("matveev", "--kind", "G3", "--k", "3", "--n", "8", "--d1", "0", "--d2", "0")


class ReduceCommandTests(SimpleTestCase):
    def test_rational_round(self):
        output = run(
            "reduce", "--form", "G3", "--c", "1e30", "--n-bound", "1e8", "--c3", "59",
            "--parallelism", "1",
        )
        self.assertTrue(output.startswith("G3: 9 cells"))
        self.assertIn("0 unresolved", output)

    def test_report_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / "g3.json"
            run(
                "reduce", "--form", "G3", "--c", "1e30", "--n-bound", "1e8", "--d1", "5",
                "--parallelism", "1", "--out", str(path),
            )
            report = json.loads(path.read_text())
        self.assertEqual(report["cell_count"], 1)
        self.assertEqual(report["cells"][0]["d1"], 5)

    def test_algebraic_form_needs_k_range(self):
        with self.assertRaises(CommandError):
            run("reduce", "--form", "G1", "--c", "1e30", "--n-bound", "1e8")

    def test_unresolved_cells_exit_with_two(self):
        with self.settings(VERIFIER={"MAX_ESCALATIONS": 0}):
            with self.assertRaises(CommandError) as raised:
                run(
                    "reduce", "--form", "G3", "--c", "1e20", "--n-bound", "1e8", "--d1", "5",
                    "--parallelism", "1",
                )
        self.assertEqual(raised.exception.returncode, 2)


class VerifyAllCommandTests(TestCase):
    def write_config(self, directory, text):
        path = Path(directory) / "run.toml"
        path.write_text(text)
        return str(path)

    @patch("internal.verifier.pipeline.run_all")
    def test_config_file(self, run_all):
        run_all.return_value = {"verdict": VERDICT_DESK, "schema_version": 1}
        with tempfile.TemporaryDirectory() as directory:
            config = self.write_config(
                directory, f'k_max = 5\nn_cap = 60\nout = "{directory}/report.json"\n'
            )
            output = run("verify_all", "--config", config, "--store")
        cfg = run_all.call_args.args[0]
        self.assertEqual((cfg.k_min, cfg.k_max, cfg.n_cap), (3, 5, 60))
        self.assertTrue(cfg.output_path.endswith("report.json"))
        self.assertIn(f"verdict: {VERDICT_DESK}", output)
        stored = VerificationRun.objects.get()
        self.assertEqual((stored.preset, stored.verdict), ("config", VERDICT_DESK))

    def test_invalid_config(self):
        with tempfile.TemporaryDirectory() as directory:
            config = self.write_config(directory, "k_min = 2\n")
            with self.assertRaises(CommandError):
                run("verify_all", "--config", config)

    def test_missing_config(self):
        with self.assertRaises(CommandError):
            run("verify_all", "--config", "/nonexistent/run.toml")

    @patch("internal.verifier.pipeline.run_all")
    def test_preset_defaults_report_path(self, run_all):
        run_all.return_value = {"verdict": VERDICT_DESK, "schema_version": 1}
        with self.settings(VERIFIER={"REPORT_DIR": "/tmp/verifier-reports", "PARALLELISM": 1}):
            run("verify_all", "--preset", "desk")
        cfg = run_all.call_args.args[0]
        self.assertEqual(cfg.output_path, "/tmp/verifier-reports/desk-desk.json")
        self.assertFalse(VerificationRun.objects.exists())

    @patch("internal.verifier.pipeline.run_all")
    def test_inconclusive_verdict_exits_with_two(self, run_all):
        run_all.return_value = {"verdict": VERDICT_INCONCLUSIVE, "schema_version": 1}
        with self.assertRaises(CommandError) as raised:
            run("verify_all", "--preset", "desk", "--out", "/tmp/verifier-reports/x.json")
        self.assertEqual(raised.exception.returncode, 2)
