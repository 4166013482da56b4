from django.core.management.base import CommandError

from internal.verifier.management.base import VerifierCommand
from internal.verifier.palindrome import candidate_count, decompose, power_case_search
from internal.verifier.precision import unlimited_int_digits


class Command(VerifierCommand):
    help = "Decompose a value as d1^l d2^m d1^l, or run the 3 * 2^(n-2) search."

    def add_arguments(self, parser):
        mode = parser.add_mutually_exclusive_group(required=True)
        mode.add_argument("--check", metavar="VALUE")
        mode.add_argument("--power-case", action="store_true")
        parser.add_argument("--ell-max", type=int, default=3)
        parser.add_argument("--m-max", type=int, default=12)
        parser.add_argument("--json", action="store_true")

    def handle(self, *args, **options):
        if options["power_case"]:
            ell_max, m_max = options["ell_max"], options["m_max"]
            hits = power_case_search(ell_max, m_max)
            self.emit(
                {
                    "searched": candidate_count(ell_max, m_max),
                    "hits": [
                        hit.decomposition.as_dict() | {"n": hit.n, "value": str(hit.value)}
                        for hit in hits
                    ],
                },
                as_json=True,
            )
            return

        text = options["check"].strip()
        if not text.isdigit():
            raise CommandError(f"--check expects a decimal integer, got {text!r}")
        with unlimited_int_digits():
            dec = decompose(int(text))
        data = {"value": text, "decomposition": dec.as_dict() if dec else None}
        summary = "none" if dec is None else f"d1={dec.d1} d2={dec.d2} l={dec.ell} m={dec.m}"
        self.emit(data, options["json"], summary)
