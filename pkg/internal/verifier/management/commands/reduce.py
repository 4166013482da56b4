import math

from django.core.management.base import CommandError

from internal.verifier import conf
from internal.verifier.constants import FormKind
from internal.verifier.lattice import reduction_round
from internal.verifier.management.base import VerifierCommand, parse_range
from internal.verifier.palindrome import DIGITS, LEADING_DIGITS
from internal.verifier.pipeline import write_report


class Command(VerifierCommand):
    help = "Run one LLL reduction round over the cells of a linear form."

    def add_arguments(self, parser):
        parser.add_argument("--form", choices=[kind.value for kind in FormKind], required=True)
        parser.add_argument("--k-range", help="A:B, required for G1 and G2")
        parser.add_argument("--c", required=True, help="scaling constant, e.g. 2.1e178")
        parser.add_argument("--n-bound", required=True, help="coefficient bound, e.g. 8.8e58")
        parser.add_argument("--d1", type=int, help="restrict to a single leading digit")
        parser.add_argument("--ell-range", default="1:1", help="A:B, used by G2 and G4")
        parser.add_argument("--c3", type=float, default=1.0)
        parser.add_argument("--c4", type=float, help="defaults to log 10 (G1, G2) or log 2 (G3, G4)")
        parser.add_argument("--parallelism", type=int)
        parser.add_argument("--out")
        parser.add_argument("--cells", action="store_true", help="include every cell in the output")

    def handle(self, *args, **options):
        kind = FormKind(options["form"])
        if not kind.is_rational and not options["k_range"]:
            raise CommandError(f"--k-range is required for {kind}")
        k_range = parse_range(options["k_range"]) if options["k_range"] else None
        d1_range = [options["d1"]] if options["d1"] is not None else LEADING_DIGITS
        c4 = options["c4"] or (math.log(2) if kind.is_rational else math.log(10))
        c3 = int(options["c3"]) if options["c3"].is_integer() else options["c3"]

        summary = reduction_round(
            kind,
            k_range,
            (d1_range, DIGITS),
            parse_range(options["ell_range"]),
            options["c"],
            options["n_bound"],
            c3,
            c4,
            policy=conf.reduction_policy(),
            parallelism=options["parallelism"] or int(conf.verifier_setting("PARALLELISM")),
            precision_bits=int(conf.verifier_setting("PRECISION_BITS")),
        )
        report = summary.as_dict(include_cells=options["cells"] or bool(options["out"]))
        if options["out"]:
            write_report(report, options["out"])
        self.emit(
            report,
            False,
            f"{kind}: {len(summary.cells)} cells, max H {summary.max_H}, "
            f"floor {summary.max_H_floor}, {len(summary.unresolved)} unresolved",
        )
        if summary.unresolved:
            raise CommandError(f"{len(summary.unresolved)} cells unresolved", returncode=2)
