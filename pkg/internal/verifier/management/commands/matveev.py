from internal.verifier.algebraic import isolate_alpha
from internal.verifier.baker_bounds import build_gamma, matveev_lower_bound
from internal.verifier.constants import FormKind
from internal.verifier.management.base import VerifierCommand


class Command(VerifierCommand):
    help = "Matveev lower bound for one of the four linear forms."

    def add_arguments(self, parser):
        parser.add_argument("--kind", choices=[kind.value for kind in FormKind], required=True)
        parser.add_argument("--k", type=int, required=True)
        parser.add_argument("--n", type=int, required=True)
        parser.add_argument("--d1", type=int, default=1)
        parser.add_argument("--d2", type=int, default=0)
        parser.add_argument("--ell", type=int, default=1)
        parser.add_argument("--m", type=int, default=1)
        parser.add_argument("--json", action="store_true")

    def handle(self, *args, **options):
        kind = FormKind(options["kind"])
        alg = None if kind.is_rational else isolate_alpha(options["k"])
        spec = build_gamma(
            kind,
            options["k"],
            options["d1"],
            options["d2"],
            options["ell"],
            options["m"],
            options["n"],
            alg,
        )
        bound = matveev_lower_bound(spec)
        self.emit(
            spec.as_dict() | {"lower_bound": bound},
            options["json"],
            f"log|{kind}| > {bound:.6e}",
        )
