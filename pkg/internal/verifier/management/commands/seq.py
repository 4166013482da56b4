from django.core.management.base import CommandError

from internal.verifier.management.base import VerifierCommand
from internal.verifier.precision import decimal_string
from internal.verifier.sequence_core import KLucasContext


class Command(VerifierCommand):
    help = "Print L_n^(k), or the terms L_n..L_(n-max), exactly."

    def add_arguments(self, parser):
        parser.add_argument("--k", type=int, required=True)
        parser.add_argument("--n", type=int, required=True)
        parser.add_argument("--n-max", type=int)
        parser.add_argument("--json", action="store_true")

    def handle(self, *args, **options):
        k, n = options["k"], options["n"]
        n_max = options["n_max"] if options["n_max"] is not None else n
        if n_max < n:
            raise CommandError(f"--n-max {n_max} is below --n {n}")
        ctx = KLucasContext(k)
        terms = [
            {"k": k, "n": index, "value": decimal_string(ctx.term(index))}
            for index in range(n, n_max + 1)
        ]
        self.emit(
            terms if options["n_max"] is not None else terms[0],
            options["json"],
            "\n".join(f"L_{term['n']}^({k}) = {term['value']}" for term in terms),
        )
