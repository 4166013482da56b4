from internal.verifier import conf
from internal.verifier.algebraic import isolate_alpha, psi_sign_certificate
from internal.verifier.management.base import VerifierCommand
from internal.verifier.precision import PrecisionContext, enclosure_strings


class Command(VerifierCommand):
    help = "Certified enclosure of the dominant root alpha of Psi_k and of f_k(alpha)."

    def add_arguments(self, parser):
        parser.add_argument("--k", type=int, required=True)
        parser.add_argument("--digits", type=int, default=30)
        parser.add_argument("--bits", type=int)
        parser.add_argument("--json", action="store_true")

    def handle(self, *args, **options):
        k, digits = options["k"], options["digits"]
        bits = options["bits"] or int(conf.verifier_setting("PRECISION_BITS"))
        prec = PrecisionContext.for_k(k, bits)
        alg = isolate_alpha(k, prec)

        data = {
            "k": k,
            "bits": prec.bits,
            "alpha": enclosure_strings(alg.alpha, digits),
            "f_alpha": enclosure_strings(alg.f_alpha, digits),
            "log_alpha": enclosure_strings(alg.log_alpha, digits),
            "sign_certificate": psi_sign_certificate(k, prec),
        }
        lines = [f"k={k} at {prec.bits} bits"] + [
            f"{name:<10} [{data[name]['lower']}, {data[name]['upper']}]"
            for name in ("alpha", "f_alpha", "log_alpha")
        ]
        self.emit(data, options["json"], "\n".join(lines))
