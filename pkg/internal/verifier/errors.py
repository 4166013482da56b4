class VerifierError(Exception):
    """Base class for every failure raised by the verifier library."""


class DomainError(VerifierError, ValueError):
    """An argument lies outside the range an operation is defined on."""


class PrecisionError(VerifierError, ArithmeticError):
    """A certified inequality could not be decided at the working precision.

    Callers that can refine the precision retry through
    ``algebraic.with_precision_retry``; everyone else lets it propagate.
    """

    def __init__(self, message: str, bits: int | None = None) -> None:
        super().__init__(message)
        self.bits = bits
