from typing import Any

from django.core.management.base import BaseCommand, CommandError
from rest_framework.renderers import JSONRenderer

from internal.verifier.errors import VerifierError


def parse_range(text: str) -> range:
    """``"A:B"`` as the inclusive range A..B."""
    try:
        low, high = (int(part) for part in text.split(":"))
    except ValueError:
        raise CommandError(f"expected a range A:B, got {text!r}")
    if low > high:
        raise CommandError(f"empty range {text!r}")
    return range(low, high + 1)


class VerifierCommand(BaseCommand):
    """Management command whose library errors surface as usage errors."""

    def execute(self, *args: Any, **options: Any) -> str | None:
        try:
            return super().execute(*args, **options)
        except VerifierError as exc:
            raise CommandError(str(exc))

    def emit(self, data: dict[str, Any] | list[Any], as_json: bool, text: str | None = None) -> None:
        if as_json or text is None:
            self.stdout.write(JSONRenderer().render(data, renderer_context={"indent": 2}).decode())
        else:
            self.stdout.write(text)
