#!/usr/bin/env python
"""Command-line entry point: verifier subcommands (seq, alpha, pal, matveev,
reduce, verify_all) plus the usual Django administration commands."""
import os
import sys


def main():
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "lucas_palindromes.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Is the Poetry environment active "
            "(poetry install && poetry shell)?"
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == "__main__":
    main()
