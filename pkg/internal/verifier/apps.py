from django.apps import AppConfig


class VerifierConfig(AppConfig):
    name = "internal.verifier"
    verbose_name = "k-Lucas palindrome verifier"
