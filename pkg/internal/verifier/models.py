from django.db import models


class VerificationRun(models.Model):
    preset = models.CharField(max_length=16)
    verdict = models.CharField(max_length=32)
    schema_version = models.PositiveIntegerField()
    report = models.JSONField()
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ("-created_at",)

    def __str__(self):
        return f"{self.preset} run: {self.verdict}"
