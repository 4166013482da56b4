import tomllib

from dataclasses import replace

from django.core.management.base import CommandError

from internal.verifier import conf, pipeline
from internal.verifier.management.base import VerifierCommand
from internal.verifier.models import VerificationRun
from internal.verifier.serializers import RunConfigSerializer

SUCCESS_VERDICTS = (pipeline.VERDICT_FULL, pipeline.VERDICT_DESK)


class Command(VerifierCommand):
    help = "Run every stage of the proof and write the JSON report."

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument("--config", help="flat TOML file of run settings")
        source.add_argument("--preset", choices=sorted(pipeline.PRESETS))
        parser.add_argument("--out", help="report path, overrides the config")
        parser.add_argument("--store", action="store_true", help="save the run in the database")

    def load_config(self, path: str) -> pipeline.RunConfig:
        try:
            with open(path, "rb") as handle:
                data = tomllib.load(handle)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise CommandError(f"cannot read config {path}: {exc}")

        serializer = RunConfigSerializer(data=data)
        if not serializer.is_valid():
            raise CommandError(f"invalid config {path}: {dict(serializer.errors)}")
        return serializer.to_run_config(
            precision_bits=int(conf.verifier_setting("PRECISION_BITS")),
            parallelism=int(conf.verifier_setting("PARALLELISM")),
        )

    def handle(self, *args, **options):
        if options["config"]:
            cfg = self.load_config(options["config"])
            label = "config"
        else:
            cfg = pipeline.preset(options["preset"])
            label = options["preset"]

        output_path = options["out"] or cfg.output_path
        if output_path is None:
            output_path = str(conf.report_dir() / f"{label}-{cfg.scale}.json")
        cfg = replace(cfg, output_path=output_path)

        report = pipeline.run_all(cfg)
        if options["store"]:
            VerificationRun.objects.create(
                preset=label,
                verdict=report["verdict"],
                schema_version=report["schema_version"],
                report=report,
            )
        self.stdout.write(f"verdict: {report['verdict']} (report: {output_path})")
        if report["verdict"] not in SUCCESS_VERDICTS:
            raise CommandError(f"verdict: {report['verdict']}", returncode=2)
