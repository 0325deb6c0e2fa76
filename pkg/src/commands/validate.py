import logging

from src.commands import Command
from src.config.settings import REPORT_SCHEMA_VERSION
from src.utils.algebra_file import load
from src.utils.lie_algebra import validate

logger = logging.getLogger(__name__)


class ValidateCommand(Command):
    name = "validate"
    help = "check the Jacobi identity on every basis triple"

    def configure(self, parser):
        parser.add_argument("file", help="algebra file")

    def run(self, args):
        alg = load(args.file)
        report = validate(alg)
        document = {
            "schema": REPORT_SCHEMA_VERSION,
            "algebra": {"name": alg.name, "dim": alg.dim},
            "validation": {
                "valid": report.is_valid,
                "violations": [str(v) for v in report.violations],
            },
        }
        text = f"{alg.label()}: {report.summary()}\n"
        if not report.is_valid:
            text += "".join(f"  {v}\n" for v in report.violations)
            logger.info(f"{alg.label()} fails validation with {len(report.violations)} violation(s)")
        self.output(args, document, text)
        return 0 if report.is_valid else 1


def setup(cli):
    cli.add_command(ValidateCommand())
