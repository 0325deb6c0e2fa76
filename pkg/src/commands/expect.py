import logging

from src.commands import Command
from src.config.settings import FAMILY_SAMPLES, REPORT_SCHEMA_VERSION
from src.utils.expectations import MATCH, MISMATCH, run_expectations
from src.utils.index_engine import METHODS

logger = logging.getLogger(__name__)


class ExpectCommand(Command):
    name = "expect"
    help = "reproduce every tabulated index and regular family"

    def configure(self, parser):
        parser.add_argument("--method", choices=METHODS, default="symbolic")
        parser.add_argument("--samples", type=int, default=FAMILY_SAMPLES,
                            help="samples per family branch and per nonzero constraint")
        parser.add_argument("--no-families", action="store_true", help="check index values only")
        parser.add_argument("--all", action="store_true", help="list matches too, not just the exceptions")

    def run(self, args):
        run = run_expectations(method=args.method, samples=args.samples, seed=args.seed,
                               families=not args.no_families)
        document = {"schema": REPORT_SCHEMA_VERSION, "expectations": run.as_dict()}

        lines = [str(o) for o in run.outcomes if args.all or o.status != MATCH]
        counts = run.counts()
        lines.append(", ".join(f"{count} {status}" for status, count in counts.items()))
        lines.append("by source:")
        for source, tally in run.by_source().items():
            lines.append(f"  {source}: " + ", ".join(f"{count} {status}" for status, count in tally.items() if count))
        lines.append("PASS" if run.passed else "FAIL")
        self.output(args, document, "\n".join(lines) + "\n")
        if not run.passed:
            failing = [o.source for o in run.outcomes if o.status == MISMATCH]
            logger.error(f"{counts['mismatch']} expectation(s) mismatched in: {'; '.join(dict.fromkeys(failing))}")
        return 0 if run.passed else 1


def setup(cli):
    cli.add_command(ExpectCommand())
