from src.commands import Command
from src.config.settings import CHARACTERISTIC_SAMPLES, FAMILY_SAMPLES
from src.utils.algebra_file import load
from src.utils.index_engine import METHODS
from src.utils.regular_vectors import Functional, FunctionalFamily
from src.utils.report_builder import build_report, render_text


class ReportCommand(Command):
    name = "report"
    help = "full structural report: validation, series, characteristic sequence, index, regularity"

    def configure(self, parser):
        parser.add_argument("file", help="algebra file")
        parser.add_argument("--method", choices=METHODS, default="symbolic")
        parser.add_argument("--samples", type=int, default=CHARACTERISTIC_SAMPLES,
                            help="random vectors for the characteristic sequence")
        parser.add_argument("--find", action="store_true", help="include a regular functional")
        parser.add_argument("--check", metavar="P1,...,PN", help="include the stabiliser of this functional")
        parser.add_argument("--family", metavar="SPEC", help="include a family verification")
        parser.add_argument("--family-samples", type=int, default=FAMILY_SAMPLES)

    def run(self, args):
        alg = load(args.file)
        functional = Functional.parse(args.check) if args.check else None
        family = FunctionalFamily.from_text(args.family, alg.dim) if args.family else None
        report = build_report(alg, method=args.method, seed=args.seed, samples=args.samples,
                              functional=functional, find=args.find, family=family,
                              family_samples=args.family_samples)
        self.output(args, report, render_text(report))
        return 0


def setup(cli):
    cli.add_command(ReportCommand())
