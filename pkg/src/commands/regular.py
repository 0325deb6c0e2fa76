import logging

from src.commands import Command
from src.config.settings import FAMILY_SAMPLES, FIND_REGULAR_MAX_ATTEMPTS, MINOR_GUARD, REPORT_SCHEMA_VERSION
from src.utils.algebra_file import load
from src.utils.regular_vectors import (
    Functional,
    FunctionalFamily,
    find_regular,
    kernel_at,
    regular_set_minors,
    verify_family,
)

logger = logging.getLogger(__name__)


class RegularCommand(Command):
    name = "regular"
    help = "find, check or verify families of regular functionals"

    def configure(self, parser):
        parser.add_argument("file", help="algebra file")
        mode = parser.add_mutually_exclusive_group(required=True)
        mode.add_argument("--find", action="store_true", help="search for a regular functional")
        mode.add_argument("--check", metavar="P1,...,PN", help="coordinates of a functional in the dual basis")
        mode.add_argument("--family", metavar="SPEC",
                          help="family such as 'free=1,2;nonzero=3-7;zero=6;tied=4,5'")
        mode.add_argument("--minors", action="store_true",
                          help="list the nonzero minors cutting out the regular set")
        parser.add_argument("--samples", type=int, default=FAMILY_SAMPLES,
                            help="samples per branch and per nonzero constraint for --family")
        parser.add_argument("--max-attempts", type=int, default=FIND_REGULAR_MAX_ATTEMPTS)
        parser.add_argument("--guard", type=int, default=MINOR_GUARD)
        parser.add_argument("--workers", type=int, default=1, help="threads for --family sampling")

    def run(self, args):
        alg = load(args.file)
        document = {"schema": REPORT_SCHEMA_VERSION, "algebra": {"name": alg.name, "dim": alg.dim}}

        if args.minors:
            minors = regular_set_minors(alg, guard=args.guard)
            document["minors"] = [str(m) for m in minors]
            text = f"{alg.label()}: {len(minors)} nonzero minors (up to sign)\n"
            text += "".join(f"  {m}\n" for m in minors)
        elif args.family:
            family = FunctionalFamily.from_text(args.family, alg.dim)
            logger.info(f"Verifying [{family}] on {alg.label()} with {args.samples} samples, {args.workers} worker(s)")
            report = verify_family(alg, family, samples=args.samples, seed=args.seed, workers=args.workers)
            document["family"] = report.as_dict()
            text = (f"{alg.label()}: family [{family}] {report.verdict} "
                    f"(index {report.algebra_index}, {report.samples} samples, seed {report.seed})\n")
            for branch in report.branches:
                text += f"  {branch.describe(family)}: {branch.verdict}"
                if branch.counterexample is not None:
                    text += f", not regular at ({', '.join(branch.counterexample.as_list())})"
                if branch.necessity_witness is not None:
                    forced, f = branch.necessity_witness
                    text += f", regular with {list(forced)} forced to 0 at ({', '.join(f.as_list())})"
                text += "\n"
            if report.overlaps:
                text += f"  coordinates in several roles: {list(report.overlaps)}\n"
        else:
            if args.find:
                report = find_regular(alg, seed=args.seed, max_attempts=args.max_attempts)
            else:
                report = kernel_at(alg, Functional.parse(args.check))
            document["regular"] = report.as_dict()
            verdict = "regular" if report.is_regular else "not regular"
            text = f"{alg.label()}: f = {report.functional}, kernel dim {report.kernel_dim}, {verdict} (index {report.algebra_index})"
            if report.attempts is not None:
                text += f" after {report.attempts} attempts, seed {report.seed}"
            text += "\n"
        self.output(args, document, text)
        return 0


def setup(cli):
    cli.add_command(RegularCommand())
