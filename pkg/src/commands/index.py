import logging

from src.commands import Command
from src.config.settings import RANDOMIZED_RANK_BOUND, RANDOMIZED_RANK_TRIALS, REPORT_SCHEMA_VERSION
from src.utils.algebra_file import load
from src.utils.index_engine import METHODS, index

logger = logging.getLogger(__name__)


class IndexCommand(Command):
    name = "index"
    help = "compute the index n - rank M(x) exactly"

    def configure(self, parser):
        parser.add_argument("file", help="algebra file")
        parser.add_argument("--method", choices=METHODS, default="symbolic")
        parser.add_argument("--trials", type=int, default=RANDOMIZED_RANK_TRIALS,
                            help="evaluation points for the randomized rank")
        parser.add_argument("--bound", type=int, default=RANDOMIZED_RANK_BOUND,
                            help="evaluation coordinates are drawn from [-bound, bound]")
        parser.add_argument("--unchecked", action="store_true",
                            help="skip the Jacobi check and report the rank of the skew form anyway")

    def run(self, args):
        alg = load(args.file)
        report = index(alg, method=args.method, trials=args.trials, bound=args.bound,
                       seed=args.seed, require_valid=not args.unchecked)
        text = f"{alg.label()}: rank {report.rank}, index {report.index} ({report.method}"
        if report.seed is not None:
            text += f", {report.trials} trials, seed {report.seed}"
        text += ")"
        if not report.validated:
            logger.warning(f"{alg.label()}: Jacobi check skipped, index is the rank of the skew form only")
            text += " [unchecked]"
        document = {
            "schema": REPORT_SCHEMA_VERSION,
            "algebra": {"name": alg.name, "dim": alg.dim},
            "index": report.as_dict(),
        }
        self.output(args, document, text + "\n")
        return 0


def setup(cli):
    cli.add_command(IndexCommand())
