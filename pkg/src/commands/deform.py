import logging
from pathlib import Path

from src.commands import Command, rational_list
from src.config.settings import DEFAULT_T_SAMPLES, REPORT_SCHEMA_VERSION
from src.utils.algebra_file import load, parse_perturbation
from src.utils.index_engine import METHODS, Deformation, deformation_index
from src.utils.polynomial import format_rational

logger = logging.getLogger(__name__)


class DeformCommand(Command):
    name = "deform"
    help = "index along a deformation [,]_t = [,]_0 + sum t^k [,]_k"

    def configure(self, parser):
        parser.add_argument("base", help="algebra file for t = 0")
        parser.add_argument("perturbations", nargs="+", help="perturbation files (optional 'degree k' line)")
        parser.add_argument("--t", dest="t_samples", default=",".join(DEFAULT_T_SAMPLES),
                            help="comma-separated nonzero samples of t")
        parser.add_argument("--method", choices=METHODS, default="symbolic")

    def run(self, args):
        base = load(args.base)
        perturbations = []
        for path in args.perturbations:
            degree, pert = parse_perturbation(Path(path).read_text(encoding="utf-8"))
            perturbations.append((degree, pert))
        deformation = Deformation(base, tuple(perturbations))
        report = deformation_index(deformation, rational_list(args.t_samples), method=args.method)
        if not report.monotone:
            logger.warning(f"{base.label()}: generic index {report.generic_index} exceeds index {report.base_index} at t=0")

        document = {"schema": REPORT_SCHEMA_VERSION, "algebra": {"name": base.name, "dim": base.dim},
                    "deformation": report.as_dict()}
        lines = [f"{base.label()}: index {report.base_index} at t=0"]
        lines.extend(f"  t={format_rational(t)}: index {chi}" for t, chi in report.sample_indices)
        lines.append(f"generic index {report.generic_index} "
                     f"({'no larger than' if report.monotone else 'LARGER than'} at t=0)")
        self.output(args, document, "\n".join(lines) + "\n")
        return 0 if report.monotone else 1


def setup(cli):
    cli.add_command(DeformCommand())
