import logging
from pathlib import Path

from src.commands import Command
from src.config.settings import REPORT_SCHEMA_VERSION
from src.utils.algebra_file import emit
from src.utils.catalog import construct, list_entries
from src.utils.errors import CatalogError

logger = logging.getLogger(__name__)


def _parse_assignments(pairs):
    params = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise CatalogError(f"Expected key=value, got {pair!r}")
        params[key] = value
    return params


class CatalogCommand(Command):
    name = "catalog"
    help = "list the algebra families or emit one as an algebra file"

    def configure(self, parser):
        actions = parser.add_subparsers(dest="action", required=True)
        actions.add_parser("list", help="names, parameters and transcription notes")
        emitter = actions.add_parser("emit", help="write a catalog algebra in the file format")
        emitter.add_argument("entry", help="catalog name, e.g. Q or 'L(n,r)'")
        emitter.add_argument("params", nargs="*", metavar="KEY=VALUE", help="e.g. n=8 r=3 or lams=1,0")
        emitter.add_argument("-o", "--output", help="write to this file instead of stdout")

    def run(self, args):
        if args.action == "list":
            return self._list(args)
        return self._emit(args)

    def _list(self, args):
        entries = list_entries()
        document = {
            "schema": REPORT_SCHEMA_VERSION,
            "entries": [
                {
                    "name": e.name,
                    "kind": e.kind,
                    "description": e.description,
                    "parameters": [{"name": p.name, "kind": p.kind, "description": p.description}
                                   for p in e.parameters],
                    "basis_note": e.basis_note,
                    "notes": list(e.notes),
                }
                for e in entries
            ],
        }
        lines = []
        for e in entries:
            lines.append(f"{e.name:<20} {e.kind:<15} params: {e.schema()}")
            lines.append(f"    {e.description}; {e.basis_note}")
            lines.extend(f"    note: {note}" for note in e.notes)
        self.output(args, document, "\n".join(lines) + "\n")
        return 0

    def _emit(self, args):
        alg = construct(args.entry, **_parse_assignments(args.params))
        text = emit(alg)
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
            logger.info(f"Wrote {alg.label()} to {args.output}")
        else:
            print(text, end="")
        return 0


def setup(cli):
    cli.add_command(CatalogCommand())
