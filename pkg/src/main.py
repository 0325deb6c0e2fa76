import argparse
import importlib
import logging
import os
import sys

from dotenv import load_dotenv

from src.config.settings import DEFAULT_SEED, LOG_TO_FILE
from src.utils.errors import LieIndexError, ParameterError
from src.utils.logging import setup_logging

load_dotenv()
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


class LieIndexCli:

    def __init__(self) -> None:
        self.parser = argparse.ArgumentParser(
            prog="lieindex",
            description="Exact index, regular functionals and algebra catalog for Lie algebras given by structure constants",
        )
        self.parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
        self.parser.add_argument("--log-file", action="store_true", default=LOG_TO_FILE,
                                 help="also log to logs/YYYY-MM-DD/")
        self.parser.add_argument("--json", action="store_true", help="machine-readable output")
        self.parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for every randomized step")

        # the same flags after the subcommand; SUPPRESS keeps the top-level values when absent
        self.common = argparse.ArgumentParser(add_help=False)
        self.common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        self.common.add_argument("--seed", type=int, default=argparse.SUPPRESS)

        self.subparsers = self.parser.add_subparsers(dest="command", required=True)
        self.commands = {}
        self.load_commands()

    def load_commands(self) -> None:
        # Automatically discover all command modules in src/commands/
        commands_dir = os.path.join(os.path.dirname(__file__), 'commands')
        extensions = []

        for filename in sorted(os.listdir(commands_dir)):
            if filename.endswith('.py') and filename != '__init__.py':
                module_name = filename[:-3]
                extensions.append(f'src.commands.{module_name}')

        logger.debug(f"Discovered extensions: {extensions}")

        for extension in extensions:
            try:
                importlib.import_module(extension).setup(self)
                logger.debug(f"Loaded extension: {extension}")
            except Exception as e:
                logger.error(f"Failed to load extension {extension}: {e}")

    def add_command(self, command) -> None:
        parser = self.subparsers.add_parser(command.name, help=command.help, parents=[self.common])
        command.configure(parser)
        parser.set_defaults(handler=command)
        self.commands[command.name] = command

    def run(self, argv=None) -> int:
        args = self.parser.parse_args(argv)
        setup_logging(file_logging=args.log_file, verbose=args.verbose)
        logger.debug(f"Running {args.command} with seed {args.seed}")
        try:
            return args.handler.run(args)
        except ParameterError as e:
            logger.error(f"{args.command}: {e}")
            print(f"lieindex {args.command}: error: {e}", file=sys.stderr)
            return EXIT_USAGE
        except OSError as e:
            logger.error(f"{args.command}: cannot read input: {e}")
            print(f"lieindex {args.command}: error: {e}", file=sys.stderr)
            return EXIT_USAGE
        except LieIndexError as e:
            logger.error(f"{args.command} failed: {type(e).__name__}: {e}")
            print(f"lieindex {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
            return EXIT_DOMAIN


def main(argv=None):
    sys.exit(LieIndexCli().run(argv))


if __name__ == "__main__":
    main()
