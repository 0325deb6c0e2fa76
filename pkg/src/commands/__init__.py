"""Subcommands. Every module here is discovered at startup and registers
itself through a module-level setup(cli) hook."""
import argparse
import sys
from fractions import Fraction
from typing import List

from src.utils.errors import ParameterError
from src.utils.polynomial import parse_rational
from src.utils.report_builder import to_json


class Command:
    name = ""
    help = ""

    def configure(self, parser: argparse.ArgumentParser) -> None:
        pass

    def run(self, args: argparse.Namespace) -> int:
        raise NotImplementedError

    @staticmethod
    def output(args: argparse.Namespace, document: dict, text: str) -> None:
        sys.stdout.write(to_json(document) if getattr(args, "json", False) else text)


def rational_list(text: str) -> List[Fraction]:
    values = [parse_rational(part) for part in text.split(",") if part.strip()]
    if not values:
        raise ParameterError(f"Empty list of rationals: {text!r}")
    return values
