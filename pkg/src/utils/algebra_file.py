"""Plain-text algebra files.

    # comment to end of line
    dim 6
    name Q_6
    note basis: x_1..x_n as printed
    param n 6
    bracket 1 2 3 1
    bracket 2 5 6 -1

`dim` must be the first significant line. Bracket lines give C_ij^s with
i < j and an integer or a/b coefficient. Perturbation files for `deform`
may add one `degree k` line.
"""
import logging
import re
from pathlib import Path
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple, Union

from src.utils.errors import LieIndexError, ParseError
from src.utils.lie_algebra import StructureConstants
from src.utils.polynomial import format_rational, parse_rational

logger = logging.getLogger(__name__)

KEYWORDS = ("dim", "bracket", "name", "note", "param", "degree")

_TOKEN = re.compile(r'\S+')
_INTEGER = re.compile(r'^[+-]?\d+$')


class Token(NamedTuple):
    text: str
    line: int
    column: int


class AlgebraFile(NamedTuple):
    algebra: StructureConstants
    degree: Optional[int]


def _tokenize(text: str) -> Iterator[Tuple[int, str, List[Token]]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        tokens = [Token(m.group(), number, m.start() + 1) for m in _TOKEN.finditer(body)]
        if tokens:
            yield number, body, tokens


def _integer(token: Token, what: str) -> int:
    if not _INTEGER.match(token.text):
        raise ParseError(f"{what} must be an integer, got {token.text!r}", token.line, token.column)
    return int(token.text)


def _rest(body: str, token: Token) -> str:
    return body[token.column - 1 + len(token.text):].strip()


def read(text: str, allow_degree: bool = False) -> AlgebraFile:
    dim: Optional[int] = None
    degree: Optional[int] = None
    name: Optional[str] = None
    notes: List[str] = []
    params: Dict[str, str] = {}
    entries: Dict[Tuple[int, int, int], object] = {}

    for number, body, tokens in _tokenize(text):
        head = tokens[0]
        keyword = head.text
        if keyword not in KEYWORDS:
            raise ParseError(f"Unknown keyword {keyword!r}", number, head.column)
        if dim is None and keyword != "dim":
            raise ParseError("First significant line must be 'dim <n>'", number, head.column)

        if keyword == "dim":
            if dim is not None:
                raise ParseError("Repeated 'dim' line", number, head.column)
            if len(tokens) != 2:
                raise ParseError("Expected 'dim <n>'", number, head.column)
            dim = _integer(tokens[1], "Dimension")
            if dim < 1:
                raise ParseError(f"Dimension must be at least 1, got {dim}", number, tokens[1].column)
        elif keyword == "bracket":
            if len(tokens) != 5:
                raise ParseError("Expected 'bracket <i> <j> <s> <coeff>'", number, head.column)
            i, j, s = (_integer(t, "Index") for t in tokens[1:4])
            for value, token in zip((i, j, s), tokens[1:4]):
                if not 1 <= value <= dim:
                    raise ParseError(f"Index {value} outside 1..{dim}", number, token.column)
            if i >= j:
                raise ParseError(f"Bracket indices need i < j, got {i} >= {j}", number, tokens[2].column)
            try:
                coeff = parse_rational(tokens[4].text)
            except LieIndexError:
                raise ParseError(f"Coefficient must be an integer or a/b, got {tokens[4].text!r}",
                                 number, tokens[4].column)
            if (i, j, s) in entries:
                raise ParseError(f"Duplicate bracket term ({i}, {j}, {s})", number, head.column)
            entries[(i, j, s)] = coeff
        elif keyword == "name":
            name = _rest(body, head)
            if not name:
                raise ParseError("Empty name", number, head.column)
        elif keyword == "note":
            notes.append(_rest(body, head))
        elif keyword == "param":
            if len(tokens) < 3:
                raise ParseError("Expected 'param <key> <value>'", number, head.column)
            params[tokens[1].text] = _rest(body, tokens[1])
        elif keyword == "degree":
            if not allow_degree:
                raise ParseError("'degree' is only allowed in perturbation files", number, head.column)
            if degree is not None or len(tokens) != 2:
                raise ParseError("Expected a single 'degree <k>' line", number, head.column)
            degree = _integer(tokens[1], "Degree")
            if degree < 1:
                raise ParseError(f"Degree must be at least 1, got {degree}", number, tokens[1].column)

    if dim is None:
        raise ParseError("Missing 'dim <n>' line", 1, 1)
    metadata = {}
    if notes:
        metadata["notes"] = notes
    if params:
        metadata["params"] = params
    alg = StructureConstants(dim, entries, name=name, metadata=metadata)
    logger.debug(f"Parsed {alg.label()}: dim {dim}, {len(alg.entries)} bracket terms")
    return AlgebraFile(alg, degree)


def parse(text: str) -> StructureConstants:
    return read(text).algebra


def parse_perturbation(text: str) -> Tuple[int, StructureConstants]:
    """Bracket terms multiplied by t^degree in a deformation; degree defaults to 1"""
    parsed = read(text, allow_degree=True)
    return parsed.degree or 1, parsed.algebra


def load(path: Union[str, Path]) -> StructureConstants:
    return parse(Path(path).read_text(encoding="utf-8"))


def _note_lines(alg: StructureConstants) -> List[str]:
    meta = alg.metadata
    lines = []
    if meta.get("basis_note"):
        lines.append(f"basis: {meta['basis_note']}")
    if meta.get("status"):
        lines.append(f"status: {meta['status']}")
    lines.extend(meta.get("notes", ()))
    return lines


def emit(alg: StructureConstants, degree: Optional[int] = None) -> str:
    """Canonical text: dim, metadata, then bracket lines in (i, j, s) order"""
    lines = [f"dim {alg.dim}"]
    if degree is not None:
        lines.append(f"degree {degree}")
    if alg.name:
        lines.append(f"name {alg.name}")
    lines.extend(f"note {note}" for note in _note_lines(alg))
    lines.extend(f"param {key} {value}" for key, value in alg.metadata.get("params", {}).items())
    lines.extend(f"bracket {i} {j} {s} {format_rational(c)}" for (i, j, s), c in alg.entries.items())
    return "\n".join(lines) + "\n"
