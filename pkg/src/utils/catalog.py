"""Constructors for the named algebra families.

Each family is entered exactly as printed in its source, then checked
against the Jacobi identity; entries that fail are still constructible but
carry status "unverified-transcription". Families printed on a basis
x_0..x_{n-1} are shifted to x_1..x_n and say so in their metadata.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

from src.utils.errors import CatalogError, LieIndexError
from src.utils.lie_algebra import StructureConstants, validate
from src.utils.polynomial import format_rational, parse_rational

logger = logging.getLogger(__name__)

VERIFIED = "verified"
UNVERIFIED = "unverified-transcription"

SHIFTED_BASIS_NOTE = "printed basis x_0..x_{n-1}; stored as x_1..x_n (x_k -> x_{k+1})"
PLAIN_BASIS_NOTE = "basis x_1..x_n as printed"


@dataclass(frozen=True)
class ParameterSpec:
    name: str
    kind: str  # int | rational | rationals
    description: str

    def parse(self, text: str) -> Any:
        try:
            if self.kind == "int":
                return int(text)
            if self.kind == "rational":
                return parse_rational(text)
            return tuple(parse_rational(part) for part in text.split(",") if part.strip())
        except (ValueError, LieIndexError) as e:
            raise CatalogError(f"Parameter {self.name}: cannot read {text!r} ({e})")

    def coerce(self, value: Any) -> Any:
        if isinstance(value, str):
            return self.parse(value)
        if self.kind == "int":
            if isinstance(value, bool) or Fraction(value).denominator != 1:
                raise CatalogError(f"Parameter {self.name} must be an integer, got {value!r}")
            return int(value)
        if self.kind == "rational":
            return Fraction(value)
        return tuple(Fraction(v) for v in value)

    def render(self, value: Any) -> str:
        if self.kind == "rationals":
            return ",".join(format_rational(v) for v in value)
        return format_rational(value)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str
    description: str
    parameters: Tuple[ParameterSpec, ...]
    builder: Callable[..., StructureConstants]
    check: Callable[..., Optional[str]]
    basis_note: str = PLAIN_BASIS_NOTE
    notes: Tuple[str, ...] = ()
    defaults: Dict[str, Callable[[Dict[str, Any]], Any]] = field(default_factory=dict)

    def schema(self) -> str:
        return ", ".join(f"{p.name}:{p.kind}" for p in self.parameters) or "-"

    def resolve(self, params: Dict[str, Any]) -> Dict[str, Any]:
        known = {p.name: p for p in self.parameters}
        unknown = sorted(set(params) - set(known))
        if unknown:
            raise CatalogError(f"{self.name} takes no parameter(s) {', '.join(unknown)}; schema is {self.schema()}")
        resolved: Dict[str, Any] = {}
        for spec in self.parameters:
            if spec.name in params:
                resolved[spec.name] = spec.coerce(params[spec.name])
            elif spec.name in self.defaults:
                continue
            else:
                raise CatalogError(f"{self.name} needs parameter {spec.name} ({spec.description})")
        for name, default in self.defaults.items():
            if name not in resolved:
                resolved[name] = known[name].coerce(default(resolved))
        problem = self.check(**resolved)
        if problem:
            raise CatalogError(f"{self.name} with {self.render_params(resolved)}: {problem}")
        return resolved

    def render_params(self, params: Dict[str, Any]) -> str:
        specs = {p.name: p for p in self.parameters}
        return ", ".join(f"{k}={specs[k].render(v)}" for k, v in params.items())


class _BracketTable:
    """Accumulates printed brackets, shifting indices and rejecting repeats"""

    def __init__(self, dim: int, shift: int = 0):
        self.dim = dim
        self.shift = shift
        self.entries: Dict[Tuple[int, int, int], Fraction] = {}

    def add(self, i: int, j: int, s: int, coeff=1) -> None:
        coeff = Fraction(coeff)
        if not coeff:
            return
        i, j, s = i + self.shift, j + self.shift, s + self.shift
        if i == j:
            raise CatalogError(f"Bracket [x{i}, x{i}] in a transcription")
        if i > j:
            i, j, coeff = j, i, -coeff
        key = (i, j, s)
        if key in self.entries:
            raise CatalogError(f"Bracket term ({i}, {j}, {s}) transcribed twice")
        self.entries[key] = coeff

    def chain(self, first: int, ks, offset: int = 1) -> None:
        """[x_first, x_k] = x_(k+offset) for k in ks"""
        for k in ks:
            self.add(first, k, k + offset)

    def build(self) -> StructureConstants:
        return StructureConstants(self.dim, self.entries)


def _odd(x: int) -> bool:
    return x % 2 == 1


def _need(condition: bool, message: str) -> Optional[str]:
    return None if condition else message


# -- abelian and small examples

def _abelian(n):
    return StructureConstants(n, {})


def _r2():
    table = _BracketTable(2)
    table.add(1, 2, 2)
    return table.build()


# -- filiform

def _model_filiform(n):
    table = _BracketTable(n)
    table.chain(1, range(2, n))
    return table


def _L(n):
    return _model_filiform(n).build()


def _Q(n):
    table = _model_filiform(n)
    for i in range(2, n // 2 + 1):
        table.add(i, n - i + 1, n, (-1) ** (i + 1))
    return table.build()


def _F(n, extra):
    def builder():
        table = _model_filiform(n)
        for i, j, s, c in extra:
            table.add(i, j, s, c)
        return table.build()
    return builder


def _F7_1(alpha):
    table = _BracketTable(7)
    table.chain(1, range(2, 6))
    table.add(1, 6, 7, alpha)
    table.add(2, 3, 5, 1 + alpha)
    table.add(2, 4, 6, 1 + alpha)
    table.add(3, 4, 7)
    return table.build()


_FILIFORM_EXTRAS = {
    "F3_1": (3, ()),
    "F4_1": (4, ()),
    "F5_1": (5, ()),
    "F5_2": (5, ((2, 3, 5, 1),)),
    "F6_1": (6, ()),
    "F6_2": (6, ((2, 3, 6, 1),)),
    "F6_3": (6, ((2, 5, 6, 1), (3, 4, 6, -1))),
    "F6_4": (6, ((2, 3, 5, 1), (2, 4, 6, 1))),
    "F6_5": (6, ((2, 3, 5, 1), (2, 3, 6, -1), (2, 4, 6, 1), (2, 5, 6, 1), (3, 4, 6, -1))),
    "F7_2": (7, ((2, 3, 5, 1), (2, 4, 6, 1), (2, 5, 7, 1))),
    "F7_3": (7, ((2, 3, 5, 1), (2, 3, 6, 1), (2, 4, 6, 1), (2, 5, 7, 1))),
    "F7_4": (7, ((2, 3, 6, 1), (2, 4, 7, 1), (2, 5, 7, 1), (3, 4, 7, -1))),
    "F7_5": (7, ((2, 3, 6, 1), (2, 3, 7, 1), (2, 4, 7, 1))),
    "F7_6": (7, ((2, 3, 6, 1), (2, 4, 7, 1))),
    "F7_7": (7, ((2, 3, 7, 1),)),
    "F7_8": (7, ()),
}


# -- graded quasi-filiform, printed on x_0..x_{n-1}

def _quasi_chain(n):
    table = _BracketTable(n, shift=1)
    table.chain(0, range(1, n - 2))
    return table


def _Lsplit(n):
    return _quasi_chain(n).build()


def _Qsplit(n):
    table = _quasi_chain(n)
    for i in range(1, (n - 3) // 2 + 1):
        table.add(i, n - 2 - i, n - 2, (-1) ** (i - 1))
    return table.build()


def _principal(table, n, r):
    for i in range(1, (r - 1) // 2 + 1):
        table.add(i, r - i, n - 1, (-1) ** (i - 1))


def _L_nr(n, r):
    table = _quasi_chain(n)
    _principal(table, n, r)
    return table.build()


def _Q_nr(n, r):
    table = _quasi_chain(n)
    _principal(table, n, r)
    for i in range(1, (n - 3) // 2 + 1):
        table.add(i, n - 2 - i, n - 2, (-1) ** (i - 1))
    return table.build()


def _T_even(n):
    table = _quasi_chain(n)
    table.add(n - 1, 1, n - 2, Fraction(n - 4, 2))
    for i in range(1, (n - 4) // 2 + 1):
        sign = (-1) ** (i - 1)
        table.add(i, n - 3 - i, n - 3, sign)
        table.add(i, n - 3 - i, n - 1, sign)
    for i in range(1, (n - 4) // 2 + 1):
        table.add(i, n - 2 - i, n - 2, (-1) ** (i - 1) * Fraction(n - 2 - 2 * i, 2))
    return table.build()


def _T_odd(n):
    table = _quasi_chain(n)
    # printed with a range on a single left-hand side; read as [x_{n-1}, x_i] for i = 1, 2
    for i in (1, 2):
        table.add(n - 1, i, n - 4 + i, Fraction(n - 5, 2))
    for i in range(1, (n - 5) // 2 + 1):
        sign = (-1) ** (i - 1)
        table.add(i, n - 4 - i, n - 4, sign)
        table.add(i, n - 4 - i, n - 1, sign)
    for i in range(1, (n - 5) // 2 + 1):
        table.add(i, n - 3 - i, n - 2, (-1) ** (i - 1) * Fraction(n - 3 - 2 * i, 2))
    for i in range(1, (n - 3) // 2 + 1):
        table.add(i, n - 2 - i, n - 2, (-1) ** (i - 1) * (i - 1) * Fraction(n - 3 - i, 2))
    return table.build()


def _eps_7_3():
    table = _BracketTable(7, shift=1)
    table.chain(0, range(1, 5))
    for i in (1, 2):
        table.add(6, i, 3 + i)
    table.add(1, 2, 3)
    table.add(1, 2, 6)
    table.chain(1, range(3, 5))
    return table.build()


def _eps_9_5_head(table):
    table.chain(0, range(1, 7))


def _eps1_9_5():
    table = _BracketTable(9, shift=1)
    _eps_9_5_head(table)
    for i in (1, 2):
        table.add(8, i, 5 + i, 2)
    table.add(1, 4, 5)
    table.add(1, 4, 8)
    table.add(1, 5, 6, 2)
    table.add(1, 6, 7, 3)
    table.add(2, 3, 5, -1)
    table.add(2, 3, 8, -1)
    table.add(2, 4, 6, -1)
    table.add(2, 5, 7, -1)
    return table.build()


def _eps2_9_5():
    table = _BracketTable(9, shift=1)
    _eps_9_5_head(table)
    for i in (1, 2):
        table.add(8, i, 5 + i, 2)
    table.add(1, 4, 5)
    table.add(1, 4, 8)
    table.add(1, 5, 6, 2)
    table.add(1, 6, 7)
    table.add(2, 3, 5, -1)
    table.add(2, 3, 8, -1)
    table.add(2, 4, 6, -1)
    table.add(2, 5, 7)
    table.add(3, 4, 7, -2)
    return table.build()


def _eps3_9_5():
    table = _BracketTable(9, shift=1)
    _eps_9_5_head(table)
    # printed with a dangling range; read as the single bracket [x_0, x_8] = x_6
    table.add(0, 8, 6)
    table.add(1, 4, 8)
    table.add(3, 4, 7, -3)
    table.add(2, 4, 6, -1)
    table.add(1, 5, 6, 2)
    table.add(2, 3, 8, -1)
    table.add(2, 5, 7, 2)
    return table.build()


# -- solvable with nilradical L_n (basis x_1..x_n, f = x_{n+1}, f_2 = x_{n+2})

def _tau_L(n, extra_dims):
    table = _BracketTable(n + extra_dims)
    table.chain(1, range(2, n))
    return table


def _tau_n1_1(n, beta):
    table = _tau_L(n, 1)
    f = n + 1
    for i in range(1, n):
        table.add(f, i, i, n - 2 + beta)
    table.add(f, n, n)
    return table.build()


def _tau_n1_2(n):
    table = _tau_L(n, 1)
    f = n + 1
    for i in range(1, n):
        table.add(f, i, i)
    return table.build()


def _tau_n1_3(n):
    table = _tau_L(n, 1)
    f = n + 1
    for i in range(1, n):
        table.add(f, i, i, n - i)
    table.add(f, n, n)
    table.add(f, n, n - 1)
    return table.build()


def _tau_n2_1(n):
    table = _tau_L(n, 2)
    f1, f2 = n + 1, n + 2
    for i in range(1, n):
        table.add(f1, i, i, n - 1 - i)
    for i in range(1, n):
        table.add(f2, i, i)
    # printed with a spurious range; a single bracket
    table.add(f1, n, n)
    return table.build()


# -- solvable with a nilradical of Q type (basis x_1..x_{2n}, y = x_{2n+1})

def _tau_Q(n):
    table = _BracketTable(2 * n + 1)
    table.chain(1, range(2, 2 * n - 1))
    for k in range(2, n + 1):
        table.add(k, 2 * n + 1 - k, 2 * n, (-1) ** k)
    return table


def _tau_lam2(n, lam2):
    table = _tau_Q(n)
    y = 2 * n + 1
    table.add(y, 1, 1)
    for k in range(2, 2 * n - 1):
        table.add(y, k, k, k - 2 + lam2)
    table.add(y, 2 * n, 2 * n, 2 * n - 3 + 2 * lam2)
    return table.build()


def _tau_eps(n, eps):
    table = _tau_Q(n)
    y = 2 * n + 1
    table.add(y, 1, 1)
    table.add(y, 1, 2 * n, eps)
    for k in range(2, 2 * n):
        table.add(y, k, k, k - n)
    table.add(y, 2 * n, 2 * n)
    return table.build()


def _tau_lams(n, lams):
    # lams holds lambda^5, lambda^7, ..., lambda^(2n-1)
    table = _tau_Q(n)
    y = 2 * n + 1
    for t in range(0, 2 * n - 5):
        table.add(y, 2 + t, 2 + t)
        for k in range(2, (2 * n - 3 - t) // 2 + 1):
            table.add(y, 2 + t, 2 * k + 1 + t, lams[k - 2])
    for k in (1, 2, 3):
        table.add(y, 2 * n - k, 2 * n - k)
    table.add(y, 2 * n, 2 * n, 2)
    return table.build()


# -- registry

_N = ParameterSpec("n", "int", "dimension")
_R = ParameterSpec("r", "int", "odd principal parameter")


def _nil_n(description):
    return ParameterSpec("n", "int", description)


def _check_L_nr(n, r):
    if n < 5:
        return "needs n >= 5"
    if not _odd(r) or r < 3 or r > 2 * ((n - 1) // 2) - 1:
        return f"needs odd r with 3 <= r <= {2 * ((n - 1) // 2) - 1}"
    return None


def _check_Q_nr(n, r):
    if n < 7 or not _odd(n):
        return "needs odd n >= 7"
    if not _odd(r) or r < 3 or r > n - 4:
        return f"needs odd r with 3 <= r <= {n - 4}"
    return None


def _entries() -> List[CatalogEntry]:
    entries = [
        CatalogEntry("abelian", "abelian", "abelian algebra", (_N,), _abelian,
                     lambda n: _need(n >= 1, "needs n >= 1")),
        CatalogEntry("r2", "solvable", "2-dimensional non-abelian algebra [x1,x2] = x2", (), _r2,
                     lambda: None),
        CatalogEntry("L", "filiform", "model filiform algebra L_n", (_N,), _L,
                     lambda n: _need(n >= 3, "needs n >= 3")),
        CatalogEntry("Q", "filiform", "graded filiform algebra Q_n", (_N,), _Q,
                     lambda n: _need(n >= 4 and n % 2 == 0, "needs even n >= 4")),
    ]
    for name, (dim, extra) in _FILIFORM_EXTRAS.items():
        entries.append(CatalogEntry(
            name, "filiform", f"filiform algebra of dimension {dim}", (), _F(dim, extra), lambda: None))
    entries.append(CatalogEntry(
        "F7_1", "filiform", "filiform algebra of dimension 7 with parameter alpha",
        (ParameterSpec("alpha", "rational", "family parameter"),), _F7_1, lambda alpha: None))
    entries.extend([
        CatalogEntry("Lsplit(n)", "quasi-filiform", "split family L_{n-1} + C", (_N,), _Lsplit,
                     lambda n: _need(n >= 4, "needs n >= 4"), SHIFTED_BASIS_NOTE),
        CatalogEntry("Qsplit(n)", "quasi-filiform", "split family Q_{n-1} + C", (_N,), _Qsplit,
                     lambda n: _need(n >= 7 and _odd(n), "needs odd n >= 7"), SHIFTED_BASIS_NOTE),
        CatalogEntry("L(n,r)", "quasi-filiform", "principal family L_(n,r)", (_N, _R), _L_nr,
                     _check_L_nr, SHIFTED_BASIS_NOTE),
        CatalogEntry("Q(n,r)", "quasi-filiform", "principal family Q_(n,r)", (_N, _R), _Q_nr,
                     _check_Q_nr, SHIFTED_BASIS_NOTE),
        CatalogEntry("T(n,n-3)", "quasi-filiform", "terminal family T_(n,n-3)", (_N,), _T_even,
                     lambda n: _need(n >= 6 and n % 2 == 0, "needs even n >= 6"), SHIFTED_BASIS_NOTE),
        CatalogEntry("T(n,n-4)", "quasi-filiform", "terminal family T_(n,n-4)", (_N,), _T_odd,
                     lambda n: _need(n >= 7 and _odd(n), "needs odd n >= 7"), SHIFTED_BASIS_NOTE,
                     ("the bracket [x_{n-1}, x_1] is printed with range 1 <= i <= 2; "
                      "read as [x_{n-1}, x_i] = (n-5)/2 x_{n-4+i}, i = 1, 2",)),
        CatalogEntry("eps(7,3)", "quasi-filiform", "exceptional 7-dimensional algebra", (), _eps_7_3,
                     lambda: None, SHIFTED_BASIS_NOTE),
        CatalogEntry("eps1(9,5)", "quasi-filiform", "first exceptional 9-dimensional algebra", (),
                     _eps1_9_5, lambda: None, SHIFTED_BASIS_NOTE),
        CatalogEntry("eps2(9,5)", "quasi-filiform", "second exceptional 9-dimensional algebra", (),
                     _eps2_9_5, lambda: None, SHIFTED_BASIS_NOTE),
        CatalogEntry("eps3(9,5)", "quasi-filiform", "third exceptional 9-dimensional algebra", (),
                     _eps3_9_5, lambda: None, SHIFTED_BASIS_NOTE,
                     ("[x_0, x_8] = x_6 is printed with a dangling range 1 <= i <= 2; read as one bracket",)),
        CatalogEntry("tau(n+1,1)", "solvable", "solvable extension of L_n by f, parameter beta",
                     (_nil_n("nilradical dimension"), ParameterSpec("beta", "rational", "family parameter")),
                     _tau_n1_1, lambda n, beta: _need(n >= 3, "needs n >= 3"),
                     "x_1..x_n span L_n; f = x_{n+1}"),
        CatalogEntry("tau(n+1,2)", "solvable", "solvable extension of L_n by f",
                     (_nil_n("nilradical dimension"),), _tau_n1_2,
                     lambda n: _need(n >= 3, "needs n >= 3"), "x_1..x_n span L_n; f = x_{n+1}"),
        CatalogEntry("tau(n+1,3)", "solvable", "solvable extension of L_n by f",
                     (_nil_n("nilradical dimension"),), _tau_n1_3,
                     lambda n: _need(n >= 3, "needs n >= 3"), "x_1..x_n span L_n; f = x_{n+1}"),
        CatalogEntry("tau(n+2,1)", "solvable", "solvable extension of L_n by f_1, f_2",
                     (_nil_n("nilradical dimension"),), _tau_n2_1,
                     lambda n: _need(n >= 3, "needs n >= 3"),
                     "x_1..x_n span L_n; f_1 = x_{n+1}, f_2 = x_{n+2}",
                     ("[f_1, x_n] = x_n is printed with a spurious range; read as one bracket",)),
        CatalogEntry("tau(2n+1,lam2)", "solvable", "solvable extension of a Q-type nilradical, parameter lam2",
                     (_nil_n("half the nilradical dimension"), ParameterSpec("lam2", "rational", "family parameter")),
                     _tau_lam2, lambda n, lam2: _need(n >= 2, "needs n >= 2"),
                     "x_1..x_{2n} span the nilradical; y = x_{2n+1}",
                     ("[y, x_k] is printed for k <= 2n-2 only; x_{2n-1} has no y-bracket",)),
        CatalogEntry("tau(2n+1,2-n,eps)", "solvable", "solvable extension of a Q-type nilradical, parameter eps",
                     (_nil_n("half the nilradical dimension"), ParameterSpec("eps", "rational", "-1, 0 or 1")),
                     _tau_eps, lambda n, eps: _need(n >= 2, "needs n >= 2") or _need(
                         eps in (-1, 0, 1), "needs eps in {-1, 0, 1}"),
                     "x_1..x_{2n} span the nilradical; y = x_{2n+1}"),
        CatalogEntry("tau(2n+1,lam5..)", "solvable", "solvable extension of a Q-type nilradical, parameters lam5..",
                     (_nil_n("half the nilradical dimension"),
                      ParameterSpec("lams", "rationals", "lambda^5, lambda^7, ..., lambda^(2n-1) (n-2 values)")),
                     _tau_lams,
                     lambda n, lams: _need(n >= 3, "needs n >= 3") or _need(
                         len(lams) == n - 2, f"needs exactly n-2 = {n - 2} values of lams"),
                     "x_1..x_{2n} span the nilradical; y = x_{2n+1}",
                     ("summation bounds read literally: k runs 2..floor((2n-3-t)/2)",),
                     {"lams": lambda params: (0,) * (params["n"] - 2)}),
    ])
    return entries


REGISTRY: Dict[str, CatalogEntry] = {entry.name: entry for entry in _entries()}

_ALIASES = {"Lsplit": "Lsplit(n)", "Qsplit": "Qsplit(n)"}


def get_entry(name: str) -> CatalogEntry:
    entry = REGISTRY.get(_ALIASES.get(name, name))
    if entry is None:
        raise CatalogError(f"Unknown catalog entry {name!r}")
    return entry


def list_entries() -> List[CatalogEntry]:
    return list(REGISTRY.values())


def build(name: str, params: Mapping[str, Any], warn: bool = True) -> StructureConstants:
    """construct() with the parameters as a mapping; warn=False keeps flagged entries quiet"""
    entry = get_entry(name)
    resolved = entry.resolve(dict(params))
    alg = entry.builder(**resolved)
    report = validate(alg)
    status = VERIFIED if report.is_valid else UNVERIFIED
    rendered = entry.render_params(resolved)
    label = f"{entry.name}[{rendered}]" if rendered else entry.name
    if status == UNVERIFIED:
        message = f"{label} fails the Jacobi identity as transcribed: {report.summary(limit=2)}"
        if warn:
            logger.warning(message)
        else:
            logger.debug(message)
    specs = {p.name: p for p in entry.parameters}
    return alg.with_name(
        label,
        family=entry.name,
        kind=entry.kind,
        params={k: specs[k].render(v) for k, v in resolved.items()},
        status=status,
        basis_note=entry.basis_note,
        notes=list(entry.notes),
    )


def construct(name: str, **params) -> StructureConstants:
    return build(name, params)


def status_of(alg: StructureConstants) -> str:
    return alg.metadata.get("status", VERIFIED if validate(alg).is_valid else UNVERIFIED)
