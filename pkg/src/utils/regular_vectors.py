import concurrent.futures
import itertools
import logging
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from src.config.settings import (
    DEFAULT_SEED,
    FAMILY_SAMPLES,
    FIND_REGULAR_MAX_ATTEMPTS,
    MINOR_GUARD,
    SAMPLE_COORD_BOUND,
)
from src.utils.errors import (
    DimensionMismatchError,
    FamilyError,
    GuardExceededError,
    InconsistentRankError,
    SearchExhaustedError,
)
from src.utils.index_engine import index, structure_matrix
from src.utils.lie_algebra import StructureConstants
from src.utils.linear_algebra import Matrix, Subspace, nullspace, rank
from src.utils.polynomial import Polynomial, format_rational, parse_rational

logger = logging.getLogger(__name__)

VERDICTS = ("supported", "refuted-sufficiency", "refuted-necessity-sample")


@dataclass(frozen=True)
class Functional:
    """f = sum_s p_s x_s^*, coordinates stored 1..n as p[0..n-1]"""

    p: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, 'p', tuple(Fraction(v) for v in self.p))

    @classmethod
    def zero(cls, n: int) -> 'Functional':
        return cls((0,) * n)

    @classmethod
    def dual(cls, n: int, *indices: int) -> 'Functional':
        """Sum of the dual basis vectors x_s^* for the given 1-based indices"""
        return cls(tuple(int(i + 1 in indices) for i in range(n)))

    @classmethod
    def parse(cls, text: str) -> 'Functional':
        return cls(tuple(parse_rational(part) for part in text.split(",")))

    @property
    def dim(self) -> int:
        return len(self.p)

    def scale(self, factor) -> 'Functional':
        return Functional(tuple(v * Fraction(factor) for v in self.p))

    def support(self) -> Tuple[int, ...]:
        return tuple(i + 1 for i, v in enumerate(self.p) if v)

    def __str__(self) -> str:
        terms = []
        for s, v in enumerate(self.p, start=1):
            if not v:
                continue
            mag = abs(v)
            body = f"x{s}*" if mag == 1 else f"{format_rational(mag)}*x{s}*"
            terms.append((v < 0, body))
        if not terms:
            return "0"
        text = ("-" if terms[0][0] else "") + terms[0][1]
        for negative, body in terms[1:]:
            text += (" - " if negative else " + ") + body
        return text

    def as_list(self) -> List[str]:
        return [format_rational(v) for v in self.p]


def evaluated_matrix(alg: StructureConstants, f: Functional) -> Matrix:
    """M_ij = sum_s p_s C_ij^s"""
    if f.dim != alg.dim:
        raise DimensionMismatchError(f"Functional of length {f.dim} for an algebra of dim {alg.dim}")
    n = alg.dim
    m = [[Fraction(0)] * n for _ in range(n)]
    for (i, j, s), coeff in alg.entries.items():
        value = coeff * f.p[s - 1]
        if value:
            m[i - 1][j - 1] += value
            m[j - 1][i - 1] -= value
    return m


@dataclass(frozen=True)
class RegularityReport:
    functional: Functional
    kernel_dim: int
    kernel_basis: Subspace
    is_regular: bool
    algebra_index: int
    attempts: Optional[int] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if self.kernel_dim < self.algebra_index:
            raise InconsistentRankError(
                f"Kernel of dimension {self.kernel_dim} is below the index {self.algebra_index}")
        if self.is_regular != (self.kernel_dim == self.algebra_index):
            raise InconsistentRankError("Regularity flag disagrees with the kernel dimension")

    def as_dict(self) -> dict:
        return {
            "functional": self.functional.as_list(),
            "kernel_dim": self.kernel_dim,
            "kernel_basis": [[format_rational(v) for v in row] for row in self.kernel_basis.basis],
            "is_regular": self.is_regular,
            "index": self.algebra_index,
            "attempts": self.attempts,
            "seed": self.seed,
        }


def _kernel_report(alg: StructureConstants, f: Functional, algebra_index: int, **extra) -> RegularityReport:
    m = evaluated_matrix(alg, f)
    kernel = Subspace(alg.dim, nullspace(m, alg.dim))
    return RegularityReport(f, kernel.dim, kernel, kernel.dim == algebra_index, algebra_index, **extra)


def _is_regular(alg: StructureConstants, f: Functional, algebra_index: int) -> bool:
    return alg.dim - rank(evaluated_matrix(alg, f)) == algebra_index


def kernel_at(alg: StructureConstants, f: Functional, algebra_index: Optional[int] = None) -> RegularityReport:
    """Stabiliser G^f = {x : f([x, y]) = 0 for all y} and its regularity.

    Passing algebra_index skips the Jacobi check and the index computation;
    the caller vouches for both.
    """
    if algebra_index is None:
        algebra_index = index(alg).index
    return _kernel_report(alg, f, algebra_index)


def _candidates(n: int, rng: random.Random) -> Iterator[Functional]:
    yield Functional.zero(n)
    for s in range(1, n + 1):
        yield Functional.dual(n, s)
    for s, t in itertools.combinations(range(1, n + 1), 2):
        yield Functional.dual(n, s, t)
    while True:
        yield Functional(tuple(rng.randint(-SAMPLE_COORD_BOUND, SAMPLE_COORD_BOUND) for _ in range(n)))


def find_regular(alg: StructureConstants, seed: int = DEFAULT_SEED,
                 max_attempts: int = FIND_REGULAR_MAX_ATTEMPTS) -> RegularityReport:
    chi = index(alg).index
    rng = random.Random(seed)
    for attempt, f in enumerate(_candidates(alg.dim, rng), start=1):
        if attempt > max_attempts:
            break
        if _is_regular(alg, f, chi):
            logger.info(f"Found regular functional {f} for {alg.label()} after {attempt} attempt(s)")
            return _kernel_report(alg, f, chi, attempts=attempt, seed=seed)
    logger.error(f"No regular functional for {alg.label()} in {max_attempts} attempts (seed {seed})")
    raise SearchExhaustedError(f"No regular functional found in {max_attempts} attempts")


@dataclass(frozen=True)
class TiedGroup:
    """Coordinates sharing one parameter; nonzero=None when the source leaves it open"""

    members: Tuple[int, ...]
    nonzero: Optional[bool] = None

    def branches(self) -> Tuple[bool, ...]:
        if self.nonzero is None:
            return (True, False)
        return (self.nonzero,)

    def __str__(self) -> str:
        body = "+".join(f"x{i}*" for i in self.members)
        return f"p({body})" + (" with p != 0" if self.nonzero else "")


_RANGE_PATTERN = re.compile(r'^(\d+)-(\d+)$')


def _parse_indices(text: str, dim: int) -> Tuple[int, ...]:
    text = text.strip()
    if text == "all":
        return tuple(range(1, dim + 1))
    indices: List[int] = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        match = _RANGE_PATTERN.match(part)
        if match:
            lo, hi = int(match.group(1)), int(match.group(2))
            if lo > hi:
                raise FamilyError(f"Empty range {part!r}")
            indices.extend(range(lo, hi + 1))
        elif part.isdigit():
            indices.append(int(part))
        else:
            raise FamilyError(f"Bad coordinate list {text!r}")
    return tuple(indices)


@dataclass(frozen=True)
class FunctionalFamily:
    """Parametric set of functionals.

    free coordinates take any value, each nonzero set needs at least one
    nonzero member, tied groups share a parameter and zero coordinates are
    forced to 0. Coordinates the family never mentions are 0.
    """

    dim: int
    free: Tuple[int, ...] = ()
    zero: Tuple[int, ...] = ()
    nonzero_sets: Tuple[Tuple[int, ...], ...] = ()
    tied: Tuple[TiedGroup, ...] = ()
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, 'free', tuple(sorted(set(self.free))))
        object.__setattr__(self, 'zero', tuple(sorted(set(self.zero))))
        object.__setattr__(self, 'nonzero_sets', tuple(tuple(sorted(set(s))) for s in self.nonzero_sets))
        mentioned = list(self.free) + list(self.zero)
        for group in self.nonzero_sets:
            if not group:
                raise FamilyError("Nonzero constraint over an empty set")
            mentioned.extend(group)
        for group in self.tied:
            if not group.members:
                raise FamilyError("Tied group without members")
            mentioned.extend(group.members)
        bad = sorted({i for i in mentioned if not 1 <= i <= self.dim})
        if bad:
            raise FamilyError(f"Coordinates {bad} outside 1..{self.dim}")

    @classmethod
    def from_text(cls, text: str, dim: int) -> 'FunctionalFamily':
        """Parse e.g. 'free=1,2;nonzero=3-7;zero=6;tied=3,4,5;tied!=4,5' ('tied!' is stated nonzero)"""
        free: List[int] = []
        zero: List[int] = []
        nonzero_sets: List[Tuple[int, ...]] = []
        tied: List[TiedGroup] = []
        for clause in filter(None, (c.strip() for c in text.split(";"))):
            key, sep, value = clause.partition("=")
            if not sep:
                raise FamilyError(f"Clause {clause!r} is not key=value")
            key = key.strip()
            indices = _parse_indices(value, dim)
            if key == "free":
                free.extend(indices)
            elif key == "zero":
                zero.extend(indices)
            elif key == "nonzero":
                nonzero_sets.append(indices)
            elif key == "tied":
                tied.append(TiedGroup(indices))
            elif key == "tied!":
                tied.append(TiedGroup(indices, nonzero=True))
            else:
                raise FamilyError(f"Unknown family clause {key!r}")
        return cls(dim, tuple(free), tuple(zero), tuple(nonzero_sets), tuple(tied), label=text)

    def overlaps(self) -> Tuple[int, ...]:
        """Coordinates named by more than one role (free, zero, a nonzero set, a tied group)"""
        counts: Dict[int, int] = {}
        roles = [self.free, self.zero] + list(self.nonzero_sets) + [g.members for g in self.tied]
        for role in roles:
            for i in set(role):
                counts[i] = counts.get(i, 0) + 1
        return tuple(sorted(i for i, c in counts.items() if c > 1))

    def unmentioned(self) -> Tuple[int, ...]:
        named = set(self.free) | set(self.zero)
        for group in self.nonzero_sets:
            named.update(group)
        for group in self.tied:
            named.update(group.members)
        return tuple(i for i in range(1, self.dim + 1) if i not in named)

    def branch_choices(self) -> List[Tuple[bool, ...]]:
        return list(itertools.product(*(g.branches() for g in self.tied)))

    def sample(self, rng: random.Random, branch: Sequence[bool]) -> Functional:
        """A member honouring every constraint; tied contributions add onto other roles.

        A shared value that would cancel a coordinate already drawn nonzero is redrawn.
        """
        values: Dict[int, int] = {}
        for i in self.free:
            values[i] = _nonzero(rng)
        for group in self.nonzero_sets:
            for i in rng.sample(group, rng.randint(1, len(group))):
                if not values.get(i):
                    values[i] = _nonzero(rng)
        for group, active in zip(self.tied, branch):
            if active:
                shared = _nonzero(rng)
                while any(values.get(i, 0) + shared == 0 for i in group.members):
                    shared = _nonzero(rng)
                for i in group.members:
                    values[i] = values.get(i, 0) + shared
        for i in self.zero:
            values[i] = 0
        return Functional(tuple(values.get(i, 0) for i in range(1, self.dim + 1)))

    def __str__(self) -> str:
        parts = []
        if self.free:
            parts.append("free " + ",".join(map(str, self.free)))
        for group in self.nonzero_sets:
            parts.append("one of " + ",".join(map(str, group)) + " nonzero")
        for group in self.tied:
            parts.append(str(group))
        if self.zero:
            parts.append("zero " + ",".join(map(str, self.zero)))
        return "; ".join(parts) or "zero functional"


def _nonzero(rng: random.Random) -> int:
    return rng.choice((-1, 1)) * rng.randint(1, SAMPLE_COORD_BOUND)


@dataclass(frozen=True)
class BranchResult:
    """Sampling outcome for one choice of zero/nonzero tied parameters"""

    branch: Tuple[bool, ...]
    samples: int
    counterexample: Optional[Functional] = None
    necessity_witness: Optional[Tuple[Tuple[int, ...], Functional]] = None

    @property
    def verdict(self) -> str:
        if self.counterexample is not None:
            return "refuted-sufficiency"
        if self.necessity_witness is not None:
            return "refuted-necessity-sample"
        return "supported"

    def describe(self, family: FunctionalFamily) -> str:
        if not family.tied:
            return "all"
        return ", ".join(
            f"tied {'+'.join(map(str, g.members))} {'nonzero' if on else 'zero'}"
            for g, on in zip(family.tied, self.branch))

    def as_dict(self, family: FunctionalFamily) -> dict:
        witness = None
        if self.necessity_witness is not None:
            forced, f = self.necessity_witness
            witness = {"forced_zero": list(forced), "functional": f.as_list()}
        return {
            "branch": self.describe(family),
            "verdict": self.verdict,
            "counterexample": self.counterexample.as_list() if self.counterexample else None,
            "necessity_witness": witness,
        }


@dataclass(frozen=True)
class FamilyReport:
    family: FunctionalFamily
    algebra_index: int
    branches: Tuple[BranchResult, ...]
    samples: int
    seed: int
    name: Optional[str] = field(default=None, compare=False)

    @property
    def verdict(self) -> str:
        for result in self.branches:
            if result.verdict != "supported":
                return result.verdict
        return "supported"

    @property
    def overlaps(self) -> Tuple[int, ...]:
        return self.family.overlaps()

    def as_dict(self) -> dict:
        return {
            "family": str(self.family),
            "verdict": self.verdict,
            "index": self.algebra_index,
            "overlaps": list(self.overlaps),
            "branches": [b.as_dict(self.family) for b in self.branches],
            "samples": self.samples,
            "seed": self.seed,
        }


def verify_family(alg: StructureConstants, family: FunctionalFamily, samples: int = FAMILY_SAMPLES,
                  seed: int = DEFAULT_SEED, workers: int = 1) -> FamilyReport:
    """Sample the family for sufficiency and each nonzero constraint for necessity.

    All functionals are drawn before any kernel is computed, so the report is a
    function of (algebra, family, samples, seed) however the checks are scheduled.
    """
    if family.dim != alg.dim:
        raise DimensionMismatchError(f"Family over {family.dim} coordinates for an algebra of dim {alg.dim}")
    chi = index(alg).index
    if family.overlaps():
        logger.warning(f"Family for {alg.label()} names coordinates {list(family.overlaps())} in several roles")
    rng = random.Random(seed)

    plan = []
    for branch in family.branch_choices():
        members = [family.sample(rng, branch) for _ in range(samples)]
        boundary = []
        for group in family.nonzero_sets:
            for _ in range(samples):
                f = family.sample(rng, branch)
                forced = tuple(0 if i + 1 in group else v for i, v in enumerate(f.p))
                boundary.append((group, Functional(forced)))
        plan.append((branch, members, boundary))

    everything = [f for _, members, boundary in plan for f in members + [b for _, b in boundary]]

    def check(f):
        return _is_regular(alg, f, chi)

    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
            flags = iter(list(executor.map(check, everything)))
    else:
        flags = iter([check(f) for f in everything])

    results = []
    for branch, members, boundary in plan:
        counterexample = None
        witness = None
        for f in members:
            if not next(flags) and counterexample is None:
                counterexample = f
        for group, f in boundary:
            if next(flags) and witness is None:
                witness = (group, f)
        results.append(BranchResult(tuple(branch), samples, counterexample, witness))

    report = FamilyReport(family, chi, tuple(results), samples, seed, alg.name)
    logger.info(f"Family [{family}] on {alg.label()}: {report.verdict}")
    return report


def pfaffian_table(rows: Sequence[Sequence[Polynomial]], size: int) -> Dict[Tuple[int, ...], Polynomial]:
    """Pfaffians of every principal size x size submatrix, keyed by 0-based index tuple"""
    memo: Dict[Tuple[int, ...], Polynomial] = {(): Polynomial.constant(1)}

    def pf(idx: Tuple[int, ...]) -> Polynomial:
        if idx in memo:
            return memo[idx]
        if len(idx) % 2:
            memo[idx] = Polynomial.zero()
            return memo[idx]
        first = idx[0]
        total = Polynomial.zero()
        for pos in range(1, len(idx)):
            entry = rows[first][idx[pos]]
            if not entry:
                continue
            rest = idx[1:pos] + idx[pos + 1:]
            sub = pf(rest)
            if sub:
                term = entry * sub
                total = total + term if pos % 2 else total - term
        memo[idx] = total
        return total

    return {subset: pf(subset) for subset in itertools.combinations(range(len(rows)), size)}


def pfaffian(rows: Sequence[Sequence[Polynomial]]) -> Polynomial:
    n = len(rows)
    return pfaffian_table(rows, n)[tuple(range(n))]


def principal_pfaffians(alg: StructureConstants, size: Optional[int] = None) -> Dict[Tuple[int, ...], Polynomial]:
    """Nonzero principal Pfaffians of the structure matrix (variables p_1..p_n), 1-based keys"""
    if size is None:
        size = alg.dim - index(alg).index
    rows = structure_matrix(alg).polynomial_rows()
    table = pfaffian_table(rows, size)
    return {tuple(i + 1 for i in key): value for key, value in table.items() if value}


def _normalize_sign(p: Polynomial) -> Polynomial:
    return -p if p.leading_term()[1] < 0 else p


def regular_set_minors(alg: StructureConstants, guard: int = MINOR_GUARD) -> List[Polynomial]:
    """Every nonzero r x r minor of M(p), r = n - index, up to sign.

    For a skew matrix of rank r, det A[R, C] = Pf(A[R, R]) * Pf(A[C, C]), so the
    minors are the pairwise products of the nonzero principal Pfaffians.
    """
    chi = index(alg).index
    n = alg.dim
    size = n - chi
    count = comb(n, size) ** 2
    if count > guard:
        raise GuardExceededError(f"{count} minors of order {size} exceed the guard of {guard}")
    if size == 0:
        return []
    pfaffians = list(principal_pfaffians(alg, size).values())
    minors = set()
    for a, b in itertools.combinations_with_replacement(pfaffians, 2):
        minors.add(_normalize_sign(a * b))
    logger.info(f"{len(minors)} distinct nonzero minors of order {size} for {alg.label()}")
    return sorted(minors, key=lambda p: (p.degree(), len(p), str(p)))


def is_regular_by_minors(minors: Sequence[Polynomial], f: Functional) -> bool:
    if not minors:
        return True
    return any(m.evaluate(f.p) for m in minors)
