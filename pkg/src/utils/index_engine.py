import concurrent.futures
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import List, Mapping, Optional, Sequence, Tuple

from src.config.settings import (
    DEFAULT_SEED,
    DEFORMATION_MIN_SAMPLES,
    RANDOMIZED_RANK_BOUND,
    RANDOMIZED_RANK_TRIALS,
)
from src.utils.errors import (
    DimensionMismatchError,
    InconsistentRankError,
    InvalidAlgebraError,
    ParameterError,
)
from src.utils.lie_algebra import (
    StructureConstants,
    Triple,
    direct_sum_with_abelian,
    validate,
)
from src.utils.linear_algebra import Matrix, rank
from src.utils.polynomial import LinearForm, Polynomial, format_rational, poly_exact_div

logger = logging.getLogger(__name__)

METHODS = ("symbolic", "randomized", "both")


@dataclass(frozen=True)
class StructureMatrix:
    """Skew n x n matrix whose (i, j) entry is the linear form sum_s C_ij^s x_s"""

    dim: int
    entries: Tuple[Tuple[LinearForm, ...], ...]

    def entry(self, i: int, j: int) -> LinearForm:
        """1-based access"""
        return self.entries[i - 1][j - 1]

    def polynomial_rows(self) -> List[List[Polynomial]]:
        return [[form.to_polynomial() for form in row] for row in self.entries]

    def evaluate(self, point: Sequence) -> Matrix:
        if len(point) != self.dim:
            raise DimensionMismatchError(f"Point of length {len(point)} for a {self.dim}x{self.dim} matrix")
        return [[form.evaluate(point) for form in row] for row in self.entries]

    def is_zero(self) -> bool:
        return all(form.is_zero() for row in self.entries for form in row)

    def __str__(self) -> str:
        cells = [[str(form) for form in row] for row in self.entries]
        width = max((len(c) for row in cells for c in row), default=1)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)


def structure_matrix(alg: StructureConstants) -> StructureMatrix:
    n = alg.dim
    rows = []
    for i in range(1, n + 1):
        rows.append(tuple(LinearForm(alg.bracket_of_basis(i, j)) for j in range(1, n + 1)))
    return StructureMatrix(n, tuple(rows))


def _row_content(row: Sequence[Polynomial]) -> Fraction:
    num = 0
    den = 1
    for entry in row:
        for _, coeff in entry.items():
            num = gcd(num, coeff.numerator)
            den = lcm(den, coeff.denominator)
    return Fraction(num, den) if num else Fraction(0)


def _choose_pivot(a: List[List[Polynomial]], start: int) -> Optional[Tuple[int, int]]:
    best = None
    best_key = None
    for i in range(start, len(a)):
        for j in range(start, len(a[i])):
            entry = a[i][j]
            if entry:
                key = (entry.degree(), len(entry), i, j)
                if best_key is None or key < best_key:
                    best, best_key = (i, j), key
    return best


def _bareiss_step(a: List[List[Polynomial]], r: int, prev: Polynomial) -> None:
    pivot = a[r][r]
    pivot_row = a[r]
    for i in range(r + 1, len(a)):
        row = a[i]
        a_ir = row[r]
        for j in range(r + 1, len(row)):
            a_ij = row[j]
            if a_ir and pivot_row[j]:
                value = pivot * a_ij - a_ir * pivot_row[j] if a_ij else -(a_ir * pivot_row[j])
            elif a_ij:
                value = pivot * a_ij
            else:
                continue
            row[j] = poly_exact_div(value, prev) if value else value
        row[r] = Polynomial.zero()


def _swap(a: List[List[Polynomial]], r: int, i: int, j: int) -> int:
    """Move entry (i, j) to (r, r); returns the sign change of the determinant"""
    sign = 1
    if i != r:
        a[r], a[i] = a[i], a[r]
        sign = -sign
    if j != r:
        for row in a:
            row[r], row[j] = row[j], row[r]
        sign = -sign
    return sign


def bareiss_rank(rows: Sequence[Sequence[Polynomial]]) -> int:
    """Rank over the field of rational functions by fraction-free elimination.

    Full pivoting on the entry of least (degree, term count, row, column).
    After each round every remaining row is divided by its rational content;
    rows stay constant multiples of the true Bareiss rows, so the divisions
    by the previous pivot remain exact.
    """
    a = [list(row) for row in rows]
    if not a:
        return 0
    prev = Polynomial.constant(1)
    r = 0
    limit = min(len(a), len(a[0]))
    while r < limit:
        found = _choose_pivot(a, r)
        if found is None:
            break
        _swap(a, r, *found)
        logger.debug(f"Bareiss round {r}: pivot of degree {a[r][r].degree()} with {len(a[r][r])} term(s)")
        _bareiss_step(a, r, prev)
        prev = a[r][r]
        r += 1
        for i in range(r, len(a)):
            content = _row_content(a[i][r:])
            if content and content != 1:
                a[i] = [entry.scale(1 / content) if entry else entry for entry in a[i]]
    return r


def bareiss_determinant(rows: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Exact determinant over the polynomial ring, same pivoting as bareiss_rank"""
    a = [list(row) for row in rows]
    n = len(a)
    if any(len(row) != n for row in a):
        raise DimensionMismatchError("Determinant needs a square matrix")
    if n == 0:
        return Polynomial.constant(1)
    sign = 1
    prev = Polynomial.constant(1)
    for r in range(n):
        found = _choose_pivot(a, r)
        if found is None:
            return Polynomial.zero()
        sign *= _swap(a, r, *found)
        _bareiss_step(a, r, prev)
        prev = a[r][r]
    return prev.scale(sign)


def symbolic_rank(matrix: StructureMatrix) -> int:
    return bareiss_rank(matrix.polynomial_rows())


def _check_randomized(matrix: StructureMatrix, trials: int, bound: int) -> None:
    if trials < 1:
        raise ParameterError(f"Need at least one trial, got {trials}")
    if bound < matrix.dim ** 2:
        raise ParameterError(f"Sampling bound {bound} is below n^2 = {matrix.dim ** 2}")


def randomized_rank_with_witness(
        matrix: StructureMatrix,
        trials: int = RANDOMIZED_RANK_TRIALS,
        bound: int = RANDOMIZED_RANK_BOUND,
        seed: int = DEFAULT_SEED,
        workers: int = 1) -> Tuple[int, Tuple[Fraction, ...]]:
    """Max rank of the matrix evaluated at random integer points of [-bound, bound]^n.

    Points are drawn up front so the result depends only on (matrix, trials,
    bound, seed), whether or not the evaluations run in a thread pool.
    """
    _check_randomized(matrix, trials, bound)
    rng = random.Random(seed)
    points = [tuple(Fraction(rng.randint(-bound, bound)) for _ in range(matrix.dim)) for _ in range(trials)]

    def evaluate_rank(point):
        return rank(matrix.evaluate(point))

    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
            ranks = list(executor.map(evaluate_rank, points))
    else:
        ranks = [evaluate_rank(point) for point in points]

    best = max(range(trials), key=lambda t: (ranks[t], -t))
    return ranks[best], points[best]


def randomized_rank(matrix: StructureMatrix, trials: int = RANDOMIZED_RANK_TRIALS,
                    bound: int = RANDOMIZED_RANK_BOUND, seed: int = DEFAULT_SEED) -> int:
    return randomized_rank_with_witness(matrix, trials, bound, seed)[0]


@dataclass(frozen=True)
class IndexReport:
    """Index of an algebra and how it was obtained"""

    dim: int
    index: int
    rank: int
    method: str
    witness_point: Optional[Tuple[Fraction, ...]] = None
    trials: Optional[int] = None
    seed: Optional[int] = None
    validated: bool = True
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.index + self.rank != self.dim:
            raise InconsistentRankError(f"index {self.index} + rank {self.rank} != dim {self.dim}")
        if self.rank % 2:
            raise InconsistentRankError(f"Skew-symmetric rank {self.rank} is odd")

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "rank": self.rank,
            "method": self.method,
            "witness_point": [format_rational(v) for v in self.witness_point] if self.witness_point else None,
            "trials": self.trials,
            "seed": self.seed,
            "validated": self.validated,
        }


def ensure_valid(alg: StructureConstants) -> None:
    report = validate(alg)
    if not report.is_valid:
        raise InvalidAlgebraError(f"{alg.label()}: {report.summary()}", list(report.violations))


def index(alg: StructureConstants,
          method: str = "symbolic",
          trials: int = RANDOMIZED_RANK_TRIALS,
          bound: int = RANDOMIZED_RANK_BOUND,
          seed: int = DEFAULT_SEED,
          require_valid: bool = True) -> IndexReport:
    """n minus the rank of the structure matrix over the rational-function field.

    With require_valid=False the Jacobi check is skipped and the report is
    marked unvalidated; such values describe the skew form only.
    """
    if method not in METHODS:
        raise ParameterError(f"Unknown method {method!r}; expected one of {', '.join(METHODS)}")
    if require_valid:
        ensure_valid(alg)
    matrix = structure_matrix(alg)

    witness = None
    used_trials = None
    used_seed = None
    if method in ("randomized", "both"):
        random_rank, witness = randomized_rank_with_witness(matrix, trials, bound, seed)
        used_trials, used_seed = trials, seed
    if method in ("symbolic", "both"):
        exact_rank = symbolic_rank(matrix)
        if method == "both" and exact_rank != random_rank:
            logger.error(f"Rank disagreement on {alg.label()}: symbolic {exact_rank}, randomized {random_rank}")
            raise InconsistentRankError(
                f"Symbolic rank {exact_rank} and randomized rank {random_rank} disagree for {alg.label()}")
    else:
        exact_rank = random_rank

    report = IndexReport(alg.dim, alg.dim - exact_rank, exact_rank, method, witness,
                         used_trials, used_seed, require_valid, alg.name)
    logger.info(f"Computed index {report.index} (rank {report.rank}, {method}) for {alg.label()}")
    return report


def is_frobenius(alg: StructureConstants, method: str = "symbolic") -> bool:
    return index(alg, method=method).index == 0


def central_extension_index_check(alg: StructureConstants, method: str = "symbolic") -> Tuple[int, int]:
    base = index(alg, method=method).index
    extended = index(direct_sum_with_abelian(alg, 1), method=method).index
    if extended != base + 1:
        raise InconsistentRankError(
            f"Central extension of {alg.label()} has index {extended}, expected {base + 1}")
    return base, extended


@dataclass(frozen=True)
class Deformation:
    """Bracket [,]_t = [,]_0 + sum_k t^k [,]_k, truncated at the given perturbations"""

    base: StructureConstants
    perturbations: Tuple[Tuple[int, Mapping[Triple, Fraction]], ...] = ()

    def __post_init__(self):
        normalized = []
        for degree, entries in self.perturbations:
            if degree < 1:
                raise ParameterError(f"Perturbation degree must be at least 1, got {degree}")
            if isinstance(entries, StructureConstants):
                if entries.dim != self.base.dim:
                    raise DimensionMismatchError(
                        f"Perturbation of dim {entries.dim} for a base of dim {self.base.dim}")
                entries = entries.entries
            else:
                # reuse the index checks of StructureConstants
                entries = StructureConstants(self.base.dim, entries).entries
            normalized.append((degree, dict(entries)))
        object.__setattr__(self, 'perturbations', tuple(normalized))

    def specialize(self, t) -> StructureConstants:
        t = Fraction(t)
        entries = dict(self.base.entries)
        for degree, perturbation in self.perturbations:
            weight = t ** degree
            for key, coeff in perturbation.items():
                entries[key] = entries.get(key, 0) + weight * coeff
        return StructureConstants(self.base.dim, entries, name=f"{self.base.label()} at t={format_rational(t)}")


@dataclass(frozen=True)
class DeformationReport:
    base_index: int
    sample_indices: Tuple[Tuple[Fraction, int], ...]
    generic_index: int

    @property
    def monotone(self) -> bool:
        return self.generic_index <= self.base_index

    def as_dict(self) -> dict:
        return {
            "base_index": self.base_index,
            "samples": [{"t": format_rational(t), "index": chi} for t, chi in self.sample_indices],
            "generic_index": self.generic_index,
            "monotone": self.monotone,
        }


def deformation_index(deformation: Deformation, t_samples: Sequence, method: str = "symbolic") -> DeformationReport:
    samples = [Fraction(t) for t in t_samples]
    if not samples:
        raise ParameterError("Need at least one nonzero sample of t")
    if any(t == 0 for t in samples):
        raise ParameterError("Samples of t must be nonzero")
    if len(set(samples)) < DEFORMATION_MIN_SAMPLES:
        logger.warning(f"Only {len(set(samples))} distinct sample(s) of t; the generic index may be overestimated")

    base_index = index(deformation.specialize(0), method=method).index
    results = []
    for t in samples:
        results.append((t, index(deformation.specialize(t), method=method).index))
    generic = min(chi for _, chi in results)
    report = DeformationReport(base_index, tuple(results), generic)
    if not report.monotone:
        logger.error(f"Deformation raised the index from {base_index} to {generic}")
    logger.info(f"Deformation of {deformation.base.label()}: index {base_index} at t=0, generic {generic}")
    return report
