import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from src.config.settings import (
    CHARACTERISTIC_SAMPLES,
    RANDOM_VECTOR_REJECTION_LIMIT,
    SAMPLE_COORD_BOUND,
)
from src.utils.errors import (
    DimensionMismatchError,
    NotNilpotentError,
    ParameterError,
    SingularMatrixError,
)
from src.utils.linear_algebra import (
    Matrix,
    Subspace,
    Vector,
    as_vector,
    determinant,
    inverse,
    mat_mul,
    mat_vec,
    nullspace,
    rank,
    transpose,
    unit_vector,
    zero_vector,
)

logger = logging.getLogger(__name__)

Triple = Tuple[int, int, int]


@dataclass(frozen=True)
class StructureConstants:
    """Bracket [x_i, x_j] = sum_s C_ij^s x_s on the basis x_1..x_dim.

    Only i < j is stored; the rest follows from antisymmetry. Name and
    metadata ride along for reports and do not take part in equality.
    """

    dim: int
    entries: Mapping[Triple, Fraction] = field(default_factory=dict)
    name: Optional[str] = field(default=None, compare=False)
    metadata: Mapping[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ParameterError(f"Dimension must be a positive integer, got {self.dim!r}")
        cleaned: Dict[Triple, Fraction] = {}
        for (i, j, s), coeff in self.entries.items():
            if not (1 <= i < j <= self.dim and 1 <= s <= self.dim):
                raise ParameterError(f"Structure constant index ({i}, {j}, {s}) invalid for dim {self.dim}")
            coeff = Fraction(coeff)
            if coeff:
                cleaned[(i, j, s)] = coeff
        object.__setattr__(self, 'entries', dict(sorted(cleaned.items())))
        object.__setattr__(self, 'metadata', dict(self.metadata))

    @classmethod
    def from_brackets(cls, dim: int, brackets: Iterable[Tuple[int, int, int, Any]], **kwargs) -> 'StructureConstants':
        """Accumulate (i, j, s, c) terms in either order of i and j"""
        entries: Dict[Triple, Fraction] = {}
        for i, j, s, coeff in brackets:
            if i == j:
                if coeff:
                    raise ParameterError(f"[x{i}, x{i}] must vanish")
                continue
            if i > j:
                i, j, coeff = j, i, -Fraction(coeff)
            entries[(i, j, s)] = entries.get((i, j, s), 0) + Fraction(coeff)
        return cls(dim, entries, **kwargs)

    @classmethod
    def abelian(cls, dim: int) -> 'StructureConstants':
        return cls(dim, {}, name=f"abelian({dim})")

    def __hash__(self) -> int:
        return hash((self.dim, tuple(self.entries.items())))

    @cached_property
    def _pairs(self) -> Dict[Tuple[int, int], Dict[int, Fraction]]:
        pairs: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for (i, j, s), coeff in self.entries.items():
            pairs.setdefault((i, j), {})[s] = coeff
        return pairs

    def constant(self, i: int, j: int, s: int) -> Fraction:
        if i < j:
            return self.entries.get((i, j, s), Fraction(0))
        if i > j:
            return -self.entries.get((j, i, s), Fraction(0))
        return Fraction(0)

    def bracket_of_basis(self, i: int, j: int) -> Dict[int, Fraction]:
        """[x_i, x_j] as a sparse {s: coeff} map"""
        if i < j:
            return dict(self._pairs.get((i, j), {}))
        if i > j:
            return {s: -c for s, c in self._pairs.get((j, i), {}).items()}
        return {}

    def brackets(self) -> List[Tuple[int, int, int, Fraction]]:
        return [(i, j, s, c) for (i, j, s), c in self.entries.items()]

    def is_abelian(self) -> bool:
        return not self.entries

    def with_name(self, name: str, **metadata) -> 'StructureConstants':
        merged = dict(self.metadata)
        merged.update(metadata)
        return StructureConstants(self.dim, self.entries, name=name, metadata=merged)

    def label(self) -> str:
        return self.name or f"algebra(dim {self.dim})"


@dataclass(frozen=True)
class Violation:
    """Nonzero Jacobi residual: coefficient of x_t in the cyclic sum over (x_i, x_j, x_k)"""

    i: int
    j: int
    k: int
    t: int
    residual: Fraction

    def __str__(self) -> str:
        return f"Jacobi({self.i},{self.j},{self.k}) has {self.residual} on x{self.t}"


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def summary(self, limit: int = 5) -> str:
        if self.is_valid:
            return "Jacobi identity holds"
        shown = "; ".join(str(v) for v in self.violations[:limit])
        more = f" (+{len(self.violations) - limit} more)" if len(self.violations) > limit else ""
        return f"{len(self.violations)} Jacobi violation(s): {shown}{more}"


def _bracket_sparse(alg: StructureConstants, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> Dict[int, Fraction]:
    result: Dict[int, Fraction] = {}
    for (i, j), terms in alg._pairs.items():
        weight = x.get(i, 0) * y.get(j, 0) - x.get(j, 0) * y.get(i, 0)
        if weight:
            for s, coeff in terms.items():
                result[s] = result.get(s, 0) + weight * coeff
    return {s: c for s, c in result.items() if c}


def validate(alg: StructureConstants) -> ValidationReport:
    violations: List[Violation] = []
    n = alg.dim
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(j + 1, n + 1):
                residual: Dict[int, Fraction] = {}
                # [[x_i,x_j],x_k] + [[x_j,x_k],x_i] + [[x_k,x_i],x_j]
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                    inner = alg.bracket_of_basis(a, b)
                    for s, coeff in inner.items():
                        for t, value in alg.bracket_of_basis(s, c).items():
                            residual[t] = residual.get(t, 0) + coeff * value
                for t in sorted(residual):
                    if residual[t]:
                        violations.append(Violation(i, j, k, t, residual[t]))
    if violations:
        logger.debug(f"{alg.label()} fails Jacobi at {len(violations)} place(s)")
    return ValidationReport(tuple(violations))


def _check_vector(alg: StructureConstants, v: Sequence) -> Vector:
    v = as_vector(v)
    if len(v) != alg.dim:
        raise DimensionMismatchError(f"Vector of length {len(v)} for an algebra of dim {alg.dim}")
    return v


def bracket(alg: StructureConstants, x: Sequence, y: Sequence) -> Vector:
    x = _check_vector(alg, x)
    y = _check_vector(alg, y)
    sparse = _bracket_sparse(
        alg,
        {i + 1: c for i, c in enumerate(x) if c},
        {i + 1: c for i, c in enumerate(y) if c},
    )
    result = zero_vector(alg.dim)
    for s, c in sparse.items():
        result[s - 1] = c
    return result


def ad_matrix(alg: StructureConstants, x: Sequence) -> Matrix:
    """Matrix of y -> [x, y]; column j is [x, e_j]"""
    x = _check_vector(alg, x)
    n = alg.dim
    columns = [bracket(alg, x, unit_vector(n, j)) for j in range(1, n + 1)]
    return transpose(columns)


def _bracket_with_algebra(alg: StructureConstants, space: Subspace, other: Subspace) -> Subspace:
    products = []
    for u in space.basis:
        for v in other.basis:
            w = bracket(alg, u, v)
            if any(w):
                products.append(w)
    return Subspace(alg.dim, products)


def lower_central_series(alg: StructureConstants) -> List[Subspace]:
    """C^0 = G, C^k = [C^(k-1), G], listed until the series stabilises"""
    whole = Subspace.whole(alg.dim)
    series = [whole]
    while True:
        nxt = _bracket_with_algebra(alg, series[-1], whole)
        if nxt == series[-1]:
            break
        series.append(nxt)
        if nxt.is_zero():
            break
    return series


def series_term(series: List[Subspace], k: int) -> Subspace:
    return series[k] if k < len(series) else series[-1]


def derived_algebra(alg: StructureConstants) -> Subspace:
    return _bracket_with_algebra(alg, Subspace.whole(alg.dim), Subspace.whole(alg.dim))


def derived_series(alg: StructureConstants) -> List[Subspace]:
    """D^0 = G, D^k = [D^(k-1), D^(k-1)], listed until the series stabilises"""
    series = [Subspace.whole(alg.dim)]
    while True:
        nxt = _bracket_with_algebra(alg, series[-1], series[-1])
        if nxt == series[-1]:
            break
        series.append(nxt)
        if nxt.is_zero():
            break
    return series


def is_solvable(alg: StructureConstants) -> bool:
    return derived_series(alg)[-1].is_zero()


def nilindex(alg: StructureConstants) -> Optional[int]:
    """Smallest p with C^p = 0, or None when the algebra is not nilpotent"""
    series = lower_central_series(alg)
    if not series[-1].is_zero():
        return None
    return len(series) - 1


def is_nilpotent(alg: StructureConstants) -> bool:
    return nilindex(alg) is not None


def _require_nilpotent(alg: StructureConstants) -> List[Subspace]:
    series = lower_central_series(alg)
    if not series[-1].is_zero():
        raise NotNilpotentError(f"{alg.label()} is not nilpotent")
    return series


def is_filiform(alg: StructureConstants) -> bool:
    series = _require_nilpotent(alg)
    return alg.dim >= 3 and len(series) - 1 == alg.dim - 1


def is_quasi_filiform(alg: StructureConstants) -> bool:
    series = _require_nilpotent(alg)
    n = alg.dim
    if n < 4:
        return False
    return not series_term(series, n - 3).is_zero() and series_term(series, n - 2).is_zero()


def center(alg: StructureConstants) -> Subspace:
    n = alg.dim
    # row (j, s), column i holds C_ij^s: x is central iff every row annihilates it
    rows = []
    for j in range(1, n + 1):
        for s in range(1, n + 1):
            row = [alg.constant(i, j, s) for i in range(1, n + 1)]
            if any(row):
                rows.append(row)
    return Subspace(n, nullspace(rows, n))


def jordan_block_sizes(operator: Matrix) -> Tuple[int, ...]:
    """Block sizes of a nilpotent operator, read off the ranks of its powers"""
    n = len(operator)
    ranks = [n]
    power = operator
    while ranks[-1] > 0:
        if len(ranks) > n + 1:
            raise NotNilpotentError("Operator is not nilpotent")
        ranks.append(rank(power))
        power = mat_mul(power, operator)
    # at_least[k] = number of blocks of size >= k
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))] + [0]
    sizes: List[int] = []
    for k in range(len(at_least) - 1, 0, -1):
        sizes.extend([k] * (at_least[k - 1] - at_least[k]))
    return tuple(sizes)


@dataclass(frozen=True)
class CharacteristicSequence:
    """Sampled supremum of c(x) over x outside [G, G]"""

    parts: Tuple[int, ...]
    witness: Tuple[Fraction, ...] = ()
    seed: Optional[int] = None
    samples: int = 0
    sampled: bool = True

    def __post_init__(self):
        if any(p < 1 for p in self.parts) or list(self.parts) != sorted(self.parts, reverse=True):
            raise ValueError(f"Characteristic sequence must be decreasing positive parts, got {self.parts}")

    def __str__(self) -> str:
        return "(" + ", ".join(str(p) for p in self.parts) + ")"


def random_vector(rng: random.Random, n: int, bound: int = SAMPLE_COORD_BOUND) -> Vector:
    return [Fraction(rng.randint(-bound, bound)) for _ in range(n)]


def characteristic_sequence(alg: StructureConstants, samples: int = CHARACTERISTIC_SAMPLES, seed: int = 0) -> CharacteristicSequence:
    _require_nilpotent(alg)
    n = alg.dim
    derived = derived_algebra(alg)
    candidates = [unit_vector(n, i) for i in range(1, n + 1)]
    candidates = [v for v in candidates if not derived.contains(v)]
    rng = random.Random(seed)
    drawn = 0
    attempts = 0
    while drawn < samples and attempts < RANDOM_VECTOR_REJECTION_LIMIT:
        attempts += 1
        v = random_vector(rng, n)
        if derived.contains(v):
            continue
        candidates.append(v)
        drawn += 1
    best: Tuple[int, ...] = ()
    witness: Vector = []
    for v in candidates:
        sizes = jordan_block_sizes(ad_matrix(alg, v))
        if sizes > best:
            best, witness = sizes, v
    logger.debug(f"Characteristic sequence of {alg.label()} is {best} over {len(candidates)} candidates (seed {seed})")
    return CharacteristicSequence(best, tuple(witness), seed, samples)


def direct_sum(a: StructureConstants, b: StructureConstants) -> StructureConstants:
    shift = a.dim
    entries = dict(a.entries)
    for (i, j, s), coeff in b.entries.items():
        entries[(i + shift, j + shift, s + shift)] = coeff
    return StructureConstants(a.dim + b.dim, entries, name=f"{a.label()} + {b.label()}")


def direct_sum_with_abelian(alg: StructureConstants, k: int = 1) -> StructureConstants:
    """Append k central basis vectors x_(n+1)..x_(n+k).

    The result is a new algebra: catalog metadata (status, params, notes) is not carried over.
    """
    if k < 1:
        raise ParameterError(f"Need at least one central vector, got {k}")
    name = f"{alg.label()} + C" if k == 1 else f"{alg.label()} + C^{k}"
    return StructureConstants(alg.dim + k, alg.entries, name=name)


def change_basis(alg: StructureConstants, P: Sequence[Sequence]) -> StructureConstants:
    """Structure constants in the basis y_a = sum_i P[i][a] x_i (the columns of P)"""
    n = alg.dim
    P = [as_vector(row) for row in P]
    if len(P) != n or any(len(row) != n for row in P):
        raise DimensionMismatchError(f"Basis change must be {n}x{n}")
    if determinant(P) == 0:
        raise SingularMatrixError("Basis change matrix is singular")
    P_inv = inverse(P)
    columns = transpose(P)
    entries: Dict[Triple, Fraction] = {}
    for a in range(n):
        for b in range(a + 1, n):
            image = bracket(alg, columns[a], columns[b])
            if not any(image):
                continue
            coords = mat_vec(P_inv, image)
            for s, coeff in enumerate(coords):
                if coeff:
                    entries[(a + 1, b + 1, s + 1)] = coeff
    return StructureConstants(n, entries, name=alg.name, metadata=alg.metadata)
