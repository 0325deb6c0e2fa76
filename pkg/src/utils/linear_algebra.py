"""Exact dense linear algebra over the rationals.

Matrices are lists of rows of Fraction. Nothing here mutates its arguments.
"""
import logging
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from src.utils.errors import DimensionMismatchError, SingularMatrixError

logger = logging.getLogger(__name__)

Vector = List[Fraction]
Matrix = List[List[Fraction]]


def as_vector(values: Iterable) -> Vector:
    return [Fraction(v) for v in values]


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    return [as_vector(row) for row in rows]


def zero_vector(n: int) -> Vector:
    return [Fraction(0)] * n


def unit_vector(n: int, index: int) -> Vector:
    """e_index in a 1-based basis"""
    v = zero_vector(n)
    v[index - 1] = Fraction(1)
    return v


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise DimensionMismatchError(f"Cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0])}")
    cols = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols] for row in a]


def mat_vec(m: Matrix, v: Sequence[Fraction]) -> Vector:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in m]


def matrix_power(m: Matrix, k: int) -> Matrix:
    result = identity(len(m))
    for _ in range(k):
        result = mat_mul(result, m)
    return result


def is_zero_matrix(m: Matrix) -> bool:
    return all(not x for row in m for x in row)


def rref(m: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row-echelon form and the pivot columns"""
    rows = [list(row) for row in m]
    if not rows:
        return rows, []
    n_rows = len(rows)
    n_cols = len(rows[0])
    pivots: List[int] = []
    piv_r = 0
    for piv_c in range(n_cols):
        if piv_r == n_rows:
            break
        for i_row in range(piv_r, n_rows):
            if rows[i_row][piv_c] != 0:
                break
        else:
            continue
        if i_row != piv_r:
            rows[piv_r], rows[i_row] = rows[i_row], rows[piv_r]
        fp = rows[piv_r][piv_c]
        if fp != 1:
            rows[piv_r] = [x / fp for x in rows[piv_r]]
        pivot_row = rows[piv_r]
        for r in range(n_rows):
            if r == piv_r:
                continue
            fr = rows[r][piv_c]
            if fr == 0:
                continue
            rows[r] = [x - fr * y for x, y in zip(rows[r], pivot_row)]
        pivots.append(piv_c)
        piv_r += 1
    return rows, pivots


def rank(m: Matrix) -> int:
    if not m:
        return 0
    return len(rref(m)[1])


def nullspace(m: Matrix, n_cols: int = None) -> Matrix:
    """Basis of {v : m v = 0}, one vector per free column, returned in reduced echelon form"""
    if n_cols is None:
        n_cols = len(m[0]) if m else 0
    if not m:
        return identity(n_cols)
    reduced, pivots = rref(m)
    free_vars = [c for c in range(n_cols) if c not in pivots]
    basis: Matrix = []
    for free in free_vars:
        sol = zero_vector(n_cols)
        sol[free] = Fraction(1)
        for r, piv_c in enumerate(pivots):
            sol[piv_c] = -reduced[r][free]
        basis.append(sol)
    return rref(basis)[0] if basis else []


def determinant(m: Matrix) -> Fraction:
    rows = [list(row) for row in m]
    n = len(rows)
    det = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if rows[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            det = -det
        fp = rows[c][c]
        det *= fp
        for r in range(c + 1, n):
            fr = rows[r][c]
            if fr:
                factor = fr / fp
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[c])]
    return det


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    augmented = [list(row) + unit for row, unit in zip(m, identity(n))]
    reduced, pivots = rref(augmented)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("Matrix is singular")
    return [row[n:] for row in reduced]


class Subspace:
    """Subspace of Q^n held by its canonical reduced row-echelon basis"""

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        rows = [as_vector(v) for v in vectors]
        for row in rows:
            if len(row) != ambient_dim:
                raise DimensionMismatchError(f"Vector of length {len(row)} in Q^{ambient_dim}")
        reduced, pivots = rref(rows) if rows else ([], [])
        self.ambient_dim = ambient_dim
        self.basis: Matrix = reduced[:len(pivots)]
        self.pivots: Tuple[int, ...] = tuple(pivots)

    @classmethod
    def whole(cls, n: int) -> 'Subspace':
        return cls(n, identity(n))

    @classmethod
    def zero(cls, n: int) -> 'Subspace':
        return cls(n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def contains(self, v: Sequence) -> bool:
        v = as_vector(v)
        if len(v) != self.ambient_dim:
            raise DimensionMismatchError(f"Vector of length {len(v)} in Q^{self.ambient_dim}")
        residual = list(v)
        for row, piv in zip(self.basis, self.pivots):
            if residual[piv]:
                factor = residual[piv]
                residual = [x - factor * y for x, y in zip(residual, row)]
        return not any(residual)

    def contains_subspace(self, other: 'Subspace') -> bool:
        return all(self.contains(v) for v in other.basis)

    def __add__(self, other: 'Subspace') -> 'Subspace':
        return Subspace(self.ambient_dim, self.basis + other.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, tuple(tuple(row) for row in self.basis)))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"
