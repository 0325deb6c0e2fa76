import random
from fractions import Fraction

import pytest

from src.utils.errors import DimensionMismatchError, SingularMatrixError
from src.utils.linear_algebra import (
    Subspace,
    as_matrix,
    determinant,
    identity,
    inverse,
    mat_mul,
    mat_vec,
    matrix_power,
    nullspace,
    rank,
    rref,
    unit_vector,
)


def random_matrix(rng, rows, cols, bound=5):
    return as_matrix([[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)])


class TestElimination:
    def test_rref_pivots(self):
        """Test that the reduced form has unit pivots and cleared pivot columns"""
        reduced, pivots = rref(as_matrix([[2, 4, 6], [1, 2, 4]]))
        assert pivots == [0, 2]
        assert reduced[0] == [1, 2, 0]
        assert reduced[1] == [0, 0, 1]

    def test_rank_matches_sympy(self, sympy_rank):
        """Test that exact rank agrees with sympy on random rational matrices"""
        rng = random.Random(3)
        for _ in range(30):
            m = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6), bound=2)
            assert rank(m) == sympy_rank(m)

    def test_rank_of_empty(self):
        """Test that the empty matrix has rank 0"""
        assert rank([]) == 0

    def test_nullspace_is_annihilated(self):
        """Test that every null vector is killed and the dimensions add up"""
        rng = random.Random(5)
        for _ in range(20):
            m = random_matrix(rng, 3, 6, bound=3)
            basis = nullspace(m)
            assert len(basis) + rank(m) == 6
            for v in basis:
                assert not any(mat_vec(m, v))

    def test_nullspace_of_empty_is_everything(self):
        """Test that no constraints leave the whole space"""
        assert nullspace([], 3) == identity(3)

    def test_determinant_and_inverse(self):
        """Test that inverse times matrix is the identity"""
        m = as_matrix([[2, 1, 0], [1, 3, 1], [0, 1, 4]])
        assert determinant(m) == 18
        assert mat_mul(inverse(m), m) == identity(3)

    def test_singular_inverse(self):
        """Test that a singular matrix has no inverse"""
        with pytest.raises(SingularMatrixError):
            inverse(as_matrix([[1, 2], [2, 4]]))

    def test_mat_mul_shape_mismatch(self):
        """Test that incompatible shapes are rejected"""
        with pytest.raises(DimensionMismatchError):
            mat_mul(as_matrix([[1, 2]]), as_matrix([[1, 2]]))

    def test_matrix_power(self):
        """Test that a nilpotent shift dies at the expected power"""
        shift = as_matrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
        assert any(any(row) for row in matrix_power(shift, 2))
        assert not any(any(row) for row in matrix_power(shift, 3))
        assert matrix_power(shift, 0) == identity(3)


class TestSubspace:
    def test_canonical_basis(self):
        """Test that spanning sets of the same space compare equal"""
        a = Subspace(3, [[1, 1, 0], [0, 1, 1]])
        b = Subspace(3, [[1, 2, 1], [1, 0, -1], [2, 2, 0]])
        assert a == b
        assert hash(a) == hash(b)
        assert a.dim == 2

    def test_contains(self):
        """Test membership with exact rationals"""
        space = Subspace(3, [[1, 0, Fraction(1, 2)]])
        assert space.contains([2, 0, 1])
        assert not space.contains(unit_vector(3, 3))

    def test_sum_and_inclusion(self):
        """Test that a sum contains both summands"""
        a = Subspace(4, [unit_vector(4, 1)])
        b = Subspace(4, [unit_vector(4, 2)])
        total = a + b
        assert total.dim == 2
        assert total.contains_subspace(a) and total.contains_subspace(b)
        assert not a.contains_subspace(total)

    def test_zero_and_whole(self):
        """Test the trivial subspaces"""
        assert Subspace.zero(3).is_zero()
        assert Subspace.whole(3).dim == 3

    def test_wrong_length_vector(self):
        """Test that vectors from another ambient space are rejected"""
        with pytest.raises(DimensionMismatchError):
            Subspace(3, [[1, 2]])
