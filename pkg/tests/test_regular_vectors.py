import itertools
import random
from fractions import Fraction
from unittest.mock import MagicMock

import pytest

from src.utils.catalog import construct
from src.utils.errors import (
    DimensionMismatchError,
    FamilyError,
    GuardExceededError,
    InconsistentRankError,
    ParameterError,
    SearchExhaustedError,
)
from src.utils.index_engine import bareiss_determinant, bareiss_rank, index, structure_matrix
from src.utils.lie_algebra import StructureConstants, direct_sum, direct_sum_with_abelian
from src.utils.linear_algebra import Subspace
from src.utils.polynomial import Polynomial
from src.utils.regular_vectors import (
    Functional,
    FunctionalFamily,
    RegularityReport,
    evaluated_matrix,
    find_regular,
    is_regular_by_minors,
    kernel_at,
    pfaffian,
    pfaffian_table,
    principal_pfaffians,
    regular_set_minors,
    verify_family,
)


@pytest.fixture
def heisenberg():
    return StructureConstants.from_brackets(3, [(1, 2, 3, 1)], name="heisenberg")


class TestFunctional:
    def test_parse(self):
        """Test that comma-separated rationals parse into coordinates"""
        f = Functional.parse("1, 0, -1/2")
        assert f.p == (1, 0, Fraction(-1, 2))
        assert f.support() == (1, 3)

    def test_parse_rejects_garbage(self):
        """Test that a non-rational coordinate is a parameter error"""
        with pytest.raises(ParameterError):
            Functional.parse("1,x,2")

    def test_string(self):
        """Test the dual-basis rendering"""
        assert str(Functional.parse("1,0,-1/2")) == "x1* - 1/2*x3*"
        assert str(Functional.parse("0,-1")) == "-x2*"
        assert str(Functional.zero(2)) == "0"

    def test_dual(self):
        """Test that dual() sums the named dual basis vectors"""
        assert Functional.dual(4, 2, 4).p == (0, 1, 0, 1)
        assert Functional.dual(3, 1).scale(3).as_list() == ["3", "0", "0"]


class TestKernel:
    def test_evaluated_matrix(self, heisenberg):
        """Test that M_ij = f([x_i, x_j])"""
        m = evaluated_matrix(heisenberg, Functional.parse("0,0,2"))
        assert m[0][1] == 2 and m[1][0] == -2
        assert sum(abs(v) for row in m for v in row) == 4

    def test_regular_and_singular(self, heisenberg):
        """Test that x3* is regular and x1* is not"""
        regular = kernel_at(heisenberg, Functional.dual(3, 3))
        assert regular.is_regular
        assert regular.kernel_dim == 1
        assert regular.kernel_basis == Subspace(3, [[0, 0, 1]])
        singular = kernel_at(heisenberg, Functional.dual(3, 1))
        assert not singular.is_regular
        assert singular.kernel_dim == 3

    def test_wrong_length(self, heisenberg):
        """Test that functionals of the wrong length are rejected"""
        with pytest.raises(DimensionMismatchError):
            kernel_at(heisenberg, Functional.dual(4, 1))

    def test_kernel_never_below_index(self, algebra_sampler, rng):
        """Test that every kernel is at least as large as the index"""
        for _ in range(8):
            alg = algebra_sampler(max_dim=6)
            chi = index(alg).index
            f = Functional(tuple(rng.randint(-5, 5) for _ in range(alg.dim)))
            assert kernel_at(alg, f, chi).kernel_dim >= chi

    def test_inconsistent_report(self, heisenberg):
        """Test that a kernel below the index cannot be reported"""
        with pytest.raises(InconsistentRankError):
            RegularityReport(Functional.zero(3), 0, Subspace.zero(3), False, 1)


class TestFindRegular:
    def test_model_filiform(self):
        """Test that the search tries zero and single duals first on L_8"""
        report = find_regular(construct("L", n=8))
        assert report.functional == Functional.dual(8, 3)
        assert report.attempts == 4
        assert report.kernel_dim == 6

    def test_abelian_zero_functional(self):
        """Test that on an abelian algebra the zero functional is regular"""
        report = find_regular(StructureConstants.abelian(3))
        assert report.functional == Functional.zero(3)
        assert report.attempts == 1

    def test_pair_candidates(self):
        """Test that sums of two duals are tried after the single duals"""
        alg = direct_sum(construct("r2"), construct("r2"))
        report = find_regular(alg, seed=4)
        assert report.functional == Functional.dual(4, 2, 4)
        assert report.attempts == 10
        assert report.seed == 4

    def test_exhausted(self):
        """Test that the search gives up after max_attempts"""
        with pytest.raises(SearchExhaustedError):
            find_regular(construct("L", n=4), max_attempts=1)

    def test_found_on_random_algebras(self, algebra_sampler):
        """Test that a regular functional is found on valid algebras"""
        for _ in range(6):
            alg = algebra_sampler(max_dim=6)
            assert find_regular(alg, seed=1).is_regular


class TestFamilies:
    def test_parse_family(self):
        """Test that clauses, ranges and roles are read"""
        family = FunctionalFamily.from_text("free=1,2;nonzero=3-5;tied!=4,6;zero=7", 8)
        assert family.free == (1, 2)
        assert family.nonzero_sets == ((3, 4, 5),)
        assert family.tied[0].members == (4, 6) and family.tied[0].nonzero
        assert family.zero == (7,)
        assert family.overlaps() == (4,)
        assert family.unmentioned() == (8,)

    def test_parse_all(self):
        """Test that 'all' names every coordinate"""
        assert FunctionalFamily.from_text("free=all", 3).free == (1, 2, 3)

    @pytest.mark.parametrize("text", ["free=1;bogus=2", "free=9", "free=3-1", "free=a", "free"])
    def test_parse_errors(self, text):
        """Test that malformed families raise FamilyError"""
        with pytest.raises(FamilyError):
            FunctionalFamily.from_text(text, 4)

    def test_open_tied_groups_branch(self):
        """Test that a tied group without a stated sign splits into two branches"""
        family = FunctionalFamily.from_text("free=1;tied=2,3", 3)
        assert family.branch_choices() == [(True,), (False,)]

    def test_sample_honours_constraints(self):
        """Test that samples keep zero coordinates and hit each nonzero set"""
        family = FunctionalFamily.from_text("free=1;nonzero=2-4;zero=5", 6)
        rng = random.Random(0)
        for _ in range(20):
            f = family.sample(rng, ())
            assert f.p[0] != 0
            assert any(f.p[1:4])
            assert f.p[4] == 0 and f.p[5] == 0

    def test_tied_value_does_not_cancel_free_coordinate(self):
        """Test that a shared value cancelling a nonzero coordinate is redrawn"""
        family = FunctionalFamily.from_text("free=1;tied!=1,2", 2)
        rng = MagicMock()
        # free x1 = 1 * 5, then shared -5 (cancels x1) and the redraw 1 * 3
        rng.choice.side_effect = [1, -1, 1]
        rng.randint.side_effect = [5, 5, 3]
        f = family.sample(rng, (True,))
        assert f.p == (8, 3)
        assert rng.randint.call_count == 3

    def test_tied_groups_keep_nonzero_roles(self):
        """Test that free and nonzero-set coordinates stay nonzero under tied contributions"""
        family = FunctionalFamily.from_text("free=1,2;nonzero=3;tied!=1,2,3", 3)
        rng = random.Random(5)
        for _ in range(300):
            f = family.sample(rng, (True,))
            assert all(f.p)

    def test_model_filiform_supported(self):
        """Test that L_6 is regular exactly when one of x3*..x6* appears"""
        alg = construct("L", n=6)
        report = verify_family(alg, FunctionalFamily.from_text("free=1,2;nonzero=3-6", 6), samples=8)
        assert report.verdict == "supported"
        assert report.algebra_index == 4

    def test_necessity_refuted(self):
        """Test that Q_4 stays regular with x4* removed"""
        family = FunctionalFamily.from_text("free=1-3;nonzero=4", 4)
        report = verify_family(construct("Q", n=4), family, samples=8)
        assert report.verdict == "refuted-necessity-sample"
        forced, witness = report.branches[0].necessity_witness
        assert forced == (4,)
        assert witness.p[3] == 0

    def test_sufficiency_refuted(self):
        """Test that the zero branch of a tied group on F6_2 is not regular"""
        family = FunctionalFamily.from_text("free=1,2,5;tied=3,4,5", 6)
        report = verify_family(construct("F6_2"), family, samples=8)
        assert report.verdict == "refuted-sufficiency"
        zero_branch = report.branches[1]
        assert zero_branch.branch == (False,)
        assert zero_branch.counterexample is not None
        assert zero_branch.describe(family) == "tied 3+4+5 zero"

    def test_report_is_reproducible(self):
        """Test that the report depends only on the seed, not the worker count"""
        alg = construct("F6_4")
        family = FunctionalFamily.from_text("free=1-5;zero=6", 6)
        serial = verify_family(alg, family, samples=6, seed=9)
        threaded = verify_family(alg, family, samples=6, seed=9, workers=3)
        assert serial == threaded
        assert serial.as_dict()["verdict"] == "supported"

    def test_dimension_mismatch(self, heisenberg):
        """Test that a family over the wrong number of coordinates is rejected"""
        with pytest.raises(DimensionMismatchError):
            verify_family(heisenberg, FunctionalFamily.from_text("free=1", 4))


class TestMinors:
    def test_pfaffian_squared_is_determinant(self):
        """Test that Pf(A)^2 = det(A) for skew integer matrices"""
        rng = random.Random(21)
        for n in (2, 4, 6):
            a = [[Polynomial.zero() for _ in range(n)] for _ in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    v = rng.randint(-3, 3)
                    a[i][j], a[j][i] = Polynomial.constant(v), Polynomial.constant(-v)
            assert pfaffian(a) ** 2 == bareiss_determinant(a)

    def test_pfaffian_of_structure_matrix(self):
        """Test Pf^2 = det on the symbolic structure matrix of r2 + r2"""
        rows = structure_matrix(direct_sum(construct("r2"), construct("r2"))).polynomial_rows()
        assert pfaffian(rows) ** 2 == bareiss_determinant(rows)
        assert pfaffian(rows)

    def test_heisenberg_minors(self, heisenberg):
        """Test that the only nonzero 2x2 minor of Heisenberg is p3^2"""
        assert principal_pfaffians(heisenberg) == {(1, 2): Polynomial.variable(3)}
        assert regular_set_minors(heisenberg) == [Polynomial.variable(3) ** 2]

    def test_minors_match_kernel(self, verified_catalog, rng):
        """Test that the minor criterion agrees with the kernel dimension on every entry up to dim 8"""
        for alg in verified_catalog(max_dim=8):
            chi = index(alg).index
            minors = regular_set_minors(alg)
            for _ in range(50):
                f = Functional(tuple(rng.choice((0, 0, 1, -2)) for _ in range(alg.dim)))
                assert is_regular_by_minors(minors, f) == kernel_at(alg, f, chi).is_regular, (alg.label(), f)

    def test_pfaffian_products_are_the_minors(self):
        """Test Pfaffian products against every r x r minor on random skew matrices of linear forms"""
        rng = random.Random(33)

        def up_to_sign(p):
            return -p if p.leading_term()[1] < 0 else p

        checked = 0
        while checked < 50:
            n = rng.randint(2, 5)
            rows = [[Polynomial.zero() for _ in range(n)] for _ in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    form = Polynomial.zero()
                    for s in (1, 2, 3):
                        form = form + rng.choice((-1, 0, 0, 1)) * Polynomial.variable(s)
                    rows[i][j], rows[j][i] = form, -form
            r = bareiss_rank(rows)
            if r == 0:
                continue
            checked += 1
            brute = set()
            for picked_rows in itertools.combinations(range(n), r):
                for picked_cols in itertools.combinations(range(n), r):
                    minor = bareiss_determinant([[rows[i][j] for j in picked_cols] for i in picked_rows])
                    if minor:
                        brute.add(up_to_sign(minor))
            pfaffians = [p for p in pfaffian_table(rows, r).values() if p]
            products = {up_to_sign(a * b) for a, b in itertools.combinations_with_replacement(pfaffians, 2)}
            assert r % 2 == 0
            assert brute == products
            if r + 2 <= n:
                assert not any(pfaffian_table(rows, r + 2).values())

    def test_abelian_has_no_minors(self):
        """Test that rank 0 means every functional is regular"""
        minors = regular_set_minors(StructureConstants.abelian(3))
        assert minors == []
        assert is_regular_by_minors(minors, Functional.zero(3))

    def test_guard(self):
        """Test that enumeration is refused above the guard"""
        with pytest.raises(GuardExceededError):
            regular_set_minors(construct("L", n=6), guard=1)


class TestCentralExtension:
    def test_regular_extends_by_any_multiple_of_the_center(self, verified_catalog):
        """Test that g regular on G makes g + rho c* regular on G + C"""
        for alg in verified_catalog(max_dim=9):
            g = find_regular(alg, seed=1).functional
            extended = direct_sum_with_abelian(alg, 1)
            chi = index(extended).index
            for rho in (0, 1, -2):
                assert kernel_at(extended, Functional(g.p + (rho,)), chi).is_regular, (alg.label(), rho)

    def test_regular_on_extension_restricts(self, verified_catalog, rng):
        """Test that f is regular on G + C exactly when its restriction to G is"""
        for alg in verified_catalog(max_dim=8):
            chi = index(alg).index
            extended = direct_sum_with_abelian(alg, 1)
            for _ in range(10):
                f = Functional(tuple(rng.choice((0, 0, 1, -1, 3)) for _ in range(alg.dim + 1)))
                restricted = Functional(f.p[:-1])
                assert kernel_at(extended, f, chi + 1).is_regular == kernel_at(alg, restricted, chi).is_regular

    def test_nonzero_multiples_stay_regular(self, verified_catalog):
        """Test that c f is regular whenever f is and c != 0"""
        for alg in verified_catalog(max_dim=9):
            report = find_regular(alg, seed=2)
            for c in (2, -1, Fraction(-1, 3)):
                assert kernel_at(alg, report.functional.scale(c), report.algebra_index).is_regular
        assert not kernel_at(construct("L", n=5), Functional.zero(5)).is_regular
