from fractions import Fraction
from unittest.mock import patch

import pytest

from src.utils.catalog import (
    PLAIN_BASIS_NOTE,
    SHIFTED_BASIS_NOTE,
    UNVERIFIED,
    VERIFIED,
    build,
    construct,
    get_entry,
    list_entries,
    status_of,
)
from src.utils.errors import CatalogError
from src.utils.lie_algebra import (
    StructureConstants,
    center,
    is_filiform,
    is_nilpotent,
    is_quasi_filiform,
    is_solvable,
    nilindex,
    validate,
)


def chain(n, first=1, last=None):
    """[x_first, x_k] = x_(k+1) for k = 2..last-1"""
    last = last or n
    return {(first, k, k + 1): 1 for k in range(2, last)}


class TestConstruct:
    def test_model_filiform(self):
        """Test that L_n is exactly the chain [x1, xi] = x(i+1)"""
        assert construct("L", n=5).entries == chain(5)

    def test_graded_filiform(self):
        """Test the alternating top brackets of Q_6"""
        expected = chain(6)
        expected.update({(2, 5, 6): -1, (3, 4, 6): 1})
        assert construct("Q", n=6).entries == expected

    def test_principal_family_shift(self):
        """Test that L(8,3) is the chain on x1..x7 plus [x2, x3] = x8"""
        expected = chain(8, last=7)
        expected[(2, 3, 8)] = 1
        alg = construct("L(n,r)", n=8, r=3)
        assert alg.entries == expected
        assert alg.metadata["basis_note"] == SHIFTED_BASIS_NOTE

    def test_split_family(self):
        """Test that Lsplit(n) is L_(n-1) plus a central vector"""
        alg = construct("Lsplit", n=6)
        assert alg.entries == chain(5)
        assert alg.dim == 6
        assert center(alg).dim == 2

    def test_parametric_filiform(self):
        """Test that F7_1 carries alpha into its brackets"""
        alg = construct("F7_1", alpha=Fraction(1, 2))
        assert alg.entries[(1, 6, 7)] == Fraction(1, 2)
        assert alg.entries[(2, 3, 5)] == Fraction(3, 2)

    def test_string_parameters(self):
        """Test that parameters may be given as text"""
        assert construct("tau(n+1,1)", n="4", beta="-1/2") == construct("tau(n+1,1)", n=4, beta=Fraction(-1, 2))
        lams = construct("tau(2n+1,lam5..)", n=4, lams="1,2")
        assert lams.metadata["params"] == {"n": "4", "lams": "1,2"}

    def test_default_lams(self):
        """Test that lams defaults to n-2 zeros"""
        alg = construct("tau(2n+1,lam5..)", n=4)
        assert alg.metadata["params"]["lams"] == "0,0"
        assert alg == construct("tau(2n+1,lam5..)", n=4, lams=(0, 0))

    def test_solvable_extension(self):
        """Test that tau(n+1,2) is solvable with nilradical L_n"""
        alg = construct("tau(n+1,2)", n=5)
        assert alg.dim == 6
        assert is_solvable(alg)
        assert not is_nilpotent(alg)
        assert {k: v for k, v in alg.entries.items() if k[1] <= 5} == chain(5)


class TestMetadata:
    def test_label_and_params(self):
        """Test that the label shows rendered parameters"""
        alg = construct("L(n,r)", n=9, r=5)
        assert alg.name == "L(n,r)[n=9, r=5]"
        assert alg.metadata["params"] == {"n": "9", "r": "5"}
        assert alg.metadata["family"] == "L(n,r)"
        assert alg.metadata["kind"] == "quasi-filiform"

    def test_plain_entries(self):
        """Test that unparameterised entries keep their bare name"""
        alg = construct("F6_3")
        assert alg.name == "F6_3"
        assert alg.metadata["basis_note"] == PLAIN_BASIS_NOTE

    def test_verified_status(self):
        """Test that valid transcriptions are marked verified"""
        for name, params in (("L", {"n": 7}), ("Q", {"n": 8}), ("F7_4", {}), ("eps(7,3)", {}),
                             ("Qsplit", {"n": 9}), ("T(n,n-3)", {"n": 8})):
            alg = construct(name, **params)
            assert alg.metadata["status"] == VERIFIED, name
            assert status_of(alg) == VERIFIED

    def test_unverified_status_warns(self):
        """Test that entries failing Jacobi are built, flagged and logged"""
        with patch('src.utils.catalog.logger') as mock_logger:
            alg = construct("F7_3")
            mock_logger.warning.assert_called_once()
        assert alg.metadata["status"] == UNVERIFIED
        assert not validate(alg).is_valid

    def test_quiet_build(self):
        """Test that warn=False logs flagged entries at debug level"""
        with patch('src.utils.catalog.logger') as mock_logger:
            build("F7_3", {}, warn=False)
            mock_logger.warning.assert_not_called()
            mock_logger.debug.assert_called_once()

    def test_status_of_plain_algebra(self):
        """Test that algebras from elsewhere are checked on the spot"""
        assert status_of(StructureConstants(3, {(1, 2, 3): 1})) == VERIFIED
        assert status_of(StructureConstants(3, {(1, 2, 3): 1, (1, 3, 1): 1})) == UNVERIFIED


class TestFamilies:
    @pytest.mark.parametrize("name", ["F5_1", "F5_2", "F6_1", "F6_2", "F6_3", "F6_4", "F6_5",
                                      "F7_2", "F7_4", "F7_5", "F7_6", "F7_7", "F7_8"])
    def test_filiform_entries(self, name):
        """Test that the verified filiform entries are filiform"""
        alg = construct(name)
        assert status_of(alg) == VERIFIED
        assert is_filiform(alg)

    @pytest.mark.parametrize("n", [4, 6, 9])
    def test_model_filiform_is_filiform(self, n):
        """Test that L_n is filiform for every n"""
        assert is_filiform(construct("L", n=n))

    @pytest.mark.parametrize("name,params", [
        ("Lsplit", {"n": 7}), ("Qsplit", {"n": 9}), ("L(n,r)", {"n": 8, "r": 5}),
        ("Q(n,r)", {"n": 9, "r": 3}), ("T(n,n-3)", {"n": 8}),
    ])
    def test_quasi_filiform_entries(self, name, params):
        """Test that the graded families are quasi-filiform of nilindex n - 2"""
        alg = construct(name, **params)
        assert is_quasi_filiform(alg)
        assert nilindex(alg) == alg.dim - 2

    @pytest.mark.parametrize("name,params,nil_dim", [
        ("tau(n+1,1)", {"n": 5, "beta": 1}, 5),
        ("tau(n+1,3)", {"n": 6}, 6),
        ("tau(n+2,1)", {"n": 5}, 5),
    ])
    def test_solvable_entries(self, name, params, nil_dim):
        """Test that the brackets extending L_n are solvable and not nilpotent"""
        alg = construct(name, **params)
        assert alg.dim > nil_dim
        assert is_solvable(alg)
        assert not is_nilpotent(alg)

    def test_every_entry_builds(self):
        """Test that every registered entry builds at its smallest parameters"""
        smallest = {
            "abelian": {"n": 1}, "L": {"n": 3}, "Q": {"n": 4}, "F7_1": {"alpha": 0},
            "Lsplit(n)": {"n": 4}, "Qsplit(n)": {"n": 7}, "L(n,r)": {"n": 5, "r": 3},
            "Q(n,r)": {"n": 7, "r": 3}, "T(n,n-3)": {"n": 6}, "T(n,n-4)": {"n": 7},
            "tau(n+1,1)": {"n": 3, "beta": 0}, "tau(n+1,2)": {"n": 3}, "tau(n+1,3)": {"n": 3},
            "tau(n+2,1)": {"n": 3}, "tau(2n+1,lam2)": {"n": 2, "lam2": 0},
            "tau(2n+1,2-n,eps)": {"n": 2, "eps": 1}, "tau(2n+1,lam5..)": {"n": 3},
        }
        for entry in list_entries():
            alg = build(entry.name, smallest.get(entry.name, {}), warn=False)
            assert alg.metadata["family"] == entry.name
            assert alg.metadata["status"] in (VERIFIED, UNVERIFIED)


class TestErrors:
    def test_unknown_name(self):
        """Test that an unknown entry is a catalog error"""
        with pytest.raises(CatalogError):
            get_entry("F8_1")

    def test_alias(self):
        """Test that short aliases resolve"""
        assert get_entry("Qsplit").name == "Qsplit(n)"

    @pytest.mark.parametrize("name,params", [
        ("L", {"n": 2}),
        ("Q", {"n": 7}),
        ("L(n,r)", {"n": 8, "r": 4}),
        ("L(n,r)", {"n": 8, "r": 7}),
        ("Q(n,r)", {"n": 9, "r": 7}),
        ("T(n,n-3)", {"n": 7}),
        ("tau(2n+1,2-n,eps)", {"n": 3, "eps": 2}),
        ("tau(2n+1,lam5..)", {"n": 4, "lams": "1"}),
        ("L", {}),
        ("L", {"n": 4, "m": 1}),
        ("L", {"n": "four"}),
        ("L", {"n": Fraction(7, 2)}),
    ])
    def test_out_of_range(self, name, params):
        """Test that parameters outside the family range are rejected"""
        with pytest.raises(CatalogError):
            construct(name, **params)

    def test_schema(self):
        """Test the parameter schema shown in listings"""
        assert get_entry("L(n,r)").schema() == "n:int, r:int"
        assert get_entry("r2").schema() == "-"
