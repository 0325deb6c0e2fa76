import random
from pathlib import Path

import pytest
import sympy

from src.utils.catalog import VERIFIED, build, construct, status_of
from src.utils.expectations import expected_results
from src.utils.lie_algebra import change_basis, direct_sum

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

# small entries that pass the Jacobi identity, used as building blocks
VERIFIED_BLOCKS = [
    ("abelian", {"n": 1}),
    ("abelian", {"n": 2}),
    ("r2", {}),
    ("L", {"n": 3}),
    ("L", {"n": 4}),
    ("L", {"n": 5}),
    ("Q", {"n": 4}),
    ("Q", {"n": 6}),
    ("F5_2", {}),
    ("F6_2", {}),
    ("F6_4", {}),
    ("F7_4", {}),
]


def random_invertible(rng, n, density=0.3):
    """Product of sparse unit upper and unit lower triangular integer matrices (det 1)"""
    upper = [[int(i == j) for j in range(n)] for i in range(n)]
    lower = [[int(i == j) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if i < j and rng.random() < density:
                upper[i][j] = rng.choice((-2, -1, 1, 2))
            elif i > j and rng.random() < density:
                lower[i][j] = rng.choice((-2, -1, 1, 2))
    return [[sum(upper[i][k] * lower[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


@pytest.fixture
def rng():
    return random.Random(20240917)


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def invertible_sampler(rng):
    def sample(n):
        return random_invertible(rng, n)
    return sample


@pytest.fixture
def algebra_sampler(rng):
    """Random valid algebras: direct sums of verified blocks under a random change of basis"""
    def sample(max_dim=7):
        fitting = [(name, params) for name, params in VERIFIED_BLOCKS
                   if construct(name, **params).dim <= max_dim]
        name, params = rng.choice(fitting)
        alg = construct(name, **params)
        while rng.random() < 0.5:
            room = [(n, p) for n, p in fitting if construct(n, **p).dim + alg.dim <= max_dim]
            if not room:
                break
            other_name, other_params = rng.choice(room)
            alg = direct_sum(alg, construct(other_name, **other_params))
        return change_basis(alg, random_invertible(rng, alg.dim))
    return sample


@pytest.fixture
def to_sympy():
    """Polynomial -> sympy expression in symbols x1, x2, ..."""
    def convert(poly):
        expr = sympy.Integer(0)
        for monomial, coeff in poly.items():
            term = sympy.Rational(coeff.numerator, coeff.denominator)
            for var, exp in monomial:
                term *= sympy.Symbol(f"x{var}") ** exp
            expr += term
        return sympy.expand(expr)
    return convert


@pytest.fixture
def sympy_rank():
    def rank(rows):
        return sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in rows]).rank()
    return rank


@pytest.fixture(scope="session")
def verified_catalog():
    """Every catalog instance named by the index tables that passes the Jacobi identity"""
    instances = {}
    for row in expected_results():
        key = (row.name, row.params)
        if key not in instances:
            alg = build(row.name, dict(row.params), warn=False)
            if status_of(alg) == VERIFIED:
                instances[key] = alg

    def select(max_dim=None):
        return [alg for alg in instances.values() if max_dim is None or alg.dim <= max_dim]
    return select
