"""Published index values and regular families, and the run that checks them.

Each row names a catalog entry, its parameters, the claimed value and the
claim it comes from. Rows on entries that fail the Jacobi identity are
reported as flagged. Index claims that contradict skew-rank parity are
disputed, and so are family claims carrying an exact witness against them.
Rows without a claim are derived. None of those can fail a run.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from src.config.settings import DEFAULT_SEED, FAMILY_SAMPLES
from src.utils.catalog import UNVERIFIED, build, status_of
from src.utils.index_engine import index
from src.utils.regular_vectors import Functional, FunctionalFamily, kernel_at, verify_family

logger = logging.getLogger(__name__)

MATCH = "match"
MISMATCH = "mismatch"
FLAGGED = "flagged"
DISPUTED = "disputed"
DERIVED = "derived"
STATUSES = (MATCH, MISMATCH, FLAGGED, DISPUTED, DERIVED)

SUPPORTED = "supported"
REFUTED_SUFFICIENCY = "refuted-sufficiency"
REFUTED_NECESSITY = "refuted-necessity-sample"

# published claims, one name per result
MODEL_FILIFORM = "model filiform L_n"
GRADED_FILIFORM = "filiform Q_n"
FILIFORM_SMALL = "filiform, dimension at most 5"
FILIFORM_SIX = "filiform, dimension 6"
FILIFORM_SEVEN = "filiform, dimension 7"
QUASI_INDEX = "graded quasi-filiform index"
QUASI_REGULAR = "graded quasi-filiform regular functionals"
SOLVABLE_L = "solvable, nilradical L_n"
SOLVABLE_Q = "solvable, nilradical Q_2n"
BASE_CASES = "abelian and Frobenius base cases"

Params = Tuple[Tuple[str, Any], ...]


def _p(**params) -> Params:
    return tuple(params.items())


@dataclass(frozen=True)
class Expectation:
    name: str
    params: Params
    expected_index: Optional[int]
    source: str


@dataclass(frozen=True)
class Dispute:
    """An exact functional contradicting a family claim.

    `regular` is what kernel_at must report at `witness` for the dispute to stand.
    """
    reason: str
    witness: Tuple[int, ...]
    regular: bool


@dataclass(frozen=True)
class FamilyExpectation:
    name: str
    params: Params
    family: str
    expected_verdict: Optional[str]
    source: str
    dispute: Optional[Dispute] = None


@dataclass(frozen=True)
class Outcome:
    kind: str  # index | family
    label: str
    source: str
    status: str
    expected: Any = None
    computed: Any = None
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "label": self.label,
            "source": self.source,
            "status": self.status,
            "expected": self.expected,
            "computed": self.computed,
            "detail": self.detail,
        }

    def __str__(self) -> str:
        text = f"[{self.status}] {self.label}: {self.kind} expected {self.expected}, computed {self.computed}"
        if self.detail:
            text += f" ({self.detail})"
        return f"{text} -- {self.source}"


@dataclass
class ExpectationRun:
    outcomes: List[Outcome] = field(default_factory=list)
    method: str = "symbolic"
    samples: int = FAMILY_SAMPLES
    seed: int = DEFAULT_SEED

    @property
    def passed(self) -> bool:
        return not any(o.status == MISMATCH for o in self.outcomes)

    def counts(self) -> Dict[str, int]:
        tally = Counter(o.status for o in self.outcomes)
        return {status: tally.get(status, 0) for status in STATUSES}

    def sources(self) -> List[str]:
        seen: Dict[str, None] = {}
        for outcome in self.outcomes:
            seen.setdefault(outcome.source, None)
        return list(seen)

    def by_source(self) -> Dict[str, Dict[str, int]]:
        """Status counts per claim, in the order the claims first appear"""
        tallies = {source: Counter() for source in self.sources()}
        for outcome in self.outcomes:
            tallies[outcome.source][outcome.status] += 1
        return {source: {status: tally.get(status, 0) for status in STATUSES}
                for source, tally in tallies.items()}

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "method": self.method,
            "samples": self.samples,
            "seed": self.seed,
            "counts": self.counts(),
            "by_source": self.by_source(),
            "outcomes": [o.as_dict() for o in self.outcomes],
        }


def _odd_range(lo: int, hi: int) -> range:
    return range(lo if lo % 2 else lo + 1, hi + 1, 2)


def _max_r(n: int) -> int:
    return 2 * ((n - 1) // 2) - 1


def expected_results() -> List[Expectation]:
    rows: List[Expectation] = []
    add = rows.append

    for n in range(3, 13):
        add(Expectation("L", _p(n=n), n - 2, MODEL_FILIFORM))
    for n in range(4, 13, 2):
        add(Expectation("Q", _p(n=n), 2, GRADED_FILIFORM))

    for name, value in (("F3_1", 1), ("F4_1", 2), ("F5_1", 3), ("F5_2", 1)):
        add(Expectation(name, (), value, FILIFORM_SMALL))
    add(Expectation("F6_1", (), 4, FILIFORM_SIX))
    for name in ("F6_2", "F6_3", "F6_4", "F6_5"):
        add(Expectation(name, (), 2, FILIFORM_SIX))
    add(Expectation("F7_8", (), 5, FILIFORM_SEVEN))
    add(Expectation("F7_4", (), 1, FILIFORM_SEVEN))
    for name in ("F7_2", "F7_3", "F7_5", "F7_6", "F7_7"):
        add(Expectation(name, (), 3, FILIFORM_SEVEN))
    for alpha in (1, 2, 5):
        add(Expectation("F7_1", _p(alpha=alpha), 1, FILIFORM_SEVEN))
    add(Expectation("F7_1", _p(alpha=0), 3, FILIFORM_SEVEN))
    # alpha = -1 is excluded from both stated cases
    add(Expectation("F7_1", _p(alpha=-1), None, FILIFORM_SEVEN))

    for n in (5, 6):
        for r in _odd_range(3, _max_r(n)):
            add(Expectation("L(n,r)", _p(n=n, r=r), None, QUASI_INDEX))
    add(Expectation("T(n,n-3)", _p(n=6), 2, QUASI_INDEX))
    for n in range(7, 12):
        add(Expectation("Lsplit(n)", _p(n=n), n - 2, QUASI_INDEX))
        if n % 2 == 0:
            add(Expectation("T(n,n-3)", _p(n=n), 2, QUASI_INDEX))
            for r in _odd_range(3, n - 3):
                add(Expectation("L(n,r)", _p(n=n, r=r), n - r - 1, QUASI_INDEX))
        else:
            add(Expectation("Qsplit(n)", _p(n=n), 3, QUASI_INDEX))
            add(Expectation("T(n,n-4)", _p(n=n), 3, QUASI_INDEX))
            add(Expectation("L(n,r)", _p(n=n, r=n - 2), 3, QUASI_INDEX))
            for r in _odd_range(3, n - 4):
                add(Expectation("L(n,r)", _p(n=n, r=r), n - r - 1, QUASI_INDEX))
                add(Expectation("Q(n,r)", _p(n=n, r=r), 3, QUASI_INDEX))
    add(Expectation("eps(7,3)", (), 3, QUASI_INDEX))
    add(Expectation("eps1(9,5)", (), 3, QUASI_INDEX))
    add(Expectation("eps2(9,5)", (), 2, QUASI_INDEX))
    add(Expectation("eps3(9,5)", (), 2, QUASI_INDEX))

    for n in range(4, 10):
        for beta in (Fraction(0), Fraction(1), Fraction(1, 2), Fraction(-(n - 2))):
            add(Expectation("tau(n+1,1)", _p(n=n, beta=beta), n - 1, SOLVABLE_L))
        add(Expectation("tau(n+1,2)", _p(n=n), n - 1, SOLVABLE_L))
        add(Expectation("tau(n+1,3)", _p(n=n), n - 1, SOLVABLE_L))
        add(Expectation("tau(n+2,1)", _p(n=n), n - 2, SOLVABLE_L))

    for n in range(3, 6):
        for lam2 in (Fraction(0), Fraction(1), Fraction(3, 2)):
            add(Expectation("tau(2n+1,lam2)", _p(n=n, lam2=lam2), 1, SOLVABLE_Q))
        for eps in (-1, 0, 1):
            add(Expectation("tau(2n+1,2-n,eps)", _p(n=n, eps=eps), 1, SOLVABLE_Q))
        add(Expectation("tau(2n+1,lam5..)", _p(n=n, lams=(0,) * (n - 2)), 1, SOLVABLE_Q))
        if n > 3:
            lams = tuple(range(1, n - 1))
            add(Expectation("tau(2n+1,lam5..)", _p(n=n, lams=lams), 1, SOLVABLE_Q))

    for n in range(1, 11):
        add(Expectation("abelian", _p(n=n), n, BASE_CASES))
    add(Expectation("r2", (), 0, BASE_CASES))
    return rows


def _each_nonzero(indices) -> str:
    return ";".join(f"nonzero={i}" for i in indices)


def _at(dim: int, *coords: int) -> Tuple[int, ...]:
    """Witness with 1 at the given coordinates and 0 elsewhere"""
    return tuple(1 if i in coords else 0 for i in range(1, dim + 1))


def expected_regular_families() -> List[FamilyExpectation]:
    """Regular families as published, all claimed supported.

    Quasi-filiform rows are on the shifted basis, so a printed p_k is coordinate k+1.
    """
    rows: List[FamilyExpectation] = []
    add = rows.append

    for n in range(3, 13):
        add(FamilyExpectation("L", _p(n=n), f"free=1,2;nonzero=3-{n}", SUPPORTED, MODEL_FILIFORM))
    add(FamilyExpectation("Q", _p(n=4), "free=1-3;nonzero=4", SUPPORTED, GRADED_FILIFORM,
                          Dispute("Q_4 is L_4, regular as soon as p3 != 0", _at(4, 3), True)))
    for n in range(6, 13, 2):
        add(FamilyExpectation("Q", _p(n=n), f"free=1-{n - 1};nonzero={n}", SUPPORTED, GRADED_FILIFORM))

    for name, top in (("F3_1", 3), ("F4_1", 4), ("F5_1", 5)):
        add(FamilyExpectation(name, (), f"free=1,2;nonzero=3-{top}", SUPPORTED, FILIFORM_SMALL))
    add(FamilyExpectation("F5_2", (), "free=1,2;nonzero=3-5", SUPPORTED, FILIFORM_SMALL,
                          Dispute("read as one of p3..p5 nonzero; regular needs p5 != 0", _at(5, 3), False)))
    add(FamilyExpectation("F5_2", (), "free=1,2;" + _each_nonzero((3, 4, 5)), SUPPORTED, FILIFORM_SMALL,
                          Dispute("read as all of p3..p5 nonzero; p5 alone is enough", _at(5, 5), True)))

    add(FamilyExpectation("F6_1", (), "free=1,2;nonzero=3-6", SUPPORTED, FILIFORM_SIX))
    add(FamilyExpectation("F6_2", (), "free=1,2,5;tied=3,4,5", SUPPORTED, FILIFORM_SIX,
                          Dispute("regular needs p6 != 0, which the family never sets", _at(6, 3, 4, 5), False)))
    add(FamilyExpectation("F6_3", (), "free=1,2;nonzero=3-6", SUPPORTED, FILIFORM_SIX,
                          Dispute("regular needs p6 != 0", _at(6, 3), False)))
    add(FamilyExpectation("F6_4", (), "free=1-5;zero=6", SUPPORTED, FILIFORM_SIX))
    add(FamilyExpectation("F6_5", (), "free=1,2;nonzero=3-6", SUPPORTED, FILIFORM_SIX,
                          Dispute("regular needs p5 or p6 nonzero", _at(6, 3), False)))

    add(FamilyExpectation("F7_1", _p(alpha=0), "free=1-5;tied=6,7", SUPPORTED, FILIFORM_SEVEN))
    add(FamilyExpectation("F7_1", _p(alpha=1), _each_nonzero(range(1, 7)), SUPPORTED, FILIFORM_SEVEN))
    add(FamilyExpectation("F7_2", (), "free=1,2;tied!=4,5,6", SUPPORTED, FILIFORM_SEVEN))
    add(FamilyExpectation("F7_3", (), "free=1-4", SUPPORTED, FILIFORM_SEVEN))
    add(FamilyExpectation("F7_4", (), "free=1,2,5-7;zero=3,4", SUPPORTED, FILIFORM_SEVEN))
    add(FamilyExpectation("F7_5", (), "free=1-4;tied=5,6", SUPPORTED, FILIFORM_SEVEN,
                          Dispute("the p = 0 branch has rank 2", _at(7, 1, 2, 3, 4), False)))
    add(FamilyExpectation("F7_6", (), "free=1-3;tied=4,5", SUPPORTED, FILIFORM_SEVEN,
                          Dispute("every member has rank 2", _at(7, 3, 4, 5), False)))
    add(FamilyExpectation("F7_7", (), "free=1-4;tied=6,7", SUPPORTED, FILIFORM_SEVEN,
                          Dispute("the p = 0 branch has rank 2", _at(7, 1, 2, 3, 4), False)))
    add(FamilyExpectation("F7_8", (), "free=1,2;nonzero=3-7", SUPPORTED, FILIFORM_SEVEN))

    for n in (6, 8, 10):
        add(FamilyExpectation("T(n,n-3)", _p(n=n), f"free=1-{n - 2},{n};nonzero={n - 1}", SUPPORTED,
                              QUASI_REGULAR))
    for n in (7, 9, 11):
        family = f"free=1-{n - 2},{n};nonzero={n - 1}"
        add(FamilyExpectation("T(n,n-4)", _p(n=n), family, SUPPORTED, QUASI_REGULAR))
        for r in _odd_range(3, n - 5):
            add(FamilyExpectation("Q(n,r)", _p(n=n, r=r), family, SUPPORTED, QUASI_REGULAR))
        add(FamilyExpectation("Q(n,r)", _p(n=n, r=n - 4), family, SUPPORTED, QUASI_REGULAR,
                              Dispute(f"printed p{n - 3} and p{n - 1} give full rank with p{n - 2} = 0",
                                      _at(n, n - 2, n), True)))
    for n in range(7, 12):
        for r in _odd_range(3, min(_max_r(n), n - 3)):
            add(FamilyExpectation("L(n,r)", _p(n=n, r=r),
                                  f"free=1-{r + 1};nonzero={n};nonzero={r + 2}-{n - 1}", SUPPORTED, QUASI_REGULAR))
    return rows


def _label(name: str, params: Params) -> str:
    if not params:
        return name
    return f"{name}[{', '.join(f'{k}={v}' for k, v in params)}]"


def check_index(expectation: Expectation, method: str = "symbolic") -> Outcome:
    alg = build(expectation.name, dict(expectation.params), warn=False)
    label = alg.name or _label(expectation.name, expectation.params)
    expected = expectation.expected_index
    if status_of(alg) == UNVERIFIED:
        computed = index(alg, method=method, require_valid=False).index
        return Outcome("index", label, expectation.source, FLAGGED, expected, computed,
                       "fails the Jacobi identity as transcribed; value describes the skew form only")
    computed = index(alg, method=method).index
    if expected is None:
        return Outcome("index", label, expectation.source, DERIVED, None, computed, "no published value")
    if (alg.dim - expected) % 2:
        return Outcome("index", label, expectation.source, DISPUTED, expected, computed,
                       f"dim {alg.dim} minus {expected} is odd, impossible for a skew form")
    if computed == expected:
        return Outcome("index", label, expectation.source, MATCH, expected, computed)
    logger.error(f"{label}: expected index {expected}, computed {computed} ({expectation.source})")
    return Outcome("index", label, expectation.source, MISMATCH, expected, computed)


def check_family(expectation: FamilyExpectation, samples: int = FAMILY_SAMPLES,
                 seed: int = DEFAULT_SEED) -> Outcome:
    alg = build(expectation.name, dict(expectation.params), warn=False)
    label = f"{alg.name} {{{expectation.family}}}"
    expected = expectation.expected_verdict
    source = expectation.source
    if status_of(alg) == UNVERIFIED:
        return Outcome("family", label, source, FLAGGED, expected, None,
                       "fails the Jacobi identity as transcribed; not sampled")
    family = FunctionalFamily.from_text(expectation.family, alg.dim)
    report = verify_family(alg, family, samples=samples, seed=seed)
    detail = "; ".join(f"{b.describe(family)}: {b.verdict}" for b in report.branches if b.verdict != SUPPORTED)

    dispute = expectation.dispute
    if dispute is not None:
        witness = kernel_at(alg, Functional(dispute.witness), report.algebra_index)
        shown = f"({', '.join(witness.functional.as_list())}) {'regular' if witness.is_regular else 'not regular'}"
        if witness.is_regular == dispute.regular:
            text = "; ".join(part for part in (dispute.reason, shown, detail) if part)
            return Outcome("family", label, source, DISPUTED, expected, report.verdict, text)
        logger.error(f"{label}: dispute does not hold, {shown} ({source})")
        return Outcome("family", label, source, MISMATCH, expected, report.verdict,
                       f"dispute does not hold: {shown}")

    if expected is None:
        return Outcome("family", label, source, DERIVED, None, report.verdict, detail)
    if report.verdict == expected:
        return Outcome("family", label, source, MATCH, expected, report.verdict, detail)
    logger.error(f"{label}: expected {expected}, observed {report.verdict} ({source})")
    return Outcome("family", label, source, MISMATCH, expected, report.verdict, detail)


def run_expectations(method: str = "symbolic", samples: int = FAMILY_SAMPLES, seed: int = DEFAULT_SEED,
                     families: bool = True) -> ExpectationRun:
    run = ExpectationRun(method=method, samples=samples, seed=seed)
    for expectation in expected_results():
        run.outcomes.append(check_index(expectation, method))
    if families:
        for expectation in expected_regular_families():
            run.outcomes.append(check_family(expectation, samples, seed))
    counts = run.counts()
    logger.info(f"Expectation run: {', '.join(f'{k} {v}' for k, v in counts.items())}")
    for source, tally in run.by_source().items():
        logger.debug(f"{source}: {', '.join(f'{k} {v}' for k, v in tally.items() if v)}")
    return run
