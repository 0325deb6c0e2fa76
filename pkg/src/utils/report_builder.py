import json
import logging
from typing import Optional

from src.config.settings import (
    CHARACTERISTIC_SAMPLES,
    DEFAULT_SEED,
    FAMILY_SAMPLES,
    RANDOMIZED_RANK_BOUND,
    RANDOMIZED_RANK_TRIALS,
    REPORT_SCHEMA_VERSION,
)
from src.utils.index_engine import index
from src.utils.lie_algebra import (
    StructureConstants,
    center,
    characteristic_sequence,
    is_filiform,
    is_quasi_filiform,
    is_solvable,
    nilindex,
    validate,
)
from src.utils.polynomial import format_rational
from src.utils.regular_vectors import (
    Functional,
    FunctionalFamily,
    find_regular,
    kernel_at,
    verify_family,
)

logger = logging.getLogger(__name__)


def _algebra_section(alg: StructureConstants) -> dict:
    section = {
        "name": alg.name,
        "dim": alg.dim,
        "bracket_terms": len(alg.entries),
    }
    for key in ("family", "kind", "status", "basis_note", "params", "notes"):
        if key in alg.metadata:
            section[key] = alg.metadata[key]
    return section


def build_report(alg: StructureConstants,
                 method: str = "symbolic",
                 seed: int = DEFAULT_SEED,
                 trials: int = RANDOMIZED_RANK_TRIALS,
                 bound: int = RANDOMIZED_RANK_BOUND,
                 samples: int = CHARACTERISTIC_SAMPLES,
                 functional: Optional[Functional] = None,
                 find: bool = False,
                 family: Optional[FunctionalFamily] = None,
                 family_samples: int = FAMILY_SAMPLES) -> dict:
    """Everything known about one algebra as a JSON-ready document.

    Index and regularity need a valid algebra; for an invalid one the index is
    still given, computed without the Jacobi check and marked unvalidated.
    """
    validation = validate(alg)
    report = {
        "schema": REPORT_SCHEMA_VERSION,
        "algebra": _algebra_section(alg),
        "validation": {
            "valid": validation.is_valid,
            "violations": [str(v) for v in validation.violations],
        },
    }

    if validation.is_valid:
        steps = nilindex(alg)
        nilpotent = steps is not None
        report["structure"] = {
            "nilpotent": nilpotent,
            "nilindex": steps,
            "solvable": is_solvable(alg),
            "center_dim": center(alg).dim,
            "filiform": is_filiform(alg) if nilpotent else False,
            "quasi_filiform": is_quasi_filiform(alg) if nilpotent else False,
        }
        if nilpotent and not alg.is_abelian():
            sequence = characteristic_sequence(alg, samples=samples, seed=seed)
            report["characteristic_sequence"] = {
                "parts": list(sequence.parts),
                "witness": [format_rational(v) for v in sequence.witness],
                "samples": sequence.samples,
                "seed": sequence.seed,
            }
        else:
            report["characteristic_sequence"] = None

    chi = index(alg, method=method, trials=trials, bound=bound, seed=seed, require_valid=validation.is_valid)
    report["index"] = chi.as_dict()
    report["frobenius"] = chi.index == 0

    if validation.is_valid:
        if functional is not None:
            report["regular"] = kernel_at(alg, functional, chi.index).as_dict()
        elif find:
            report["regular"] = find_regular(alg, seed=seed).as_dict()
        if family is not None:
            report["family"] = verify_family(alg, family, samples=family_samples, seed=seed).as_dict()
    logger.info(f"Built report for {alg.label()}")
    return report


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def render_text(report: dict) -> str:
    alg = report["algebra"]
    lines = [f"{alg['name'] or 'algebra'} (dim {alg['dim']}, {alg['bracket_terms']} bracket terms)"]
    if alg.get("status"):
        lines.append(f"  status: {alg['status']}")
    if alg.get("basis_note"):
        lines.append(f"  basis: {alg['basis_note']}")

    validation = report["validation"]
    if validation["valid"]:
        lines.append("Jacobi identity holds")
    else:
        lines.append(f"Jacobi identity fails ({len(validation['violations'])} violations)")
        lines.extend(f"  {v}" for v in validation["violations"][:5])

    structure = report.get("structure")
    if structure:
        if structure["nilpotent"]:
            lines.append(f"nilpotent, nilindex {structure['nilindex']}")
        else:
            lines.append("solvable, not nilpotent" if structure["solvable"] else "not solvable")
        lines.append(f"center dim {structure['center_dim']}")
        if structure["filiform"]:
            lines.append("filiform")
        if structure["quasi_filiform"]:
            lines.append("quasi-filiform")
    sequence = report.get("characteristic_sequence")
    if sequence:
        parts = ", ".join(map(str, sequence["parts"]))
        lines.append(f"characteristic sequence ({parts}) (sampled, {sequence['samples']} samples, seed {sequence['seed']})")

    chi = report["index"]
    line = f"rank {chi['rank']}, index {chi['index']} ({chi['method']}"
    if chi["seed"] is not None:
        line += f", {chi['trials']} trials, seed {chi['seed']}"
    line += ")"
    if not chi["validated"]:
        line += " [unchecked: Jacobi fails]"
    lines.append(line)
    if report["frobenius"]:
        lines.append("Frobenius")

    regular = report.get("regular")
    if regular:
        verdict = "regular" if regular["is_regular"] else "not regular"
        text = f"functional ({', '.join(regular['functional'])}): kernel dim {regular['kernel_dim']}, {verdict}"
        if regular["attempts"] is not None:
            text += f" (found after {regular['attempts']} attempts, seed {regular['seed']})"
        lines.append(text)
    family = report.get("family")
    if family:
        lines.append(f"family [{family['family']}]: {family['verdict']} "
                     f"({family['samples']} samples per branch, seed {family['seed']})")
        for branch in family["branches"]:
            lines.append(f"  {branch['branch']}: {branch['verdict']}")
        if family["overlaps"]:
            lines.append(f"  coordinates in several roles: {family['overlaps']}")
    return "\n".join(lines) + "\n"
