import json

from src.utils.catalog import construct
from src.utils.lie_algebra import StructureConstants
from src.utils.regular_vectors import Functional, FunctionalFamily
from src.utils.report_builder import build_report, render_text, to_json


class TestBuildReport:
    def test_nilpotent_report(self):
        """Test the structure section of a filiform algebra"""
        report = build_report(construct("L", n=6), seed=1, samples=4)
        assert report["validation"] == {"valid": True, "violations": []}
        structure = report["structure"]
        assert structure["nilpotent"] and structure["filiform"]
        assert not structure["quasi_filiform"]
        assert structure["nilindex"] == 5
        assert structure["center_dim"] == 1
        assert report["characteristic_sequence"]["parts"] == [5, 1]
        assert report["index"]["index"] == 4
        assert report["frobenius"] is False

    def test_catalog_metadata_carried(self):
        """Test that catalog metadata appears in the algebra section"""
        section = build_report(construct("Q", n=6), samples=2)["algebra"]
        assert section["name"] == "Q[n=6]"
        assert section["status"] == "verified"
        assert section["params"] == {"n": "6"}

    def test_solvable_report(self):
        """Test that r2 is reported solvable, Frobenius and without a sequence"""
        report = build_report(construct("r2"))
        assert report["structure"]["solvable"]
        assert not report["structure"]["nilpotent"]
        assert report["characteristic_sequence"] is None
        assert report["frobenius"] is True

    def test_invalid_algebra(self):
        """Test that an invalid algebra still gets an unvalidated index"""
        broken = StructureConstants.from_brackets(3, [(1, 2, 3, 1), (1, 3, 1, 1)])
        report = build_report(broken, find=True)
        assert not report["validation"]["valid"]
        assert "structure" not in report
        assert report["index"]["validated"] is False
        assert "regular" not in report

    def test_regularity_sections(self):
        """Test that functional and family sections are added on request"""
        alg = construct("L", n=5)
        checked = build_report(alg, functional=Functional.dual(5, 5), samples=2)
        assert checked["regular"]["is_regular"]
        found = build_report(alg, find=True, samples=2)
        assert found["regular"]["attempts"] == 4
        family = FunctionalFamily.from_text("free=1,2;nonzero=3-5", 5)
        verified = build_report(alg, family=family, family_samples=4, samples=2)
        assert verified["family"]["verdict"] == "supported"


class TestRendering:
    def test_json_is_stable(self):
        """Test that JSON output is sorted and newline-terminated"""
        text = to_json(build_report(construct("F5_2"), samples=2))
        assert text.endswith("}\n")
        assert json.loads(text)["index"]["index"] == 1
        assert text == to_json(json.loads(text))

    def test_text_report(self):
        """Test the human-readable summary lines"""
        text = render_text(build_report(construct("L", n=6), seed=1, samples=4))
        assert text.startswith("L[n=6] (dim 6, 4 bracket terms)\n")
        assert "Jacobi identity holds" in text
        assert "nilpotent, nilindex 5" in text
        assert "filiform" in text
        assert "rank 2, index 4 (symbolic)" in text

    def test_text_report_invalid(self):
        """Test that invalid algebras are marked in the text report"""
        broken = StructureConstants.from_brackets(3, [(1, 2, 3, 1), (1, 3, 1, 1)], name="broken")
        text = render_text(build_report(broken))
        assert "Jacobi identity fails (1 violations)" in text
        assert "[unchecked: Jacobi fails]" in text
