import pytest

from coarsekit import groups
from coarsekit.group_checks import (
    compare_left_right,
    dihedral_demo,
    fc_test,
    multiplication_bornologous_check,
)

Z = groups.Z
Z2 = groups.free_abelian(2)
DIH = groups.DIH
F2 = groups.free_group(2)
Z6 = groups.cyclic(6)

CATALOG = [(Z, 8), (Z2, 8), (Z6, 8), (DIH, 8), (F2, 6)]


class TestFiniteConjugacyTest:
    @pytest.mark.parametrize("spec", [Z, Z2, Z6])
    def test_passes_on_abelian(self, spec):
        cert = fc_test(spec, 8)
        assert cert.verdict == "PASS"
        assert cert.data["largest_class"] == 1

    def test_fails_on_dihedral_with_reflection_witness(self):
        cert = fc_test(DIH, 8)
        assert cert.verdict == "FAIL"
        assert cert.data["witness"] == "t"
        trace = cert.data["trace"]
        for r in range(1, 5):
            assert trace[str(r)] == 2 * r + 1

    def test_fails_on_free_group(self):
        cert = fc_test(F2, 6)
        assert cert.verdict == "FAIL"
        assert cert.data["witness"] == "a"


class TestCompareLeftRight:
    @pytest.mark.parametrize("spec", [Z, Z2, Z6])
    def test_equal_on_abelian(self, spec):
        assert compare_left_right(spec, 8).verdict == "EQUAL"

    def test_differ_on_dihedral(self):
        cert = compare_left_right(DIH, 8)
        assert cert.verdict == "DIFFER"
        assert cert.data["witness"] == "t"
        assert cert.data["failing_structure"] == "C_l(DihInf)"
        assert cert.data["bounded_structure"] == "C_r(DihInf)"
        assert set(cert.data["bounded_witness"]) == {"1", "t"}
        trace = cert.data["growing_trace"]
        values = [trace[str(r)] for r in range(9)]
        assert values == [2 * r + 2 for r in range(9)]

    def test_differ_on_free_group(self):
        assert compare_left_right(F2, 6).verdict == "DIFFER"


class TestMultiplicationBornologous:
    def test_passes_on_abelian(self):
        cert = multiplication_bornologous_check(Z, 8)
        assert cert.verdict == "PASS"
        assert all(entry["bounded"] for entry in cert.data["checked"])

    def test_fails_on_dihedral(self):
        cert = multiplication_bornologous_check(DIH, 8)
        assert cert.verdict == "FAIL"
        assert cert.data["cross_check_agrees"] is True
        assert cert.data["left_right_verdict"] == "DIFFER"
        trace = cert.data["growing_trace"]
        assert trace["8"] > trace["0"]

    def test_cross_check_always_agrees(self):
        for spec, radius in CATALOG:
            cert = multiplication_bornologous_check(spec, radius)
            assert cert.data["cross_check_agrees"] is True, spec.label()


class TestVerdictConsistency:
    def test_three_checks_agree_on_catalog(self):
        """FC-ness, structure equality, and bornologous multiplication are
        three windows onto the same dichotomy."""
        for spec, radius in CATALOG:
            fc = fc_test(spec, radius).verdict
            lr = compare_left_right(spec, radius).verdict
            mb = multiplication_bornologous_check(spec, radius).verdict
            assert (fc == "PASS") == (lr == "EQUAL") == (mb == "PASS"), spec.label()


class TestDihedralDemo:
    def test_demo_passes(self):
        cert = dihedral_demo(8)
        assert cert.verdict == "PASS"

    def test_demo_pieces(self):
        cert = dihedral_demo(8)
        data = cert.data
        assert data["equivalence_onto_left"]["verdict"] == "PASS"
        assert data["equivalence_onto_right"]["verdict"] == "PASS"
        assert data["left_vs_right"]["verdict"] == "DIFFER"
        assert data["conjugacy_window_t"]["4"] == 9
        assert data["conjugacy_window_x"]["4"] == 2
        assert all(entry["agree"] for entry in data["pullback_agreement"])
        assert data["exact_pullback"].startswith("not applicable")
