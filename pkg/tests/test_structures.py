import pytest

from coarsekit import groups
from coarsekit.errors import PreconditionError
from coarsekit.families import (
    Counterexample,
    ParamFamily,
    Witness,
    constant_family,
    finite_family,
    translate_pair_family,
)
from coarsekit.spaces import GroupSpace
from coarsekit.structures import (
    LeftGroupStructure,
    RightGroupStructure,
    membership_window,
    random_shapes,
)

DIH = groups.DIH
ZS = GroupSpace(groups.Z)
DS = GroupSpace(DIH)
T = (0, 1)


class TestMembershipWindow:
    def test_consecutive_pairs_bounded(self):
        res = membership_window(LeftGroupStructure(groups.Z), translate_pair_family(ZS, 1, "right"), 8)
        assert isinstance(res, Witness)
        assert res.verdict == "PASS"
        assert set(res.elements) == {-1, 0, 1}
        assert set(res.trace.values()) == {3}

    def test_reflection_pairs_split_by_side(self):
        pf = translate_pair_family(DS, T, "left")  # members {g, t.g}
        left = membership_window(LeftGroupStructure(DIH), pf, 8)
        right = membership_window(RightGroupStructure(DIH), pf, 8)
        assert isinstance(left, Counterexample)
        assert left.verdict == "FAIL"
        assert isinstance(right, Witness)
        assert set(right.elements) == {(0, 0), T}

    def test_counterexample_trace_grows(self):
        pf = translate_pair_family(DS, T, "left")
        res = membership_window(LeftGroupStructure(DIH), pf, 8)
        values = [res.trace[r] for r in sorted(res.trace)]
        assert values == sorted(values)
        assert values[-1] > values[0]
        # the left witness of {g, t.g} collects conjugates g^-1 t g
        assert all(g in res.elements for g in groups.conjugacy_window(DIH, T, 4))

    def test_requires_monotone_family(self):
        def shrink(r):
            members = [(0, 1)] if r < 3 else [(0,)]
            return finite_family(ZS, members)

        pf = ParamFamily(tag="shrink", space=ZS, fn=shrink)
        with pytest.raises(PreconditionError):
            membership_window(LeftGroupStructure(groups.Z), pf, 5)

    def test_constant_family_passes(self):
        res = membership_window(
            LeftGroupStructure(groups.Z), constant_family(ZS, [(0, 5)]), 6
        )
        assert res.verdict == "PASS"
        assert set(res.elements) == {-5, 0, 5}


class TestStructureHelpers:
    def test_bounded_neighborhood_left(self):
        struct = LeftGroupStructure(DIH)
        nbhd = struct.bounded_neighborhood((0, 0), 1)
        assert set(nbhd) == set(groups.ball(DIH, 1).elements)

    def test_bounded_neighborhood_right(self):
        struct = RightGroupStructure(DIH)
        x = (1, 0)
        nbhd = set(struct.bounded_neighborhood(x, 1))
        # right neighborhoods multiply the mesh on the left
        for g in groups.ball(DIH, 1).elements:
            assert groups.multiply(DIH, g, x) in nbhd

    def test_default_battery_is_bounded(self):
        struct = LeftGroupStructure(DIH)
        for pf in struct.default_battery(seed=3, n_random=6):
            res = membership_window(struct, pf, 6)
            assert res.verdict == "PASS", pf.tag


class TestRandomShapes:
    def test_deterministic(self):
        a = random_shapes(DIH, seed=7, count=5)
        b = random_shapes(DIH, seed=7, count=5)
        assert a == b

    def test_seed_matters(self):
        a = random_shapes(DIH, seed=1, count=8)
        b = random_shapes(DIH, seed=2, count=8)
        assert a != b

    def test_mesh_bound(self):
        # shapes draw from Ball(mesh), so diameters stay within 2*mesh
        for shape in random_shapes(DIH, seed=0, count=10, mesh=2):
            assert 1 <= len(shape) <= 3
            for u in shape:
                assert groups.word_length(DIH, u) <= 2
                for v in shape:
                    diff = groups.multiply(DIH, groups.invert(DIH, u), v)
                    assert groups.word_length(DIH, diff) <= 4
