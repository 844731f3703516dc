"""Randomized algebraic identities behind the witness and star operators.

The four suite functions run a fixed number of seed-pinned cases each and
return that count; the acceptance checks call them as well.
"""

import random

from coarsekit import groups
from coarsekit.families import (
    controlled_to_family,
    family_to_controlled,
    finite_family,
    refines,
    side_witness,
    star,
    star_family,
)
from coarsekit.spaces import GroupSpace

DIH = groups.DIH
DS = GroupSpace(DIH)
CASES_PER_SUITE = 1000


def _random_family(rng, spec, space, mesh=3, max_members=3):
    pool = groups.ball(spec, mesh).elements
    members = []
    for _ in range(rng.randint(1, max_members)):
        size = rng.randint(1, 3)
        members.append(tuple(rng.sample(pool, size)))
    return finite_family(space, members)


def _translate_family(spec, space, fam, a, side):
    members = []
    for m in fam.members:
        if side == "left":
            members.append(tuple(groups.multiply(spec, a, u) for u in m))
        else:
            members.append(tuple(groups.multiply(spec, u, a) for u in m))
    return finite_family(space, members)


def run_translation_invariance_suite(seed: int = 0) -> int:
    """Left witnesses ignore left translation; right witnesses ignore right."""
    rng = random.Random(seed)
    shifts = groups.ball(DIH, 4).elements
    cases = 0
    for _ in range(CASES_PER_SUITE // 2):
        fam = _random_family(rng, DIH, DS)
        a = rng.choice(shifts)
        for side in ("left", "right"):
            base = set(side_witness(side, DIH, fam).elements)
            moved = _translate_family(DIH, DS, fam, a, side)
            assert set(side_witness(side, DIH, moved).elements) == base
            cases += 1
    return cases


def run_inversion_duality_suite(seed: int = 1) -> int:
    """The left witness of a family is the right witness of its inverse."""
    rng = random.Random(seed)
    cases = 0
    for _ in range(CASES_PER_SUITE):
        fam = _random_family(rng, DIH, DS)
        inverted = finite_family(
            DS, [tuple(groups.invert(DIH, u) for u in m) for m in fam.members]
        )
        left = set(side_witness("left", DIH, fam).elements)
        right = set(side_witness("right", DIH, inverted).elements)
        assert left == right
        cases += 1
    return cases


def run_orbit_star_suite(seed: int = 2) -> int:
    """Pulling a star back along an orbit map equals the star of pullbacks.

    Uses the translation orbit maps g -> g*x0, which cover the window, so
    preimages are computed from an explicit index.
    """
    rng = random.Random(seed)
    window = groups.ball(DIH, 3).elements
    bases = groups.ball(DIH, 2).elements
    cases = 0
    for _ in range(CASES_PER_SUITE):
        x0 = rng.choice(bases)
        # index over a window large enough to hold every preimage
        reach = groups.ball(DIH, 3 + groups.word_length(DIH, x0)).elements
        index = {}
        for g in reach:
            index.setdefault(groups.multiply(DIH, g, x0), []).append(g)

        def pre(points):
            out = []
            for y in points:
                out.extend(index.get(y, ()))
            return tuple(out)

        block = tuple(rng.sample(window, rng.randint(1, 3)))
        fam = _random_family(rng, DIH, DS)
        direct = pre(star(block, fam))
        pulled = star(pre(block), finite_family(DS, [pre(m) for m in fam.members]))
        assert set(direct) == set(pulled)
        cases += 1
    return cases


def run_round_trip_suite(seed: int = 3) -> int:
    """Families survive the trip through controlled sets up to star."""
    rng = random.Random(seed)
    cases = 0
    for _ in range(CASES_PER_SUITE):
        fam = _random_family(rng, DIH, DS)
        E = family_to_controlled(fam)
        back = controlled_to_family(E)
        again = family_to_controlled(back)
        assert set(E.pairs) <= set(again.pairs)
        assert refines(back, star_family(fam, fam))
        cases += 1
    return cases


class TestSuites:
    def test_translation_invariance(self):
        assert run_translation_invariance_suite() >= 1000

    def test_inversion_duality(self):
        assert run_inversion_duality_suite() >= 1000

    def test_orbit_star_identity(self):
        assert run_orbit_star_suite() >= 1000

    def test_round_trips(self):
        assert run_round_trip_suite() >= 1000


class TestSmallerInvariants:
    def test_abelian_witnesses_coincide(self):
        rng = random.Random(4)
        zs = GroupSpace(groups.Z)
        for _ in range(200):
            fam = _random_family(rng, groups.Z, zs)
            left = set(side_witness("left", groups.Z, fam).elements)
            right = set(side_witness("right", groups.Z, fam).elements)
            assert left == right

    def test_witness_contains_identity_and_inverses(self):
        rng = random.Random(5)
        for _ in range(200):
            fam = _random_family(rng, DIH, DS)
            w = set(side_witness("left", DIH, fam).elements)
            assert (0, 0) in w
            assert {groups.invert(DIH, g) for g in w} == w

    def test_star_grows_blocks(self):
        rng = random.Random(6)
        window = groups.ball(DIH, 3).elements
        for _ in range(200):
            fam = _random_family(rng, DIH, DS)
            block = tuple(rng.sample(window, rng.randint(1, 3)))
            assert set(block) <= set(star(block, fam))
