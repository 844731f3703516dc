"""Coarse structures evaluated on finite windows.

A structure here is a membership test for parametrized families: given the
family at each radius r <= R it produces a finite witness set whose size
trace either stabilizes (the family is uniformly bounded as far as the
window can tell) or keeps growing (a genuine counterexample at this scale).

Structures on a group's underlying set come in the left flavor (witnesses
u^-1*v) and the right flavor (witnesses u*v^-1).  A pullback structure
transports membership along a map into the space: a family belongs to it
when its preimage family is bounded in the structure on the source.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from . import groups
from .errors import PreconditionError, WindowOverflowError
from .families import (
    Counterexample,
    ParamFamily,
    Witness,
    member_witness,
    shape_translate_family,
    trace_stabilizes,
    translate_pair_family,
)
from .spaces import FiniteSpace, GroupSpace


class CoarseStructure:
    space: object
    label: str

    def __init__(self):
        self._contrib_cache: dict = {}

    def witness_group(self) -> groups.GroupSpec:
        raise NotImplementedError

    def member_contribution(self, member: tuple) -> frozenset:
        if member not in self._contrib_cache:
            self._contrib_cache[member] = frozenset(self._compute_contribution(member))
        return self._contrib_cache[member]

    def _compute_contribution(self, member: tuple):
        raise NotImplementedError

    def bounded_neighborhood(self, y, mesh: int) -> tuple:
        """A canonical bounded set containing y, one notch of mesh at a time."""
        raise NotImplementedError

    def default_battery(self, seed: int = 0, n_random: int = 32) -> list:
        raise NotImplementedError


class LeftGroupStructure(CoarseStructure):
    def __init__(self, spec: groups.GroupSpec):
        super().__init__()
        self.spec = spec
        self.space = GroupSpace(spec)
        self.label = f"C_l({spec.label()})"

    def witness_group(self) -> groups.GroupSpec:
        return self.spec

    def _compute_contribution(self, member: tuple):
        return member_witness("left", self.spec, member)

    def bounded_neighborhood(self, y, mesh: int) -> tuple:
        return self.space.ball_about(y, mesh, side="left")

    def default_battery(self, seed: int = 0, n_random: int = 32) -> list:
        fams = [translate_pair_family(self.space, s, "right") for s in groups.generators(self.spec)]
        fams += [
            shape_translate_family(self.space, shape, "left")
            for shape in random_shapes(self.spec, seed=seed, count=n_random)
        ]
        return fams


class RightGroupStructure(CoarseStructure):
    def __init__(self, spec: groups.GroupSpec):
        super().__init__()
        self.spec = spec
        self.space = GroupSpace(spec)
        self.label = f"C_r({spec.label()})"

    def witness_group(self) -> groups.GroupSpec:
        return self.spec

    def _compute_contribution(self, member: tuple):
        return member_witness("right", self.spec, member)

    def bounded_neighborhood(self, y, mesh: int) -> tuple:
        return self.space.ball_about(y, mesh, side="right")

    def default_battery(self, seed: int = 0, n_random: int = 32) -> list:
        fams = [translate_pair_family(self.space, s, "left") for s in groups.generators(self.spec)]
        fams += [
            shape_translate_family(self.space, shape, "right")
            for shape in random_shapes(self.spec, seed=seed, count=n_random)
        ]
        return fams


class PullbackStructure(CoarseStructure):
    """Structure on the target of a map: a family is bounded when its
    preimage family is bounded in the structure on the source."""

    def __init__(
        self,
        rule: Callable,
        source: CoarseStructure,
        space,
        source_slack: int = 4,
        label: str = "",
    ):
        super().__init__()
        self.rule = rule
        self.source = source
        self.space = space
        self.source_slack = source_slack
        self.label = label or f"pullback({source.label})"
        self._image_cache: dict = {}

    def witness_group(self) -> groups.GroupSpec:
        return self.source.witness_group()

    def _image(self, x):
        if x not in self._image_cache:
            self._image_cache[x] = self.rule(x)
        return self._image_cache[x]

    def preimage_member(self, member: tuple) -> tuple:
        target = set(member)
        radius = max((_extent(self.space, y) for y in member), default=0) + self.source_slack
        src_space = self.source.space
        hits = [x for x in src_space.window(radius) if self._image(x) in target]
        return tuple(sorted(hits, key=src_space.sort_key))

    def _compute_contribution(self, member: tuple):
        return self.source.member_contribution(self.preimage_member(member))

    def bounded_neighborhood(self, y, mesh: int) -> tuple:
        pre = self.preimage_member((y,))
        if not pre:
            raise WindowOverflowError(
                f"{self.label}: no preimage of {y!r} within the search window"
            )
        x0 = pre[0]
        nb = set()
        for w in self.source.bounded_neighborhood(x0, mesh):
            nb.add(self._image(w))
        return tuple(sorted(nb, key=self.space.sort_key))

    def default_battery(self, seed: int = 0, n_random: int = 32) -> list:
        out = []
        for pf in self.source.default_battery(seed=seed, n_random=n_random):
            out.append(_pushforward_family(pf, self._image, self.space))
        return out


def _pushforward_family(pf: ParamFamily, rule, target_space) -> ParamFamily:
    from .families import finite_family

    def fn(r: int):
        fam = pf.at(r)
        return finite_family(target_space, (tuple(rule(x) for x in m) for m in fam.members))

    return ParamFamily(tag=f"push({pf.tag})", space=target_space, fn=fn)


def _extent(space, y) -> int:
    if isinstance(space, GroupSpace):
        return space.wl(y)
    return 0


def random_shapes(spec: groups.GroupSpec, seed: int, count: int, mesh: int = 2) -> list:
    """Deterministic list of small shapes (subsets of Ball(mesh), sizes 1..3)."""
    rng = random.Random(seed)
    pool = list(groups.ball(spec, mesh).elements)
    shapes = []
    for _ in range(count):
        k = rng.randint(1, 3)
        shape = rng.sample(pool, min(k, len(pool)))
        shapes.append(groups.canonical_sorted(spec, shape))
    return shapes


def membership_window(structure: CoarseStructure, pf: ParamFamily, radius: int):
    """Evaluate the witness trace of a monotone parametrized family.

    Returns a Witness when the size trace is constant over the final
    ceil(radius/2) radii, else a Counterexample carrying the growing trace.
    """
    seen: set = set()
    witness: set = set()
    trace: dict = {}
    for r in range(radius + 1):
        fam = pf.at(r)
        current = set(fam.members)
        if not seen <= current:
            raise PreconditionError(f"family {pf.tag} is not monotone at radius {r}")
        for m in fam.members:
            if m not in seen:
                seen.add(m)
                witness |= structure.member_contribution(m)
        trace[r] = len(witness)
    group = structure.witness_group()
    elements = groups.canonical_sorted(group, witness)
    if trace_stabilizes(trace, radius):
        return Witness(structure=structure.label, group=group, elements=elements, trace=trace)
    return Counterexample(
        structure=structure.label,
        family=pf.tag,
        group=group,
        elements=elements,
        trace=trace,
    )
