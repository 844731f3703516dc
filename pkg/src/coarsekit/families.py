"""Uniformly bounded families, controlled sets, and witness records.

A finite family is a finite list of finite subsets of a space, kept in a
canonical order (members sorted elementwise and then lexicographically by
element order, duplicates dropped).  A parametrized family assigns to every
window radius r a finite family; all checks require these to be monotone,
meaning every member present at radius r is still present at radius r+1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from . import groups
from .errors import SpaceMismatchError


@dataclass(frozen=True)
class FiniteFamily:
    space: object
    members: tuple  # tuple of tuples, canonical order

    def __len__(self) -> int:
        return len(self.members)


def finite_family(space, members: Iterable[Iterable]) -> FiniteFamily:
    canon = set()
    for m in members:
        canon.add(tuple(sorted(set(m), key=space.sort_key)))
    ordered = sorted(canon, key=lambda m: tuple(space.sort_key(x) for x in m))
    return FiniteFamily(space=space, members=tuple(ordered))


@dataclass
class ParamFamily:
    tag: str
    space: object
    fn: Callable[[int], FiniteFamily]
    _cache: dict = field(default_factory=dict, repr=False)

    def at(self, r: int) -> FiniteFamily:
        if r not in self._cache:
            self._cache[r] = self.fn(r)
        return self._cache[r]


def is_monotone(pf: ParamFamily, radius: int) -> bool:
    prev: set = set()
    for r in range(radius + 1):
        cur = set(pf.at(r).members)
        if not prev <= cur:
            return False
        prev = cur
    return True


@dataclass(frozen=True)
class ControlledSet:
    space: object
    pairs: frozenset  # ordered pairs (x, y)


# ---------------------------------------------------------------------------
# witnesses

def ceil_half(r: int) -> int:
    return math.ceil(r / 2)


def trace_stabilizes(trace: dict, radius: int) -> bool:
    """True when the final ceil(radius/2) trace values are all equal."""
    tail = [trace[r] for r in range(radius - ceil_half(radius) + 1, radius + 1) if r in trace]
    return len(set(tail)) <= 1


def strictly_growing_suffix(trace: dict, radius: int) -> bool:
    tail_radii = [r for r in range(radius - ceil_half(radius), radius + 1) if r in trace]
    return all(
        trace[a] < trace[b] for a, b in zip(tail_radii, tail_radii[1:])
    ) and len(tail_radii) >= 2


@dataclass
class Witness:
    structure: str
    group: groups.GroupSpec  # group the witness elements live in
    elements: tuple
    trace: dict

    bounded = True
    verdict = "PASS"

    def size(self) -> int:
        return len(self.elements)

    def to_json(self) -> dict:
        return {
            "structure": self.structure,
            "verdict": self.verdict,
            "witness": [groups.serialize(self.group, g) for g in self.elements],
            "trace": {str(r): n for r, n in sorted(self.trace.items())},
        }


@dataclass
class Counterexample:
    structure: str
    family: str
    group: groups.GroupSpec
    elements: tuple  # witness evaluated at the final radius, kept as evidence
    trace: dict

    bounded = False
    verdict = "FAIL"

    def to_json(self) -> dict:
        return {
            "structure": self.structure,
            "verdict": self.verdict,
            "family": self.family,
            "trace": {str(r): n for r, n in sorted(self.trace.items())},
        }


# ---------------------------------------------------------------------------
# core operations on families

def side_witness(side: str, spec: groups.GroupSpec, fam: FiniteFamily) -> Witness:
    """Witness set of a family over a group: u^-1*v ("left") or u*v^-1
    ("right") over all ordered pairs within each member.  Pairs with u = v
    contribute the identity, so any nonempty family witnesses it."""
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    out = set()
    for member in fam.members:
        for u in member:
            iu = groups.invert(spec, u)
            for v in member:
                if side == "left":
                    out.add(groups.multiply(spec, iu, v))
                else:
                    out.add(groups.multiply(spec, v, iu))
    return Witness(
        structure=f"{side}-group({spec.label()})",
        group=spec,
        elements=groups.canonical_sorted(spec, out),
        trace={},
    )


def member_witness(side: str, spec: groups.GroupSpec, member: tuple) -> set:
    out = set()
    for u in member:
        iu = groups.invert(spec, u)
        for v in member:
            if side == "left":
                out.add(groups.multiply(spec, iu, v))
            else:
                out.add(groups.multiply(spec, v, iu))
    return out


def star(member: Iterable, fam: FiniteFamily) -> tuple:
    """member union all members of fam that meet it."""
    base = set(member)
    out = set(base)
    for other in fam.members:
        if base.intersection(other):
            out.update(other)
    return tuple(sorted(out, key=fam.space.sort_key))


def star_family(f1: FiniteFamily, f2: FiniteFamily) -> FiniteFamily:
    if f1.space != f2.space:
        raise SpaceMismatchError("star_family needs both families on one space")
    return finite_family(f1.space, (star(m, f2) for m in f1.members))


def family_to_controlled(fam: FiniteFamily) -> ControlledSet:
    pairs = set()
    for member in fam.members:
        for u in member:
            for v in member:
                pairs.add((u, v))
    return ControlledSet(space=fam.space, pairs=frozenset(pairs))


def controlled_to_family(E: ControlledSet) -> FiniteFamily:
    return finite_family(E.space, ({u, v} for u, v in E.pairs))


def compose_controlled(E1: ControlledSet, E2: ControlledSet) -> ControlledSet:
    if E1.space != E2.space:
        raise SpaceMismatchError("compose_controlled needs both sets on one space")
    by_mid: dict = {}
    for y, z in E2.pairs:
        by_mid.setdefault(y, []).append(z)
    pairs = set()
    for x, y in E1.pairs:
        for z in by_mid.get(y, ()):
            pairs.add((x, z))
    return ControlledSet(space=E1.space, pairs=frozenset(pairs))


@dataclass
class RefineResult:
    ok: bool
    assignment: dict  # member -> containing member of the coarser family
    failing: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.ok


def refines(f1: FiniteFamily, f2: FiniteFamily, ignore_singletons: bool = False) -> RefineResult:
    """Does every member of f1 sit inside some member of f2?

    Singleton members can be skipped, matching the convention that refinement
    up to single points is still a refinement."""
    assignment = {}
    members2 = [set(m) for m in f2.members]
    for m in f1.members:
        if ignore_singletons and len(m) <= 1:
            continue
        ms = set(m)
        for raw, cooked in zip(f2.members, members2):
            if ms <= cooked:
                assignment[m] = raw
                break
        else:
            return RefineResult(ok=False, assignment=assignment, failing=m)
    return RefineResult(ok=True, assignment=assignment)


# ---------------------------------------------------------------------------
# stock parametrized families

def translate_pair_family(space, a, side: str) -> ParamFamily:
    """r -> {{g, a*g}} ("left") or {{g, g*a}} ("right") over g in Ball(r)."""
    spec = space.spec
    aser = groups.serialize(spec, a)
    tag = f"{{{{g, {aser}*g}}}}" if side == "left" else f"{{{{g, g*{aser}}}}}"

    def fn(r: int) -> FiniteFamily:
        members = []
        for g in groups.ball(spec, r).elements:
            other = groups.multiply(spec, a, g) if side == "left" else groups.multiply(spec, g, a)
            members.append((g, other))
        return finite_family(space, members)

    return ParamFamily(tag=tag, space=space, fn=fn)


def shape_translate_family(space, shape: tuple, side: str, tag: str = "") -> ParamFamily:
    """r -> {g*S} ("left") or {S*g} ("right") over g in Ball(r), S fixed."""
    spec = space.spec
    if not tag:
        shape_ser = ",".join(groups.serialize(spec, s) for s in shape)
        tag = f"{{g*[{shape_ser}]}}" if side == "left" else f"{{[{shape_ser}]*g}}"

    def fn(r: int) -> FiniteFamily:
        members = []
        for g in groups.ball(spec, r).elements:
            if side == "left":
                members.append(tuple(groups.multiply(spec, g, s) for s in shape))
            else:
                members.append(tuple(groups.multiply(spec, s, g) for s in shape))
        return finite_family(space, members)

    return ParamFamily(tag=tag, space=space, fn=fn)


def image_family(pf: ParamFamily, rule: Callable, target_space, tag: str = "") -> ParamFamily:
    def fn(r: int) -> FiniteFamily:
        fam = pf.at(r)
        return finite_family(target_space, (tuple(rule(x) for x in m) for m in fam.members))

    return ParamFamily(tag=tag or f"image({pf.tag})", space=target_space, fn=fn)


def constant_family(space, members, tag: str = "") -> ParamFamily:
    fam = finite_family(space, members)
    label = tag or "{" + ";".join("[" + ",".join(map(str, m)) + "]" for m in fam.members) + "}"
    return ParamFamily(tag=label, space=space, fn=lambda r: fam)
