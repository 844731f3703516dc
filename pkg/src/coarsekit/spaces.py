"""Point sets that checks run over.

A space is either the underlying set of a catalog group (windows are word
metric balls) or an explicit finite set carried by a table action.  Spaces
only need membership, a canonical element order, and window enumeration;
group spaces additionally expose the group operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from . import groups
from .errors import MalformedElementError


@dataclass(frozen=True)
class GroupSpace:
    spec: groups.GroupSpec

    @property
    def label(self) -> str:
        return self.spec.label()

    def window(self, r: int) -> tuple:
        return groups.ball(self.spec, r).elements

    def sort_key(self, x) -> tuple:
        return groups.sort_key(self.spec, x)

    def validate(self, x):
        return groups.validate(self.spec, x)

    def serialize(self, x) -> str:
        return groups.serialize(self.spec, x)

    def parse(self, text: str):
        return groups.parse_element(self.spec, text)

    # group operations, for callers that know this space is a group
    def mul(self, a, b):
        return groups.multiply(self.spec, a, b)

    def inv(self, a):
        return groups.invert(self.spec, a)

    def ident(self):
        return groups.identity(self.spec)

    def wl(self, a) -> int:
        return groups.word_length(self.spec, a)

    def ball_about(self, y, mesh: int, side: str = "left") -> tuple:
        """Metric ball around y: y*Ball(mesh) for the left-invariant metric,
        Ball(mesh)*y for the right-invariant one."""
        out = []
        for w in groups.ball(self.spec, mesh).elements:
            out.append(self.mul(y, w) if side == "left" else self.mul(w, y))
        return groups.canonical_sorted(self.spec, out)


@dataclass(frozen=True)
class FiniteSpace:
    name: str
    points: tuple

    @property
    def label(self) -> str:
        return self.name

    def window(self, r: int) -> tuple:
        return self.points

    def sort_key(self, x):
        try:
            return (0, self.points.index(x))
        except ValueError:
            raise MalformedElementError(f"{x!r} is not a point of {self.name}")

    def validate(self, x):
        if x not in self.points:
            raise MalformedElementError(f"{x!r} is not a point of {self.name}")
        return x

    def serialize(self, x) -> str:
        return str(x)

    def parse(self, text: str):
        for p in self.points:
            if str(p) == text:
                return p
        raise MalformedElementError(f"{text!r} is not a point of {self.name}")


Space = Any  # GroupSpace | FiniteSpace


def point_space() -> FiniteSpace:
    return FiniteSpace("point", ("pt",))


def sorted_elements(space, elements) -> tuple:
    return tuple(sorted(set(elements), key=space.sort_key))
