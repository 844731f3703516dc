"""Group actions on windows and the structures they induce.

Actions are left actions by construction; a right translation action is
encoded as the left action g.x := x * h(g)^-1.  Translation actions go
through a catalog homomorphism (identity, the inclusion of Z into DihInf
as powers of x, or an integer scaling on Z).  Table actions carry explicit
generator permutations of a finite point set and extend along geodesic
words.

Two window constructions produce coarse structures from an action:

* orbit pullback        membership of a family is membership of its
                        preimage family under g -> g.x0 (transitive
                        actions with finite point stabilizers)
* bounded translates    a family is bounded when it refines translates
                        {g.(F.U)} of a fixed bounded set U; the witness is
                        the finite F needed, and its growth is the trace
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import groups
from .errors import (
    CommutativityError,
    InfiniteStabilizerError,
    PreconditionError,
    SearchFailureError,
    SpaceMismatchError,
    WindowOverflowError,
)
from .families import (
    ParamFamily,
    compose_controlled,
    controlled_to_family,
    family_to_controlled,
    finite_family,
    refines,
    star_family,
    trace_stabilizes,
)
from .maps import Certificate, MapWindow, surjective_equivalence_check, check_bornologous, table_map
from .spaces import FiniteSpace, GroupSpace
from .structures import (
    CoarseStructure,
    LeftGroupStructure,
    PullbackStructure,
    membership_window,
    random_shapes,
)

ACTION_LAW_DEPTH = 3


# ---------------------------------------------------------------------------
# homomorphisms and actions

@dataclass(frozen=True)
class Hom:
    name: str  # "identity" | "inclusion" | "power"
    source: groups.GroupSpec
    target: groups.GroupSpec
    k: int = 0

    def apply(self, g):
        if self.name == "identity":
            return g
        if self.name == "inclusion":
            return (g, 0)  # n -> x^n
        if self.name == "power":
            return self.k * g
        raise ValueError(f"unknown homomorphism {self.name!r}")

    def label(self) -> str:
        if self.name == "identity":
            return "identity"
        if self.name == "inclusion":
            return "x^n"
        return f"{self.k}n"


def identity_hom(spec: groups.GroupSpec) -> Hom:
    return Hom("identity", spec, spec)


def inclusion_hom() -> Hom:
    return Hom("inclusion", groups.Z, groups.DIH)


def power_hom(k: int) -> Hom:
    return Hom("power", groups.Z, groups.Z, k=k)


class Action:
    group: groups.GroupSpec
    space: object
    name: str

    def apply(self, g, x):
        raise NotImplementedError

    def apply_set(self, g, S) -> tuple:
        return tuple(sorted((self.apply(g, x) for x in S), key=self.space.sort_key))

    def validate(self, depth: int = ACTION_LAW_DEPTH) -> None:
        """Check the left action law on a small window."""
        ident = groups.identity(self.group)
        pts = list(self.space.window(depth))
        for x in pts:
            if self.apply(ident, x) != x:
                raise PreconditionError(f"{self.name}: identity does not act trivially on {x!r}")
        elems = groups.ball(self.group, depth).elements
        for g1 in elems:
            for g2 in elems:
                g12 = groups.multiply(self.group, g1, g2)
                for x in pts:
                    if self.apply(g12, x) != self.apply(g1, self.apply(g2, x)):
                        raise PreconditionError(
                            f"{self.name}: action law fails at g1={g1!r}, g2={g2!r}, x={x!r}"
                        )


class TranslationAction(Action):
    def __init__(self, hom: Hom, side: str = "left"):
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        self.hom = hom
        self.side = side
        self.group = hom.source
        self.space = GroupSpace(hom.target)
        arrow = "" if hom.source == hom.target else f"{hom.source.label()}->"
        self.name = f"{side}({arrow}{hom.target.label()} via {hom.label()})"

    def apply(self, g, x):
        h = self.hom.apply(g)
        if self.side == "left":
            return groups.multiply(self.space.spec, h, x)
        return groups.multiply(self.space.spec, x, groups.invert(self.space.spec, h))


class TrivialAction(Action):
    def __init__(self, group: groups.GroupSpec, space):
        self.group = group
        self.space = space
        self.name = f"trivial({group.label()} on {space.label})"

    def apply(self, g, x):
        return x


class TableAction(Action):
    """Finite space action given by one permutation per generator."""

    def __init__(self, group: groups.GroupSpec, space: FiniteSpace, perms: dict, name: str = ""):
        self.group = group
        self.space = space
        self.perms = perms  # generator index -> {point: point}
        self.name = name or f"table({group.label()} on {space.label})"

    def apply(self, g, x):
        word = groups.geodesic_word(self.group, g)
        for idx in reversed(word):
            x = self.perms[idx][x]
        return x


def left_translation(hom: Hom) -> TranslationAction:
    a = TranslationAction(hom, side="left")
    a.validate()
    return a


def right_translation(hom: Hom) -> TranslationAction:
    a = TranslationAction(hom, side="right")
    a.validate()
    return a


def trivial_action(group: groups.GroupSpec, space) -> TrivialAction:
    a = TrivialAction(group, space)
    a.validate()
    return a


def table_action(group: groups.GroupSpec, space: FiniteSpace, perms: dict, name: str = "") -> TableAction:
    a = TableAction(group, space, perms, name=name)
    a.validate()
    return a


def _mesh(space, S) -> int:
    if isinstance(space, GroupSpace):
        return max((space.wl(u) for u in S), default=0)
    return 0


def _extent(space, y) -> int:
    if isinstance(space, GroupSpace):
        return space.wl(y)
    return 0


# ---------------------------------------------------------------------------
# induced structure from bounded translates

class ActionInducedStructure(CoarseStructure):
    """Bounded sets are subsets of F.U with F finite; a family is bounded
    when every member fits in a translate g.(F.U) for one finite F.  The
    member contribution is the least such F (canonical greedy choice), and
    the witness trace is the size of the union of these F over the family."""

    def __init__(self, action: Action, U, slack: int = 2, label: str = ""):
        super().__init__()
        self.action = action
        self.U = tuple(sorted(set(U), key=action.space.sort_key))
        if not self.U:
            raise PreconditionError("U must be a nonempty bounded set")
        self.space = action.space
        self.slack = slack
        useral = ",".join(self.space.serialize(u) for u in self.U)
        self.label = label or f"induced({action.name}; U=[{useral}])"
        self._cover_cache: dict = {}

    def witness_group(self) -> groups.GroupSpec:
        return self.action.group

    def _covers(self, y, acting_radius: int) -> tuple:
        """Acting elements h with y in h.U, searched on Ball(acting_radius)."""
        key = (y, acting_radius)
        if key not in self._cover_cache:
            hits = []
            for h in groups.ball(self.action.group, acting_radius).elements:
                if y in self.action.apply_set(h, self.U):
                    hits.append(h)
            self._cover_cache[key] = tuple(hits)
        return self._cover_cache[key]

    def _compute_contribution(self, member: tuple):
        if not member:
            return frozenset()
        G = self.action.group
        ext = max(_extent(self.space, y) for y in member)
        acting_radius = ext + _mesh(self.space, self.U) + self.slack
        pool = groups.ball(G, acting_radius).elements
        covers = {}
        for y in member:
            hits = self._covers(y, acting_radius)
            if not hits:
                raise WindowOverflowError(
                    f"{self.label}: {self.space.serialize(y)} not covered by translates of U "
                    f"within acting radius {acting_radius}"
                )
            covers[y] = hits
        best_g = None
        best_cost = None
        for g in pool:
            ig = groups.invert(G, g)
            cost = 0
            for y in member:
                d = min(
                    groups.word_length(G, groups.multiply(G, ig, h)) for h in covers[y]
                )
                cost = max(cost, d)
                if best_cost is not None and cost >= best_cost:
                    break
            if best_cost is None or cost < best_cost:
                best_cost = cost
                best_g = g
        ig = groups.invert(G, best_g)
        F = set()
        for y in member:
            f = min(
                (groups.multiply(G, ig, h) for h in covers[y]),
                key=lambda e: groups.sort_key(G, e),
            )
            F.add(f)
        return F

    def bounded_neighborhood(self, y, mesh: int) -> tuple:
        G = self.action.group
        acting_radius = _extent(self.space, y) + _mesh(self.space, self.U) + self.slack
        hits = self._covers(y, acting_radius)
        if not hits:
            raise WindowOverflowError(f"{self.label}: {self.space.serialize(y)} not covered")
        f0 = min(hits, key=lambda e: groups.sort_key(G, e))
        out = set()
        for g in groups.ball(G, mesh).elements:
            out.update(self.action.apply_set(groups.multiply(G, g, f0), self.U))
        return tuple(sorted(out, key=self.space.sort_key))

    def default_battery(self, seed: int = 0, n_random: int = 8) -> list:
        fams = [action_translate_family(self.action, self.U, tag="{g.U}")]
        for i, shape in enumerate(random_shapes(self.action.group, seed=seed, count=n_random, mesh=1)):
            V = set()
            for f in shape:
                V.update(self.action.apply_set(f, self.U))
            fams.append(action_translate_family(self.action, tuple(V), tag=f"{{g.(F{i}.U)}}"))
        return fams


def action_translate_family(action: Action, V, tag: str = "") -> ParamFamily:
    V = tuple(V)
    if not tag:
        vs = ",".join(action.space.serialize(v) for v in V)
        tag = f"{{g.[{vs}]}}"

    def fn(r: int):
        members = [action.apply_set(g, V) for g in groups.ball(action.group, r).elements]
        return finite_family(action.space, members)

    return ParamFamily(tag=tag, space=action.space, fn=fn)


# ---------------------------------------------------------------------------
# basic window checks

def stabilizer_window(action: Action, U, radius: int) -> tuple[tuple, dict]:
    """Elements g in Ball(radius) with U meeting g.U, plus the size trace."""
    Uset = set(U)
    b = groups.ball(action.group, radius)
    hits = []
    trace = {}
    count = 0
    for r in range(radius + 1):
        for g in b.sphere(r):
            if Uset.intersection(action.apply_set(g, U)):
                hits.append(g)
                count += 1
        trace[r] = count
    return tuple(hits), trace


def point_finite_check(action: Action, U, x, radius: int) -> Certificate:
    """Trace of |{g in Ball(r) : x in g.U}|; PASS when it stabilizes."""
    b = groups.ball(action.group, radius)
    trace = {}
    count = 0
    for r in range(radius + 1):
        for g in b.sphere(r):
            if x in action.apply_set(g, U):
                count += 1
        trace[r] = count
    verdict = "PASS" if trace_stabilizes(trace, radius) else "FAIL"
    return Certificate(
        check="point-finite",
        verdict=verdict,
        radius=radius,
        data={
            "action": action.name,
            "point": action.space.serialize(x),
            "U": [action.space.serialize(u) for u in U],
            "trace": {str(r): n for r, n in trace.items()},
        },
    )


def uniformly_bornologous_action_check(
    action: Action,
    struct: CoarseStructure,
    radius: int,
    battery: Optional[list] = None,
    seed: int = 0,
    n_random: int = 8,
    route_b_radius: Optional[int] = None,
) -> Certificate:
    """Are all translates of bounded families still bounded?

    The direct route translates each battery family and reads its witness
    trace.  The controlled-set route recasts the family as a symmetric
    controlled set E with diagonal, checks that the square of every pair
    of E sits inside E.E.E.E, and tests the translated two point pieces
    of E the same way.  The two membership verdicts must agree; the
    controlled route runs at a capped radius since composition squares
    pair counts.
    """
    if action.space != struct.space:
        raise SpaceMismatchError("action and structure live on different spaces")
    battery = battery if battery is not None else struct.default_battery(seed=seed, n_random=n_random)
    rb = route_b_radius if route_b_radius is not None else min(radius, 6)
    results = {}
    for pf in battery:
        base = membership_window(struct, pf, radius)
        if not base.bounded:
            raise PreconditionError(f"battery family {pf.tag} is not bounded in {struct.label}")

        def translated_fn(r: int, pf=pf):
            members = []
            for g in groups.ball(action.group, r).elements:
                for mem in pf.at(r).members:
                    members.append(action.apply_set(g, mem))
            return finite_family(action.space, members)

        tr_pf = ParamFamily(tag=f"translates({pf.tag})", space=action.space, fn=translated_fn)
        res_a = membership_window(struct, tr_pf, radius)

        containment_ok = True
        for r in range(rb + 1):
            E = family_to_controlled(pf.at(r))
            E2 = compose_controlled(E, E)
            E4 = compose_controlled(E2, E2)
            pairs4 = E4.pairs
            for (x, y) in E.pairs:
                square = ((x, x), (x, y), (y, x), (y, y))
                if any(p not in pairs4 for p in square):
                    containment_ok = False
                    break
            if not containment_ok:
                break

        def route_b_fn(r: int, pf=pf):
            pieces = controlled_to_family(family_to_controlled(pf.at(r)))
            members = []
            for g in groups.ball(action.group, r).elements:
                for mem in pieces.members:
                    members.append(action.apply_set(g, mem))
            return finite_family(action.space, members)

        rb_pf = ParamFamily(tag=f"controlled({pf.tag})", space=action.space, fn=route_b_fn)
        res_b = membership_window(struct, rb_pf, rb)
        a_at_rb = trace_stabilizes({r: res_a.trace[r] for r in range(rb + 1)}, rb)
        agree = containment_ok and a_at_rb == res_b.bounded

        if not res_a.bounded:
            return Certificate(
                check="uniformly-bornologous",
                verdict="FAIL",
                radius=radius,
                data={
                    "action": action.name,
                    "structure": struct.label,
                    "counterexample": res_a.to_json(),
                    "controlled_route_agrees": agree,
                },
            )
        if not agree:
            return Certificate(
                check="uniformly-bornologous",
                verdict="FAIL",
                radius=radius,
                data={
                    "action": action.name,
                    "structure": struct.label,
                    "family": pf.tag,
                    "note": "direct and controlled-set routes disagree",
                    "containment": containment_ok,
                    "direct": res_a.to_json(),
                    "controlled": res_b.to_json(),
                },
            )
        results[pf.tag] = {"direct": res_a.to_json(), "controlled_route_agrees": agree}
    return Certificate(
        check="uniformly-bornologous",
        verdict="PASS",
        radius=radius,
        data={"action": action.name, "structure": struct.label, "families": results},
    )


# ---------------------------------------------------------------------------
# coboundedness

def cobounded_check(
    action: Action,
    radius: int,
    U: Optional[tuple] = None,
    mesh_cap: int = 4,
    c_cap: int = 4,
) -> Certificate:
    """Search (or verify) a bounded U with window(r) inside Ball(r+c).U.

    Search mode walks meshes 0..mesh_cap, takes the first metric ball that
    covers with some constant c <= c_cap, then greedily prunes it from the
    largest element down, keeping the covering property."""
    space = action.space

    def covered_by(Ucand: tuple, c: int) -> bool:
        b = groups.ball(action.group, radius + c)
        cov: set = set()
        for s in range(radius + c + 1):
            for g in b.sphere(s):
                cov.update(action.apply_set(g, Ucand))
            r = s - c
            if 0 <= r <= radius and not set(space.window(r)) <= cov:
                return False
        return True

    def minimal_c(Ucand: tuple) -> Optional[int]:
        for c in range(c_cap + 1):
            if covered_by(Ucand, c):
                return c
        return None

    if U is not None:
        U = tuple(sorted(set(U), key=space.sort_key))
        c = minimal_c(U)
        if c is None:
            return Certificate(
                check="cobounded",
                verdict="FAIL",
                radius=radius,
                data={"action": action.name, "U": [space.serialize(u) for u in U],
                      "note": f"window not covered with constant <= {c_cap}"},
            )
        return Certificate(
            check="cobounded",
            verdict="PASS",
            radius=radius,
            data={"action": action.name, "U": [space.serialize(u) for u in U],
                  "mesh": _mesh(space, U), "constant": c},
        )

    base = space.window(0)[0]
    for mesh in range(mesh_cap + 1):
        if isinstance(space, GroupSpace):
            Ucand = space.ball_about(base, mesh, side="left")
        else:
            Ucand = space.window(mesh)
        c = minimal_c(Ucand)
        if c is None:
            continue
        # prune, largest elements first, keeping the same constant
        kept = list(Ucand)
        for u in sorted(Ucand, key=space.sort_key, reverse=True):
            if len(kept) == 1:
                break
            trial = tuple(v for v in kept if v != u)
            if covered_by(trial, c):
                kept = list(trial)
        Umin = tuple(sorted(kept, key=space.sort_key))
        return Certificate(
            check="cobounded",
            verdict="PASS",
            radius=radius,
            data={"action": action.name, "U": [space.serialize(u) for u in Umin],
                  "mesh": mesh, "constant": c},
        )
    return Certificate(
        check="cobounded",
        verdict="FAIL",
        radius=radius,
        data={"action": action.name,
              "note": f"no covering bounded set with mesh <= {mesh_cap}, constant <= {c_cap}"},
    )


# ---------------------------------------------------------------------------
# induced structures

def induced_structure_first(
    action: Action,
    x0,
    radius: int,
    c_cap: int = 4,
) -> tuple[PullbackStructure, Certificate]:
    """Pull the left structure of the acting group through g -> g.x0.

    Needs the orbit of x0 to cover the window (within a constant) and the
    stabilizer of x0 to stop growing."""
    action.space.validate(x0)
    G = action.group
    b = groups.ball(G, radius)
    stab_trace = {}
    stab = []
    count = 0
    for r in range(radius + 1):
        for g in b.sphere(r):
            if action.apply(g, x0) == x0:
                stab.append(g)
                count += 1
        stab_trace[r] = count
    if not trace_stabilizes(stab_trace, radius):
        raise InfiniteStabilizerError(
            f"{action.name}: stabilizer of {action.space.serialize(x0)} keeps growing, "
            f"trace {sorted(stab_trace.items())}"
        )
    stab_extent = max((groups.word_length(G, g) for g in stab), default=0)

    cover_c = None
    for c in range(c_cap + 1):
        ok = True
        for r in range(radius + 1):
            orbit = {action.apply(g, x0) for g in groups.ball(G, r + c).elements}
            if not set(action.space.window(r)) <= orbit:
                ok = False
                break
        if ok:
            cover_c = c
            break
    if cover_c is None:
        raise PreconditionError(
            f"{action.name}: orbit of {action.space.serialize(x0)} does not cover the window"
        )

    structure = PullbackStructure(
        rule=lambda g: action.apply(g, x0),
        source=LeftGroupStructure(G),
        space=action.space,
        source_slack=cover_c + stab_extent + 1,
        label=f"orbit-pullback({action.name}; x0={action.space.serialize(x0)})",
    )
    orbit_map = MapWindow(
        f"orbit({action.name}; x0={action.space.serialize(x0)})",
        LeftGroupStructure(G),
        structure,
        lambda g: action.apply(g, x0),
        source_factor=1,
        source_slack=cover_c + stab_extent,
    )
    equivalence = surjective_equivalence_check(
        orbit_map, radius, cover_distance=cover_c, target_window=action.space.window
    )
    cert = Certificate(
        check="induced-orbit-pullback",
        verdict="PASS" if equivalence.passed else "FAIL",
        radius=radius,
        data={
            "action": action.name,
            "x0": action.space.serialize(x0),
            "stabilizer_size": len(stab),
            "cover_constant": cover_c,
            "orbit_map_equivalence": equivalence.to_json(),
        },
    )
    return structure, cert


def induced_structure_second(
    action: Action,
    U,
    radius: int,
) -> tuple[ActionInducedStructure, Certificate]:
    """Structure generated by translates of a bounded covering set U."""
    cb = cobounded_check(action, radius, U=tuple(U))
    if not cb.passed:
        raise PreconditionError(f"{action.name}: not cobounded with the given U: {cb.data}")
    _, st_trace = stabilizer_window(action, tuple(U), radius)
    if not trace_stabilizes(st_trace, radius):
        raise PreconditionError(
            f"{action.name}: stabilizer of U keeps growing, trace {sorted(st_trace.items())}"
        )
    slack = _mesh(action.space, U) + cb.data["constant"] + 2
    structure = ActionInducedStructure(action, U, slack=slack)
    cert = Certificate(
        check="induced-bounded-translates",
        verdict="PASS",
        radius=radius,
        data={
            "action": action.name,
            "U": [action.space.serialize(u) for u in structure.U],
            "cover_constant": cb.data["constant"],
            "stabilizer_trace": {str(r): n for r, n in st_trace.items()},
        },
    )
    return structure, cert


# ---------------------------------------------------------------------------
# coarse action certificate

def coarse_action_certificate(
    action: Action,
    struct: CoarseStructure,
    x0,
    radius: int,
    seed: int = 0,
    n_random: int = 8,
) -> Certificate:
    """Bundle of window checks for acting coarsely on (space, struct):
    uniformly bornologous translates, coarse properness on bounded test
    sets, coboundedness, the orbit map equivalence certificate, and the
    refinement of bounded families by translates of the covering set."""
    if action.space != struct.space:
        raise SpaceMismatchError("action and structure live on different spaces")
    action.space.validate(x0)
    ub = uniformly_bornologous_action_check(action, struct, radius, seed=seed, n_random=n_random)

    proper_parts = []
    proper_ok = True
    for mesh in (0, 1):
        V = struct.bounded_neighborhood(x0, mesh)
        _, st_trace = stabilizer_window(action, V, radius)
        st_ok = trace_stabilizes(st_trace, radius)
        pf_cert = point_finite_check(action, V, x0, radius)
        proper_parts.append(
            {
                "test_set_mesh": mesh,
                "stabilizer_trace": {str(r): n for r, n in st_trace.items()},
                "stabilizer_stabilizes": st_ok,
                "point_finite": pf_cert.to_json(),
            }
        )
        if not st_ok or not pf_cert.passed:
            proper_ok = False

    cb = cobounded_check(action, radius)

    data: dict = {
        "action": action.name,
        "structure": struct.label,
        "uniformly_bornologous": ub.to_json(),
        "coarsely_proper": {"verdict": "PASS" if proper_ok else "FAIL", "parts": proper_parts},
        "cobounded": cb.to_json(),
    }

    if not (ub.passed and proper_ok and cb.passed):
        return Certificate("coarse-action", "FAIL", radius, data)

    cover_c = cb.data["constant"]

    def orbit_window(r: int) -> tuple:
        orbit = {action.apply(g, x0) for g in groups.ball(action.group, r).elements}
        return tuple(sorted(orbit, key=action.space.sort_key))

    orbit_map = MapWindow(
        name=f"orbit@{action.space.serialize(x0)}",
        source=LeftGroupStructure(action.group),
        target=struct,
        rule=lambda g: action.apply(g, x0),
        source_factor=1,
        source_slack=cover_c + _mesh(action.space, cb_elements(cb, action)) + 2,
    )
    orbit_cert = surjective_equivalence_check(
        orbit_map, radius, cover_distance=0, seed=seed, n_random=n_random,
        target_window=orbit_window,
    )
    data["orbit_map"] = orbit_cert.to_json()

    Ucb = cb_elements(cb, action)
    refine_struct = ActionInducedStructure(action, Ucb, slack=cover_c + _mesh(action.space, Ucb) + 2)
    refinement = {}
    refine_ok = True
    for pf in struct.default_battery(seed=seed, n_random=n_random):
        res = membership_window(refine_struct, pf, radius)
        refinement[pf.tag] = res.to_json()
        if not res.bounded:
            refine_ok = False
            break
    data["refines_translates"] = {"verdict": "PASS" if refine_ok else "FAIL", "families": refinement}

    verdict = "PASS" if (orbit_cert.passed and refine_ok) else "FAIL"
    return Certificate("coarse-action", verdict, radius, data)


def cb_elements(cb: Certificate, action: Action) -> tuple:
    return tuple(action.space.parse(s) for s in cb.data["U"])


# ---------------------------------------------------------------------------
# commuting actions

def commuting_equivalence(
    action1: Action,
    action2: Action,
    U,
    x0,
    radius: int,
    seed: int = 0,
    n_random: int = 8,
) -> Certificate:
    """Two commuting coarse actions on one space give coarsely inverse
    selections between the acting groups.

    psi sends h to the least g1 with h^-1.x0 inside g1.U; phi is symmetric.
    The certificate checks both are bornologous and that the compositions
    are close to the identities, with orbit closeness refining the star
    family of translates of U."""
    if action1.space != action2.space:
        raise SpaceMismatchError("commuting actions must share their space")
    space = action1.space
    U = tuple(sorted(set(U), key=space.sort_key))
    space.validate(x0)
    G1, G2 = action1.group, action2.group

    # commutativity on a small window
    for g in groups.ball(G1, ACTION_LAW_DEPTH).elements:
        for h in groups.ball(G2, ACTION_LAW_DEPTH).elements:
            for x in space.window(ACTION_LAW_DEPTH):
                lhs = action1.apply(g, action2.apply(h, x))
                rhs = action2.apply(h, action1.apply(g, x))
                if lhs != rhs:
                    raise CommutativityError(
                        f"actions do not commute at g={g!r}, h={h!r}, x={x!r}"
                    )

    struct1, ind1 = induced_structure_second(action1, U, radius)
    struct2, ind2 = induced_structure_second(action2, U, radius)

    # bounded sets of the two induced structures agree on the window
    c1 = ind1.data["cover_constant"]
    c2 = ind2.data["cover_constant"]
    gap_cap = _mesh(space, U) + max(c1, c2) + 2
    max_gap = 0
    for s in range(radius + 1):
        C1 = set()
        for g in groups.ball(G1, s).elements:
            C1.update(action1.apply_set(g, U))
        C2 = set()
        for h in groups.ball(G2, s).elements:
            C2.update(action2.apply_set(h, U))
        gap12 = _cover_gap(C1, action2, U, s, gap_cap)
        gap21 = _cover_gap(C2, action1, U, s, gap_cap)
        if gap12 is None or gap21 is None:
            return Certificate(
                check="commuting-equivalence",
                verdict="FAIL",
                radius=radius,
                data={
                    "note": "bounded sets of the induced structures disagree",
                    "scale": s,
                },
            )
        max_gap = max(max_gap, gap12, gap21)

    cert1 = coarse_action_certificate(action1, struct1, x0, radius, seed=seed, n_random=n_random)
    cert2 = coarse_action_certificate(action2, struct2, x0, radius, seed=seed, n_random=n_random)
    if not (cert1.passed and cert2.passed):
        return Certificate(
            check="commuting-equivalence",
            verdict="FAIL",
            radius=radius,
            data={"coarse_action_1": cert1.to_json(), "coarse_action_2": cert2.to_json()},
        )

    slack = _mesh(space, U) + max(c1, c2) + 2
    psi = _selection(action2, action1, U, x0, radius + slack, slack)
    phi = _selection(action1, action2, U, x0, radius + slack, slack)

    struct_g1 = LeftGroupStructure(G1)
    struct_g2 = LeftGroupStructure(G2)
    psi_map = table_map("psi", struct_g2, struct_g1, psi)
    psi_map.source_slack = slack
    phi_map = table_map("phi", struct_g1, struct_g2, phi)
    phi_map.source_slack = slack

    born_psi = check_bornologous(psi_map, radius, seed=seed, n_random=n_random)
    born_phi = check_bornologous(phi_map, radius, seed=seed, n_random=n_random)

    def close_family(table_outer, table_inner, G, r):
        pairs = []
        for g in groups.ball(G, r).elements:
            pairs.append((g, table_outer[table_inner[g]]))
        return pairs

    def psiphi_fn(r: int):
        return finite_family(struct_g1.space, close_family(psi, phi, G1, r))

    def phipsi_fn(r: int):
        return finite_family(struct_g2.space, close_family(phi, psi, G2, r))

    close1 = membership_window(
        struct_g1, ParamFamily(tag="{g, psi(phi(g))}", space=struct_g1.space, fn=psiphi_fn), radius
    )
    close2 = membership_window(
        struct_g2, ParamFamily(tag="{h, phi(psi(h))}", space=struct_g2.space, fn=phipsi_fn), radius
    )

    # orbit closeness refines the star family of translates of U
    refine_ok = True
    refine_data = {}
    for act, G, outer, inner, tagname in (
        (action1, G1, psi, phi, "psi.phi"),
        (action2, G2, phi, psi, "phi.psi"),
    ):
        translates = finite_family(
            space,
            (act.apply_set(g, U) for g in groups.ball(G, radius + slack).elements),
        )
        starred = star_family(translates, translates)
        pairs = finite_family(
            space,
            (
                (act.apply(g, x0), act.apply(outer[inner[g]], x0))
                for g in groups.ball(G, radius).elements
            ),
        )
        res = refines(pairs, starred)
        refine_data[tagname] = bool(res.ok)
        if not res.ok:
            refine_ok = False

    verdict = "PASS" if (
        born_psi.passed and born_phi.passed and close1.bounded and close2.bounded and refine_ok
    ) else "FAIL"
    notes = [
        f"{act.name}: right translations enter as the left action g.x = x.g^-1"
        for act in (action1, action2)
        if isinstance(act, TranslationAction) and act.side == "right"
    ]
    return Certificate(
        check="commuting-equivalence",
        verdict=verdict,
        radius=radius,
        notes=notes,
        data={
            "actions": [action1.name, action2.name],
            "U": [space.serialize(u) for u in U],
            "x0": space.serialize(x0),
            "bounded_sets_gap": max_gap,
            "induced_1": ind1.to_json(),
            "induced_2": ind2.to_json(),
            "coarse_action_1": cert1.to_json(),
            "coarse_action_2": cert2.to_json(),
            "psi": {groups.serialize(G2, h): groups.serialize(G1, g) for h, g in psi.items()},
            "phi": {groups.serialize(G1, g): groups.serialize(G2, h) for g, h in phi.items()},
            "bornologous_psi": born_psi.to_json(),
            "bornologous_phi": born_phi.to_json(),
            "close_psi_phi": close1.to_json(),
            "close_phi_psi": close2.to_json(),
            "orbit_closeness_refines_star": refine_data,
        },
    )


def _cover_gap(C: set, other: Action, U: tuple, s: int, gap_cap: int) -> Optional[int]:
    """Least extra radius so translates of U under the other action cover C."""
    cov: set = set()
    for extra in range(gap_cap + 1):
        target = s + extra
        for h in groups.ball(other.group, target).elements:
            cov.update(other.apply_set(h, U))
        if C <= cov:
            return extra
    return None


def _selection(action_from: Action, action_to: Action, U: tuple, x0, table_radius: int, slack: int) -> dict:
    """For each h in the domain ball, the least g with h^-1.x0 in g.U."""
    Gf, Gt = action_from.group, action_to.group
    table = {}
    for h in groups.ball(Gf, table_radius).elements:
        p = action_from.apply(groups.invert(Gf, h), x0)
        search = groups.word_length(Gf, h) + slack
        found = None
        for g in groups.ball(Gt, search).elements:
            if p in action_to.apply_set(g, U):
                found = g
                break
        if found is None:
            raise SearchFailureError(
                f"no translate of U reaches {action_from.space.serialize(p)} "
                f"within radius {search}"
            )
        table[h] = found
    return table
