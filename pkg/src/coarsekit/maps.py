"""Window checks for maps between spaces carrying coarse structures.

A map window is a rule together with a structure on its source and one on
its target.  Checks evaluate finite batteries of bounded families:

* bornologous          image families stay bounded
* coarsely proper      preimages of bounded test sets stop growing
* closeness            the pair family of two maps is bounded in the target
* equivalence          the surjective criterion: bornologous + proper +
                       bounded preimage families, plus a canonical coarse
                       inverse selected from least preimages

Exact surjectivity can be relaxed through ``cover_distance``: a target
element counts as covered when the image meets its metric neighborhood of
that radius (used for finite-index style embeddings).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from . import groups
from .errors import (
    PreconditionError,
    SpaceMismatchError,
    SurjectivityError,
    WindowOverflowError,
)
from .families import (
    Counterexample,
    ParamFamily,
    Witness,
    finite_family,
    trace_stabilizes,
)
from .spaces import GroupSpace
from .structures import CoarseStructure, membership_window

DEFAULT_SOURCE_FACTOR = 2
DEFAULT_SOURCE_SLACK = 2


@dataclass
class MapWindow:
    name: str
    source: CoarseStructure
    target: CoarseStructure
    rule: Callable
    source_factor: int = DEFAULT_SOURCE_FACTOR
    source_slack: int = DEFAULT_SOURCE_SLACK

    def source_radius(self, radius: int) -> int:
        return self.source_factor * radius + self.source_slack

    def __call__(self, x):
        return self.rule(x)


@dataclass
class Certificate:
    check: str
    verdict: str
    radius: int
    data: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict in ("PASS", "EQUAL")

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "verdict": self.verdict,
            "radius": self.radius,
            "data": self.data,
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------------------
# catalog constructors

def identity_map(struct: CoarseStructure) -> MapWindow:
    return MapWindow("identity", struct, struct, lambda x: x, source_factor=1)


def translation_map(struct: CoarseStructure, g, side: str = "left") -> MapWindow:
    spec = struct.space.spec
    groups.validate(spec, g)
    gs = groups.serialize(spec, g)
    if side == "left":
        rule = lambda x: groups.multiply(spec, g, x)
    else:
        rule = lambda x: groups.multiply(spec, x, g)
    return MapWindow(f"translate-{side}:{gs}", struct, struct, rule, source_factor=1,
                     source_slack=groups.word_length(spec, g) + 1)


def negation_map(struct: CoarseStructure) -> MapWindow:
    spec = struct.space.spec
    return MapWindow("negate", struct, struct, lambda x: groups.invert(spec, x), source_factor=1)


def squaring_map(struct: CoarseStructure) -> MapWindow:
    if struct.space.spec.kind != "free_abelian" or struct.space.spec.rank != 1:
        raise PreconditionError("squaring map is defined on Z")
    return MapWindow("square", struct, struct, lambda n: n * n)


def power_map(source: CoarseStructure, target: CoarseStructure, k: int) -> MapWindow:
    if source.space.spec != groups.Z or target.space.spec != groups.Z:
        raise PreconditionError("power map is defined on Z")
    return MapWindow(f"power:{k}", source, target, lambda n: k * n)


def floor_div_map(source: CoarseStructure, target: CoarseStructure, k: int) -> MapWindow:
    if k < 1:
        raise PreconditionError("floor divisor must be >= 1")
    if source.space.spec != groups.Z or target.space.spec != groups.Z:
        raise PreconditionError("floor-division map is defined on Z")
    # the source window must scale with k to stay onto the target window,
    # with slack for the mesh of battery families pulled back through it
    return MapWindow(f"floor-div:{k}", source, target, lambda n: n // k, source_factor=k,
                     source_slack=2 * k)


def inclusion_z_to_dih(source: CoarseStructure, target: CoarseStructure) -> MapWindow:
    if source.space.spec != groups.Z or target.space.spec != groups.DIH:
        raise PreconditionError("inclusion is defined from Z into DihInf")
    return MapWindow("inclusion", source, target, lambda n: (n, 0), source_factor=1,
                     source_slack=2)


def mod_map(source: CoarseStructure, target: CoarseStructure) -> MapWindow:
    n = target.space.spec.modulus
    if source.space.spec != groups.Z or target.space.spec.kind != "cyclic":
        raise PreconditionError("mod map is defined from Z onto Zmod(n)")
    return MapWindow(f"mod:{n}", source, target, lambda x: x % n)


def constant_map(source: CoarseStructure, target: CoarseStructure, value) -> MapWindow:
    target.space.validate(value)
    vs = target.space.serialize(value)
    return MapWindow(f"constant:{vs}", source, target, lambda x: value, source_factor=1)


def table_map(name: str, source: CoarseStructure, target: CoarseStructure, table: dict) -> MapWindow:
    def rule(x):
        if x not in table:
            raise WindowOverflowError(f"{name}: {x!r} outside the tabulated window")
        return table[x]

    return MapWindow(name, source, target, rule, source_factor=1, source_slack=0)


# ---------------------------------------------------------------------------
# checks

def _image_family(m: MapWindow, pf: ParamFamily) -> ParamFamily:
    def fn(r: int):
        fam = pf.at(r)
        return finite_family(m.target.space, (tuple(m.rule(x) for x in mem) for mem in fam.members))

    return ParamFamily(tag=f"{m.name}({pf.tag})", space=m.target.space, fn=fn)


def check_bornologous(
    m: MapWindow,
    radius: int,
    battery: Optional[list] = None,
    seed: int = 0,
    n_random: int = 32,
) -> Certificate:
    """Do images of bounded families stay bounded in the target?"""
    battery = battery if battery is not None else m.source.default_battery(seed=seed, n_random=n_random)
    results = {}
    for pf in battery:
        src_res = membership_window(m.source, pf, radius)
        if not src_res.bounded:
            raise PreconditionError(
                f"battery family {pf.tag} is not bounded in {m.source.label}"
            )
        img = _image_family(m, pf)
        res = membership_window(m.target, img, radius)
        if not res.bounded:
            return Certificate(
                check="bornologous",
                verdict="FAIL",
                radius=radius,
                data={"map": m.name, "counterexample": res.to_json()},
            )
        results[pf.tag] = res.to_json()
    return Certificate(
        check="bornologous",
        verdict="PASS",
        radius=radius,
        data={"map": m.name, "witnesses": results},
    )


def check_coarsely_proper(m: MapWindow, radius: int, meshes=(0, 1, 2)) -> Certificate:
    """Do preimages of bounded target test sets stop growing with the window?"""
    base_points = []
    seen = set()
    for x in m.source.space.window(1):
        y = m.rule(x)
        if y not in seen:
            seen.add(y)
            base_points.append(y)
    traces = {}
    for y in base_points:
        for mesh in meshes:
            U = set(m.target.bounded_neighborhood(y, mesh))
            tag = f"nbhd({m.target.space.serialize(y)},{mesh})"
            trace = {}
            count = 0
            counted = set()
            for r in range(radius + 1):
                for x in m.source.space.window(r):
                    if x not in counted:
                        counted.add(x)
                        if m.rule(x) in U:
                            count += 1
                trace[r] = count
            traces[tag] = trace
            if not trace_stabilizes(trace, radius):
                return Certificate(
                    check="coarsely-proper",
                    verdict="FAIL",
                    radius=radius,
                    data={
                        "map": m.name,
                        "test_set": tag,
                        "trace": {str(r): n for r, n in trace.items()},
                    },
                )
    return Certificate(
        check="coarsely-proper",
        verdict="PASS",
        radius=radius,
        data={
            "map": m.name,
            "traces": {t: {str(r): n for r, n in tr.items()} for t, tr in traces.items()},
        },
    )


def check_close(m1: MapWindow, m2: MapWindow, radius: int) -> Certificate:
    """Is the pair family {{m1(s), m2(s)}} bounded in the shared target?"""
    if m1.source.space != m2.source.space:
        raise SpaceMismatchError("close maps need a common source space")
    if m1.target.label != m2.target.label or m1.target.space != m2.target.space:
        raise SpaceMismatchError("close maps need a common target structure")

    def fn(r: int):
        pairs = [(m1.rule(s), m2.rule(s)) for s in m1.source.space.window(r)]
        return finite_family(m1.target.space, pairs)

    pf = ParamFamily(tag=f"close({m1.name},{m2.name})", space=m1.target.space, fn=fn)
    res = membership_window(m1.target, pf, radius)
    data = {"maps": [m1.name, m2.name], "result": res.to_json()}
    if res.bounded and isinstance(m1.target.space, GroupSpace):
        spec = m1.target.space.spec
        data["displacement"] = max(
            (groups.word_length(spec, w) for w in res.elements), default=0
        )
    return Certificate(
        check="close",
        verdict="PASS" if res.bounded else "FAIL",
        radius=radius,
        data=data,
    )


def _image_index(m: MapWindow, source_radius: int) -> dict:
    """Image value -> least source preimage, in canonical source order."""
    index: dict = {}
    for x in m.source.space.window(source_radius):
        y = m.rule(x)
        if y not in index:
            index[y] = x
    return index


def _full_index(m: MapWindow, source_radius: int) -> dict:
    index: dict = {}
    for x in m.source.space.window(source_radius):
        index.setdefault(m.rule(x), []).append(x)
    return index


def _preimage_family(m: MapWindow, pf: ParamFamily, source_radius: int) -> ParamFamily:
    index = _full_index(m, source_radius)

    def fn(r: int):
        fam = pf.at(r)
        members = []
        for mem in fam.members:
            pre: list = []
            for y in mem:
                pre.extend(index.get(y, ()))
            members.append(pre)
        return finite_family(m.source.space, members)

    return ParamFamily(tag=f"pre({pf.tag})", space=m.source.space, fn=fn)


def _neighborhood(struct: CoarseStructure, y, distance: int) -> tuple:
    if distance == 0:
        return (y,)
    return struct.bounded_neighborhood(y, distance)


def surjective_equivalence_check(
    m: MapWindow,
    radius: int,
    cover_distance: int = 0,
    seed: int = 0,
    n_random: int = 32,
    target_window: Optional[Callable[[int], tuple]] = None,
) -> Certificate:
    """Certify a coarse equivalence through the surjective criterion.

    The target window at the top radius must be covered by the image up to
    ``cover_distance`` (0 demands genuine surjectivity on the window and
    raises otherwise).  On success the certificate stores the canonical
    coarse inverse: every window element is sent to the least preimage of
    the nearest covered point.
    """
    source_radius = m.source_radius(radius)
    index = _image_index(m, source_radius)
    window = target_window(radius) if target_window else m.target.space.window(radius)

    selection: dict = {}
    src_key = m.source.space.sort_key
    for y in window:
        cands = []
        # nearer covered points win; canonical order only breaks ties
        for d in range(cover_distance + 1):
            for z in _neighborhood(m.target, y, d):
                if z in index:
                    cands.append(index[z])
            if cands:
                break
        if not cands:
            raise SurjectivityError(
                m.target.space.serialize(y),
                f"{m.name}: {m.target.space.serialize(y)} not covered within distance {cover_distance}",
            )
        selection[y] = min(cands, key=src_key)

    born = check_bornologous(m, radius, seed=seed, n_random=n_random)
    proper = check_coarsely_proper(m, radius)
    failures = []
    if not born.passed:
        failures.append(born)
    if not proper.passed:
        failures.append(proper)

    preimage_results = {}
    if not failures:
        for pf in m.target.default_battery(seed=seed, n_random=n_random):
            tgt_res = membership_window(m.target, pf, radius)
            if not tgt_res.bounded:
                raise PreconditionError(
                    f"battery family {pf.tag} is not bounded in {m.target.label}"
                )
            pre_pf = _preimage_family(m, pf, source_radius)
            res = membership_window(m.source, pre_pf, radius)
            preimage_results[pf.tag] = res.to_json()
            if not res.bounded:
                failures.append(
                    Certificate(
                        check="preimage-bounded",
                        verdict="FAIL",
                        radius=radius,
                        data={"family": pf.tag, "result": res.to_json()},
                    )
                )
                break

    data: dict = {
        "map": m.name,
        "cover_distance": cover_distance,
        "bornologous": born.to_json(),
        "coarsely_proper": proper.to_json(),
        "preimage_families": preimage_results,
    }

    if failures:
        data["failures"] = [c.to_json() for c in failures]
        return Certificate("surjective-equivalence", "FAIL", radius, data)

    # quality of the canonical selection
    tspace = m.target.space
    sspace = m.source.space

    def mg_fn(r: int):
        pairs = []
        for y in (target_window(r) if target_window else tspace.window(r)):
            pairs.append((m.rule(selection[y]), y))
        return finite_family(tspace, pairs)

    mg_pf = ParamFamily(tag="m.g vs id", space=tspace, fn=mg_fn)
    mg_res = membership_window(m.target, mg_pf, radius)

    def gm_fn(r: int):
        pairs = []
        for x in sspace.window(r):
            y = m.rule(x)
            if y in selection:
                pairs.append((selection[y], x))
        return finite_family(sspace, pairs)

    gm_pf = ParamFamily(tag="g.m vs id", space=sspace, fn=gm_fn)
    gm_res = membership_window(m.source, gm_pf, radius)

    data["selection"] = {
        tspace.serialize(y): sspace.serialize(x) for y, x in selection.items()
    }
    data["close_m_g"] = mg_res.to_json()
    data["close_g_m"] = gm_res.to_json()
    # witness elements live in the structure's witness group, which for
    # induced structures is the acting group rather than the space itself
    data["displacement_m_g"] = max(
        (groups.word_length(mg_res.group, w) for w in mg_res.elements), default=0
    )
    data["displacement_g_m"] = max(
        (groups.word_length(gm_res.group, w) for w in gm_res.elements), default=0
    )

    verdict = "PASS" if (mg_res.bounded and gm_res.bounded) else "FAIL"
    return Certificate("surjective-equivalence", verdict, radius, data)


def selection_map(m: MapWindow, cert: Certificate) -> MapWindow:
    """The stored coarse inverse of a passed equivalence check, as a map."""
    if "selection" not in cert.data:
        raise PreconditionError("certificate carries no selection table")
    table = {
        m.target.space.parse(ys): m.source.space.parse(xs)
        for ys, xs in cert.data["selection"].items()
    }
    return table_map(f"inverse({m.name})", m.target, m.source, table)


def pullback_structure_equality(
    m: MapWindow,
    spec1: CoarseStructure,
    spec2: CoarseStructure,
    radius: int,
    seed: int = 0,
    n_random: int = 32,
) -> Certificate:
    """Compare two structures on the target of a surjective map by pulling
    battery families back and pushing them forward again."""
    if spec1.space != m.target.space or spec2.space != m.target.space:
        raise SpaceMismatchError("both structures must live on the map target")
    source_radius = m.source_radius(radius)
    index = _full_index(m, source_radius)
    for y in m.target.space.window(radius):
        if y not in index:
            raise SurjectivityError(
                m.target.space.serialize(y),
                f"{m.name} is not onto the window: {m.target.space.serialize(y)} uncovered",
            )

    def one_direction(a: CoarseStructure, b: CoarseStructure):
        for pf in a.default_battery(seed=seed, n_random=n_random):
            res_a = membership_window(a, pf, radius)
            if not res_a.bounded:
                raise PreconditionError(f"battery family {pf.tag} is not bounded in {a.label}")
            # round trip through preimages: f(f^-1(B)) must reproduce B
            fam = pf.at(radius)
            for mem in fam.members:
                back = set()
                for y in mem:
                    if y in index:
                        back.add(y)
                if back != set(mem):
                    raise WindowOverflowError(
                        f"member of {pf.tag} leaves the covered window at radius {radius}"
                    )
            res_b = membership_window(b, pf, radius)
            if not res_b.bounded:
                return pf.tag, res_b
        return None, None

    tag, res = one_direction(spec1, spec2)
    direction = f"bounded in {spec1.label}, unbounded in {spec2.label}"
    if tag is None:
        tag, res = one_direction(spec2, spec1)
        direction = f"bounded in {spec2.label}, unbounded in {spec1.label}"
    if tag is None:
        return Certificate(
            "pullback-equality",
            "EQUAL",
            radius,
            data={"map": m.name, "structures": [spec1.label, spec2.label]},
        )
    return Certificate(
        "pullback-equality",
        "DIFFER",
        radius,
        data={
            "map": m.name,
            "structures": [spec1.label, spec2.label],
            "separating_family": tag,
            "direction": direction,
            "result": res.to_json(),
        },
    )
