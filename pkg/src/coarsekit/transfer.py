"""Transfer data along a map and enumeration of compatible windows.

Given a map alpha between groups carrying their left structures, the
window of radius R collects two displacement tables:

* c(F), for finite F in the source: the target displacements
  alpha(u)^-1 * alpha(v) over pairs with u^-1 * v in F;
* d(F), for finite F in the target: the source displacements u^-1 * v
  over pairs whose image displacement alpha(u)^-1 * alpha(v) lies in F.

A greedy pass over the target ball produces a finite cover set E with
Ball_H(R) inside alpha(Ball_G(R')).E.

A beta window of radius r is a table Ball_G(r) -> H reproducing this
data:

  (1)  u^-1 * v in F         implies  beta(u)^-1 * beta(v) in c(F)
  (2)  beta(u)^-1 * beta(v) in F  implies  u^-1 * v in d(F)
  (3)  Ball_H(r - mesh(E)) is covered by beta(Ball_G(r)).E

plus a pinned value at the identity.  Tables can be padded with extra
admissible displacements; enumeration then counts every table the
padded data allows under (1) and (2), by depth-first search along
geodesics.

The source group acts on beta windows by precomposition (shrinking the
domain), the target group by postcomposition; the two actions commute.
"""

from __future__ import annotations

from typing import Optional

from . import groups
from .errors import CoverFailureError, PreconditionError, ResourceLimitError, WindowOverflowError
from .families import trace_stabilizes
from .maps import Certificate, MapWindow, check_bornologous, check_coarsely_proper

DEFAULT_COVER_CAP = 64
DEFAULT_ENUM_CAP = 100000

ALL_CONDITIONS = ("pin", "c", "d", "cover")


def _key_tag(spec: groups.GroupSpec, key: frozenset) -> str:
    elems = sorted(key, key=lambda g: groups.sort_key(spec, g))
    return "{" + ",".join(groups.serialize(spec, g) for g in elems) + "}"


def _canon(spec: groups.GroupSpec, values) -> tuple:
    return tuple(sorted(set(values), key=lambda g: groups.sort_key(spec, g)))


def _element_of(spec: groups.GroupSpec, g) -> bool:
    try:
        groups.word_length(spec, g)
    except (TypeError, ValueError, IndexError):
        return False
    return True


class TransferData:
    """Displacement tables, cover set, and the map they were read from."""

    def __init__(self, alpha: MapWindow, radius: int, c_table: dict, d_table: dict, cover: tuple):
        self.alpha = alpha
        self.radius = radius
        self.source_radius = alpha.source_radius(radius)
        self.c_table = dict(c_table)
        self.d_table = dict(d_table)
        self.cover = tuple(cover)

    @property
    def source_spec(self) -> groups.GroupSpec:
        return self.alpha.source.space.spec

    @property
    def target_spec(self) -> groups.GroupSpec:
        return self.alpha.target.space.spec

    def cover_mesh(self) -> int:
        return max((groups.word_length(self.target_spec, e) for e in self.cover), default=0)

    def padded(self, c_extra: Optional[dict] = None, d_extra: Optional[dict] = None) -> "TransferData":
        """New data with extra admissible displacements merged per key."""
        G, H = self.source_spec, self.target_spec
        c_table = dict(self.c_table)
        for key, vals in (c_extra or {}).items():
            key = frozenset(key)
            c_table[key] = _canon(H, tuple(c_table.get(key, ())) + tuple(vals))
        d_table = dict(self.d_table)
        for key, vals in (d_extra or {}).items():
            key = frozenset(key)
            d_table[key] = _canon(G, tuple(d_table.get(key, ())) + tuple(vals))
        return TransferData(self.alpha, self.radius, c_table, d_table, self.cover)

    def to_json(self) -> dict:
        G, H = self.source_spec, self.target_spec
        return {
            "map": self.alpha.name,
            "radius": self.radius,
            "source_radius": self.source_radius,
            "c": {
                _key_tag(G, k): [groups.serialize(H, v) for v in vals]
                for k, vals in sorted(self.c_table.items(), key=lambda kv: _key_tag(G, kv[0]))
            },
            "d": {
                _key_tag(H, k): [groups.serialize(G, v) for v in vals]
                for k, vals in sorted(self.d_table.items(), key=lambda kv: _key_tag(H, kv[0]))
            },
            "cover": [groups.serialize(H, e) for e in self.cover],
            "cover_mesh": self.cover_mesh(),
        }


def _require_coarse(alpha: MapWindow, radius: int) -> None:
    probe = min(radius, 6)
    if not check_bornologous(alpha, probe).passed:
        raise PreconditionError(f"{alpha.name}: transfer data needs a bornologous map")
    if not check_coarsely_proper(alpha, probe).passed:
        raise PreconditionError(f"{alpha.name}: transfer data needs a coarsely proper map")


def _c_set(alpha: MapWindow, F: tuple, src_radius: int) -> tuple:
    """c(F) with its size trace: target displacements over F-related pairs."""
    G = alpha.source.space.spec
    H = alpha.target.space.spec
    b = groups.ball(G, src_radius)
    vals: set = set()
    trace: dict = {}
    for r in range(src_radius + 1):
        for u in b.sphere(r):
            iau = groups.invert(H, alpha(u))
            for f in F:
                v = groups.multiply(G, u, f)
                vals.add(groups.multiply(H, iau, alpha(v)))
        trace[r] = len(vals)
    return _canon(H, vals), trace


def _d_set(alpha: MapWindow, F: tuple, src_radius: int) -> tuple:
    """d(F) with its size trace: source displacements whose image lands in F."""
    G = alpha.source.space.spec
    H = alpha.target.space.spec
    b = groups.ball(G, src_radius)
    Fset = set(F)
    images = {u: alpha(u) for u in b.elements}
    vals: set = set()
    trace: dict = {}
    seen: list = []
    for r in range(src_radius + 1):
        fresh = list(b.sphere(r))
        for u in fresh:
            iau = groups.invert(H, images[u])
            iu = groups.invert(G, u)
            for v in seen + fresh:
                if groups.multiply(H, iau, images[v]) in Fset:
                    vals.add(groups.multiply(G, iu, v))
                if groups.multiply(H, groups.invert(H, images[v]), images[u]) in Fset:
                    vals.add(groups.multiply(G, groups.invert(G, v), u))
        seen += fresh
        trace[r] = len(vals)
    return _canon(G, vals), trace


def compute_transfer_sets(alpha: MapWindow, F, radius: int, verify: bool = True) -> dict:
    """Both displacement sets of one key, with their stabilization traces.

    The key is read in the source for c and in the target for d; the d
    half is omitted when the key does not consist of target elements."""
    G = alpha.source.space.spec
    H = alpha.target.space.spec
    if verify:
        _require_coarse(alpha, radius)
    src_radius = alpha.source_radius(radius)
    c_key = _canon(G, F)
    c_vals, c_trace = _c_set(alpha, c_key, src_radius)
    rec = {
        "key": c_key,
        "c": c_vals,
        "c_trace": c_trace,
        "c_stable": trace_stabilizes(c_trace, src_radius),
        "d": None,
        "d_trace": {},
        "d_stable": None,
    }
    if all(_element_of(H, f) for f in F):
        d_key = _canon(H, F)
        d_vals, d_trace = _d_set(alpha, d_key, src_radius)
        rec["d"] = d_vals
        rec["d_trace"] = d_trace
        rec["d_stable"] = trace_stabilizes(d_trace, src_radius)
    return rec


def compute_cover_constant(alpha: MapWindow, radius: int, cap: int = DEFAULT_COVER_CAP) -> tuple:
    """Greedy finite E with the target ball inside alpha(source ball).E.

    Walks the target ball in canonical order; an uncovered point y
    contributes the least displacement alpha(u)^-1 * y over the source
    ball."""
    G = alpha.source.space.spec
    H = alpha.target.space.spec
    images = [alpha(u) for u in groups.ball(G, alpha.source_radius(radius)).elements]
    inv_images = [groups.invert(H, img) for img in images]
    E: list = []
    Eset: set = set()
    for y in groups.ball(H, radius).elements:
        diffs = _canon(H, (groups.multiply(H, iimg, y) for iimg in inv_images))
        if any(d in Eset for d in diffs):
            continue
        E.append(diffs[0])
        Eset.add(diffs[0])
        if len(E) > cap:
            raise CoverFailureError(
                f"{alpha.name}: cover set exceeded {cap} elements at radius {radius}"
            )
    return _canon(H, E)


def default_key_battery(spec: groups.GroupSpec, extended: bool = False) -> list:
    """Key sets to tabulate: identity and generator singletons, and with
    extended on, all subsets of the 2-ball of size at most 3."""
    keys = [frozenset({groups.identity(spec)})]
    keys += [frozenset({s}) for s in groups.generators(spec)]
    if extended:
        from itertools import combinations

        pool = groups.ball(spec, 2).elements
        for size in (1, 2, 3):
            for combo in combinations(pool, size):
                keys.append(frozenset(combo))
    seen = []
    for k in keys:
        if k not in seen:
            seen.append(k)
    return seen


def build_transfer_data(
    alpha: MapWindow,
    radius: int,
    c_keys: Optional[list] = None,
    d_keys: Optional[list] = None,
    extended: bool = False,
) -> TransferData:
    """Tabulate c over source keys and d over target keys, plus the cover.

    Default batteries are the identity and generator singletons of the
    respective group (all 2-ball subsets of size at most 3 when extended)."""
    G = alpha.source.space.spec
    H = alpha.target.space.spec
    _require_coarse(alpha, radius)
    if c_keys is None:
        c_keys = default_key_battery(G, extended=extended)
    if d_keys is None:
        d_keys = default_key_battery(H, extended=extended)
    src_radius = alpha.source_radius(radius)
    c_table = {}
    for F in c_keys:
        key = frozenset(F)
        c_table[key] = _c_set(alpha, _canon(G, key), src_radius)[0]
    d_table = {}
    for F in d_keys:
        key = frozenset(F)
        d_table[key] = _d_set(alpha, _canon(H, key), src_radius)[0]
    cover = compute_cover_constant(alpha, radius)
    return TransferData(alpha, radius, c_table, d_table, cover)


# ---------------------------------------------------------------------------
# beta windows

def beta_window_check(
    td: TransferData,
    beta: dict,
    radius: int,
    pin=None,
    conditions: tuple = ALL_CONDITIONS,
) -> Certificate:
    """Verify one table against the displacement conditions.

    ``pin`` is the required value at the source identity (the map's own
    value by default).  Reports a verdict per condition with the first
    violating pair; the cover condition compares the shrunk target ball
    against beta(ball).E."""
    G, H = td.source_spec, td.target_spec
    one = groups.identity(G)
    pin = pin if pin is not None else td.alpha(one)
    dom = groups.ball(G, radius).elements
    failures = []

    missing = [x for x in dom if x not in beta]
    if missing:
        failures.append({"condition": "domain", "point": groups.serialize(G, missing[0])})

    if not missing:
        if "pin" in conditions and beta[one] != pin:
            failures.append({"condition": "pin", "value": groups.serialize(H, beta[one])})
        if "c" in conditions:
            for F, cvals in td.c_table.items():
                cset = set(cvals)
                for x in dom:
                    bx_inv = groups.invert(H, beta[x])
                    for f in F:
                        y = groups.multiply(G, x, f)
                        if y in beta and groups.multiply(H, bx_inv, beta[y]) not in cset:
                            failures.append(
                                {"condition": "c", "key": _key_tag(G, F),
                                 "point": groups.serialize(G, x), "step": groups.serialize(G, f)}
                            )
        if "d" in conditions:
            for F, dvals in td.d_table.items():
                Fset = set(F)
                dset = set(dvals)
                for x in dom:
                    bx_inv = groups.invert(H, beta[x])
                    ix = groups.invert(G, x)
                    for y in dom:
                        if groups.multiply(H, bx_inv, beta[y]) in Fset:
                            if groups.multiply(G, ix, y) not in dset:
                                failures.append(
                                    {"condition": "d", "key": _key_tag(H, F),
                                     "pair": [groups.serialize(G, x), groups.serialize(G, y)]}
                                )
        if "cover" in conditions:
            mesh = td.cover_mesh()
            reach = set()
            for x in dom:
                for e in td.cover:
                    reach.add(groups.multiply(H, beta[x], e))
            if radius - mesh >= 0:
                for w in groups.ball(H, radius - mesh).elements:
                    if w not in reach:
                        failures.append({"condition": "cover", "point": groups.serialize(H, w)})
                        break

    per_condition = {name: "PASS" for name in conditions}
    for rec in failures:
        if rec["condition"] in per_condition:
            per_condition[rec["condition"]] = "FAIL"

    return Certificate(
        check="beta-window",
        verdict="PASS" if not failures else "FAIL",
        radius=radius,
        data={
            "map": td.alpha.name,
            "pin": groups.serialize(H, pin),
            "conditions": per_condition,
            "failures": failures[:8],
            "n_failures": len(failures),
        },
    )


def enumerate_beta_windows(
    td: TransferData,
    radius: int,
    pin=None,
    cap: int = DEFAULT_ENUM_CAP,
) -> list:
    """All tables of the given radius compatible with the displacement
    tables, found by DFS along geodesics.

    Candidate values at a new point come from the parent value times the
    c-set of the last geodesic step, so the search is complete whenever
    the c-table has entries for the generator singletons.  Tables are
    filtered by the c and d conditions only (the cover condition asks
    about the image, not the table) and reverified before returning."""
    G, H = td.source_spec, td.target_spec
    one = groups.identity(G)
    pin = pin if pin is not None else td.alpha(one)
    if radius > td.radius:
        raise PreconditionError("enumeration radius exceeds the transfer data radius")
    gens = groups.generators(G)
    for s in gens:
        if frozenset({s}) not in td.c_table:
            raise PreconditionError(
                f"enumeration needs a c-table entry for the generator {groups.serialize(G, s)}"
            )
    b = groups.ball(G, radius)
    dom = b.elements
    singleton_c = {s: td.c_table[frozenset({s})] for s in gens}

    estimate = 1
    for x in dom[1:]:
        estimate *= max(1, len(singleton_c[gens[b.words[x][-1]]]))
        if estimate > cap:
            raise ResourceLimitError(
                f"beta enumeration would expand about {estimate} candidates (cap {cap})"
            )

    d_rules = [(set(F), set(dvals)) for F, dvals in td.d_table.items()]

    def local_ok(x, value, assigned) -> bool:
        iv = groups.invert(H, value)
        ix = groups.invert(G, x)
        for F, cvals in td.c_table.items():
            cset = set(cvals)
            for f in F:
                y = groups.multiply(G, x, f)
                if y in assigned and groups.multiply(H, iv, assigned[y]) not in cset:
                    return False
                z = groups.multiply(G, x, groups.invert(G, f))
                if z in assigned and groups.multiply(H, groups.invert(H, assigned[z]), value) not in cset:
                    return False
        for y, w in assigned.items():
            out = groups.multiply(H, iv, w)
            back = groups.multiply(H, groups.invert(H, w), value)
            for Fset, dset in d_rules:
                if out in Fset and groups.multiply(G, ix, y) not in dset:
                    return False
                if back in Fset and groups.multiply(G, groups.invert(G, y), x) not in dset:
                    return False
        return True

    if dom[0] != one:
        raise PreconditionError("enumeration ball does not start at the identity")

    results: list = []
    expanded = 0

    def extend(idx: int, assigned: dict) -> None:
        nonlocal expanded
        if idx == len(dom):
            results.append(dict(assigned))
            return
        x = dom[idx]
        word = b.words[x]
        parent = groups.multiply(G, x, groups.invert(G, gens[word[-1]]))
        base = assigned[parent]
        for v in _canon(H, (groups.multiply(H, base, c) for c in singleton_c[gens[word[-1]]])):
            expanded += 1
            if expanded > cap:
                raise ResourceLimitError(f"beta enumeration exceeded {cap} nodes")
            if local_ok(x, v, assigned):
                assigned[x] = v
                extend(idx + 1, assigned)
                del assigned[x]

    if local_ok(one, pin, {}):
        extend(1, {one: pin})

    verified = []
    for beta in results:
        cert = beta_window_check(td, beta, radius, pin=pin, conditions=("pin", "c", "d"))
        if cert.passed:
            verified.append(beta)
    verified.sort(key=lambda t: tuple(groups.sort_key(H, t[x]) for x in dom))
    return verified


# ---------------------------------------------------------------------------
# the two commuting actions on beta windows

def act_source(td: TransferData, g, beta: dict, radius: int) -> tuple:
    """(g.beta)(x) = beta(g*x); the domain shrinks by the length of g."""
    G = td.source_spec
    new_radius = radius - groups.word_length(G, g)
    if new_radius < 0:
        raise WindowOverflowError("source action shrinks the domain below radius 0")
    out = {}
    for x in groups.ball(G, new_radius).elements:
        out[x] = beta[groups.multiply(G, g, x)]
    return out, new_radius


def act_target(td: TransferData, h, beta: dict) -> dict:
    """(h.beta)(x) = h*beta(x); the domain is unchanged."""
    H = td.target_spec
    return {x: groups.multiply(H, h, v) for x, v in beta.items()}


def actions_commute_check(
    td: TransferData,
    beta: dict,
    radius: int,
    g_depth: int = 1,
    h_depth: int = 1,
) -> Certificate:
    """Source precomposition and target postcomposition commute on beta."""
    G, H = td.source_spec, td.target_spec
    checked = 0
    for g in groups.ball(G, g_depth).elements:
        shrunk, new_radius = act_source(td, g, beta, radius)
        for h in groups.ball(H, h_depth).elements:
            one = act_target(td, h, shrunk)
            two, _ = act_source(td, g, act_target(td, h, beta), radius)
            if one != two:
                return Certificate(
                    check="beta-actions-commute",
                    verdict="FAIL",
                    radius=radius,
                    data={
                        "g": groups.serialize(G, g),
                        "h": groups.serialize(H, h),
                    },
                )
            checked += 1
    return Certificate(
        check="beta-actions-commute",
        verdict="PASS",
        radius=radius,
        data={"pairs_checked": checked, "g_depth": g_depth, "h_depth": h_depth},
    )
