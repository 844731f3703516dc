"""Independent reference implementations used to pin expected values.

Everything here recomputes results from first principles, with deliberately
different algorithms than the package (affine maps instead of normal-form
arithmetic, repeated-scan reduction instead of a stack, plain dict BFS
instead of the cached ball object, exhaustive product search instead of
backtracking).  Tests compare the package output against these.
"""

from __future__ import annotations

import itertools


# ---------------------------------------------------------------------------
# infinite dihedral group as affine maps z -> n + (-1)^f z

def dih_affine(el):
    n, f = el
    return lambda z: n + (-1) ** f * z


def dih_from_affine(fn):
    n = fn(0)
    step = fn(1) - fn(0)
    assert step in (1, -1)
    return (n, 0 if step == 1 else 1)


def dih_mul(a, b):
    fa, fb = dih_affine(a), dih_affine(b)
    return dih_from_affine(lambda z: fa(fb(z)))


def dih_inv(a):
    fa = dih_affine(a)
    # solve fa(w) = z for w
    n, f = a
    if f == 0:
        return dih_from_affine(lambda z: z - n)
    return dih_from_affine(lambda z: n - z)


# ---------------------------------------------------------------------------
# free group on two letters, elements as tuples of nonzero ints

def free_reduce(letters):
    """Scan repeatedly for adjacent cancelling pairs until none remain."""
    word = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(word) - 1):
            if word[i] == -word[i + 1]:
                del word[i:i + 2]
                changed = True
                break
    return tuple(word)


def free_mul(a, b):
    return free_reduce(tuple(a) + tuple(b))


def free_inv(a):
    return tuple(-s for s in reversed(a))


# ---------------------------------------------------------------------------
# naive ball BFS: dict of distances, no ordering cleverness

_TABLES = {
    "Z": (lambda a, b: a + b, lambda a: -a, 0, (1, -1)),
    "Z2": (
        lambda a, b: (a[0] + b[0], a[1] + b[1]),
        lambda a: (-a[0], -a[1]),
        (0, 0),
        ((1, 0), (-1, 0), (0, 1), (0, -1)),
    ),
    "DIH": (dih_mul, dih_inv, (0, 0), ((1, 0), (-1, 0), (0, 1))),
    "F2": (free_mul, free_inv, (), ((1,), (-1,), (2,), (-2,))),
    "Z6": (lambda a, b: (a + b) % 6, lambda a: (-a) % 6, 0, (1, 5)),
}


def naive_ball(kind: str, radius: int) -> dict:
    """Map element -> word length for the ball of the given radius."""
    mul, _inv, identity, gens = _TABLES[kind]
    dist = {identity: 0}
    frontier = [identity]
    for r in range(1, radius + 1):
        nxt = []
        for g in frontier:
            for s in gens:
                h = mul(g, s)
                if h not in dist:
                    dist[h] = r
                    nxt.append(h)
        frontier = nxt
    return dist


def naive_conjugacy_window(kind: str, a, radius: int) -> set:
    mul, inv, _identity, _gens = _TABLES[kind]
    return {mul(inv(h), mul(a, h)) for h in naive_ball(kind, radius)}


# ---------------------------------------------------------------------------
# star of a set against a family, straight from the definition

def naive_star(block, members) -> set:
    out = set(block)
    for m in members:
        if set(m) & set(block):
            out |= set(m)
    return out


# ---------------------------------------------------------------------------
# witness sets, straight from the definition

def naive_witness(side: str, mul, inv, members) -> set:
    out = set()
    for m in members:
        for u in m:
            for v in m:
                if side == "left":
                    out.add(mul(inv(u), v))
                else:
                    out.add(mul(v, inv(u)))
    return out


# ---------------------------------------------------------------------------
# exhaustive search for compatible partial maps on integer windows

def brute_betas(td, radius: int, pin: int = 0) -> list:
    """All integer tables on the ball satisfying the two transfer conditions.

    Grows the domain one radius at a time, rechecking every pair of the
    extended table each step.  Any valid table restricts to a valid table
    on the smaller ball, so this enumerates exactly the full solution set.
    Candidate values are bounded by the largest c-set entry times the
    radius, which covers every table the package search can produce.
    """
    cmax = 1
    for key, out in td.c_table.items():
        for h in out:
            cmax = max(cmax, abs(h))
    bound = abs(pin) + cmax * radius
    pool = range(-bound, bound + 1)

    def ok(beta):
        xs = list(beta)
        for u in xs:
            for v in xs:
                diff = v - u
                hdiff = beta[v] - beta[u]
                for key, out in td.c_table.items():
                    if diff in key and hdiff not in out:
                        return False
                for key, out in td.d_table.items():
                    if hdiff in key and diff not in out:
                        return False
        return True

    solutions = [{0: pin}] if ok({0: pin}) else []
    for r in range(1, radius + 1):
        extended = []
        for base in solutions:
            for va, vb in itertools.product(pool, repeat=2):
                beta = dict(base)
                beta[r] = va
                beta[-r] = vb
                if ok(beta):
                    extended.append(beta)
        solutions = extended
    dom = sorted(range(-radius, radius + 1), key=lambda n: (abs(n), n))
    solutions.sort(key=lambda b: tuple(b[x] for x in dom))
    return solutions
