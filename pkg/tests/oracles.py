"""Brute-force reference computations used by the tests.

Nothing here touches the library's tables or algorithms beyond reading an
order relation; everything is recomputed by enumeration.
"""
from itertools import product as cartesian

# Golden values f(x, y) of the binary reference aggregation on the six-element lattice.
GOLDEN_ORDER = ["0", "a", "b", "c", "d", "1"]
GOLDEN_TABLE = {
    "0": ["0", "0", "b", "b", "b", "b"],
    "a": ["c", "c", "1", "1", "1", "1"],
    "b": ["c", "c", "1", "1", "1", "1"],
    "c": ["a", "a", "b", "b", "b", "b"],
    "d": ["d", "d", "1", "1", "1", "1"],
    "1": ["d", "d", "1", "1", "1", "1"],
}

L6_COVERS = [("0", "a"), ("0", "c"), ("a", "b"), ("a", "d"), ("c", "d"), ("b", "1"), ("d", "1")]


def reach(labels, covers):
    """Reflexive-transitive closure of covers by depth-first search; dict label -> set of labels above."""
    up = {s: set() for s in labels}
    for lo, hi in covers:
        up[lo].add(hi)
    out = {}
    for s in labels:
        seen, stack = {s}, [s]
        while stack:
            for t in up[stack.pop()]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        out[s] = seen
    return out


def lub(leq, xs, n):
    """Least upper bound by scanning all candidates; None if absent."""
    ubs = [z for z in range(n) if all(leq[x][z] for x in xs)]
    least = [z for z in ubs if all(leq[z][w] for w in ubs)]
    return least[0] if len(least) == 1 else None


def glb(leq, xs, n):
    lbs = [z for z in range(n) if all(leq[z][x] for x in xs)]
    great = [z for z in lbs if all(leq[w][z] for w in lbs)]
    return great[0] if len(great) == 1 else None


def leq_lists(L):
    return L.leq.tolist()


def preserves_joins(L, M, f):
    """Brute force: f(0)=0 and f(x∨y) = f(x)∨f(y), joins recomputed by scanning."""
    lq, mq, n, m = leq_lists(L), leq_lists(M), len(L), len(M)
    if f[lub(lq, [], n)] != lub(mq, [], m):
        return False
    for x in range(n):
        for y in range(n):
            if f[lub(lq, [x, y], n)] != lub(mq, [f[x], f[y]], m):
                return False
    return True


def adjoint_by_search(L, M, f):
    """An upper adjoint of f: L -> M found pointwise by exhaustive search, or None.

    The adjunction condition decouples over y, so g(y) must be the unique z
    whose principal ideal equals {x : f(x) <= y}.
    """
    lq, mq = leq_lists(L), leq_lists(M)
    g = []
    for y in range(len(M)):
        pre = {x for x in range(len(L)) if mq[f[x]][y]}
        zs = [z for z in range(len(L)) if {x for x in range(len(L)) if lq[x][z]} == pre]
        if not zs:
            return None
        g.append(zs[0])
    return tuple(g)


def all_adjoints(L, M, f):
    """Every g: M -> L satisfying the adjunction with f, by enumerating all maps."""
    lq, mq = leq_lists(L), leq_lists(M)
    out = []
    for g in cartesian(range(len(L)), repeat=len(M)):
        if all(mq[f[x]][y] == lq[x][g[y]] for x in range(len(L)) for y in range(len(M))):
            out.append(g)
    return out


def all_maps(n, m):
    return cartesian(range(m), repeat=n)


def fixed_point_concepts(L, objects, attributes, table, fmaps, gmaps):
    """Scan every extent vector; F and G written out straight from their definitions."""
    lq = leq_lists(L)
    n = len(L)
    nb, na = len(objects), len(attributes)
    out = set()
    for x in cartesian(range(n), repeat=nb):
        y = tuple(lub(lq, [fmaps[table[b][a]][x[b]] for b in range(nb)], n) for a in range(na))
        back = tuple(glb(lq, [gmaps[table[b][a]][y[a]] for a in range(na)], n) for b in range(nb))
        if back == x:
            out.add((x, y))
    return out


def concept_oracle(ctx, fam):
    """Fixed-point scan; adjoints of the family's maps are found by search, not taken from the family."""
    L = fam.lattice
    fm = {t: f.values for t, f in fam.maps.items()}
    gm = {t: adjoint_by_search(L, L, v) for t, v in fm.items()}
    return fixed_point_concepts(fam.lattice, ctx.objects, ctx.attributes, ctx.table, fm, gm)
