"""Many-valued formal concept analysis with monotone concept-forming operators.

A data table R: B × A → V and a family assigning each value token a
sup-preserving self-map of a lattice L induce

    F(x)(a) = ⋁_b f_{R(b,a)}(x(b))        L^B -> L^A
    G(y)(b) = ⋀_a g_{R(b,a)}(y(a))        L^A -> L^B

where g_v is the upper adjoint of f_v. (F, G) is a monotone Galois
connection and its fixed-point pairs are the formal concepts.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as cartesian
from pathlib import Path
from typing import Sequence

import numpy as np

from . import galois
from . import lattice as lat
from .aggregation import AggTable
from .errors import (MissingCell, NotBinary, NotComplete, NotSupPreserving, ParseError, SizeLimit,
                     UnmappedToken)
from .lattice import FiniteLattice
from .maps import LatticeMap, resolve

MAX_CONCEPTS = 10**5


@dataclass(frozen=True)
class ManyValuedContext:
    """Objects × attributes table of value tokens. ``table[b][a]`` is R(b, a)."""

    objects: tuple
    attributes: tuple
    table: tuple
    alphabet: tuple = ()

    def __post_init__(self):
        objs = tuple(str(o) for o in self.objects)
        attrs = tuple(str(a) for a in self.attributes)
        rows = tuple(tuple(str(v) for v in row) for row in self.table)
        if len(set(objs)) != len(objs):
            raise ParseError("duplicate object label", witness=_first_dup(objs))
        if len(set(attrs)) != len(attrs):
            raise ParseError("duplicate attribute label", witness=_first_dup(attrs))
        if len(rows) != len(objs) or any(len(r) != len(attrs) for r in rows):
            raise ParseError("table shape does not match the object and attribute lists")
        tokens = sorted({v for r in rows for v in r})
        alpha = tuple(str(v) for v in self.alphabet) if self.alphabet else tuple(tokens)
        stray = [t for t in tokens if t not in alpha]
        if stray:
            raise ParseError(f"token {stray[0]!r} is not in the declared alphabet", witness=stray[0])
        object.__setattr__(self, "objects", objs)
        object.__setattr__(self, "attributes", attrs)
        object.__setattr__(self, "table", rows)
        object.__setattr__(self, "alphabet", alpha)

    @property
    def shape(self) -> tuple:
        return len(self.objects), len(self.attributes)

    def value(self, b: int, a: int) -> str:
        return self.table[b][a]


def _first_dup(seq):
    seen = set()
    for s in seq:
        if s in seen:
            return s
        seen.add(s)
    return None


def parse_context(text: str, alphabet: Sequence = None) -> ManyValuedContext:
    """Parse CSV text: header ``,attr1,attr2,...`` then ``object,v1,v2,...`` rows."""
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise ParseError("empty context file")
    header = [c.strip() for c in rows[0]]
    if header[0] != "":
        raise ParseError("first header cell must be blank")
    attrs = header[1:]
    objs, table = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        row = [c.strip() for c in row]
        if len(row) != len(header):
            raise ParseError(f"line {lineno}: expected {len(header)} cells, got {len(row)}", witness=lineno)
        if not row[0]:
            raise MissingCell(f"line {lineno}: missing object label", witness=lineno)
        for j, cell in enumerate(row[1:]):
            if cell == "":
                raise MissingCell(f"line {lineno}: empty cell for attribute {attrs[j]!r}",
                                  witness=[row[0], attrs[j]])
        objs.append(row[0])
        table.append(row[1:])
    return ManyValuedContext(tuple(objs), tuple(attrs), tuple(map(tuple, table)),
                             tuple(alphabet) if alphabet else ())


def load_context(path, alphabet: Sequence = None) -> ManyValuedContext:
    return parse_context(Path(path).read_text(encoding="utf-8"), alphabet)


@dataclass(frozen=True, eq=False)
class ValueMapFamily:
    """Token -> sup-preserving self-map of ``lattice``; upper adjoints cached."""

    lattice: FiniteLattice
    maps: dict
    adjoints: dict = field(init=False)

    def __post_init__(self):
        adj = {}
        for tok, f in self.maps.items():
            if f.domain != self.lattice or f.codomain != self.lattice:
                raise ValueError(f"map for token {tok!r} is not a self-map of the family's lattice")
            try:
                g = galois.upper_adjoint(f)
            except NotSupPreserving as exc:
                raise NotSupPreserving(f"map for token {tok!r} does not preserve joins",
                                       witness={"token": tok, "pair": exc.witness}) from None
            adj[tok] = g
        object.__setattr__(self, "maps", dict(self.maps))
        object.__setattr__(self, "adjoints", adj)

    @property
    def tokens(self) -> tuple:
        return tuple(self.maps)


def residuated_chain_family(k: int) -> ValueMapFamily:
    """Gödel structure on the k-chain: f_a(x) = min(x, a), g_a(y) = top if a <= y else y."""
    if k < 2:
        raise ValueError("k must be at least 2")
    L = lat.chain(k)
    maps = {L.labels[a]: LatticeMap(L, L, tuple(godel_conjunction(x, a) for x in L)) for a in L}
    fam = ValueMapFamily(L, maps)
    for a in L:
        expect = tuple(godel_implication(a, y, k) for y in L)
        assert fam.adjoints[L.labels[a]].values == expect
    return fam


def godel_conjunction(x: int, a: int) -> int:
    return min(x, a)


def godel_implication(a: int, y: int, k: int) -> int:
    return k - 1 if a <= y else y


@dataclass(frozen=True)
class FormalConcept:
    extent: tuple
    intent: tuple

    def to_labels(self, ctx: ManyValuedContext, L: FiniteLattice) -> dict:
        return {
            "extent": {b: L.labels[v] for b, v in zip(ctx.objects, self.extent)},
            "intent": {a: L.labels[v] for a, v in zip(ctx.attributes, self.intent)},
        }


class ConceptOperators:
    """Precomputed F and G for one (context, family) pair.

    ``fv[b, a]`` / ``gv[b, a]`` hold the value tables of f_{R(b,a)} / g_{R(b,a)}.
    """

    def __init__(self, ctx: ManyValuedContext, fam: ValueMapFamily):
        missing = sorted({v for row in ctx.table for v in row} - set(fam.maps))
        if missing:
            raise UnmappedToken(f"no map assigned to token {missing[0]!r}", witness=missing)
        self.ctx, self.fam, self.L = ctx, fam, fam.lattice
        nb, na = ctx.shape
        n = len(self.L)
        self.fv = np.empty((nb, na, n), dtype=np.intp)
        self.gv = np.empty((nb, na, n), dtype=np.intp)
        for b in range(nb):
            for a in range(na):
                tok = ctx.table[b][a]
                self.fv[b, a] = fam.maps[tok].array
                self.gv[b, a] = fam.adjoints[tok].array

    def F_batch(self, X) -> np.ndarray:
        """Rows of L^B to rows of L^A."""
        X = np.atleast_2d(np.asarray(X, dtype=np.intp))
        nb, na = self.ctx.shape
        J = self.L.join_table
        out = np.full((len(X), na), self.L.bottom, dtype=np.intp)
        for b in range(nb):
            out = J[out, self.fv[b][:, X[:, b]].T]
        return out

    def G_batch(self, Y) -> np.ndarray:
        """Rows of L^A to rows of L^B."""
        Y = np.atleast_2d(np.asarray(Y, dtype=np.intp))
        nb, na = self.ctx.shape
        M = self.L.meet_table
        out = np.full((len(Y), nb), self.L.top, dtype=np.intp)
        for a in range(na):
            out = M[out, self.gv[:, a][np.arange(nb)[None, :], Y[:, [a]]]]
        return out

    def F(self, x) -> tuple:
        return tuple(self.F_batch([x])[0].tolist())

    def G(self, y) -> tuple:
        return tuple(self.G_batch([y])[0].tolist())


def _vector(L, v, n, what):
    if len(v) != n:
        raise ValueError(f"{what} vector has length {len(v)}, expected {n}")
    return tuple(resolve(L, x) for x in v)


def operator_F(ctx: ManyValuedContext, fam: ValueMapFamily, x) -> tuple:
    ops = ConceptOperators(ctx, fam)
    return ops.F(_vector(fam.lattice, x, len(ctx.objects), "extent"))


def operator_G(ctx: ManyValuedContext, fam: ValueMapFamily, y) -> tuple:
    ops = ConceptOperators(ctx, fam)
    return ops.G(_vector(fam.lattice, y, len(ctx.attributes), "intent"))


def _concept_key(L: FiniteLattice, extent: tuple):
    return (sum(L.rank[v] for v in extent), extent)


def concepts(ctx: ManyValuedContext, fam: ValueMapFamily, max_concepts: int = MAX_CONCEPTS) -> list:
    """All formal concepts, as the meet-closure of the extents G(y_{a,v}).

    y_{a,v} is the intent vector equal to v at attribute a and top elsewhere;
    every intent is a meet of such vectors and G preserves meets, so their
    images meet-generate the whole closure system of extents.
    """
    ops = ConceptOperators(ctx, fam)
    L = fam.lattice
    nb, na = ctx.shape
    gens = []
    for a in range(na):
        Y = np.full((len(L), na), L.top, dtype=np.intp)
        Y[:, a] = np.arange(len(L))
        gens.extend(map(tuple, ops.G_batch(Y).tolist()))
    gens = sorted(set(gens))
    top = (L.top,) * nb
    extents = {top}
    for g in gens:
        if g in extents:  # already a meet of earlier generators
            continue
        cur = np.array(sorted(extents), dtype=np.intp)
        met = L.meet_table[cur, np.asarray(g, dtype=np.intp)[None, :]]
        extents.update(map(tuple, met.tolist()))
        if len(extents) > max_concepts:
            raise SizeLimit(f"more than {max_concepts} concepts", witness=max_concepts)
    ext = sorted(extents, key=lambda e: _concept_key(L, e))
    intents = ops.F_batch(ext) if ext else []
    return [FormalConcept(e, tuple(i)) for e, i in zip(ext, np.asarray(intents).tolist())]


def brute_force_concepts(ctx: ManyValuedContext, fam: ValueMapFamily, max_vectors: int = 1 << 20) -> list:
    """Fixed points found by scanning every extent vector in L^B."""
    ops = ConceptOperators(ctx, fam)
    L = fam.lattice
    nb = len(ctx.objects)
    total = len(L) ** nb
    if total > max_vectors:
        raise SizeLimit(f"L^B has {total} vectors, limit is {max_vectors}", witness=total)
    X = np.array(list(cartesian(range(len(L)), repeat=nb)), dtype=np.intp).reshape(total, nb)
    Y = ops.F_batch(X)
    fixed = (ops.G_batch(Y) == X).all(axis=1)
    out = [FormalConcept(tuple(x), tuple(y)) for x, y in zip(X[fixed].tolist(), Y[fixed].tolist())]
    return sorted(out, key=lambda c: _concept_key(L, c.extent))


@dataclass(frozen=True, eq=False)
class ConceptLattice:
    """Concepts ordered by extent; ``lattice`` labels node i as ``c<i>``."""

    concepts: tuple
    host: FiniteLattice
    lattice: FiniteLattice

    @property
    def order(self) -> np.ndarray:
        return self.lattice.leq

    @property
    def covers(self) -> tuple:
        return self.lattice.covers

    def __len__(self):
        return len(self.concepts)


def _vec_leq(L, A: np.ndarray) -> np.ndarray:
    """Componentwise order among the rows of A."""
    k = len(A)
    out = np.ones((k, k), dtype=bool)
    for col in A.T:
        out &= L.leq[col[:, None], col[None, :]]
    return out


def concept_lattice(concepts: Sequence[FormalConcept], host: FiniteLattice) -> ConceptLattice:
    """Order concepts by extent and check they form a complete concept lattice.

    Extents must be meet-closed and contain the top vector, intents
    join-closed and contain the bottom vector, and extent order must agree
    with intent order.
    """
    concepts = tuple(concepts)
    if not concepts:
        raise NotComplete("no concepts given")
    E = np.array([c.extent for c in concepts], dtype=np.intp)
    I = np.array([c.intent for c in concepts], dtype=np.intp)
    ext_set = {tuple(e) for e in E.tolist()}
    int_set = {tuple(i) for i in I.tolist()}
    if len(ext_set) != len(concepts) or len(int_set) != len(concepts):
        raise NotComplete("duplicate extents or intents")
    if (host.top,) * E.shape[1] not in ext_set:
        raise NotComplete("top extent missing")
    if (host.bottom,) * I.shape[1] not in int_set and I.shape[1] > 0:
        raise NotComplete("bottom intent missing")
    for tab, vecs, S, what in ((host.meet_table, E, ext_set, "extents"), (host.join_table, I, int_set, "intents")):
        for v in vecs:
            combos = tab[vecs, v[None, :]]
            for c in map(tuple, combos.tolist()):
                if c not in S:
                    raise NotComplete(f"{what} are not closed (missing {c})", witness=list(c))
    leq = _vec_leq(host, E)
    if not np.array_equal(leq, _vec_leq(host, I)):
        raise NotComplete("extent order and intent order disagree")
    L = lat.from_order([f"c{i}" for i in range(len(concepts))], leq)
    return ConceptLattice(concepts, host, L)


def concept_lattice_dot(cl: ConceptLattice, ctx: ManyValuedContext) -> str:
    """DOT export; each node lists its extent and intent values."""
    H = cl.host
    lines = ["digraph concepts {", "  rankdir=BT;", "  node [shape=box];"]
    for i, c in enumerate(cl.concepts):
        ext = " ".join(f"{b}:{H.labels[v]}" for b, v in zip(ctx.objects, c.extent))
        itn = " ".join(f"{a}:{H.labels[v]}" for a, v in zip(ctx.attributes, c.intent))
        lines.append(f'  c{i} [label="{ext}\\n{itn}"];')
    for a, b in cl.covers:
        lines.append(f"  c{a} -> c{b} [arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def crisp_concepts(ctx: ManyValuedContext, max_attributes: int = 20) -> list:
    """Classical (antitone) concepts of a 0/1 context, by closing every attribute subset.

    Returns ``(objects, attributes)`` pairs of label frozensets.
    """
    tokens = {v for row in ctx.table for v in row}
    if not tokens <= {"0", "1"}:
        raise NotBinary(f"non-binary tokens {sorted(tokens - {'0', '1'})}", witness=sorted(tokens - {"0", "1"}))
    nb, na = ctx.shape
    if na > max_attributes:
        raise SizeLimit(f"{na} attributes exceed the reference limit of {max_attributes}", witness=na)
    rows = [sum(1 << a for a in range(na) if ctx.table[b][a] == "1") for b in range(nb)]
    full = (1 << na) - 1
    found = set()
    for Y in range(1 << na):
        X = frozenset(b for b in range(nb) if rows[b] & Y == Y)
        Xp = full
        for b in X:
            Xp &= rows[b]
        found.add((X, Xp))
    out = [
        (frozenset(ctx.objects[b] for b in X), frozenset(ctx.attributes[a] for a in range(na) if Xp >> a & 1))
        for X, Xp in found
    ]
    return sorted(out, key=lambda c: (len(c[0]), sorted(c[0]), sorted(c[1])))


def top_concept_check(ctx: ManyValuedContext, fam: ValueMapFamily) -> bool:
    """True iff (top, top) is a concept: F(top) = top and G(top) = top."""
    ops = ConceptOperators(ctx, fam)
    L = fam.lattice
    nb, na = ctx.shape
    return ops.F((L.top,) * nb) == (L.top,) * na and ops.G((L.top,) * na) == (L.top,) * nb


@dataclass(frozen=True)
class ColumnAggregation:
    """x ↦ F(x)(a) = ⋁_b f_{R(b,a)}(x(b)) for one attribute a."""

    attribute: str
    components: tuple

    @property
    def host(self) -> FiniteLattice:
        return self.components[0].domain

    @cached_property
    def is_aggregation(self) -> bool:
        """Boundary f(1,…,1) = 1; f(0,…,0) = 0 and monotonicity hold automatically."""
        L = self.host
        return lat.join(L, (f(L.top) for f in self.components)) == L.top

    def __call__(self, x) -> int:
        L = self.host
        return lat.join(L, (f(xi) for f, xi in zip(self.components, x)))

    def table(self, max_elements: int = lat.MAX_ELEMENTS) -> AggTable:
        L, n = self.host, len(self.components)
        if len(L) ** n > max_elements:
            raise SizeLimit(f"table has {len(L) ** n} entries", witness=len(L) ** n)
        out = np.full((len(L),) * n, L.bottom, dtype=np.intp)
        for i, f in enumerate(self.components):
            shape = [1] * n
            shape[i] = len(L)
            out = L.join_table[out, f.array.reshape(shape)]
        return AggTable(L, out)


def column_aggregations(ctx: ManyValuedContext, fam: ValueMapFamily) -> list:
    ConceptOperators(ctx, fam)  # token check
    out = []
    for a, attr in enumerate(ctx.attributes):
        comps = tuple(fam.maps[ctx.table[b][a]] for b in range(len(ctx.objects)))
        out.append(ColumnAggregation(attr, comps))
    return out
