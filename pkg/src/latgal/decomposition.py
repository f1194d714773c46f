"""Structural decompositions of sup-preserving maps.

* maps between direct products as matrices of factor maps, and back;
* extension/restriction of maps along a sublattice;
* the Birkhoff embedding of a finite distributive lattice into 2^k;
* per-slot factor matrices of an aggregation function over a subdirect
  embedding.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import closure as cl
from . import galois
from . import lattice as lat
from .aggregation import AggTable, SupAggregation
from .errors import BoundaryViolation, NotDistributive, NotSubdirect, NotSublattice, NotSupPreserving
from .lattice import FiniteLattice, ProductCodec
from .maps import LatticeMap, resolve_all


@dataclass(frozen=True)
class MapMatrix:
    """``entries[λ][γ]`` is a sup-preserving map ``rows[λ] -> cols[γ]``."""

    rows: tuple
    cols: tuple
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != len(self.rows) or any(len(r) != len(self.cols) for r in self.entries):
            raise ValueError("matrix shape does not match its row/column lattices")
        for lam, row in enumerate(self.entries):
            for gam, f in enumerate(row):
                if f.domain != self.rows[lam] or f.codomain != self.cols[gam]:
                    raise ValueError(f"entry ({lam}, {gam}) has the wrong domain or codomain")
                if not galois.is_sup_preserving(f):
                    raise NotSupPreserving(f"entry ({lam}, {gam}) does not preserve joins",
                                           witness=[lam, gam])

    @property
    def shape(self) -> tuple:
        return len(self.rows), len(self.cols)

    def __iter__(self):
        for row in self.entries:
            yield from row

    def to_labels(self) -> list:
        return [[f.to_labels() for f in row] for row in self.entries]


def product_decompose(f: LatticeMap, dom: ProductCodec, cod: ProductCodec) -> MapMatrix:
    """Entries f_λγ(x) = f(0 with x in slot λ)(γ)."""
    if dom.n_elements != len(f.domain) or cod.n_elements != len(f.codomain):
        raise ValueError("codecs do not match the map's domain/codomain sizes")
    w = galois.sup_violation(f)
    if w is not None:
        raise NotSupPreserving("map does not preserve joins", witness=list(map(str, w)))
    bottoms = [L.bottom for L in dom.factors]
    entries = []
    for lam, L_lam in enumerate(dom.factors):
        row = []
        images = []
        for x in L_lam:
            t = list(bottoms)
            t[lam] = x
            images.append(cod.decode(f(dom.encode(t))))
        for gam, M_gam in enumerate(cod.factors):
            row.append(LatticeMap(L_lam, M_gam, tuple(img[gam] for img in images)))
        entries.append(tuple(row))
    return MapMatrix(tuple(dom.factors), tuple(cod.factors), tuple(entries))


def product_compose(m: MapMatrix, domain: FiniteLattice = None, codomain: FiniteLattice = None) -> LatticeMap:
    """f(x)(γ) = ⋁_λ f_λγ(x(λ)).

    ``domain``/``codomain`` default to freshly built products of the row and
    column lattices.
    """
    domain = domain if domain is not None else lat.product(m.rows)[0]
    codomain = codomain if codomain is not None else lat.product(m.cols)[0]
    dom, cod = ProductCodec(m.rows), ProductCodec(m.cols)
    coords = dom.coords
    out = np.zeros(dom.n_elements, dtype=np.intp)
    for gam, M in enumerate(m.cols):
        acc = np.full(dom.n_elements, M.bottom, dtype=np.intp)
        for lam in range(len(m.rows)):
            vals = m.entries[lam][gam].array[coords[:, lam]]
            acc = M.join_table[acc, vals]
        out += acc * cod.strides[gam]
    return LatticeMap(domain, codomain, tuple(out.tolist()))


def adjoint_matrix(m: MapMatrix, domain: FiniteLattice = None, codomain: FiniteLattice = None) -> LatticeMap:
    """Upper adjoint of the composed map: g(y)(λ) = ⋀_γ g_λγ(y(γ))."""
    domain = domain if domain is not None else lat.product(m.rows)[0]
    codomain = codomain if codomain is not None else lat.product(m.cols)[0]
    dom, cod = ProductCodec(m.rows), ProductCodec(m.cols)
    adj = [[galois.upper_adjoint(f) for f in row] for row in m.entries]
    coords = cod.coords
    out = np.zeros(cod.n_elements, dtype=np.intp)
    for lam, L in enumerate(m.rows):
        acc = np.full(cod.n_elements, L.top, dtype=np.intp)
        for gam in range(len(m.cols)):
            acc = L.meet_table[acc, adj[lam][gam].array[coords[:, gam]]]
        out += acc * dom.strides[lam]
    return LatticeMap(codomain, domain, tuple(out.tolist()))


def transport(f: LatticeMap, iso: Sequence[int], target: FiniteLattice) -> LatticeMap:
    """Carry a self-map of L to ``target`` along an isomorphism ``iso: L -> target``."""
    inv = [0] * len(iso)
    for x, y in enumerate(iso):
        inv[y] = x
    return LatticeMap(target, target, tuple(iso[f(inv[y])] for y in target))


@dataclass(frozen=True, eq=False)
class SublatticeView:
    """A sublattice M of ``host``; simultaneously a closure and an interior system."""

    host: FiniteLattice
    members: frozenset

    @cached_property
    def embed(self) -> tuple:
        """Sublattice index -> host index."""
        return tuple(sorted(self.members))

    @cached_property
    def position(self) -> dict:
        return {h: i for i, h in enumerate(self.embed)}

    @cached_property
    def lattice(self) -> FiniteLattice:
        e = list(self.embed)
        return lat.from_order([self.host.labels[x] for x in e], self.host.leq[np.ix_(e, e)])

    @cached_property
    def closure(self) -> cl.ClosureSystem:
        return cl.ClosureSystem(self.host, self.members)

    @cached_property
    def interior(self) -> cl.InteriorSystem:
        return cl.InteriorSystem(self.host, self.members)

    def c(self, x: int) -> int:
        return self.closure.table[x]

    def i(self, x: int) -> int:
        return self.interior.table[x]


def sublattice(L: FiniteLattice, X) -> SublatticeView:
    members = frozenset(resolve_all(L, X))
    if not members:
        raise NotSublattice("empty subset")
    ms = sorted(members)
    for a in ms:
        for b in ms:
            for op, table in (("∨", L.join_table), ("∧", L.meet_table)):
                w = int(table[a, b])
                if w not in members:
                    labs = [L.labels[a], L.labels[b], L.labels[w]]
                    raise NotSublattice(f"{labs[0]} {op} {labs[1]} = {labs[2]} is not a member", witness=labs)
    # a finite sublattice used as closure and interior system must hold the bounds
    if L.top not in members or L.bottom not in members:
        raise NotSublattice("sublattice must contain the host's bottom and top")
    return SublatticeView(L, members)


def restrict_to_sublattice(F: LatticeMap, M: SublatticeView) -> LatticeMap:
    """f(x) = c_M(F(x)) for x in M, as a self-map of ``M.lattice``."""
    if not galois.is_sup_preserving(F):
        raise NotSupPreserving("map does not preserve joins")
    return LatticeMap(M.lattice, M.lattice,
                      tuple(M.position[M.c(F(x))] for x in M.embed))


def extend_from_sublattice(f: LatticeMap, M: SublatticeView) -> LatticeMap:
    """F(x) = f(c_M(x)), a self-map of the host."""
    if not galois.is_sup_preserving(f):
        raise NotSupPreserving("map does not preserve joins")
    return LatticeMap(M.host, M.host,
                      tuple(M.embed[f(M.position[M.c(x)])] for x in M.host))


def restricted_adjoint(G: LatticeMap, M: SublatticeView) -> LatticeMap:
    """g(y) = i_M(G(y)) for y in M: the upper adjoint of the restriction of F when G is F's."""
    return LatticeMap(M.lattice, M.lattice,
                      tuple(M.position[M.i(G(y))] for y in M.embed))


@dataclass(frozen=True)
class SubdirectEmbedding:
    """Lattice embedding ``source -> ∏ factors`` with surjective projections."""

    source: FiniteLattice
    factors: tuple
    product: FiniteLattice
    codec: ProductCodec
    embedding: LatticeMap
    irreducibles: tuple = ()

    @cached_property
    def image(self) -> SublatticeView:
        return SublatticeView(self.product, frozenset(self.embedding.values))

    @cached_property
    def inverse(self) -> dict:
        return {y: x for x, y in enumerate(self.embedding.values)}

    def bits(self, x: int) -> str:
        return "".join(self.factors[i].labels[c] for i, c in enumerate(self.codec.decode(self.embedding(x))))

    def to_labels(self) -> dict:
        return {self.source.labels[x]: self.bits(x) for x in self.source}


def subdirect_violation(e: SubdirectEmbedding):
    """Reason the embedding is not a subdirect representation, or None."""
    L, P, v = e.source, e.product, e.embedding.array
    if len(set(v.tolist())) != len(L):
        return "not injective"
    if not np.array_equal(v[L.join_table], P.join_table[v[:, None], v[None, :]]):
        return "does not preserve joins"
    if not np.array_equal(v[L.meet_table], P.meet_table[v[:, None], v[None, :]]):
        return "does not preserve meets"
    coords = e.codec.coords[v]
    for i, F in enumerate(e.factors):
        if set(coords[:, i].tolist()) != set(F):
            return f"projection onto factor {i} is not surjective"
    return None


def birkhoff_subdirect(L: FiniteLattice, order: Sequence = None) -> SubdirectEmbedding:
    """Embed a distributive lattice into 2^k, k = number of join-irreducibles.

    e(x) has bit j set iff the j-th join-irreducible is below x. Irreducibles
    are ordered by ``(rank, label)`` unless ``order`` (indices or labels)
    is given.
    """
    if not lat.is_distributive(L):
        raise NotDistributive("lattice is not distributive")
    irr = lat.join_irreducibles(L)
    if order is None:
        js = sorted(irr, key=lambda j: (L.rank[j], L.labels[j]))
    else:
        js = resolve_all(L, order)
        if set(js) != set(irr) or len(js) != len(irr):
            raise ValueError("order must list every join-irreducible exactly once")
    if not js:
        raise NotSubdirect("a one-element lattice has no subdirect representation over 2")
    two = lat.chain(2)
    factors = (two,) * len(js)
    P, codec = lat.product(factors)
    emb = LatticeMap(L, P, tuple(codec.encode([int(L.le(j, x)) for j in js]) for x in L))
    e = SubdirectEmbedding(L, factors, P, codec, emb, tuple(js))
    why = subdirect_violation(e)
    if why:
        raise NotSubdirect(f"Birkhoff map {why}")
    return e


@dataclass(frozen=True)
class SubdirectDecomposition:
    """Per-slot factor matrices of an aggregation over a subdirect embedding."""

    aggregation: SupAggregation
    embedding: SubdirectEmbedding
    matrices: tuple
    lifted: tuple

    @property
    def n_entries(self) -> int:
        return sum(len(m.rows) * len(m.cols) for m in self.matrices)


def _lift(f: LatticeMap, e: SubdirectEmbedding) -> LatticeMap:
    """Transport a self-map of L onto the image sublattice, then extend to the product."""
    M = e.image
    inv = e.inverse
    on_image = LatticeMap(M.lattice, M.lattice,
                          tuple(M.position[e.embedding(f(inv[h]))] for h in M.embed))
    return extend_from_sublattice(on_image, M)


def subdirect_decompose_aggregation(f: SupAggregation, e: SubdirectEmbedding) -> SubdirectDecomposition:
    """One factor-map matrix per slot, checked against the boundary condition.

    For every factor j the join over slots l and rows i of f^l_ij(1) must be
    the top of factor j.
    """
    if e.source != f.host:
        raise NotSubdirect("embedding source is not the aggregation's lattice")
    why = subdirect_violation(e)
    if why:
        raise NotSubdirect(f"embedding {why}")
    lifted, matrices = [], []
    for comp in f.components:
        F = _lift(comp, e)
        lifted.append(F)
        matrices.append(product_decompose(F, e.codec, e.codec))
    for j, Fj in enumerate(e.factors):
        acc = lat.join(Fj, (m.entries[i][j](m.rows[i].top) for m in matrices for i in range(len(m.rows))))
        if acc != Fj.top:
            raise BoundaryViolation(f"factor {j}: join of f_ij(1) over slots and rows is {Fj.labels[acc]}",
                                    witness=j)
    return SubdirectDecomposition(f, e, tuple(matrices), tuple(lifted))


def subdirect_recompose(dec: SubdirectDecomposition) -> AggTable:
    """Rebuild the aggregation table from the matrices alone.

    f(x) = ⋁_l c_L(F_l(e(x(l)))) with each F_l composed back from its matrix.
    """
    e = dec.embedding
    L, P = e.source, e.product
    M = e.image
    Fs = [product_compose(m, P, P) for m in dec.matrices]
    n = len(Fs)
    # per-slot images in the product, then join in the product, close into the image
    vals = np.full((len(L),) * n, P.bottom, dtype=np.intp)
    for l, F in enumerate(Fs):
        shape = [1] * n
        shape[l] = len(L)
        per = np.array([M.c(F(e.embedding(x))) for x in L], dtype=np.intp).reshape(shape)
        vals = P.join_table[vals, per]
    closed = np.vectorize(M.c, otypes=[np.intp])(vals)
    inv = e.inverse
    back = np.vectorize(lambda h: inv[h], otypes=[np.intp])(closed)
    return AggTable(L, back)
