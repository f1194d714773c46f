"""n-ary sup- and inf-preserving aggregation functions on a finite lattice.

A sup-preserving aggregation function is a join of unary sup-preserving
components, one per argument slot, and each component is ``φ ∘ c_S`` for an
isomorphic closure/interior system pair ``(S, T)``. The inf-preserving case
is handled by running the same code on the dual lattice.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product as cartesian
from typing import Callable, Sequence

import numpy as np

from . import closure as cl
from . import galois
from . import lattice as lat
from .errors import (ArityMismatch, BoundaryViolation, HostMismatch, NotInfPreserving, NotIso,
                     NotSupPreserving, SizeLimit)
from .lattice import FiniteLattice
from .maps import LatticeMap, resolve


@dataclass(frozen=True)
class SupAggSpec:
    """One ``(S_i, T_i, φ_i)`` triple per argument slot, all on ``host``."""

    host: FiniteLattice
    slots: tuple

    @property
    def arity(self) -> int:
        return len(self.slots)


@dataclass(frozen=True)
class SupAggregation:
    spec: SupAggSpec
    components: tuple

    @property
    def host(self) -> FiniteLattice:
        return self.spec.host

    @property
    def arity(self) -> int:
        return len(self.components)

    def __call__(self, *x):
        return evaluate(self, x)


@dataclass(frozen=True, eq=False)
class AggTable:
    """Value table of an n-ary function on ``host``: ``values[x1, ..., xn]``."""

    host: FiniteLattice
    values: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.intp)
        if any(s != len(self.host) for s in v.shape):
            raise ValueError(f"table shape {v.shape} does not match lattice size {len(self.host)}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def arity(self) -> int:
        return self.values.ndim

    def __call__(self, *x) -> int:
        return int(self.values[tuple(resolve(self.host, v) for v in x)])

    def __eq__(self, other):
        if not isinstance(other, AggTable):
            return NotImplemented
        return self.host == other.host and np.array_equal(self.values, other.values)

    __hash__ = None

    def to_rows(self) -> list:
        """Rows of labels; for arity 2 the layout is ``x\\y`` by columns."""
        L = self.host
        if self.arity == 2:
            rows = [["x\\y", *L.labels]]
            for x in L:
                rows.append([L.labels[x], *(L.labels[v] for v in self.values[x].tolist())])
            return rows
        rows = [[*(f"x{i + 1}" for i in range(self.arity)), "value"]]
        for t in cartesian(range(len(L)), repeat=self.arity):
            rows.append([*(L.labels[i] for i in t), L.labels[int(self.values[t])]])
        return rows


def table_from_function(L: FiniteLattice, n: int, fn: Callable[..., int]) -> AggTable:
    vals = np.empty((len(L),) * n, dtype=np.intp)
    for t in cartesian(range(len(L)), repeat=n):
        vals[t] = fn(*t)
    return AggTable(L, vals)


def join_function(L: FiniteLattice, n: int = 2) -> AggTable:
    return table_from_function(L, n, lambda *t: lat.join(L, t))


def meet_function(L: FiniteLattice, n: int = 2) -> AggTable:
    return table_from_function(L, n, lambda *t: lat.meet(L, t))


def make_spec(host: FiniteLattice, slots: Sequence) -> SupAggSpec:
    """Validate slot triples and bundle them into a spec."""
    checked = []
    for i, (S, T, phi) in enumerate(slots):
        if S.host != host or T.host != host:
            raise HostMismatch(f"slot {i + 1} is not defined on the spec's lattice", witness=i + 1)
        if not isinstance(S, cl.ClosureSystem) or not isinstance(T, cl.InteriorSystem):
            raise TypeError(f"slot {i + 1} must be (ClosureSystem, InteriorSystem, SystemIso)")
        if phi.source != S or phi.target != T or not cl.check_iso(phi):
            raise NotIso(f"slot {i + 1}: phi is not an isomorphism from S onto T", witness=i + 1)
        checked.append((S, T, phi))
    return SupAggSpec(host, tuple(checked))


def build(spec: SupAggSpec) -> SupAggregation:
    """Components f_i = φ_i ∘ c_{S_i}; requires ⋁ ⊤_i = 1."""
    L = spec.host
    spec = make_spec(L, spec.slots)
    if spec.arity == 0:
        raise ArityMismatch("an aggregation needs at least one slot")
    tops = lat.join(L, [T.greatest for _, T, _ in spec.slots])
    if tops != L.top:
        raise BoundaryViolation(
            f"join of the interior-system tops is {L.labels[tops]}, not {L.labels[L.top]}",
            witness=L.labels[tops],
        )
    comps = tuple(galois.from_systems(S, T, phi).lower for S, T, phi in spec.slots)
    return SupAggregation(spec, comps)


def from_components(host: FiniteLattice, components: Sequence[LatticeMap]) -> SupAggregation:
    """Rebuild an aggregation from unary sup-preserving components via their range systems."""
    slots = []
    for f in components:
        T, S, phi = galois.range_systems(galois.pair(f))
        slots.append((S, T, phi))
    return build(SupAggSpec(host, tuple(slots)))


def evaluate(f: SupAggregation, x: Sequence) -> int:
    """f(x) = ⋁_i f_i(x_i)."""
    if len(x) != f.arity:
        raise ArityMismatch(f"expected {f.arity} arguments, got {len(x)}", witness=len(x))
    L = f.host
    return lat.join(L, (c(resolve(L, xi)) for c, xi in zip(f.components, x)))


def _recompose(L: FiniteLattice, comps: Sequence[np.ndarray]) -> np.ndarray:
    n = len(comps)
    out = np.full((len(L),) * n, L.bottom, dtype=np.intp)
    for i, c in enumerate(comps):
        shape = [1] * n
        shape[i] = len(L)
        out = L.join_table[out, np.asarray(c, dtype=np.intp).reshape(shape)]
    return out


def full_table(f: SupAggregation, max_elements: int = lat.MAX_ELEMENTS) -> AggTable:
    size = len(f.host) ** f.arity
    if size > max_elements:
        raise SizeLimit(f"table has {size} entries, limit is {max_elements}", witness=size)
    return AggTable(f.host, _recompose(f.host, [c.array for c in f.components]))


def _axis_values(table: AggTable, i: int) -> np.ndarray:
    idx = [table.host.bottom] * table.arity
    idx[i] = slice(None)
    return table.values[tuple(idx)]


def nary_sup_violation(table: AggTable):
    """Witness against join preservation of an n-ary table, or None.

    A table preserves joins iff it sends the zero tuple to 0, each unary
    section x ↦ f(0,…,x,…,0) preserves joins, and f is the join of its
    sections. A failure of the last condition is turned into a concrete
    tuple pair by folding the sections in one at a time.
    """
    L, n = table.host, table.arity
    zero = (L.bottom,) * n
    if table.values[zero] != L.bottom:
        return ("bottom",)
    secs = []
    for i in range(n):
        sec = _axis_values(table, i)
        w = galois.sup_violation(LatticeMap(L, L, tuple(sec.tolist())))
        if w is not None:
            a, b = list(zero), list(zero)
            a[i], b[i] = w
            return (tuple(a), tuple(b))
        secs.append(sec)
    mism = _recompose(L, secs) != table.values
    if not mism.any():
        return None
    x = tuple(int(v) for v in np.argwhere(mism)[0])
    acc = list(zero)
    acc[0] = x[0]
    for k in range(1, n):
        e = list(zero)
        e[k] = x[k]
        nxt = list(acc)
        nxt[k] = x[k]
        if table.values[tuple(nxt)] != L.join2(int(table.values[tuple(acc)]), int(table.values[tuple(e)])):
            return (tuple(acc), tuple(e))
        acc = nxt
    raise AssertionError("unreachable: recomposition mismatch without a failing fold step")


def is_nary_sup_preserving(table: AggTable) -> bool:
    return nary_sup_violation(table) is None


def aggregation_violation(table: AggTable):
    """Witness against monotonicity or the boundary conditions, or None."""
    L, n = table.host, table.arity
    if table.values[(L.bottom,) * n] != L.bottom:
        return ("bottom",)
    if table.values[(L.top,) * n] != L.top:
        return ("top",)
    for i in range(n):
        for lo, hi in L.covers:
            a = np.take(table.values, lo, axis=i)
            b = np.take(table.values, hi, axis=i)
            bad = ~L.leq[a, b]
            if bad.any():
                rest = [int(v) for v in np.argwhere(bad)[0]]
                t1 = tuple(rest[:i] + [lo] + rest[i:])
                t2 = tuple(rest[:i] + [hi] + rest[i:])
                return (t1, t2)
    return None


def is_aggregation(table: AggTable) -> bool:
    return aggregation_violation(table) is None


def _tuple_labels(L, w):
    if isinstance(w[0], str):
        return list(w)
    return [[L.labels[i] for i in t] for t in w]


def decompose(table: AggTable) -> list:
    """Unary components f_i(x) = f(0,…,x,…,0) of a sup-preserving table."""
    w = nary_sup_violation(table)
    if w is not None:
        raise NotSupPreserving("table does not preserve joins", witness=_tuple_labels(table.host, w))
    L = table.host
    return [LatticeMap(L, L, tuple(_axis_values(table, i).tolist())) for i in range(table.arity)]


# --- inf-preserving side, by duality -------------------------------------


@dataclass(frozen=True)
class InfAggSpec:
    """One ``(T_i, S_i, φ_i)`` triple per slot: T_i interior, S_i closure, φ_i: T_i → S_i."""

    host: FiniteLattice
    slots: tuple

    @property
    def arity(self) -> int:
        return len(self.slots)


@dataclass(frozen=True)
class InfAggregation:
    spec: InfAggSpec
    on_dual: SupAggregation

    @property
    def host(self) -> FiniteLattice:
        return self.spec.host

    @property
    def arity(self) -> int:
        return self.on_dual.arity

    @cached_property
    def components(self) -> tuple:
        """f_i = φ_i ∘ i_{T_i} as self-maps of the host."""
        L = self.host
        return tuple(LatticeMap(L, L, c.values) for c in self.on_dual.components)

    def __call__(self, *x):
        return evaluate_inf(self, x)


def dual_spec(spec: InfAggSpec) -> SupAggSpec:
    """Reinterpret an inf spec on L as a sup spec on dual(L)."""
    D = lat.dual(spec.host)
    slots = []
    for T, S, phi in spec.slots:
        if T.host != spec.host or S.host != spec.host:
            raise HostMismatch("slot is not defined on the spec's lattice")
        S_d = cl.ClosureSystem(D, T.members)
        T_d = cl.InteriorSystem(D, S.members)
        slots.append((S_d, T_d, cl.SystemIso(S_d, T_d, dict(phi.mapping))))
    return SupAggSpec(D, tuple(slots))


def build_inf(spec: InfAggSpec) -> InfAggregation:
    """Components φ_i ∘ i_{T_i}; requires ⋀ of the least elements of the S_i to be 0."""
    L = spec.host
    try:
        agg = build(dual_spec(spec))
    except BoundaryViolation as exc:
        raise BoundaryViolation(
            f"meet of the closure-system bottoms is {exc.witness}, not {L.labels[L.bottom]}",
            witness=exc.witness,
        ) from None
    return InfAggregation(spec, agg)


def evaluate_inf(f: InfAggregation, x: Sequence) -> int:
    """f(x) = ⋀_i f_i(x_i)."""
    return evaluate(f.on_dual, x)


def full_table_inf(f: InfAggregation, max_elements: int = lat.MAX_ELEMENTS) -> AggTable:
    return AggTable(f.host, full_table(f.on_dual, max_elements).values)


def is_nary_inf_preserving(table: AggTable) -> bool:
    return is_nary_sup_preserving(AggTable(lat.dual(table.host), table.values))


def decompose_inf(table: AggTable) -> list:
    """Unary components f_i(x) = f(1,…,x,…,1) of an inf-preserving table."""
    L = table.host
    try:
        comps = decompose(AggTable(lat.dual(L), table.values))
    except NotSupPreserving as exc:
        raise NotInfPreserving("table does not preserve meets", witness=exc.witness) from None
    return [LatticeMap(L, L, c.values) for c in comps]
