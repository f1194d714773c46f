"""Closure and interior systems on finite lattices.

On a finite lattice "closed under arbitrary meets" reduces to "closed under
binary meets and contains top"; dually for interior systems and joins.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import lattice as lat
from .errors import MissingBound, NotClosed, NotClosureOperator, NotIso
from .lattice import FiniteLattice
from .maps import LatticeMap, resolve, resolve_all


@dataclass(frozen=True, eq=False)
class _System:
    host: FiniteLattice
    members: frozenset

    def __contains__(self, x):
        return x in self.members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.members == other.members and self.host == other.host

    def __hash__(self):
        return hash((type(self).__name__, self.members))

    def __repr__(self):
        names = ", ".join(self.host.labels[x] for x in self.elements)
        return f"{type(self).__name__}({{{names}}})"

    @cached_property
    def elements(self) -> tuple:
        return tuple(sorted(self.members))

    @property
    def least(self) -> int:
        return lat.meet(self.host, self.elements)

    @property
    def greatest(self) -> int:
        return lat.join(self.host, self.elements)

    def sub_leq(self) -> np.ndarray:
        e = list(self.elements)
        return self.host.leq[np.ix_(e, e)]

    def labels(self) -> list:
        return [self.host.labels[x] for x in self.elements]


class ClosureSystem(_System):
    """Meet-closed subset containing top. Operator: least member above x."""

    @cached_property
    def table(self) -> tuple:
        L = self.host
        mem = np.array(self.elements, dtype=np.intp)
        out = []
        for x in L:
            above = mem[L.leq[x, mem]]
            out.append(lat.meet(L, above.tolist()))
        return tuple(out)


class InteriorSystem(_System):
    """Join-closed subset containing bottom. Operator: greatest member below x."""

    @cached_property
    def table(self) -> tuple:
        L = self.host
        mem = np.array(self.elements, dtype=np.intp)
        out = []
        for x in L:
            below = mem[L.leq[mem, x]]
            out.append(lat.join(L, below.tolist()))
        return tuple(out)

    @property
    def top_element(self) -> int:
        """The greatest member (written ⊤ for the slot's interior system)."""
        return self.greatest


@dataclass(frozen=True, eq=False)
class SystemIso:
    """Bijection between the members of two systems, as an index dict."""

    source: _System
    target: _System
    mapping: dict

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def __eq__(self, other):
        if not isinstance(other, SystemIso):
            return NotImplemented
        return (self.mapping == other.mapping and self.source == other.source
                and self.target == other.target)

    def __hash__(self):
        return hash(tuple(sorted(self.mapping.items())))

    def __repr__(self):
        s, t = self.source.host.labels, self.target.host.labels
        body = ", ".join(f"{s[x]}->{t[y]}" for x, y in sorted(self.mapping.items()))
        return f"SystemIso({body})"

    def inverse(self) -> "SystemIso":
        return SystemIso(self.target, self.source, {y: x for x, y in self.mapping.items()})

    def to_labels(self) -> dict:
        s, t = self.source.host.labels, self.target.host.labels
        return {s[x]: t[y] for x, y in sorted(self.mapping.items())}


def _closed_pair(L, mem_sorted, table, members):
    for i, x in enumerate(mem_sorted):
        for y in mem_sorted[i + 1:]:
            w = int(table[x, y])
            if w not in members:
                return x, y, w
    return None


def validate_closure_system(L: FiniteLattice, X) -> ClosureSystem:
    members = frozenset(resolve_all(L, X))
    if L.top not in members:
        raise MissingBound(f"top {L.labels[L.top]} is not a member")
    bad = _closed_pair(L, sorted(members), L.meet_table, members)
    if bad:
        x, y, w = (L.labels[i] for i in bad)
        raise NotClosed(f"{x} ∧ {y} = {w} is not a member", witness=[x, y, w])
    return ClosureSystem(L, members)


def validate_interior_system(L: FiniteLattice, X) -> InteriorSystem:
    members = frozenset(resolve_all(L, X))
    if L.bottom not in members:
        raise MissingBound(f"bottom {L.labels[L.bottom]} is not a member")
    bad = _closed_pair(L, sorted(members), L.join_table, members)
    if bad:
        x, y, w = (L.labels[i] for i in bad)
        raise NotClosed(f"{x} ∨ {y} = {w} is not a member", witness=[x, y, w])
    return InteriorSystem(L, members)


def closure_of(S: ClosureSystem, x) -> int:
    return S.table[resolve(S.host, x)]


def interior_of(T: InteriorSystem, x) -> int:
    return T.table[resolve(T.host, x)]


def operator_of_system(S: _System) -> LatticeMap:
    """The closure (or interior) operator of a system as a self-map."""
    return LatticeMap(S.host, S.host, S.table)


def _operator_violation(L: FiniteLattice, c, extensive: bool):
    c = np.asarray(c, dtype=np.intp)
    leq = L.leq
    mono = leq & ~leq[c[:, None], c[None, :]]
    if mono.any():
        x, y = map(int, np.argwhere(mono)[0])
        return "monotone", [L.labels[x], L.labels[y]]
    n = np.arange(len(L))
    ext = ~leq[n, c] if extensive else ~leq[c, n]
    if ext.any():
        x = int(np.flatnonzero(ext)[0])
        return ("extensive" if extensive else "intensive"), [L.labels[x]]
    idem = c[c] != c
    if idem.any():
        x = int(np.flatnonzero(idem)[0])
        return "idempotent", [L.labels[x]]
    return None


def _values(L, c):
    if isinstance(c, LatticeMap):
        return c.values
    return tuple(resolve(L, v) for v in c)


def system_of_operator(L: FiniteLattice, c) -> ClosureSystem:
    """Fixed points of a closure operator (checked exhaustively)."""
    vals = _values(L, c)
    bad = _operator_violation(L, vals, extensive=True)
    if bad:
        raise NotClosureOperator(f"map is not {bad[0]} at {bad[1]}", witness={"law": bad[0], "at": bad[1]})
    return ClosureSystem(L, frozenset(x for x in L if vals[x] == x))


def interior_system_of_operator(L: FiniteLattice, i) -> InteriorSystem:
    vals = _values(L, i)
    bad = _operator_violation(L, vals, extensive=False)
    if bad:
        raise NotClosureOperator(f"map is not {bad[0]} at {bad[1]}", witness={"law": bad[0], "at": bad[1]})
    return InteriorSystem(L, frozenset(x for x in L if vals[x] == x))


def meet_closure(L: FiniteLattice, generators) -> ClosureSystem:
    """Smallest closure system containing the generators."""
    out = {L.top}
    for g in resolve_all(L, generators):
        out |= {L.meet2(r, g) for r in out}
    return ClosureSystem(L, frozenset(out))


def join_closure(L: FiniteLattice, generators) -> InteriorSystem:
    """Smallest interior system containing the generators."""
    out = {L.bottom}
    for g in resolve_all(L, generators):
        out |= {L.join2(r, g) for r in out}
    return InteriorSystem(L, frozenset(out))


def enumerate_isos(A: _System, B: _System) -> list:
    """All order isomorphisms between the members of two systems."""
    ea, eb = A.elements, B.elements
    return [
        SystemIso(A, B, {ea[i]: eb[j] for i, j in enumerate(m)})
        for m in lat.order_isomorphisms(A.sub_leq(), B.sub_leq())
    ]


def check_iso(phi: SystemIso) -> bool:
    """True iff ``phi`` is a bijection between the members that preserves and reflects order."""
    A, B, m = phi.source, phi.target, phi.mapping
    if set(m) != set(A.members) or set(m.values()) != set(B.members) or len(A) != len(B):
        return False
    for x in A.members:
        for y in A.members:
            if A.host.le(x, y) != B.host.le(m[x], m[y]):
                return False
    return True


def make_iso(source: _System, target: _System, mapping: dict) -> SystemIso:
    """Build an iso from an index or label mapping, raising NotIso if invalid."""
    try:
        m = {resolve(source.host, k): resolve(target.host, v) for k, v in mapping.items()}
    except (KeyError, IndexError) as exc:
        raise NotIso(f"iso references unknown element: {exc}") from None
    phi = SystemIso(source, target, m)
    if not check_iso(phi):
        raise NotIso("mapping is not an order isomorphism between the systems",
                     witness=phi.to_labels())
    return phi
