"""Finite bounded lattices.

A lattice is stored densely: a boolean order matrix plus join and meet tables
indexed by element position. Elements are referred to by integer index
everywhere in the library; labels exist for I/O and display.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce
from itertools import product as cartesian
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CycleError, NoBounds, NotALattice, SizeLimit

MAX_ELEMENTS = 10**6


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FiniteLattice:
    """Immutable finite bounded lattice.

    Attributes
    ----------
    labels : tuple of str
        Element names; element ``i`` is ``labels[i]``.
    leq : ndarray of bool, shape (n, n)
        ``leq[x, y]`` is True iff ``x <= y``.
    join_table, meet_table : ndarray of int, shape (n, n)
        Binary join and meet as element indices.

    Use :func:`from_covers` or :func:`from_order` to build one from raw
    input; the constructor trusts its arguments.
    """

    labels: tuple
    leq: np.ndarray
    join_table: np.ndarray
    meet_table: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        object.__setattr__(self, "leq", _frozen(np.asarray(self.leq, dtype=bool)))
        object.__setattr__(self, "join_table", _frozen(np.asarray(self.join_table, dtype=np.intp)))
        object.__setattr__(self, "meet_table", _frozen(np.asarray(self.meet_table, dtype=np.intp)))

    def __len__(self):
        return len(self.labels)

    def __iter__(self) -> Iterator[int]:
        return iter(range(len(self.labels)))

    def __eq__(self, other):
        if not isinstance(other, FiniteLattice):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.leq, other.leq)

    def __hash__(self):
        return hash((self.labels, self.leq.tobytes()))

    def __repr__(self):
        return f"FiniteLattice({len(self)} elements, bottom={self.labels[self.bottom]!r}, top={self.labels[self.top]!r})"

    @property
    def size(self) -> int:
        return len(self.labels)

    @cached_property
    def bottom(self) -> int:
        return int(np.flatnonzero(self.leq.all(axis=1))[0])

    @cached_property
    def top(self) -> int:
        return int(np.flatnonzero(self.leq.all(axis=0))[0])

    @cached_property
    def _index(self) -> dict:
        return {s: i for i, s in enumerate(self.labels)}

    def index(self, label) -> int:
        """Index of the element named ``label``."""
        try:
            return self._index[str(label)]
        except KeyError:
            raise KeyError(f"no element labelled {label!r}") from None

    def label(self, i: int) -> str:
        return self.labels[i]

    def le(self, x: int, y: int) -> bool:
        return bool(self.leq[x, y])

    def join2(self, x: int, y: int) -> int:
        return int(self.join_table[x, y])

    def meet2(self, x: int, y: int) -> int:
        return int(self.meet_table[x, y])

    @cached_property
    def cover_matrix(self) -> np.ndarray:
        lt = self.leq & ~np.eye(len(self), dtype=bool)
        two_step = (lt.astype(np.float32) @ lt.astype(np.float32)) > 0
        return _frozen(lt & ~two_step)

    @cached_property
    def covers(self) -> tuple:
        """Hasse diagram edges ``(lower, upper)`` in index order."""
        lo, hi = np.nonzero(self.cover_matrix)
        return tuple(zip(lo.tolist(), hi.tolist()))

    def lower_covers(self, x: int) -> list:
        return np.flatnonzero(self.cover_matrix[:, x]).tolist()

    def upper_covers(self, x: int) -> list:
        return np.flatnonzero(self.cover_matrix[x, :]).tolist()

    @cached_property
    def rank(self) -> tuple:
        """Length of the longest chain from bottom to each element."""
        n = len(self)
        order = np.argsort(self.leq.sum(axis=0), kind="stable")  # by down-set size
        rank = [0] * n
        cm = self.cover_matrix
        for x in order.tolist():
            for y in np.flatnonzero(cm[x]).tolist():
                rank[y] = max(rank[y], rank[x] + 1)
        return tuple(rank)


@dataclass(frozen=True)
class ProductCodec:
    """Bijection between product-element indices and coordinate tuples.

    Row-major: the last coordinate varies fastest.
    """

    factors: tuple

    @property
    def sizes(self) -> tuple:
        return tuple(len(f) for f in self.factors)

    @cached_property
    def strides(self) -> tuple:
        out, acc = [], 1
        for s in reversed(self.sizes):
            out.append(acc)
            acc *= s
        return tuple(reversed(out))

    @property
    def n_elements(self) -> int:
        return int(np.prod(self.sizes, dtype=object))

    def encode(self, coords: Sequence[int]) -> int:
        if len(coords) != len(self.factors):
            raise ValueError(f"expected {len(self.factors)} coordinates, got {len(coords)}")
        for c, s in zip(coords, self.sizes):
            if not 0 <= c < s:
                raise ValueError(f"coordinate {c} out of range for factor of size {s}")
        return int(sum(c * st for c, st in zip(coords, self.strides)))

    def decode(self, index: int) -> tuple:
        if not 0 <= index < self.n_elements:
            raise ValueError(f"index {index} out of range")
        return tuple(int(index // st) % s for st, s in zip(self.strides, self.sizes))

    @cached_property
    def coords(self) -> np.ndarray:
        """All coordinate tuples as an (N, k) array, row i decoding index i."""
        grids = np.indices(self.sizes).reshape(len(self.sizes), -1).T
        return _frozen(grids)


def _check_partial_order(leq: np.ndarray, labels) -> None:
    n = len(leq)
    if not leq[np.arange(n), np.arange(n)].all():
        raise NotALattice("order relation is not reflexive")
    both = leq & leq.T & ~np.eye(n, dtype=bool)
    if both.any():
        x, y = map(int, np.argwhere(both)[0])
        raise CycleError(f"{labels[x]} and {labels[y]} are mutually below each other",
                         witness=[labels[x], labels[y]])
    f = leq.astype(np.float32)
    if ((f @ f > 0) & ~leq).any():
        raise NotALattice("order relation is not transitive")


def _bound_tables(leq: np.ndarray, labels) -> tuple:
    """Join and meet tables by up-set counting; raises if a pair lacks a lub/glb."""
    n = len(leq)
    up_size = leq.sum(axis=1)
    down_size = leq.sum(axis=0)
    join = np.empty((n, n), dtype=np.intp)
    meet = np.empty((n, n), dtype=np.intp)
    for x in range(n):
        ub = leq[x][None, :] & leq              # ub[y, z]: z above both x and y
        z = np.where(ub, up_size[None, :], -1).argmax(axis=1)
        bad = (ub & ~leq[z]).any(axis=1)
        if bad.any():
            y = int(np.flatnonzero(bad)[0])
            raise NotALattice(f"{labels[x]} and {labels[y]} have no least upper bound",
                              witness=[labels[x], labels[y]])
        join[x] = z
        lb = leq[:, x][None, :] & leq.T         # lb[y, z]: z below both
        z = np.where(lb, down_size[None, :], -1).argmax(axis=1)
        bad = (lb & ~leq[:, z].T).any(axis=1)
        if bad.any():
            y = int(np.flatnonzero(bad)[0])
            raise NotALattice(f"{labels[x]} and {labels[y]} have no greatest lower bound",
                              witness=[labels[x], labels[y]])
        meet[x] = z
    return join, meet


def from_order(labels: Sequence, leq) -> FiniteLattice:
    """Build a lattice from a full order relation, validating every axiom."""
    labels = [str(s) for s in labels]
    if len(set(labels)) != len(labels):
        raise ValueError("element labels must be distinct")
    if not labels:
        raise NoBounds("empty carrier has no bottom or top")
    leq = np.asarray(leq, dtype=bool)
    if leq.shape != (len(labels), len(labels)):
        raise ValueError(f"order matrix has shape {leq.shape}, expected {(len(labels),) * 2}")
    _check_partial_order(leq, labels)
    if not leq.all(axis=1).any():
        raise NoBounds("no global bottom element")
    if not leq.all(axis=0).any():
        raise NoBounds("no global top element")
    join, meet = _bound_tables(leq, labels)
    return FiniteLattice(tuple(labels), leq, join, meet)


def from_covers(labels: Sequence, covers: Iterable) -> FiniteLattice:
    """Build a lattice from its Hasse diagram.

    ``covers`` holds ``(lower, upper)`` label pairs. The order is the
    reflexive-transitive closure of the covers.
    """
    labels = [str(s) for s in labels]
    if len(set(labels)) != len(labels):
        raise ValueError("element labels must be distinct")
    pos = {s: i for i, s in enumerate(labels)}
    n = len(labels)
    leq = np.eye(n, dtype=bool)
    for lo, hi in covers:
        lo, hi = str(lo), str(hi)
        if lo not in pos or hi not in pos:
            missing = lo if lo not in pos else hi
            raise ValueError(f"cover ({lo}, {hi}) references unknown element {missing!r}")
        if lo == hi:
            raise CycleError(f"cover ({lo}, {hi}) is a loop", witness=[lo, hi])
        leq[pos[lo], pos[hi]] = True
    for k in range(n):
        leq |= leq[:, k:k + 1] & leq[k:k + 1, :]
    return from_order(labels, leq)


def join(L: FiniteLattice, X: Iterable[int]) -> int:
    """Least upper bound of ``X``; bottom for the empty set."""
    return reduce(L.join2, X, L.bottom)


def meet(L: FiniteLattice, X: Iterable[int]) -> int:
    """Greatest lower bound of ``X``; top for the empty set."""
    return reduce(L.meet2, X, L.top)


def product(factors: Sequence[FiniteLattice], max_elements: int = MAX_ELEMENTS):
    """Direct product with coordinatewise order.

    Returns ``(lattice, codec)``; product labels are ``"(x1,...,xk)"``.
    """
    factors = tuple(factors)
    if not factors:
        raise ValueError("product needs at least one factor")
    codec = ProductCodec(factors)
    n = codec.n_elements
    if n > max_elements:
        raise SizeLimit(f"product has {n} elements, limit is {max_elements}", witness=n)
    coords = codec.coords
    leq = np.ones((n, n), dtype=bool)
    join_t = np.zeros((n, n), dtype=np.intp)
    meet_t = np.zeros((n, n), dtype=np.intp)
    for i, (f, st) in enumerate(zip(factors, codec.strides)):
        c = coords[:, i]
        leq &= f.leq[c[:, None], c[None, :]]
        join_t += f.join_table[c[:, None], c[None, :]] * st
        meet_t += f.meet_table[c[:, None], c[None, :]] * st
    labels = tuple(
        "(" + ",".join(f.labels[c] for f, c in zip(factors, row)) + ")"
        for row in coords.tolist()
    )
    return FiniteLattice(labels, leq, join_t, meet_t), codec


def dual(L: FiniteLattice) -> FiniteLattice:
    """Order dual: same labels and indices, reversed order, join/meet swapped."""
    return FiniteLattice(L.labels, L.leq.T, L.meet_table, L.join_table)


def chain(n: int) -> FiniteLattice:
    """The n-element chain labelled ``"0" .. "n-1"``."""
    if n < 1:
        raise ValueError("a chain needs at least one element")
    idx = np.arange(n)
    leq = idx[:, None] <= idx[None, :]
    return FiniteLattice(
        tuple(str(i) for i in range(n)),
        leq,
        np.maximum(idx[:, None], idx[None, :]),
        np.minimum(idx[:, None], idx[None, :]),
    )


def boolean(n: int) -> FiniteLattice:
    """The Boolean lattice 2^n; ``boolean(0)`` is the one-element lattice."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return chain(1)
    return product([chain(2)] * n)[0]


def principal_ideal(L: FiniteLattice, a: int) -> frozenset:
    return frozenset(np.flatnonzero(L.leq[:, a]).tolist())


def principal_filter(L: FiniteLattice, a: int) -> frozenset:
    return frozenset(np.flatnonzero(L.leq[a, :]).tolist())


def is_down_set(L: FiniteLattice, X: Iterable[int]) -> bool:
    mask = np.zeros(len(L), dtype=bool)
    mask[list(X)] = True
    # anything below a member must be a member
    return not (L.leq[:, mask].any(axis=1) & ~mask).any()


def is_up_set(L: FiniteLattice, X: Iterable[int]) -> bool:
    return is_down_set(dual(L), X)


def join_irreducibles(L: FiniteLattice) -> frozenset:
    """Non-bottom elements with exactly one lower cover."""
    counts = L.cover_matrix.sum(axis=0)
    return frozenset(x for x in L if x != L.bottom and counts[x] == 1)


def meet_irreducibles(L: FiniteLattice) -> frozenset:
    return join_irreducibles(dual(L))


def is_distributive(L: FiniteLattice) -> bool:
    """Check x∧(y∨z) = (x∧y)∨(x∧z) over all triples."""
    J, M = L.join_table, L.meet_table
    for x in L:
        lhs = M[x][J]                                   # x ∧ (y ∨ z)
        rhs = J[M[x][:, None], M[x][None, :]]           # (x∧y) ∨ (x∧z)
        if not np.array_equal(lhs, rhs):
            return False
    return True


def order_isomorphisms(leq_a: np.ndarray, leq_b: np.ndarray) -> Iterator[tuple]:
    """Yield every order isomorphism between two finite posets.

    Each result is a tuple ``m`` with ``m[i]`` the image of element ``i``.
    Backtracking over elements sorted by down-set size; candidates must agree
    on up-set and down-set sizes and on comparabilities with the elements
    already assigned.
    """
    leq_a = np.asarray(leq_a, dtype=bool)
    leq_b = np.asarray(leq_b, dtype=bool)
    n = len(leq_a)
    if n != len(leq_b):
        return
    sig_a = list(zip(leq_a.sum(axis=0).tolist(), leq_a.sum(axis=1).tolist()))
    sig_b = list(zip(leq_b.sum(axis=0).tolist(), leq_b.sum(axis=1).tolist()))
    if sorted(sig_a) != sorted(sig_b):
        return
    order = sorted(range(n), key=lambda i: sig_a[i])
    cands = [[j for j in range(n) if sig_b[j] == sig_a[i]] for i in range(n)]
    mapping = [-1] * n
    used = [False] * n

    def extend(k):
        if k == n:
            yield tuple(mapping)
            return
        x = order[k]
        for y in cands[x]:
            if used[y]:
                continue
            ok = True
            for p in order[:k]:
                q = mapping[p]
                if leq_a[p, x] != leq_b[q, y] or leq_a[x, p] != leq_b[y, q]:
                    ok = False
                    break
            if ok:
                mapping[x] = y
                used[y] = True
                yield from extend(k + 1)
                used[y] = False
        mapping[x] = -1

    yield from extend(0)


def find_isomorphism(L: FiniteLattice, K: FiniteLattice):
    """An order isomorphism ``L -> K`` as an index tuple, or None."""
    return next(order_isomorphisms(L.leq, K.leq), None)


def is_isomorphic(L: FiniteLattice, K: FiniteLattice) -> bool:
    return find_isomorphism(L, K) is not None


def fixture_l6() -> FiniteLattice:
    """The six-element distributive lattice {0,a,b,c,d,1}, isomorphic to 3 x 2.

    Covers: 0<a, 0<c, a<b, a<d, c<d, b<1, d<1. So a∨c = d, b∧d = a.
    """
    return from_covers(
        ["0", "a", "b", "c", "d", "1"],
        [("0", "a"), ("0", "c"), ("a", "b"), ("a", "d"), ("c", "d"), ("b", "1"), ("d", "1")],
    )


def diamond_m3() -> FiniteLattice:
    """M3: bottom, three pairwise incomparable atoms, top. Modular, not distributive."""
    return from_covers(
        ["0", "p", "q", "r", "1"],
        [("0", "p"), ("0", "q"), ("0", "r"), ("p", "1"), ("q", "1"), ("r", "1")],
    )


def pentagon_n5() -> FiniteLattice:
    """N5: the smallest non-modular lattice."""
    return from_covers(
        ["0", "x", "y", "z", "1"],
        [("0", "x"), ("x", "y"), ("y", "1"), ("0", "z"), ("z", "1")],
    )


def to_dict(L: FiniteLattice) -> dict:
    """JSON-ready ``{"elements": [...], "covers": [[lo, hi], ...]}``."""
    return {
        "elements": list(L.labels),
        "covers": [[L.labels[a], L.labels[b]] for a, b in L.covers],
    }


def from_dict(data: dict) -> FiniteLattice:
    try:
        elements = data["elements"]
        covers = data["covers"]
    except (KeyError, TypeError):
        raise ValueError('lattice JSON needs "elements" and "covers"') from None
    return from_covers(elements, covers)


def to_dot(L: FiniteLattice, name: str = "lattice") -> str:
    """Graphviz DOT of the Hasse diagram, bottom at the lowest rank."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle];"]
    by_rank: dict = {}
    for x in L:
        by_rank.setdefault(L.rank[x], []).append(x)
    for x in L:
        lines.append(f'  n{x} [label="{L.labels[x]}"];')
    for r in sorted(by_rank):
        members = " ".join(f"n{x};" for x in by_rank[r])
        lines.append(f"  {{ rank=same; {members} }}")
    for a, b in L.covers:
        lines.append(f"  n{a} -> n{b} [arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def all_tuples(L: FiniteLattice, n: int) -> Iterator[tuple]:
    """Every n-tuple of element indices, in row-major order."""
    return cartesian(range(len(L)), repeat=n)
