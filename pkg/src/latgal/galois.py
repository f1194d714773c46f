"""Monotone Galois connections between finite lattices."""
from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from . import closure as cl
from . import lattice as lat
from .errors import DomainMismatch, NotInfPreserving, NotIso, NotSupPreserving
from .lattice import FiniteLattice
from .maps import LatticeMap, identity


@dataclass(frozen=True)
class GaloisPair:
    """``lower(x) <= y  iff  x <= upper(y)``."""

    lower: LatticeMap
    upper: LatticeMap

    @property
    def domain(self) -> FiniteLattice:
        return self.lower.domain

    @property
    def codomain(self) -> FiniteLattice:
        return self.lower.codomain


def sup_violation(f: LatticeMap):
    """First witness against join preservation, or None.

    Returns ``("bottom",)`` if ``f(0) != 0``, else a pair ``(x, y)`` with
    ``f(x ∨ y) != f(x) ∨ f(y)``.
    """
    D, C = f.domain, f.codomain
    v = f.array
    if v[D.bottom] != C.bottom:
        return ("bottom",)
    bad = v[D.join_table] != C.join_table[v[:, None], v[None, :]]
    if bad.any():
        x, y = map(int, np.argwhere(bad)[0])
        return (x, y)
    return None


def inf_violation(f: LatticeMap):
    D, C = f.domain, f.codomain
    v = f.array
    if v[D.top] != C.top:
        return ("top",)
    bad = v[D.meet_table] != C.meet_table[v[:, None], v[None, :]]
    if bad.any():
        x, y = map(int, np.argwhere(bad)[0])
        return (x, y)
    return None


def is_sup_preserving(f: LatticeMap) -> bool:
    return sup_violation(f) is None


def is_inf_preserving(f: LatticeMap) -> bool:
    return inf_violation(f) is None


def _witness_labels(L, w):
    return [w[0]] if isinstance(w[0], str) else [L.labels[i] for i in w]


def upper_adjoint(f: LatticeMap) -> LatticeMap:
    """g(a) = ⋁ f⁻¹((a⟩), the greatest x with f(x) <= a."""
    w = sup_violation(f)
    if w is not None:
        raise NotSupPreserving("map does not preserve joins", witness=_witness_labels(f.domain, w))
    D, C = f.domain, f.codomain
    below = C.leq[f.array, :]                # below[x, a]: f(x) <= a
    return LatticeMap(C, D, tuple(lat.join(D, np.flatnonzero(below[:, a]).tolist()) for a in C))


def lower_adjoint(g: LatticeMap) -> LatticeMap:
    """f(x) = ⋀ g⁻¹(⟨x)), the least y with x <= g(y)."""
    w = inf_violation(g)
    if w is not None:
        raise NotInfPreserving("map does not preserve meets", witness=_witness_labels(g.domain, w))
    M, L = g.domain, g.codomain
    above = L.leq[:, g.array]                # above[x, y]: x <= g(y)
    return LatticeMap(L, M, tuple(lat.meet(M, np.flatnonzero(above[x, :]).tolist()) for x in L))


def adjunction_violation(f: LatticeMap, g: LatticeMap):
    """A pair ``(x, y)`` where ``f(x) <= y`` and ``x <= g(y)`` disagree, or None."""
    if f.codomain != g.domain or g.codomain != f.domain:
        raise DomainMismatch("maps are not composable in opposite directions")
    L, M = f.domain, f.codomain
    lhs = M.leq[f.array, :]                 # [x, y]: f(x) <= y
    rhs = L.leq[:, g.array]                 # [x, y]: x <= g(y)
    bad = lhs != rhs
    if bad.any():
        x, y = map(int, np.argwhere(bad)[0])
        return x, y
    return None


def verify_adjunction(f: LatticeMap, g: LatticeMap) -> bool:
    return adjunction_violation(f, g) is None


def inverse_ideal_is_principal(f: LatticeMap, a: int) -> bool:
    """True iff f⁻¹((a⟩) is a down-set with a greatest element."""
    D = f.domain
    pre = np.flatnonzero(f.codomain.leq[f.array, a]).tolist()
    if not pre or not lat.is_down_set(D, pre):
        return False
    top = lat.join(D, pre)
    return top in pre


def pair(f: LatticeMap) -> GaloisPair:
    """The Galois pair whose lower adjoint is ``f``."""
    return GaloisPair(f, upper_adjoint(f))


def identity_pair(L: FiniteLattice) -> GaloisPair:
    return GaloisPair(identity(L), identity(L))


def compose(p1: GaloisPair, p2: GaloisPair) -> GaloisPair:
    """p1 between L and M, p2 between M and K; result between L and K."""
    if p1.codomain != p2.domain:
        raise DomainMismatch("codomain of the first pair is not the domain of the second")
    return GaloisPair(p1.lower.then(p2.lower), p2.upper.then(p1.upper))


def range_systems(p: GaloisPair):
    """``(Rng(lower) as interior system, Rng(upper) as closure system, iso)``.

    The iso is ``lower`` restricted to ``Rng(upper)``; its inverse is ``upper``
    restricted to ``Rng(lower)``.
    """
    T = cl.validate_interior_system(p.codomain, p.lower.range())
    S = cl.validate_closure_system(p.domain, p.upper.range())
    phi = cl.SystemIso(S, T, {x: p.lower(x) for x in S.elements})
    if not cl.check_iso(phi):
        raise NotIso("lower adjoint restricted to Rng(upper) is not an isomorphism")
    return T, S, phi


def from_systems(S: cl.ClosureSystem, T: cl.InteriorSystem, phi: cl.SystemIso) -> GaloisPair:
    """f = φ ∘ c_S and g = φ⁻¹ ∘ i_T."""
    if phi.source != S or phi.target != T or not cl.check_iso(phi):
        raise NotIso("phi is not an isomorphism from S onto T")
    inv = phi.inverse().mapping
    f = LatticeMap(S.host, T.host, tuple(phi.mapping[c] for c in S.table))
    g = LatticeMap(T.host, S.host, tuple(inv[i] for i in T.table))
    return GaloisPair(f, g)


def random_closure_system(L: FiniteLattice, rng: random.Random) -> cl.ClosureSystem:
    k = rng.randint(0, len(L))
    return cl.meet_closure(L, rng.sample(range(len(L)), k))


def random_interior_system(L: FiniteLattice, rng: random.Random) -> cl.InteriorSystem:
    k = rng.randint(0, len(L))
    return cl.join_closure(L, rng.sample(range(len(L)), k))


def random_triple(L: FiniteLattice, M: FiniteLattice, rng: random.Random, attempts: int = 200):
    """Random ``(S, T, φ)``: S closure system on L, T interior system on M, φ an iso.

    Falls back to ``({top}, {bottom})`` when no isomorphic pair turns up.
    """
    for _ in range(attempts):
        S = random_closure_system(L, rng)
        T = random_interior_system(M, rng)
        if len(S) != len(T):
            continue
        isos = cl.enumerate_isos(S, T)
        if isos:
            return S, T, rng.choice(isos)
    S = cl.ClosureSystem(L, frozenset({L.top}))
    T = cl.InteriorSystem(M, frozenset({M.bottom}))
    return S, T, cl.SystemIso(S, T, {L.top: M.bottom})


def random_galois_pair(L: FiniteLattice, M: FiniteLattice, rng: random.Random) -> GaloisPair:
    """A random Galois pair built through :func:`from_systems`."""
    return from_systems(*random_triple(L, M, rng))
