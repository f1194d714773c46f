"""Dense maps between finite lattices."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainMismatch
from .lattice import FiniteLattice


def resolve(L: FiniteLattice, x) -> int:
    """Element index from an index or a label."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        if not 0 <= x < len(L):
            raise IndexError(f"element index {x} out of range for lattice of size {len(L)}")
        return int(x)
    return L.index(x)


def resolve_all(L: FiniteLattice, xs) -> list:
    return [resolve(L, x) for x in xs]


@dataclass(frozen=True, eq=False)
class LatticeMap:
    """A map ``domain -> codomain`` stored as a table of codomain indices."""

    domain: FiniteLattice
    codomain: FiniteLattice
    values: tuple

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        if len(vals) != len(self.domain):
            raise ValueError(f"map table has {len(vals)} entries, domain has {len(self.domain)}")
        if any(not 0 <= v < len(self.codomain) for v in vals):
            raise ValueError("map value outside codomain")
        object.__setattr__(self, "values", vals)

    def __call__(self, x: int) -> int:
        return self.values[x]

    def __eq__(self, other):
        if not isinstance(other, LatticeMap):
            return NotImplemented
        return (self.values == other.values and self.domain == other.domain
                and self.codomain == other.codomain)

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        body = ", ".join(f"{self.domain.labels[x]}->{self.codomain.labels[y]}"
                         for x, y in enumerate(self.values))
        return f"LatticeMap({body})"

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.intp)

    def then(self, other: "LatticeMap") -> "LatticeMap":
        """``other ∘ self``: apply self first."""
        if other.domain != self.codomain:
            raise DomainMismatch("codomain of the first map is not the domain of the second")
        return LatticeMap(self.domain, other.codomain, tuple(other.values[v] for v in self.values))

    def range(self) -> frozenset:
        return frozenset(self.values)

    def to_labels(self) -> dict:
        return {self.domain.labels[x]: self.codomain.labels[y] for x, y in enumerate(self.values)}

    @classmethod
    def from_function(cls, domain, codomain, fn: Callable[[int], int]) -> "LatticeMap":
        return cls(domain, codomain, tuple(fn(x) for x in domain))

    @classmethod
    def from_labels(cls, domain, codomain, table: dict) -> "LatticeMap":
        missing = [s for s in domain.labels if s not in table]
        if missing:
            raise ValueError(f"map table has no entry for {missing[0]!r}")
        return cls(domain, codomain, tuple(codomain.index(table[s]) for s in domain.labels))


def identity(L: FiniteLattice) -> LatticeMap:
    return LatticeMap(L, L, tuple(range(len(L))))


def constant(domain: FiniteLattice, codomain: FiniteLattice, value: int) -> LatticeMap:
    return LatticeMap(domain, codomain, (value,) * len(domain))


def from_values(domain, codomain, values: Sequence) -> LatticeMap:
    """Map from a table of indices or labels, in domain order."""
    return LatticeMap(domain, codomain, tuple(resolve(codomain, v) for v in values))
