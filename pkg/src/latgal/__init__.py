"""Finite lattices, monotone Galois connections, sup-preserving aggregation
functions and monotone many-valued formal concept analysis."""

from .errors import LatticeError
from .lattice import (FiniteLattice, ProductCodec, boolean, chain, dual, fixture_l6, from_covers,
                      from_order, join, meet, product)
from .maps import LatticeMap
from .closure import ClosureSystem, InteriorSystem, SystemIso
from .galois import GaloisPair, from_systems, range_systems, upper_adjoint
from .aggregation import AggTable, SupAggSpec, SupAggregation, build, evaluate, full_table
from .fca import FormalConcept, ManyValuedContext, ValueMapFamily, concepts
from .estimators import ConceptMiner, SupAggregator

__version__ = "0.1.0"
