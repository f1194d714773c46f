"""scikit-learn compatible wrappers.

``ConceptMiner`` fits the concept-forming operators to a many-valued table;
``transform`` applies F and ``inverse_transform`` applies G.
``SupAggregator`` fits a sup-preserving aggregation function, either from a
slot spec or from sample tuples, and ``predict`` evaluates it.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import aggregation as agg
from . import galois
from .errors import NotSupPreserving
from .fca import MAX_CONCEPTS, ConceptOperators, concepts, residuated_chain_family
from .maps import LatticeMap
from .validation import check_context, check_elements


class ConceptMiner(TransformerMixin, BaseEstimator):
    """Monotone concept mining over a lattice-valued family.

    Parameters
    ----------
    family : ValueMapFamily, optional
        Token -> sup-preserving map assignment. Defaults to the Gödel family
        on the ``k``-chain, whose tokens are ``"0" .. "k-1"``.
    k : int
        Chain size for the default family.
    max_concepts : int
        Enumeration bound.

    Attributes
    ----------
    context_ : ManyValuedContext
    family_ : ValueMapFamily
    concepts_ : list of FormalConcept
    n_concepts_ : int
    """

    def __init__(self, family=None, k=3, max_concepts=MAX_CONCEPTS):
        self.family = family
        self.k = k
        self.max_concepts = max_concepts

    def fit(self, X, y=None):
        self.context_ = check_context(X)
        self.family_ = self.family if self.family is not None else residuated_chain_family(self.k)
        self.operators_ = ConceptOperators(self.context_, self.family_)
        self.concepts_ = concepts(self.context_, self.family_, self.max_concepts)
        self.n_concepts_ = len(self.concepts_)
        return self

    def transform(self, X):
        """Extent vectors (n_samples, n_objects) -> intent vectors (n_samples, n_attributes)."""
        check_is_fitted(self, "operators_")
        X = check_elements(X, self.family_.lattice)
        if X.shape[1] != len(self.context_.objects):
            raise ValueError(f"expected {len(self.context_.objects)} columns, got {X.shape[1]}")
        return self.operators_.F_batch(X)

    def inverse_transform(self, Y):
        check_is_fitted(self, "operators_")
        Y = check_elements(Y, self.family_.lattice)
        if Y.shape[1] != len(self.context_.attributes):
            raise ValueError(f"expected {len(self.context_.attributes)} columns, got {Y.shape[1]}")
        return self.operators_.G_batch(Y)

    def closure(self, X):
        """G(F(x)): the extent of the smallest concept above x."""
        return self.inverse_transform(self.transform(X))

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "context_")
        return np.asarray(self.context_.attributes, dtype=object)


class SupAggregator(BaseEstimator):
    """n-ary sup-preserving aggregation function on a finite lattice.

    With ``spec`` set, ``fit`` builds the function from its slot triples and
    ignores the data. Otherwise ``fit(X, y)`` reads the unary components from
    the samples at tuples (0,…,x,…,0), which must all be present, and checks
    every other sample against the recomposed function.
    """

    def __init__(self, lattice=None, spec=None):
        self.lattice = lattice
        self.spec = spec

    def fit(self, X=None, y=None):
        if self.spec is not None:
            self.aggregation_ = agg.build(self.spec)
            self.lattice_ = self.spec.host
        else:
            if self.lattice is None:
                raise ValueError("either spec or lattice must be given")
            L = self.lattice_ = self.lattice
            X = check_elements(X, L)
            y = check_elements(y, L, ndim=1)
            if len(X) != len(y):
                raise ValueError("X and y have different lengths")
            n = X.shape[1]
            seen = {tuple(row): int(v) for row, v in zip(X.tolist(), y.tolist())}
            comps = []
            for i in range(n):
                vals = []
                for x in L:
                    t = [L.bottom] * n
                    t[i] = x
                    if tuple(t) not in seen:
                        raise ValueError(f"sample for tuple {[L.labels[v] for v in t]} is missing")
                    vals.append(seen[tuple(t)])
                f = LatticeMap(L, L, tuple(vals))
                w = galois.sup_violation(f)
                if w is not None:
                    raise NotSupPreserving(f"component {i + 1} does not preserve joins",
                                           witness=[i + 1, list(map(str, w))])
                comps.append(f)
            self.aggregation_ = agg.from_components(L, comps)
            for t, v in seen.items():
                if agg.evaluate(self.aggregation_, t) != v:
                    raise NotSupPreserving("samples are not consistent with a sup-preserving function",
                                           witness=[L.labels[i] for i in t])
        self.components_ = self.aggregation_.components
        self.arity_ = self.aggregation_.arity
        self.n_features_in_ = self.arity_
        return self

    def predict(self, X):
        check_is_fitted(self, "aggregation_")
        L = self.lattice_
        X = check_elements(X, L)
        if X.shape[1] != self.arity_:
            raise ValueError(f"expected {self.arity_} columns, got {X.shape[1]}")
        out = np.full(len(X), L.bottom, dtype=np.intp)
        for i, f in enumerate(self.components_):
            out = L.join_table[out, f.array[X[:, i]]]
        return out

    def table(self):
        check_is_fitted(self, "aggregation_")
        return agg.full_table(self.aggregation_)
