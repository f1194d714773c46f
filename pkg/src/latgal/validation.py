"""Input coercion for the estimator API, in the spirit of sklearn's check_array."""
from __future__ import annotations

import numpy as np

from .fca import ManyValuedContext
from .lattice import FiniteLattice


def check_elements(X, lattice: FiniteLattice, ndim: int = 2) -> np.ndarray:
    """Coerce labels or indices into an integer index array of the given rank.

    Strings are looked up as labels; integers are range-checked.
    """
    arr = np.asarray(X, dtype=object)
    if arr.ndim == ndim - 1:
        arr = arr.reshape((1,) + arr.shape) if ndim == 2 else arr
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got {arr.ndim}-d")
    out = np.empty(arr.shape, dtype=np.intp)
    n = len(lattice)
    for idx, v in np.ndenumerate(arr):
        if isinstance(v, (str, np.str_)):
            out[idx] = lattice.index(str(v))
        elif isinstance(v, (int, np.integer)) and not isinstance(v, bool):
            if not 0 <= v < n:
                raise ValueError(f"element index {v} out of range for lattice of size {n}")
            out[idx] = int(v)
        else:
            raise ValueError(f"cannot interpret {v!r} as a lattice element")
    return out


def check_context(X, objects=None, attributes=None) -> ManyValuedContext:
    """Accept a ManyValuedContext, a DataFrame (index = objects), or a 2-d table."""
    if isinstance(X, ManyValuedContext):
        return X
    if hasattr(X, "columns") and hasattr(X, "index"):
        objects = list(map(str, X.index)) if objects is None else objects
        attributes = list(map(str, X.columns)) if attributes is None else attributes
        X = X.to_numpy()
    arr = np.asarray(X, dtype=object)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d table, got {arr.ndim}-d")
    nb, na = arr.shape
    objects = [f"b{i}" for i in range(nb)] if objects is None else list(objects)
    attributes = [f"a{j}" for j in range(na)] if attributes is None else list(attributes)
    return ManyValuedContext(tuple(objects), tuple(attributes),
                             tuple(tuple(str(v) for v in row) for row in arr.tolist()))
