"""Small numeric helpers shared across modules."""

import numpy as np


def scalarize(values, like, kind=float):
    """Return a Python scalar when the caller passed a scalar energy.

    ``like`` is the original argument; array-like input passes through as an
    ndarray so every evaluator works transparently on grids.
    """
    arr = np.asarray(values)
    if np.ndim(like) == 0:
        return kind(arr[()])
    return arr
