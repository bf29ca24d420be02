"""Compiled inner loops (numba when available, plain Python otherwise)."""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@njit(cache=True)
def incremental_ranks(rows, add, mul, inv, neg):
    """Rank of rows[:k+1] for every k, by insertion into an echelon basis."""
    nrows, width = rows.shape
    basis = np.zeros((width, width), dtype=rows.dtype)
    has = np.zeros(width, dtype=np.bool_)
    out = np.zeros(nrows, dtype=np.int64)
    r = 0
    v = np.zeros(width, dtype=rows.dtype)
    for k in range(nrows):
        for c in range(width):
            v[c] = rows[k, c]
        for c in range(width):
            x = v[c]
            if x == 0:
                continue
            if has[c]:
                f = neg[x]
                for d in range(c, width):
                    if basis[c, d] != 0:
                        v[d] = add[v[d], mul[f, basis[c, d]]]
            else:
                s = inv[x]
                for d in range(c, width):
                    basis[c, d] = mul[s, v[d]]
                has[c] = True
                r += 1
                break
        out[k] = r
    return out
