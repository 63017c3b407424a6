"""Pure-Python column reduction, the fallback for the compiled kernel."""

import numpy as np


def reduce_columns(n_rows, indptr, indices, data, p, skip):
    """Rank of a sparse matrix over GF(p) by left-to-right column reduction.

    Same contract as the compiled ``_reduce.reduce_columns``.
    """
    owner = {}
    pivots = []
    cols = []
    rank = 0
    indptr = [int(v) for v in indptr]
    indices = [int(v) for v in indices]
    data = [int(v) for v in data]
    if p == 2:
        for j in range(len(indptr) - 1):
            if skip[j]:
                continue
            col = {indices[k] for k in range(indptr[j], indptr[j + 1]) if data[k] % 2}
            while col:
                low = max(col)
                o = owner.get(low)
                if o is None:
                    break
                col ^= o
            if col:
                low = max(col)
                owner[low] = col
                pivots.append(low)
                cols.append(j)
                rank += 1
        return rank, np.asarray(pivots, dtype=np.int64), np.asarray(cols, dtype=np.int64)
    for j in range(len(indptr) - 1):
        if skip[j]:
            continue
        col = {}
        for k in range(indptr[j], indptr[j + 1]):
            v = data[k] % p
            if v:
                col[indices[k]] = v
        while col:
            low = max(col)
            o = owner.get(low)
            if o is None:
                break
            f = p - col[low]
            for r, v in o.items():
                nv = (col.get(r, 0) + f * v) % p
                if nv:
                    col[r] = nv
                else:
                    col.pop(r, None)
        if col:
            low = max(col)
            inv = pow(col[low], p - 2, p)
            owner[low] = {r: (v * inv) % p for r, v in col.items()}
            pivots.append(low)
            cols.append(j)
            rank += 1
    return rank, np.asarray(pivots, dtype=np.int64), np.asarray(cols, dtype=np.int64)
