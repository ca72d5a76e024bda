"""Compiled inner loop for batch signature evaluation.

Same algorithm as the reference fold in ``signature``: per segment,
build the tensor powers of the increment, then apply Chen's identity in
place from the top level down (level k only reads levels below k, so
the update can overwrite as it goes).  All levels live in one flat
buffer with ``off[k]`` marking the start of level k.

fastmath only relaxes association order; results match the reference to
roughly 1e-14 relative and are bit-for-bit reproducible between calls.
"""

import numpy as np
from numba import njit


@njit(cache=True, fastmath=True)
def _fold_one(verts, order, off, out, seg):
    L, D = verts.shape
    out[:] = 0.0
    out[0] = 1.0
    for s in range(L - 1):
        seg[0] = 1.0
        for j in range(1, order + 1):
            prev = off[j - 1]
            here = off[j]
            inv = 1.0 / j
            for p in range(off[j] - off[j - 1]):
                base = seg[prev + p] * inv
                for q in range(D):
                    seg[here + p * D + q] = base * (verts[s + 1, q] - verts[s, q])
        for k in range(order, 0, -1):
            ok = off[k]
            for j in range(1, k + 1):
                na = off[k - j + 1] - off[k - j]
                nb = off[j + 1] - off[j]
                oa = off[k - j]
                ob = off[j]
                for p in range(na):
                    base = out[oa + p]
                    if base != 0.0:
                        row = ok + p * nb
                        for q in range(nb):
                            out[row + q] += base * seg[ob + q]


@njit(cache=True, fastmath=True)
def fold_batch(batch, order, off, out):
    seg = np.zeros(off[-1])
    for i in range(batch.shape[0]):
        _fold_one(batch[i], order, off, out[i], seg)
