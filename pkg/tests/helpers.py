"""Shared test utilities."""

import itertools

import numpy as np

from sigpath import Polyline


def random_polyline(rng, dim, n_vertices, scale=1.0):
    """Random polyline with coordinates uniform in [-scale, scale]."""
    verts = rng.uniform(-scale, scale, size=(n_vertices, dim))
    return Polyline(verts)


def multi_indices(dim, order):
    """All multi-indices with entries 1..dim up to the given length."""
    for k in range(1, order + 1):
        yield from itertools.product(range(1, dim + 1), repeat=k)


def level_entry(sig, index):
    """Signature coefficient for a multi-index tuple."""
    k = len(index)
    flat = 0
    for i in index:
        flat = flat * sig.dim + (i - 1)
    return sig.levels[k][flat]


def brute_force_knn(train_X, train_y, queries, k):
    """Independent k-NN re-derivation: full sort by (distance, index),
    count votes, break count ties by the earliest position in the
    sorted list."""
    out = []
    for q in queries:
        dist = np.sqrt(((train_X - q) ** 2).sum(axis=1))
        order = sorted(range(len(train_X)), key=lambda i: (dist[i], i))[:k]
        votes = [train_y[i] for i in order]
        counts = {}
        for pos, lab in enumerate(votes):
            counts.setdefault(lab, []).append(pos)
        best = sorted(
            counts.items(), key=lambda kv: (-len(kv[1]), min(kv[1]))
        )[0][0]
        out.append(best)
    return np.array(out)
