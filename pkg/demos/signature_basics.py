"""Tour of the core signature operations on small hand-checkable paths.

A path signature is the graded collection of iterated integrals of a
path. For piecewise-linear paths every coefficient has a closed form,
which is what the library computes. This script walks through the
building blocks: one segment, concatenation, a polyline, and the
quadrature cross-check.
"""

import numpy as np

from sigpath import (
    Polyline,
    chen_concat,
    feature_count,
    flatten,
    oracle_coefficient,
    polyline_signature,
    segment_signature,
)

# One straight segment with increment b = (1, 2). Level k of its
# signature is the k-fold tensor power of b divided by k!.
sig = segment_signature(np.array([1.0, 2.0]), order=3)
print("segment with increment (1, 2), order 3")
for k, level in enumerate(sig.levels):
    print(f"  level {k}: {level}")

# Level 2 in words: S^(1,1) = 1/2, S^(1,2) = S^(2,1) = 1, S^(2,2) = 2.
# Entries are laid out in lexicographic multi-index order, so the flat
# position of (i1, ..., ik) is the base-d expansion of (i1-1, ..., ik-1).

# Chen's identity: the signature of a concatenation is the tensor-style
# convolution of the two signatures. An L-shaped path, right then up:
right = segment_signature(np.array([1.0, 0.0]), order=2)
up = segment_signature(np.array([0.0, 1.0]), order=2)
corner = chen_concat(right, up)
print("\nL-shaped path, right then up:")
print("  level 2:", corner.levels[2])
print("  S^(1,2) =", corner.levels[2][1], " (area swept going right, then up)")
print("  S^(2,1) =", corner.levels[2][2], " (zero: no vertical-then-horizontal motion)")

# The same path as a Polyline gives the same numbers.
path = Polyline(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]))
assert np.allclose(flatten(polyline_signature(path, 2)), flatten(corner))

# Independent check: each coefficient is also a nested Riemann integral.
# The quadrature oracle computes it directly from the multi-index.
approx = oracle_coefficient(path, (1, 2), steps=100_000)
print(f"\nquadrature for S^(1,2): {approx:.6f} (closed form gives 1.0)")

# Feature counts grow like d^k per level; the whole truncated signature
# without the constant has sum_k d^k entries.
print("\nfeature counts (no constant):")
for d, k in [(2, 5), (3, 7), (6, 2)]:
    print(f"  d={d}, K={k}: {feature_count(d, k)}")
