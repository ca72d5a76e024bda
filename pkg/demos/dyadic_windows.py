"""Windowed signature features and why q=0 is the whole-path signature.

A dyadic order q splits [0,1] into 2^q equal windows and concatenates
the truncated signature of each window. Larger q trades global context
for local detail; Chen's identity says no information is created, since
the window signatures recombine into the whole-path one.
"""

import numpy as np

from sigpath import (
    Polyline,
    WindowSpec,
    chen_concat,
    dyadic_features,
    feature_count,
    flatten,
    polyline_signature,
    signature_on_interval,
)

rng = np.random.default_rng(3)
path = Polyline(rng.normal(size=(9, 2)).cumsum(axis=0))

for q in range(4):
    feats = dyadic_features(path, WindowSpec(q=q, order=3))
    print(f"q={q}: {2**q} windows x {feature_count(2, 3)} = {feats.size} features")

# q=0 is literally the whole-path feature vector.
whole = flatten(polyline_signature(path, 3))
assert np.array_equal(dyadic_features(path, WindowSpec(q=0, order=3)), whole)

# Windows recombine: fold the four q=2 window signatures with Chen and
# compare against the whole-path signature.
parts = [signature_on_interval(path, j / 4, (j + 1) / 4, order=3) for j in range(4)]
acc = parts[0]
for part in parts[1:]:
    acc = chen_concat(acc, part)
print("\nmax |recombined - whole| =",
      float(np.abs(flatten(acc) - whole).max()))
