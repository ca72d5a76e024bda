"""Dyadic window features.

Split [0, 1] into 2**q equal windows, compute the truncated signature
on each window of the continuous path (window boundaries fall by linear
interpolation, not by snapping to samples), flatten, and concatenate in
increasing window order.  q = 0 reproduces the whole-path features.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signature import Polyline, flatten, signature_on_interval

__all__ = ["WindowSpec", "dyadic_features"]


@dataclass(frozen=True)
class WindowSpec:
    q: int
    order: int

    def __post_init__(self):
        if self.q < 0:
            raise ValueError("dyadic order q must be non-negative")
        if self.order < 0:
            raise ValueError("truncation order must be non-negative")


def dyadic_features(
    path: Polyline, spec: WindowSpec, include_constant: bool = False
) -> np.ndarray:
    """Concatenated signatures over the 2**q dyadic windows.

    Output length is 2**q * feature_count(D, K, include_constant).
    Windows with no interior vertices reduce to single segments; empty
    stretches give near-trivial blocks.
    """
    width = 2.0 ** -spec.q
    parts = []
    for j in range(1, 2**spec.q + 1):
        sig = signature_on_interval(path, (j - 1) * width, j * width, spec.order)
        parts.append(flatten(sig, include_constant))
    return np.concatenate(parts)
