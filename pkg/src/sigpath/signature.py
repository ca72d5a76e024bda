"""Truncated signatures of piecewise linear paths.

The signature of a path X : [0, 1] -> R^d is the graded sequence of its
iterated integrals.  Level k holds one coefficient per multi-index
(i_1, ..., i_k) with entries in 1..d, stored flat in lexicographic
order, so level k is a vector of length d**k and level 0 is the
constant 1.

Two facts make the computation exact for polylines.  A single linear
segment with increment ``delta`` has level-k tensor equal to the k-fold
tensor power of ``delta`` divided by k!, and the signature of two paths
run one after the other is the tensor convolution of their signatures
(Chen's identity).  ``polyline_signature`` folds these over the
segments, which keeps the cost linear in the number of vertices.

``oracle_coefficient`` evaluates the same integrals by direct
left-Riemann quadrature over the ordered simplex.  It is slow and only
first-order accurate, but it shares no code with the closed-form route,
which is what makes it useful as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Signature",
    "Polyline",
    "trivial_signature",
    "segment_signature",
    "chen_concat",
    "polyline_signature",
    "signature_on_interval",
    "oracle_coefficient",
    "feature_count",
    "flatten",
    "batch_signature_features",
]


@dataclass(frozen=True)
class Signature:
    """Graded stack of signature levels.

    Parameters
    ----------
    dim : int
        Path dimension d.
    order : int
        Truncation order K.
    levels : tuple of ndarray
        ``levels[k]`` is flat of length ``d**k``, coefficients in
        lexicographic multi-index order; ``levels[0]`` is ``[1.0]``.
    """

    dim: int
    order: int
    levels: tuple

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        if self.order < 0:
            raise ValueError("order must be non-negative")
        levels = tuple(np.asarray(lev, dtype=float).ravel() for lev in self.levels)
        object.__setattr__(self, "levels", levels)
        if len(levels) != self.order + 1:
            raise ValueError(
                f"expected {self.order + 1} levels, got {len(levels)}"
            )
        for k, lev in enumerate(levels):
            if lev.shape != (self.dim**k,):
                raise ValueError(f"level {k} must have length dim**{k}")
            if not np.all(np.isfinite(lev)):
                raise ValueError(f"level {k} has non-finite entries")
        if levels[0][0] != 1.0:
            raise ValueError("level 0 must be exactly 1")


@dataclass(frozen=True)
class Polyline:
    """Piecewise linear path given by timestamped vertices.

    Parameters
    ----------
    vertices : (l, D) ndarray
        Vertex rows; a 1-d array is treated as a single coordinate.
    times : (l,) ndarray, optional
        Strictly increasing, starting at 0 and (for l >= 2) ending at 1.
        Defaults to the uniform grid.  The signature itself depends only
        on the vertex sequence; times matter for interval extraction.
    """

    vertices: np.ndarray
    times: np.ndarray = None

    def __post_init__(self):
        verts = np.asarray(self.vertices, dtype=float)
        if verts.ndim == 1:
            verts = verts[:, None]
        if verts.ndim != 2 or verts.shape[0] < 1 or verts.shape[1] < 1:
            raise ValueError("vertices must be a non-empty (l, D) array")
        if not np.all(np.isfinite(verts)):
            raise ValueError("vertices must be finite")
        if self.times is None:
            times = np.linspace(0.0, 1.0, verts.shape[0])
        else:
            times = np.asarray(self.times, dtype=float).ravel()
        if times.shape[0] != verts.shape[0]:
            raise ValueError("times length must match vertex count")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        if times[0] != 0.0 or (times.shape[0] > 1 and times[-1] != 1.0):
            raise ValueError("times must start at 0 and end at 1")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "times", times)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]


def trivial_signature(dim: int, order: int) -> Signature:
    """Signature of a constant path: level 0 is 1, everything else 0.

    This is the two-sided identity for :func:`chen_concat`.
    """
    levels = [np.ones(1)]
    for k in range(1, order + 1):
        levels.append(np.zeros(dim**k))
    return Signature(dim, order, tuple(levels))


def segment_signature(delta, order: int) -> Signature:
    """Signature of one linear segment with increment ``delta``.

    Level k is the k-fold tensor power of ``delta`` divided by k!, so
    the coefficient for the multi-index (i_1, ..., i_k) equals
    ``delta[i_1] * ... * delta[i_k] / k!``.

    Parameters
    ----------
    delta : array_like
        Increment vector of the segment (end minus start).
    order : int
        Truncation order K.
    """
    delta = np.asarray(delta, dtype=float).ravel()
    levels = [np.ones(1)]
    for k in range(1, order + 1):
        levels.append(np.outer(levels[-1], delta).ravel() / k)
    return Signature(delta.size, order, tuple(levels))


def chen_concat(a: Signature, b: Signature) -> Signature:
    """Signature of the path running ``a`` first and then ``b``.

    By Chen's identity, level k of the result is the convolution

        sum over l in 0..k of  levels_a[l] (tensor) levels_b[k - l]

    where the tensor product of flat lexicographic levels is the flat
    outer product.  The operation is associative and
    :func:`trivial_signature` is its identity element.
    """
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} != {b.dim}")
    if a.order != b.order:
        raise ValueError(f"order mismatch: {a.order} != {b.order}")
    levels = [np.ones(1)]
    for k in range(1, a.order + 1):
        acc = a.levels[k] + b.levels[k]
        for l in range(1, k):
            acc = acc + np.outer(a.levels[l], b.levels[k - l]).ravel()
        levels.append(acc)
    return Signature(a.dim, a.order, tuple(levels))


def polyline_signature(path: Polyline, order: int) -> Signature:
    """Truncated signature of a polyline.

    Left fold of :func:`chen_concat` over the per-segment closed forms,
    so the cost is linear in the number of vertices.  A single-vertex
    path yields the trivial signature.
    """
    sig = trivial_signature(path.dim, order)
    verts = path.vertices
    for s in range(verts.shape[0] - 1):
        sig = chen_concat(sig, segment_signature(verts[s + 1] - verts[s], order))
    return sig


def _subpath(path: Polyline, s: float, t: float) -> Polyline:
    # Vertices strictly inside (s, t) plus interpolated endpoints.
    times = path.times
    verts = path.vertices
    lo = np.searchsorted(times, s, side="right")
    hi = np.searchsorted(times, t, side="left")
    ends = np.array(
        [
            [np.interp(x, times, verts[:, c]) for c in range(verts.shape[1])]
            for x in (s, t)
        ]
    )
    new_verts = np.vstack([ends[:1], verts[lo:hi], ends[1:]])
    new_times = np.concatenate([[s], times[lo:hi], [t]])
    return Polyline(new_verts, (new_times - s) / (t - s))


def signature_on_interval(path: Polyline, s: float, t: float, order: int) -> Signature:
    """Signature of the sub-path of ``path`` restricted to [s, t].

    The endpoints are obtained by linear interpolation, so the result
    is the signature of the same continuous path over a shorter time
    window.  ``s == t`` yields the trivial signature, and [0, 1]
    recovers :func:`polyline_signature` exactly.
    """
    if not (0.0 <= s <= t <= 1.0):
        raise ValueError(f"need 0 <= s <= t <= 1, got [{s}, {t}]")
    if s == t:
        return trivial_signature(path.dim, order)
    return polyline_signature(_subpath(path, s, t), order)


def oracle_coefficient(path: Polyline, index, steps: int) -> float:
    """One signature coefficient by direct quadrature (slow test oracle).

    Approximates the iterated integral for the multi-index ``index``
    over the ordered simplex 0 <= u_1 < ... < u_k <= 1 with nested
    left-Riemann sums on a uniform grid of ``steps`` cells, where the
    first index entry is integrated innermost (earliest).  Converges at
    rate O(1/steps).  Deliberately independent of the closed-form code.

    Parameters
    ----------
    path : Polyline
    index : sequence of int
        Multi-index with entries in 1..D.
    steps : int
        Number of grid cells; must be at least ``len(index)``.
    """
    index = [int(i) for i in np.atleast_1d(index)]
    for i in index:
        if not 1 <= i <= path.dim:
            raise ValueError(f"index entry {i} out of range 1..{path.dim}")
    if steps < len(index):
        raise ValueError("steps must be at least the index length")
    grid = np.linspace(0.0, 1.0, steps + 1)
    g = np.ones(steps + 1)
    for i in index:
        x = np.interp(grid, path.times, path.vertices[:, i - 1])
        g = np.concatenate(([0.0], np.cumsum(g[:-1] * np.diff(x))))
    return float(g[-1])


def feature_count(dim: int, order: int, include_constant: bool = False) -> int:
    """Length of the flattened feature vector: sum of d**k for k=1..K.

    The constant level-0 entry is excluded by default; pass
    ``include_constant=True`` to add it.
    """
    count = sum(dim**k for k in range(1, order + 1))
    return count + 1 if include_constant else count


def flatten(sig: Signature, include_constant: bool = False) -> np.ndarray:
    """Concatenate levels 1..K (optionally prepending level 0).

    Within-level lexicographic order is preserved; the output length
    equals ``feature_count(sig.dim, sig.order, include_constant)``.
    """
    parts = sig.levels if include_constant else sig.levels[1:]
    if not parts:
        return np.zeros(0)
    return np.concatenate(parts)


def _level_offsets(dim: int, order: int) -> np.ndarray:
    # off[k] = start of level k in the flat layout, off[order + 1] = total.
    off = np.zeros(order + 2, dtype=np.int64)
    for k in range(1, order + 2):
        off[k] = off[k - 1] + dim ** (k - 1)
    return off


def batch_signature_features(
    vertices, order: int, include_constant: bool = False, use_kernel: bool = True
) -> np.ndarray:
    """Flattened signature features for a stack of equal-shape polylines.

    Row i equals ``flatten(polyline_signature(Polyline(vertices[i])))``
    up to floating-point reassociation in the compiled kernel.

    Parameters
    ----------
    vertices : (n, l, D) array_like
        Vertex stacks.  Times are irrelevant here because the signature
        depends on the vertex sequence only.
    order : int
        Truncation order K.
    include_constant : bool
        Prepend the constant 1 column.
    use_kernel : bool
        Use the compiled batch kernel (default).  The pure fold is kept
        as a cross-checkable fallback.
    """
    arr = np.ascontiguousarray(vertices, dtype=np.float64)
    if arr.ndim != 3:
        raise ValueError("expected a (n, l, D) vertex stack")
    n = arr.shape[0]
    off = _level_offsets(arr.shape[2], order)
    out = np.empty((n, int(off[-1])))
    if use_kernel:
        from . import _kernels

        _kernels.fold_batch(arr, order, off, out)
    else:
        for i in range(n):
            sig = polyline_signature(Polyline(arr[i]), order)
            out[i] = np.concatenate(sig.levels)
    return out if include_constant else out[:, 1:]
