"""Stream-to-path embeddings.

A raw sample is a d x l matrix with one row per channel, optionally
annotated with stroke ids (pen segments) and a target.  Each embedding
turns it into a :class:`~sigpath.signature.Polyline`; they differ in
which structure of the discrete sample survives in the continuous path:

- linear: straight lines between samples, jump structure lost
- rectilinear: axis-parallel moves, coordinate 1 first
- time: linear plus a uniform time coordinate (strictly monotone)
- leadlag: lagged copies of the stream plus a time coordinate
- stroke1/stroke2/stroke3: the stroke id folded into an extra
  coordinate, increasingly informative from v1 to v3

Output times are always the uniform grid over the produced vertices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signature import Polyline

__all__ = [
    "Stream",
    "EmbeddingSpec",
    "EMBEDDING_KINDS",
    "parse_embedding",
    "embedding_label",
    "embedded_dim",
    "embed",
    "embed_linear",
    "embed_rectilinear",
    "embed_time",
    "embed_leadlag",
    "embed_stroke_v1",
    "embed_stroke_v2",
    "embed_stroke_v3",
]

EMBEDDING_KINDS = (
    "linear",
    "rectilinear",
    "time",
    "leadlag",
    "stroke1",
    "stroke2",
    "stroke3",
)


@dataclass(frozen=True)
class Stream:
    """Raw multichannel sample.

    values is (d, l) with rows as channels; strokes, when present, is a
    length-l non-decreasing integer array starting at 1 with unit steps.
    """

    values: np.ndarray
    strokes: np.ndarray = None
    target: object = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 1:
            values = values[None, :]
        if values.ndim != 2 or values.shape[1] < 1:
            raise ValueError("values must be a (d, l) matrix with l >= 1")
        object.__setattr__(self, "values", values)
        if self.strokes is not None:
            strokes = np.asarray(self.strokes)
            if strokes.shape != (values.shape[1],):
                raise ValueError("strokes must have one entry per sample point")
            if strokes[0] != 1:
                raise ValueError("strokes must start at 1")
            steps = np.diff(strokes)
            if np.any((steps != 0) & (steps != 1)):
                raise ValueError("strokes must be non-decreasing with unit steps")
            object.__setattr__(self, "strokes", strokes.astype(int))

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    @property
    def length(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class EmbeddingSpec:
    kind: str
    lag: int = 1

    def __post_init__(self):
        if self.kind not in EMBEDDING_KINDS:
            raise ValueError(f"unknown embedding kind {self.kind!r}")
        if self.lag < 1:
            raise ValueError("lag must be at least 1")


def parse_embedding(text: str) -> EmbeddingSpec:
    """Parse a spec string: linear | rectilinear | time | leadlag:<m> |
    stroke1 | stroke2 | stroke3 (leadlag without :<m> means lag 1)."""
    base, sep, rest = text.partition(":")
    if base == "leadlag":
        if not sep:
            return EmbeddingSpec("leadlag", 1)
        try:
            lag = int(rest)
        except ValueError:
            raise ValueError(f"bad lead-lag spec {text!r}") from None
        return EmbeddingSpec("leadlag", lag)
    if sep or base not in EMBEDDING_KINDS:
        raise ValueError(f"unknown embedding spec {text!r}")
    return EmbeddingSpec(base)


def embedding_label(spec: EmbeddingSpec) -> str:
    """Canonical spec string, the inverse of parse_embedding."""
    if spec.kind == "leadlag":
        return f"leadlag:{spec.lag}"
    return spec.kind


def embedded_dim(spec: EmbeddingSpec, dim: int) -> int:
    """Dimension of the embedded path for a d-channel stream."""
    if spec.kind in ("linear", "rectilinear"):
        return dim
    if spec.kind == "leadlag":
        return dim * (spec.lag + 1) + 1
    return dim + 1  # time and the stroke variants add one coordinate


def embed(x: Stream, spec: EmbeddingSpec) -> Polyline:
    """Dispatch to the kind-specific embedding."""
    if spec.kind == "linear":
        return embed_linear(x)
    if spec.kind == "rectilinear":
        return embed_rectilinear(x)
    if spec.kind == "time":
        return embed_time(x)
    if spec.kind == "leadlag":
        return embed_leadlag(x, spec.lag)
    if spec.kind == "stroke1":
        return embed_stroke_v1(x)
    if spec.kind == "stroke2":
        return embed_stroke_v2(x)
    return embed_stroke_v3(x)


def embed_linear(x: Stream) -> Polyline:
    """Straight interpolation: vertices are the sample columns."""
    return Polyline(x.values.T.copy())


def embed_rectilinear(x: Stream) -> Polyline:
    """Axis-parallel interpolation, updating coordinate 1 first.

    Between consecutive samples the path makes d moves, so the output
    has 1 + d*(l-1) vertices.  For d=1 this coincides with the linear
    embedding.
    """
    verts = x.values.T
    d = x.dim
    cur, nxt = verts[:-1], verts[1:]
    steps = [np.concatenate([nxt[:, : c + 1], cur[:, c + 1 :]], axis=1) for c in range(d)]
    moves = np.stack(steps, axis=1).reshape(-1, d)
    return Polyline(np.vstack([verts[:1], moves]))


def embed_time(x: Stream) -> Polyline:
    """Append a uniform time coordinate (strictly monotone for l >= 2)."""
    t = np.linspace(0.0, 1.0, x.length)
    return Polyline(np.column_stack([x.values.T, t]))


def embed_leadlag(x: Stream, lag: int = 1) -> Polyline:
    """Lead-lag embedding with ``lag`` delayed copies of the stream.

    On the extended grid of l + lag positions, block j (j = 0..lag)
    holds sample column clip(i - j, 0, l - 1), so the base block repeats
    the last sample lag times and delayed blocks hold their initial
    value for the first j positions.  A uniform time coordinate sits
    between the base block and the delayed blocks, giving output
    dimension d*(lag + 1) + 1.
    """
    if lag < 1:
        raise ValueError("lag must be at least 1")
    verts = x.values.T
    l = x.length
    idx = np.arange(l + lag)
    blocks = [verts[np.clip(idx - j, 0, l - 1)] for j in range(lag + 1)]
    t = np.linspace(0.0, 1.0, l + lag)
    return Polyline(np.column_stack([blocks[0], t, *blocks[1:]]))


def _require_strokes(x: Stream):
    if x.strokes is None:
        raise ValueError("stroke embedding requires stroke annotations")


def embed_stroke_v1(x: Stream) -> Polyline:
    """Stroke id as an extra coordinate, one vertex per sample."""
    _require_strokes(x)
    return Polyline(np.column_stack([x.values.T, x.strokes.astype(float)]))


def embed_stroke_v2(x: Stream) -> Polyline:
    """Odd stroke levels with explicit connecting vertices.

    Stroke s sits at height 2s - 1.  Between strokes s and s + 1 two
    vertices are inserted at height 2s (last point of s, then first
    point of s + 1), so S strokes add 2*(S - 1) vertices.
    """
    _require_strokes(x)
    verts = x.values.T
    heights = 2.0 * x.strokes - 1.0
    rows = []
    prev = 0
    for i in np.flatnonzero(np.diff(x.strokes) == 1):
        rows.append(np.column_stack([verts[prev : i + 1], heights[prev : i + 1]]))
        h = 2.0 * x.strokes[i]
        rows.append(np.array([[*verts[i], h], [*verts[i + 1], h]]))
        prev = i + 1
    rows.append(np.column_stack([verts[prev:], heights[prev:]]))
    return Polyline(np.vstack(rows))


def embed_stroke_v3(x: Stream) -> Polyline:
    """Strictly monotone stroke coordinate, no added vertices.

    Within stroke s the coordinate rises linearly from 2*(s - 1) to
    2s - 1; the jump to 2s happens across the existing inter-stroke
    edge.  Single-point strokes take the value 2*(s - 1).  The result
    is strictly increasing, so the embedded path always has a monotone
    coordinate.
    """
    _require_strokes(x)
    coord = np.empty(x.length)
    for s in np.unique(x.strokes):
        member = np.flatnonzero(x.strokes == s)
        coord[member] = 2.0 * (s - 1) + np.linspace(0.0, 1.0, member.size)
    return Polyline(np.column_stack([x.values.T, coord]))
