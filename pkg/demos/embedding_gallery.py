"""Render one small stream through every embedding.

The embedding decides how a discrete sample matrix becomes a continuous
path, and it is the main modelling choice before any signature is
computed. The stream below has two channels and a stroke annotation
(think pen lifts between strokes of a drawing).
"""

import numpy as np

from sigpath import EMBEDDING_KINDS, Stream, embed, parse_embedding

stream = Stream(
    values=np.array([[0.0, 1.0, 3.0, 4.0], [2.0, 2.0, 1.0, 0.0]]),
    strokes=[1, 1, 2, 2],
)
print(f"stream: {stream.dim} channels x {stream.length} samples, "
      f"strokes {list(stream.strokes)}")

specs = [k if k != "leadlag" else "leadlag:2" for k in EMBEDDING_KINDS]
for text in specs:
    path = embed(stream, parse_embedding(text))
    print(f"\n{text}: path in R^{path.dim} with {len(path.vertices)} vertices")
    print(np.array_str(path.vertices, precision=3, suppress_small=True))

# Things worth noticing above:
#  - linear keeps the raw samples; rectilinear moves one coordinate at a
#    time, so axis-parallel steps replace diagonal ones.
#  - time, leadlag and stroke3 append a strictly increasing coordinate,
#    which makes distinct streams have distinct signatures.
#  - leadlag:2 carries two delayed copies of every channel.
#  - stroke2 inserts extra vertices at each pen jump; stroke1 and
#    stroke3 only relabel the stroke coordinate.
