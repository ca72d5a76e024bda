"""The command line pipeline on a toy classification set.

Builds a small NDJSON dataset of noisy ramps (label 1 goes up, label 0
goes down), then drives featurize, fit, and predict through the same
entry point the `sigpath` console script uses.
"""

import json
import tempfile
from pathlib import Path

import numpy as np

from sigpath.cli import main

rng = np.random.default_rng(12)
workdir = Path(tempfile.mkdtemp(prefix="sigpath-demo-"))

records = []
for i in range(40):
    label = i % 2
    slope = 1.0 if label else -1.0
    series = slope * np.linspace(0, 1, 30) + rng.normal(scale=0.15, size=30)
    records.append({"id": f"ramp{i}", "label": label,
                    "channels": [np.round(series, 4).tolist()]})
data = workdir / "ramps.ndjson"
data.write_text("\n".join(json.dumps(r) for r in records) + "\n")

features = workdir / "features.csv"
model = workdir / "model.txt"
preds = workdir / "predictions.csv"

steps = [
    ["featurize", str(data), "-o", str(features),
     "--embedding", "leadlag:1", "--order", "3"],
    ["fit", str(features), "--learner", "softmax", "--model", str(model)],
    ["predict", str(features), "--model", str(model), "-o", str(preds)],
]
for argv in steps:
    print("$ sigpath " + " ".join(argv))
    rc = main(argv)
    assert rc == 0, rc
    print()

print("first lines of", preds.name)
for line in preds.read_text().splitlines()[:5]:
    print(" ", line)
print("\n(working directory kept at", workdir, ")")
