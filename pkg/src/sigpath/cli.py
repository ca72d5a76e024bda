"""Command line interface.

Subcommands: featurize (NDJSON streams to a feature CSV), experiment
(the AR runners), fit and predict (the small learners over feature
CSVs).  Every error path prints a single-line diagnostic to stderr and
exits nonzero; successful runs exit 0 and write deterministic bytes for
fixed inputs and seed, independent of the worker count.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import arsim, learners
from .embeddings import EmbeddingSpec, Stream, embed, embedded_dim, parse_embedding
from .signature import feature_count
from .windows import WindowSpec, dyadic_features

__all__ = ["main"]

DEFAULT_CAP = 1_000_000


class CliError(Exception):
    """Carries a one-line diagnostic to the exit handler."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(f"{self.prog}: {message}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok != ""]
    except ValueError:
        raise CliError(f"expected a comma-separated integer list, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok != ""]
    except ValueError:
        raise CliError(f"expected a comma-separated number list, got {text!r}") from None


def _jobs(args) -> int:
    if args.jobs is not None:
        return max(1, args.jobs)
    env = os.environ.get("SIGPATH_JOBS", "")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise CliError(f"SIGPATH_JOBS must be an integer, got {env!r}") from None
    return 1


def _read_ndjson(path):
    """Parse dataset records, reporting the offending line on failure."""
    records = []
    try:
        stream = open(path, "r", encoding="utf-8")
    except OSError as e:
        raise CliError(str(e)) from None
    with stream:
        for lineno, line in enumerate(stream, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise CliError(f"{path} line {lineno}: invalid JSON ({e.msg})") from None
            try:
                records.append(_parse_record(rec, lineno))
            except (KeyError, TypeError, ValueError) as e:
                raise CliError(f"{path} line {lineno}: {e}") from None
    if not records:
        raise CliError(f"{path}: no records")
    return records


def _parse_record(rec, lineno):
    if "channels" not in rec:
        raise ValueError("missing 'channels'")
    channels = rec["channels"]
    lengths = {len(c) for c in channels}
    if len(channels) < 1 or len(lengths) != 1:
        raise ValueError("channels must be one or more equal-length arrays")
    values = np.asarray(channels, dtype=float)
    strokes = rec.get("strokes")
    stream = Stream(values=values, strokes=strokes, target=rec.get("label"))
    return {"id": str(rec.get("id", lineno)), "label": rec.get("label"), "stream": stream}


def _resolve_embedding(args) -> EmbeddingSpec:
    spec = parse_embedding(args.embedding)
    if spec.kind == "leadlag" and ":" not in args.embedding and args.lag is not None:
        spec = EmbeddingSpec("leadlag", args.lag)
    return spec


def cmd_featurize(args) -> int:
    espec = _resolve_embedding(args)
    records = _read_ndjson(args.input)
    d = records[0]["stream"].dim
    for rec in records:
        if rec["stream"].dim != d:
            raise CliError(
                f"record {rec['id']}: channel count {rec['stream'].dim} differs from first record ({d})"
            )
        if espec.kind.startswith("stroke") and rec["stream"].strokes is None:
            raise CliError(f"record {rec['id']}: stroke embedding requires stroke annotations")
    wspec = WindowSpec(q=args.dyadic_order, order=args.order)
    total = (2**args.dyadic_order) * feature_count(
        embedded_dim(espec, d), args.order, args.include_constant
    )
    if total > args.cap:
        raise CliError(f"feature budget exceeded: {total} features per row > cap {args.cap}")

    def one(rec):
        return dyadic_features(embed(rec["stream"], espec), wspec, args.include_constant)

    jobs = _jobs(args)
    if jobs == 1:
        feats = [one(rec) for rec in records]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            feats = list(pool.map(one, records))
    with open(args.output, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["id", "label"] + [f"f_{i}" for i in range(total)])
        for rec, row in zip(records, feats):
            label = "" if rec["label"] is None else rec["label"]
            writer.writerow([rec["id"], label] + [repr(float(v)) for v in row])
    print(f"wrote {len(records)} rows x {total} features to {args.output}")
    return 0


def _experiment_spec(args) -> arsim.ARProcessSpec:
    phi = _float_list(args.phi)
    p = args.p if args.p is not None else len(phi)
    if p != len(phi):
        raise CliError(f"phi has {len(phi)} coefficients but p={p}")
    return arsim.ARProcessSpec(p=p, phi=tuple(phi), noise_sd=args.noise_sd, length=args.length)


def _median_by(rows, metric, key):
    values = {}
    for row in rows:
        if row["metric"] == metric:
            values.setdefault(key(row), []).append(row["value"])
    return {k: float(np.median(v)) for k, v in values.items()}


def cmd_experiment(args) -> int:
    spec = _experiment_spec(args)
    orders = _int_list(args.orders)
    if args.name == "ar-embeddings":
        embeddings = [tok.strip() for tok in args.embeddings.split(",") if tok.strip()]
        rows = arsim.run_embedding_comparison(
            spec, args.n, embeddings, orders, seed=args.seed, cap=args.cap
        )
        med = _median_by(rows, "l2_error", lambda r: (r["embedding"], r["order"]))
        best = min(med, key=med.get)
        summary = f"best: embedding={best[0]} order={best[1]} l2_error={med[best]:.6g}"
    elif args.name == "ar-lag-sweep":
        rows = arsim.run_lag_sweep(
            spec, args.n, _int_list(args.lags), orders,
            replicates=args.replicates, seed=args.seed, cap=args.cap,
        )
        med = _median_by(rows, "l2_error", lambda r: r["lag"])
        best = min(med, key=med.get)
        summary = f"best: lag={best} median l2_error={med[best]:.6g}"
    elif args.name == "ar-truncation":
        rows = arsim.run_truncation_sweep(
            spec, _int_list(args.sizes), orders,
            replicates=args.replicates, seed=args.seed, cap=args.cap,
        )
        med = _median_by(rows, "selected_order", lambda r: r["n"])
        chosen = " ".join(f"n={n}:K={int(k)}" for n, k in sorted(med.items()))
        summary = f"validation-selected orders: {chosen}"
    else:
        raise CliError(f"unknown experiment {args.name!r}")
    arsim.write_results_csv(rows, args.output)
    print(f"wrote {len(rows)} rows to {args.output}; {summary}")
    return 0


def _read_features(path):
    try:
        stream = open(path, "r", encoding="utf-8", newline="")
    except OSError as e:
        raise CliError(str(e)) from None
    with stream:
        reader = csv.reader(stream)
        header = next(reader, None)
        if not header or header[:2] != ["id", "label"]:
            raise CliError(f"{path}: expected a feature CSV with id,label,f_... header")
        ids, labels, rows = [], [], []
        for rec in reader:
            ids.append(rec[0])
            labels.append(rec[1])
            rows.append([float(v) for v in rec[2:]])
    if not rows:
        raise CliError(f"{path}: no feature rows")
    return ids, labels, np.asarray(rows, dtype=float)


def _class_labels(labels, path):
    try:
        return np.array([int(float(v)) for v in labels])
    except ValueError:
        raise CliError(f"{path}: classification needs integer labels on every row") from None


def cmd_fit(args) -> int:
    ids, labels, X = _read_features(args.input)
    if any(v == "" for v in labels):
        raise CliError(f"{args.input}: every row needs a label to fit on")
    norm = learners.fit_normalizer(X)
    Xn = learners.apply_normalizer(norm, X)
    fields = {"learner": args.learner, "scale": norm.scale}
    if args.learner == "ridge":
        y = np.array([float(v) for v in labels])
        model = learners.fit_ridge(Xn, y, lam=args.lam)
        fields.update(weights=model.weights, intercept=model.intercept)
        metric = f"train l2_error={learners.l2_error(y, learners.predict(model, Xn)):.6g}"
    elif args.learner == "softmax":
        y = _class_labels(labels, args.input)
        model = learners.fit_softmax(Xn, y, epochs=args.epochs)
        fields.update(
            weights=model.weights,
            intercept=np.asarray(model.intercept, dtype=float),
            classes=model.classes.astype(float),
        )
        pred, _ = learners.classify(model, Xn)
        metric = f"train accuracy={learners.accuracy(y, pred):.6g}"
    elif args.learner == "knn":
        y = _class_labels(labels, args.input)
        if not 1 <= args.k <= X.shape[0]:
            raise CliError(f"k must be in 1..{X.shape[0]}")
        fields.update(k=args.k, train_x=Xn, train_y=y.astype(float))
        pred = learners.knn_classify(Xn, y, Xn, args.k)
        metric = f"train accuracy={learners.accuracy(y, pred):.6g}"
    else:
        raise CliError(f"unknown learner {args.learner!r}")
    learners.save_flat_text(args.model, fields)
    print(f"fit {args.learner} on {X.shape[0]} x {X.shape[1]} features; {metric}")
    return 0


def cmd_predict(args) -> int:
    fields = learners.load_flat_text(args.model)
    if "learner" not in fields or "scale" not in fields:
        raise CliError(f"{args.model}: not a model file")
    kind = fields["learner"]
    scale = fields["scale"]
    ids, labels, X = _read_features(args.input)
    if X.shape[1] != scale.shape[0]:
        raise CliError(
            f"feature count mismatch: model expects {scale.shape[0]}, data has {X.shape[1]}"
        )
    Xn = X / scale
    if kind == "ridge":
        model = learners.LinearModel(
            kind="ridge", weights=fields["weights"], intercept=float(fields["intercept"])
        )
        pred = learners.predict(model, Xn)
    elif kind == "softmax":
        model = learners.LinearModel(
            kind="softmax",
            weights=fields["weights"],
            intercept=fields["intercept"],
            classes=fields["classes"].astype(int),
        )
        pred, _ = learners.classify(model, Xn)
    elif kind == "knn":
        pred = learners.knn_classify(
            fields["train_x"], fields["train_y"].astype(int), Xn, int(fields["k"])
        )
    else:
        raise CliError(f"{args.model}: unknown learner {kind!r}")
    with open(args.output, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["id", "prediction"])
        for i, v in zip(ids, pred):
            writer.writerow([i, repr(float(v)) if kind == "ridge" else int(v)])
    have_labels = all(v != "" for v in labels)
    if have_labels and kind == "ridge":
        y = np.array([float(v) for v in labels])
        print(f"l2_error={learners.l2_error(y, pred):.6g}")
    elif have_labels:
        y = _class_labels(labels, args.input)
        print(f"accuracy={learners.accuracy(y, np.asarray(pred, dtype=int)):.6g}")
    else:
        print(f"wrote {len(ids)} predictions to {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sigpath", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("featurize", help="embed NDJSON streams and write signature features")
    p.add_argument("input", help="NDJSON dataset file")
    p.add_argument("-o", "--output", required=True, help="feature CSV path")
    p.add_argument("--embedding", default="linear", help="linear | rectilinear | time | leadlag:<m> | stroke1 | stroke2 | stroke3")
    p.add_argument("--order", type=int, default=2, help="truncation order K")
    p.add_argument("--dyadic-order", type=int, default=0, help="dyadic window order q")
    p.add_argument("--lag", type=int, default=None, help="lead-lag lag when --embedding has no :<m>")
    p.add_argument("--include-constant", action="store_true", help="keep the constant level-0 feature")
    p.add_argument("--jobs", type=int, default=None, help="worker threads (default SIGPATH_JOBS or 1)")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="per-row feature budget")
    p.set_defaults(func=cmd_featurize)

    p = sub.add_parser("experiment", help="run an AR experiment and write a results CSV")
    p.add_argument("name", choices=["ar-embeddings", "ar-lag-sweep", "ar-truncation"])
    p.add_argument("-o", "--output", required=True, help="results CSV path")
    p.add_argument("--phi", default="-0.9", help="comma-separated AR coefficients")
    p.add_argument("--p", type=int, default=None, help="AR order (default: length of phi)")
    p.add_argument("--noise-sd", type=float, default=1.0)
    p.add_argument("--length", type=int, default=100, help="points per trajectory")
    p.add_argument("--n", type=int, default=200, help="training sample count")
    p.add_argument("--orders", default="1,2,3,4,5,6", help="truncation orders to sweep")
    p.add_argument("--lags", default="1,2,3", help="lead-lag lags (ar-lag-sweep)")
    p.add_argument("--sizes", default="50,200,500", help="sample sizes (ar-truncation)")
    p.add_argument("--embeddings", default="linear,time,leadlag:1", help="embedding specs (ar-embeddings)")
    p.add_argument("--replicates", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="feature budget per order")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("fit", help="fit a learner on a feature CSV")
    p.add_argument("input", help="feature CSV (from featurize)")
    p.add_argument("--learner", choices=["ridge", "softmax", "knn"], required=True)
    p.add_argument("--model", required=True, help="model file to write")
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="ridge penalty")
    p.add_argument("--epochs", type=int, default=200, help="softmax epochs")
    p.add_argument("--k", type=int, default=5, help="neighbor count for knn")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("predict", help="apply a fitted model to a feature CSV")
    p.add_argument("input", help="feature CSV")
    p.add_argument("--model", required=True, help="model file from fit")
    p.add_argument("-o", "--output", required=True, help="predictions CSV path")
    p.set_defaults(func=cmd_predict)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as e:
        print(f"sigpath: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # keep every failure a one-line diagnostic
        print(f"sigpath: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
