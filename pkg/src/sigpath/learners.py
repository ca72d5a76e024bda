"""Small learners and metrics for the comparison protocol.

Max-abs feature normalization, ridge regression with an unpenalized
intercept, multinomial logistic (softmax) classification by full-batch
gradient descent with step halving, k nearest neighbors with explicit
tie rules, and the accuracy / L2 / MAP@3 / macro-F1 metrics.  Plain
numpy throughout; fitted models round-trip through a flat text format
so the CLI can save and reload them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Normalizer",
    "LinearModel",
    "fit_normalizer",
    "apply_normalizer",
    "fit_ridge",
    "predict",
    "fit_softmax",
    "classify",
    "knn_classify",
    "accuracy",
    "l2_error",
    "map3",
    "macro_f1",
    "save_flat_text",
    "load_flat_text",
]


@dataclass(frozen=True)
class Normalizer:
    """Per-feature scale: max absolute value on the training set, 1 where 0."""

    scale: np.ndarray


@dataclass(frozen=True)
class LinearModel:
    """Linear weights plus intercept.

    weights is (p,) for regression or (p, C) for softmax; classes holds
    the label values for the score columns of a classifier; history is
    the per-epoch training loss of the softmax fit.
    """

    kind: str
    weights: np.ndarray
    intercept: object
    classes: np.ndarray = None
    history: tuple = field(default=(), repr=False)


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("expected a 2-d feature matrix")
    return X


def fit_normalizer(train) -> Normalizer:
    train = _as_matrix(train)
    if train.shape[0] == 0:
        raise ValueError("cannot fit a normalizer on an empty matrix")
    scale = np.abs(train).max(axis=0)
    scale[scale == 0.0] = 1.0
    return Normalizer(scale)


def apply_normalizer(norm: Normalizer, X) -> np.ndarray:
    X = _as_matrix(X)
    if X.shape[1] != norm.scale.shape[0]:
        raise ValueError(
            f"feature count mismatch: normalizer has {norm.scale.shape[0]}, data has {X.shape[1]}"
        )
    return X / norm.scale


def _solve_spd(A, b):
    # Cholesky is the singularity detector; the solves reuse the factor.
    np.linalg.cholesky(A)
    return np.linalg.solve(A, b)


def fit_ridge(X, y, lam: float = None) -> LinearModel:
    """Ridge regression with an unpenalized intercept (lam=0 is OLS).

    Centering removes the intercept from the penalty.  When p > n the
    weights come from the dual form w = Xc' (Xc Xc' + lam I)^-1 yc,
    which is exact for lam > 0 and much cheaper.  The default lam is
    1e-6 scaled by the mean squared feature size, which keeps the
    exactly-rank-deficient signature designs solvable.
    """
    X = _as_matrix(X)
    y = np.asarray(y, dtype=float).ravel()
    n, p = X.shape
    if n == 0 or y.shape[0] != n:
        raise ValueError("X and y must be non-empty with matching lengths")
    xm = X.mean(axis=0)
    ym = float(y.mean())
    Xc = X - xm
    yc = y - ym
    if lam is None:
        ss = float((Xc * Xc).sum())
        lam = 1e-6 * ss / p if ss > 0.0 else 1e-6
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    try:
        if p <= n:
            A = Xc.T @ Xc + lam * np.eye(p)
            w = _solve_spd(A, Xc.T @ yc)
        else:
            if lam == 0.0:
                raise np.linalg.LinAlgError("p > n with lambda 0")
            G = Xc @ Xc.T + lam * np.eye(n)
            w = Xc.T @ _solve_spd(G, yc)
    except np.linalg.LinAlgError:
        raise ValueError(
            "normal equations are rank deficient at this lambda; increase lambda"
        ) from None
    intercept = ym - float(xm @ w)
    return LinearModel(kind="ridge", weights=w, intercept=intercept)


def predict(model: LinearModel, X) -> np.ndarray:
    if model.kind != "ridge":
        raise ValueError("predict expects a regression model; use classify")
    X = _as_matrix(X)
    if X.shape[1] != model.weights.shape[0]:
        raise ValueError(
            f"feature count mismatch: model expects {model.weights.shape[0]}, data has {X.shape[1]}"
        )
    return X @ model.weights + model.intercept


def _softmax_loss_grad(W, b, X, Y):
    # Mean cross-entropy and its analytic gradient.
    z = X @ W + b
    z -= z.max(axis=1, keepdims=True)
    e = np.exp(z)
    prob = e / e.sum(axis=1, keepdims=True)
    n = X.shape[0]
    loss = float(-np.log(np.clip((prob * Y).sum(axis=1), 1e-300, None)).mean())
    g = (prob - Y) / n
    return loss, X.T @ g, g.sum(axis=0)


def fit_softmax(X, labels, epochs: int = 200, step: float = 1.0) -> LinearModel:
    """Multinomial logistic regression by full-batch gradient descent.

    Weights start at zero (so relabeling classes just permutes score
    columns).  A proposed update that would increase the loss is
    rejected and the step halved, which makes the recorded loss history
    non-increasing; training stops at ``epochs`` or when the step
    underflows.
    """
    X = _as_matrix(X)
    labels = np.asarray(labels).ravel()
    if labels.shape[0] != X.shape[0]:
        raise ValueError("labels must match the number of rows")
    classes = np.unique(labels)
    if classes.size < 2:
        raise ValueError("need at least 2 classes to fit a classifier")
    Y = (labels[:, None] == classes[None, :]).astype(float)
    W = np.zeros((X.shape[1], classes.size))
    b = np.zeros(classes.size)
    loss, gW, gb = _softmax_loss_grad(W, b, X, Y)
    history = [loss]
    for _ in range(epochs):
        accepted = False
        while step > 1e-12:
            W2 = W - step * gW
            b2 = b - step * gb
            loss2, gW2, gb2 = _softmax_loss_grad(W2, b2, X, Y)
            if loss2 <= loss:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        W, b, loss, gW, gb = W2, b2, loss2, gW2, gb2
        history.append(loss)
    return LinearModel(
        kind="softmax", weights=W, intercept=b, classes=classes, history=tuple(history)
    )


def classify(model: LinearModel, X):
    """Predicted labels and the per-class score matrix."""
    if model.kind != "softmax":
        raise ValueError("classify expects a softmax model")
    X = _as_matrix(X)
    if X.shape[1] != model.weights.shape[0]:
        raise ValueError(
            f"feature count mismatch: model expects {model.weights.shape[0]}, data has {X.shape[1]}"
        )
    scores = X @ model.weights + model.intercept
    return model.classes[np.argmax(scores, axis=1)], scores


def knn_classify(train_X, train_labels, X, k: int) -> np.ndarray:
    """k nearest neighbors with fixed tie rules.

    Euclidean metric; equal distances order by training index (stable
    sort); majority vote among the k nearest; a vote tie goes to the
    tied class whose nearest member comes first.
    """
    train_X = _as_matrix(train_X)
    train_labels = np.asarray(train_labels).ravel()
    X = _as_matrix(X)
    n = train_X.shape[0]
    if n == 0:
        raise ValueError("empty training set")
    if train_labels.shape[0] != n:
        raise ValueError("labels must match the number of training rows")
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}")
    out = []
    for q in X:
        d2 = ((train_X - q) ** 2).sum(axis=1)
        votes = train_labels[np.argsort(d2, kind="stable")[:k]]
        tally = {}
        for pos, lab in enumerate(votes):
            entry = tally.setdefault(lab, [0, pos])
            entry[0] += 1
        out.append(max(tally.items(), key=lambda kv: (kv[1][0], -kv[1][1]))[0])
    return np.array(out)


def _check_lengths(y, yhat):
    y = np.asarray(y)
    yhat = np.asarray(yhat)
    if y.shape[0] != yhat.shape[0]:
        raise ValueError("length mismatch between targets and predictions")
    return y, yhat


def accuracy(y, yhat) -> float:
    y, yhat = _check_lengths(y, yhat)
    return float(np.mean(y == yhat))


def l2_error(y, yhat) -> float:
    """Mean squared difference."""
    y, yhat = _check_lengths(y, yhat)
    return float(np.mean((np.asarray(y, float) - np.asarray(yhat, float)) ** 2))


def map3(y, ranked) -> float:
    """Mean average precision at rank 3; only the first hit counts."""
    y = np.asarray(y)
    ranked = np.asarray(ranked)
    if ranked.shape != (y.shape[0], 3):
        raise ValueError("need exactly three ranked predictions per sample")
    score = np.zeros(y.shape[0])
    for j in range(3):
        hit = (ranked[:, j] == y) & (score == 0.0)
        score[hit] = 1.0 / (j + 1)
    return float(score.mean())


def macro_f1(y, yhat, n_classes: int) -> float:
    """Unweighted mean over classes 0..C-1 of the per-class F1.

    Precision or recall with a zero denominator counts as 0, and a
    class with precision + recall = 0 contributes F1 = 0.
    """
    y, yhat = _check_lengths(y, yhat)
    scores = []
    for c in range(n_classes):
        tp = float(np.sum((yhat == c) & (y == c)))
        fp = float(np.sum((yhat == c) & (y != c)))
        fn = float(np.sum((y == c) & (yhat != c)))
        prec = tp / (tp + fp) if tp + fp > 0 else 0.0
        rec = tp / (tp + fn) if tp + fn > 0 else 0.0
        scores.append(2 * prec * rec / (prec + rec) if prec + rec > 0 else 0.0)
    return float(np.mean(scores))


def _scalar_text(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def save_flat_text(path, fields: dict):
    """Write scalars and arrays as key=value lines.

    Arrays are space-separated repr floats in row-major order, each
    preceded by a key.shape line.  repr round-trips float64 exactly,
    so save/load is lossless.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for key, value in fields.items():
            if isinstance(value, np.ndarray):
                f.write(f"{key}.shape={' '.join(str(s) for s in value.shape)}\n")
                f.write(f"{key}={' '.join(repr(float(v)) for v in value.ravel())}\n")
            else:
                f.write(f"{key}={_scalar_text(value)}\n")


def load_flat_text(path) -> dict:
    """Inverse of save_flat_text; values come back as strings or arrays."""
    fields = {}
    shapes = {}
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if not line:
                continue
            key, _, raw = line.partition("=")
            if key.endswith(".shape"):
                shapes[key[: -len(".shape")]] = tuple(int(t) for t in raw.split())
            else:
                fields[key] = raw
    out = {}
    for key, raw in fields.items():
        if key in shapes:
            out[key] = np.array([float(t) for t in raw.split()]).reshape(shapes[key])
        else:
            out[key] = raw
    return out
