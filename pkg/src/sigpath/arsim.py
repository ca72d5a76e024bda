"""AR(p) simulation and the desk-scale regression experiments.

The generated task: each sample is one AR(p) trajectory of ``length``
points observed as a 1-channel stream, and the regression target is the
true next value of that trajectory.  The three runners reproduce the
embedding comparison, the lead-lag sweep with validation-selected
truncation order, and the truncation-vs-sample-size sweep.

Seeding: every dataset draw uses a generator seeded with the tuple
(seed, replicate, role) where role is 0 train, 1 validation, 2 test.
Splits are therefore disjoint fresh draws, and a whole experiment is
reproducible from the one integer recorded in its result rows.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace

import numpy as np

from .embeddings import (
    EmbeddingSpec,
    Stream,
    embed,
    embedded_dim,
    embedding_label,
    parse_embedding,
)
from .learners import apply_normalizer, fit_normalizer, fit_ridge, l2_error, predict
from .signature import batch_signature_features, feature_count

__all__ = [
    "ARProcessSpec",
    "RegressionDataset",
    "RESULT_COLUMNS",
    "simulate_ar",
    "run_embedding_comparison",
    "run_lag_sweep",
    "run_truncation_sweep",
    "write_results_csv",
]

ROLE_TRAIN, ROLE_VAL, ROLE_TEST = 0, 1, 2

RESULT_COLUMNS = (
    "experiment",
    "embedding",
    "lag",
    "order",
    "n",
    "replicate",
    "metric",
    "value",
    "n_features",
    "seed",
)


@dataclass(frozen=True)
class ARProcessSpec:
    """AR(p) process Z_t = phi_1 Z_{t-1} + ... + phi_p Z_{t-p} + eps_t."""

    p: int
    phi: tuple
    noise_sd: float = 1.0
    length: int = 100
    seed: object = 0
    burnin: int = 0

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple(float(v) for v in np.atleast_1d(self.phi)))
        if self.p < 1:
            raise ValueError("p must be at least 1")
        if len(self.phi) != self.p:
            raise ValueError(f"phi has {len(self.phi)} coefficients but p={self.p}")
        if self.length < 1:
            raise ValueError("length must be at least 1")
        if self.noise_sd < 0:
            raise ValueError("noise_sd must be non-negative")
        if self.burnin < 0:
            raise ValueError("burnin must be non-negative")


@dataclass(frozen=True)
class RegressionDataset:
    """n trajectories (rows of series) with the true next value as target."""

    series: np.ndarray
    targets: np.ndarray

    def streams(self):
        return [
            Stream(values=row[None, :], target=t)
            for row, t in zip(self.series, self.targets)
        ]


def simulate_ar(spec: ARProcessSpec, n: int) -> RegressionDataset:
    """Draw n independent trajectories of length+1 values each.

    Presample values are zero; the recursion then runs through burnin
    plus length plus one steps with i.i.d. Gaussian noise, and the last
    value splits off as the regression target.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(spec.seed)
    total = spec.burnin + spec.length + 1
    eps = rng.normal(0.0, spec.noise_sd, size=(n, total))
    phi_rev = np.asarray(spec.phi)[::-1]
    z = np.zeros((n, spec.p + total))
    for c in range(spec.p, spec.p + total):
        z[:, c] = eps[:, c - spec.p] + z[:, c - spec.p : c] @ phi_rev
    keep = z[:, spec.p + spec.burnin :]
    return RegressionDataset(series=keep[:, :-1].copy(), targets=keep[:, -1].copy())


def _dataset(spec: ARProcessSpec, n: int, seed: int, replicate: int, role: int):
    derived = replace(spec, seed=(int(seed), int(replicate), int(role)))
    return simulate_ar(derived, n)


def _embedded_features(series: np.ndarray, espec: EmbeddingSpec, order: int):
    polys = [embed(Stream(values=row[None, :]), espec) for row in series]
    return batch_signature_features(np.stack([p.vertices for p in polys]), order)


def _split_features(spec, n, seed, replicate, espec, order):
    # Featurize train/val/test at the given order; slice prefixes later.
    n_side = max(n // 5, 1)
    sets = []
    for role, count in ((ROLE_TRAIN, n), (ROLE_VAL, n_side), (ROLE_TEST, n_side)):
        data = _dataset(spec, count, seed, replicate, role)
        sets.append((_embedded_features(data.series, espec, order), data.targets))
    return sets


def _errors_by_order(sets, dim, orders):
    """Fit ridge per truncation order on prefix slices; validation and
    test L2 for each order."""
    (ftr, ytr), (fva, yva), (fte, yte) = sets
    val, test = {}, {}
    for k in orders:
        width = feature_count(dim, k)
        norm = fit_normalizer(ftr[:, :width])
        model = fit_ridge(apply_normalizer(norm, ftr[:, :width]), ytr)
        val[k] = l2_error(yva, predict(model, apply_normalizer(norm, fva[:, :width])))
        test[k] = l2_error(yte, predict(model, apply_normalizer(norm, fte[:, :width])))
    return val, test


def _row(experiment, seed, **kw):
    row = {c: "" for c in RESULT_COLUMNS}
    row["experiment"] = experiment
    row["seed"] = seed
    row.update(kw)
    return row


def _feasible(orders, dim, cap):
    orders = sorted(set(int(k) for k in orders))
    keep = [k for k in orders if feature_count(dim, k) <= cap]
    skip = [k for k in orders if k not in keep]
    return keep, skip


def run_embedding_comparison(
    spec: ARProcessSpec,
    n: int,
    embeddings,
    orders,
    seed: int = 0,
    cap: int = 1_000_000,
    replicate: int = 0,
):
    """Test and validation error for every (embedding, order) pair.

    One simulated train/val/test triple per call; rows carry metric
    l2_error (test) and l2_error_val so a consumer can do its own
    validation selection.  Orders whose feature count exceeds ``cap``
    are recorded as skipped.
    """
    rows = []
    for item in embeddings:
        espec = item if isinstance(item, EmbeddingSpec) else parse_embedding(item)
        label = embedding_label(espec)
        lag = espec.lag if espec.kind == "leadlag" else ""
        dim = embedded_dim(espec, 1)
        keep, skip = _feasible(orders, dim, cap)
        common = dict(embedding=label, lag=lag, n=n, replicate=replicate)
        if keep:
            sets = _split_features(spec, n, seed, replicate, espec, max(keep))
            val, test = _errors_by_order(sets, dim, keep)
            for k in keep:
                width = feature_count(dim, k)
                rows.append(
                    _row(
                        "ar-embeddings", seed, order=k, metric="l2_error",
                        value=test[k], n_features=width, **common,
                    )
                )
                rows.append(
                    _row(
                        "ar-embeddings", seed, order=k, metric="l2_error_val",
                        value=val[k], n_features=width, **common,
                    )
                )
        for k in skip:
            rows.append(
                _row(
                    "ar-embeddings", seed, order=k, metric="skipped_feature_budget",
                    value=float("nan"), n_features=feature_count(dim, k), **common,
                )
            )
    return rows


def run_lag_sweep(
    spec: ARProcessSpec,
    n: int,
    lags,
    orders,
    replicates: int,
    seed: int = 0,
    cap: int = 1_000_000,
):
    """Lead-lag sweep with validation-selected truncation order.

    Per replicate one shared train/val/test triple feeds every lag, so
    lags are compared on identical data.  Each (lag, replicate) yields
    exactly one row: the test error at the validation-selected order.
    """
    rows = []
    for rep in range(replicates):
        for m in lags:
            espec = EmbeddingSpec("leadlag", int(m))
            dim = embedded_dim(espec, 1)
            keep, skip = _feasible(orders, dim, cap)
            common = dict(embedding=embedding_label(espec), lag=int(m), n=n, replicate=rep)
            if not keep:
                rows.append(
                    _row(
                        "ar-lag-sweep", seed, metric="skipped_feature_budget",
                        value=float("nan"), **common,
                    )
                )
                continue
            sets = _split_features(spec, n, seed, rep, espec, max(keep))
            val, test = _errors_by_order(sets, dim, keep)
            best = min(keep, key=lambda k: val[k])
            rows.append(
                _row(
                    "ar-lag-sweep", seed, order=best, metric="l2_error",
                    value=test[best], n_features=feature_count(dim, best), **common,
                )
            )
    return rows


def run_truncation_sweep(
    spec: ARProcessSpec,
    sample_sizes,
    orders,
    replicates: int,
    seed: int = 0,
    cap: int = 1_000_000,
):
    """Error grid over (sample size, order) at the fixed leadlag:2 embedding.

    Emits test and validation error per order plus one selected_order
    row per (size, replicate) holding the validation argmin.
    """
    espec = EmbeddingSpec("leadlag", 2)
    dim = embedded_dim(espec, 1)
    label = embedding_label(espec)
    rows = []
    keep, skip = _feasible(orders, dim, cap)
    for size in sample_sizes:
        size = int(size)
        for rep in range(replicates):
            common = dict(embedding=label, lag=2, n=size, replicate=rep)
            if not keep:
                rows.append(
                    _row(
                        "ar-truncation", seed, metric="skipped_feature_budget",
                        value=float("nan"), **common,
                    )
                )
                continue
            sets = _split_features(spec, size, seed, rep, espec, max(keep))
            val, test = _errors_by_order(sets, dim, keep)
            for k in keep:
                width = feature_count(dim, k)
                rows.append(
                    _row(
                        "ar-truncation", seed, order=k, metric="l2_error",
                        value=test[k], n_features=width, **common,
                    )
                )
                rows.append(
                    _row(
                        "ar-truncation", seed, order=k, metric="l2_error_val",
                        value=val[k], n_features=width, **common,
                    )
                )
            best = min(keep, key=lambda k: val[k])
            rows.append(
                _row(
                    "ar-truncation", seed, order=best, metric="selected_order",
                    value=float(best), n_features=feature_count(dim, best), **common,
                )
            )
            for k in skip:
                rows.append(
                    _row(
                        "ar-truncation", seed, order=k, metric="skipped_feature_budget",
                        value=float("nan"), n_features=feature_count(dim, k), **common,
                    )
                )
    return rows


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_results_csv(rows, path):
    """Result table with the fixed column set, floats via repr (byte-stable)."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(RESULT_COLUMNS)
        for row in rows:
            writer.writerow([_cell(row.get(col, "")) for col in RESULT_COLUMNS])
