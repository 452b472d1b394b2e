"""K-means clustering of countries by technology indicators, with
distance-based anomaly flagging.

Lloyd iterations over z-scored features, seeded kmeans++ initialization for
reproducibility, and best-of-restarts selection by within-cluster SSE.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

DEFAULT_TAU = 2.0
MAX_ITER = 300


@dataclass(frozen=True)
class FeatureMatrix:
    labels: tuple[str, ...]
    feature_names: tuple[str, ...]
    values: np.ndarray
    standardized: bool = False
    column_means: np.ndarray | None = None
    column_sds: np.ndarray | None = None

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 2:
            raise ValueError("values must be 2-dimensional")
        if values.shape != (len(self.labels), len(self.feature_names)):
            raise ValueError(
                f"shape {values.shape} does not match "
                f"{len(self.labels)} labels x {len(self.feature_names)} features"
            )
        if values.size == 0:
            raise ValueError("feature matrix is empty")
        if not np.all(np.isfinite(values)):
            raise ValueError("feature matrix contains non-finite values")


@dataclass(frozen=True)
class ClusterModel:
    k: int
    centroids: np.ndarray
    assignments: np.ndarray
    distances: np.ndarray
    sse: float
    n_iter: int
    seed: int
    matrix: FeatureMatrix = field(repr=False)
    sse_history: tuple[float, ...] = ()


def standardize(matrix: FeatureMatrix) -> FeatureMatrix:
    """Z-score each column (sample SD); constant columns map to all zeros."""
    if len(matrix.labels) < 2:
        raise ValueError("need at least 2 rows to standardize")
    means = matrix.values.mean(axis=0)
    sds = matrix.values.std(axis=0, ddof=1)
    safe = np.where(sds > 0.0, sds, 1.0)
    z = (matrix.values - means) / safe
    z[:, sds == 0.0] = 0.0
    return FeatureMatrix(
        labels=matrix.labels,
        feature_names=matrix.feature_names,
        values=z,
        standardized=True,
        column_means=means,
        column_sds=sds,
    )


def _kmeanspp_init(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = x.shape[0]
    centroids = np.empty((k, x.shape[1]))
    centroids[0] = x[rng.integers(n)]
    d2 = np.sum((x - centroids[0]) ** 2, axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total == 0.0:
            idx = rng.integers(n)
        else:
            idx = rng.choice(n, p=d2 / total)
        centroids[j] = x[idx]
        d2 = np.minimum(d2, np.sum((x - centroids[j]) ** 2, axis=1))
    return centroids


def _lloyd(
    x: np.ndarray, centroids: np.ndarray
) -> tuple[np.ndarray, np.ndarray, float, int, list[float]]:
    k = centroids.shape[0]
    assignments = np.full(x.shape[0], -1)
    history: list[float] = []
    for it in range(1, MAX_ITER + 1):
        dists = np.linalg.norm(x[:, None, :] - centroids[None, :, :], axis=2)
        new_assignments = np.argmin(dists, axis=1)
        for j in range(k):
            members = x[new_assignments == j]
            if len(members) == 0:
                # reseed an empty cluster at the worst-fitted point
                own = dists[np.arange(len(x)), new_assignments]
                far = int(np.argmax(own))
                centroids[j] = x[far]
                new_assignments[far] = j
            else:
                centroids[j] = members.mean(axis=0)
        own = np.linalg.norm(x - centroids[new_assignments], axis=1)
        history.append(float(np.sum(own**2)))
        if np.array_equal(new_assignments, assignments):
            break
        assignments = new_assignments
    own = np.linalg.norm(x - centroids[assignments], axis=1)
    return centroids, assignments, float(np.sum(own**2)), it, history


def kmeans_fit(
    matrix: FeatureMatrix, k: int, seed: int = 0, restarts: int = 1
) -> ClusterModel:
    """Best-of-restarts Lloyd fit; deterministic for a given seed."""
    x = matrix.values
    n = x.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    best: tuple | None = None
    for r in range(restarts):
        rng = np.random.default_rng(seed + r)
        centroids = _kmeanspp_init(x.copy(), k, rng)
        centroids, assignments, sse, n_iter, history = _lloyd(x, centroids)
        if best is None or sse < best[2]:
            best = (centroids, assignments, sse, n_iter, history)
    centroids, assignments, sse, n_iter, history = best
    dists = np.linalg.norm(x - centroids[assignments], axis=1)
    return ClusterModel(
        k=k,
        centroids=centroids,
        assignments=assignments,
        distances=dists,
        sse=sse,
        n_iter=n_iter,
        seed=seed,
        matrix=matrix,
        sse_history=tuple(history),
    )


@dataclass(frozen=True)
class Anomaly:
    label: str
    cluster: int
    distance: float
    cluster_rms: float


def detect_anomalies(model: ClusterModel, tau: float = DEFAULT_TAU) -> list[Anomaly]:
    """Rows farther than tau times their cluster's rms distance.

    Singleton clusters are skipped (their rms carries no information). A
    nonempty result suggests refitting with k + 1.
    """
    if tau <= 0.0:
        raise ValueError(f"tau must be > 0, got {tau}")
    flagged = []
    for j in range(model.k):
        members = np.where(model.assignments == j)[0]
        if len(members) < 2:
            continue
        rms = float(np.sqrt(np.mean(model.distances[members] ** 2)))
        if rms == 0.0:
            continue
        for i in members:
            if model.distances[i] > tau * rms:
                flagged.append(
                    Anomaly(
                        label=model.matrix.labels[i],
                        cluster=j,
                        distance=float(model.distances[i]),
                        cluster_rms=rms,
                    )
                )
    return flagged


def cluster_report(model: ClusterModel, outcomes: dict[str, float]) -> dict:
    """Membership, original-unit centroids, and outcome range per cluster."""
    missing = [lb for lb in model.matrix.labels if lb not in outcomes]
    if missing:
        raise KeyError(f"missing outcome value for rows: {missing}")
    matrix = model.matrix
    centroids = model.centroids
    if matrix.standardized and matrix.column_sds is not None:
        sds = np.where(matrix.column_sds > 0.0, matrix.column_sds, 0.0)
        centroids = centroids * sds + matrix.column_means
    clusters = []
    for j in range(model.k):
        members = [
            matrix.labels[i] for i in range(len(matrix.labels)) if model.assignments[i] == j
        ]
        values = [outcomes[m] for m in members]
        clusters.append(
            {
                "cluster": j,
                "members": members,
                "centroid": {
                    name: float(c)
                    for name, c in zip(matrix.feature_names, centroids[j])
                },
                "outcome_min": min(values) if values else None,
                "outcome_max": max(values) if values else None,
            }
        )
    return {"k": model.k, "sse": model.sse, "clusters": clusters}


def report_to_text(report: dict) -> str:
    lines = [f"k = {report['k']}, within-cluster SSE = {report['sse']:.6g}"]
    for cl in report["clusters"]:
        lines.append(
            f"cluster {cl['cluster']}: {len(cl['members'])} members, "
            f"outcome range [{cl['outcome_min']:.6g}, {cl['outcome_max']:.6g}]"
        )
        lines.append("  " + ", ".join(cl["members"]))
        centroid = ", ".join(f"{k}={v:.6g}" for k, v in cl["centroid"].items())
        lines.append(f"  centroid: {centroid}")
    return "\n".join(lines) + "\n"


def model_to_json(model: ClusterModel) -> str:
    doc = {
        "k": model.k,
        "seed": model.seed,
        "sse": model.sse,
        "n_iter": model.n_iter,
        "feature_names": list(model.matrix.feature_names),
        "centroids": model.centroids.tolist(),
        "assignments": {
            label: int(c) for label, c in zip(model.matrix.labels, model.assignments)
        },
        "distances": {
            label: float(d) for label, d in zip(model.matrix.labels, model.distances)
        },
    }
    return json.dumps(doc, indent=2) + "\n"
