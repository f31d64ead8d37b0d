"""Dimensionality reduction for encoded categorical columns.

Gaussian random projections act on any encoded matrix. Prototype methods
keep similarity encoding but only against ``d`` chosen training categories,
either the most frequent ones or those closest to k-means centers. The
k-means partition also drives the dedup-merge baseline, which one-hot
encodes cluster membership instead of similarities.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .encoders import (CategoryDomain, EncoderSpec, FittedEncoder, Reduction,
                       with_reduction)
from .errors import ConfigError, DataError
from .text_similarity import SimilarityMeasure, pairwise_similarity

__all__ = [
    "REDUCTION_KINDS",
    "PrototypeSet",
    "KMeansModel",
    "projection_matrix",
    "random_projection",
    "most_frequent_prototypes",
    "kmeans",
    "kmeans_prototypes",
    "kmeans_cluster_map",
    "reduce_by_prototypes",
    "dedup_merge_encoder",
    "fit_reduction",
]

REDUCTION_KINDS = ("none", "projection", "most_frequent", "kmeans", "dedup_merge")
DEFAULT_SUBSAMPLE = 3000


@dataclass(frozen=True)
class PrototypeSet:
    prototypes: tuple
    method: str

    def __len__(self):
        return len(self.prototypes)


@dataclass(frozen=True)
class KMeansModel:
    centers: np.ndarray
    labels: np.ndarray
    inertia: float
    inertia_history: tuple = field(repr=False)
    n_iter: int
    seed: int
    max_iter: int

    @property
    def k(self) -> int:
        return self.centers.shape[0]


def projection_matrix(p: int, d: int, seed: int) -> np.ndarray:
    """``p x d`` matrix of i.i.d. N(0, 1/d) entries drawn from ``seed``."""
    if d < 1:
        raise ConfigError("projection dimension must be >= 1")
    rng = np.random.default_rng(seed)
    return rng.normal(0.0, 1.0 / np.sqrt(d), size=(p, d))


def random_projection(X, d: int, seed: int = 0, matrix=None) -> np.ndarray:
    """Project the rows of ``X`` to ``d`` dimensions.

    ``matrix`` overrides the Gaussian draw (it must be ``p x d``).
    """
    X = np.asarray(X, dtype=np.float64)
    if matrix is None:
        matrix = projection_matrix(X.shape[1], d, seed)
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.shape != (X.shape[1], d):
        raise DataError(f"projection matrix shape {matrix.shape} != {(X.shape[1], d)}")
    return X @ matrix


def most_frequent_prototypes(domain: CategoryDomain, d: int) -> PrototypeSet:
    """The ``d`` most frequent categories, ties broken lexicographically."""
    if not 1 <= d <= domain.k:
        raise DataError(f"cannot pick {d} prototypes from {domain.k} categories")
    order = sorted(range(domain.k),
                   key=lambda i: (-domain.frequencies[i], domain.categories[i]))
    return PrototypeSet(tuple(domain.categories[i] for i in order[:d]), "most_frequent")


def _sq_distances(X, sq_norms, centers):
    d = sq_norms[:, None] + np.einsum("ij,ij->i", centers, centers)[None, :] \
        - 2.0 * (X @ centers.T)
    np.maximum(d, 0.0, out=d)
    return d


def _farthest_point_seeding(X, sq_norms, k, rng):
    n = X.shape[0]
    chosen = [int(rng.integers(n))]
    best = _sq_distances(X, sq_norms, X[chosen])[:, 0]
    for _ in range(1, k):
        nxt = int(np.argmax(best))
        chosen.append(nxt)
        best = np.minimum(best, _sq_distances(X, sq_norms, X[[nxt]])[:, 0])
    return X[chosen].copy()


def _inertia(X, centers, labels):
    diff = X - centers[labels]
    return float(np.einsum("ij,ij->", diff, diff))


def kmeans(points, k: int, seed: int = 0, max_iter: int = 100) -> KMeansModel:
    """Lloyd's algorithm from a seeded greedy farthest-point start.

    Stops after ``max_iter`` rounds or once assignments are stable. A cluster
    that empties is re-seeded with the point farthest from its own center.
    """
    X = np.asarray(points, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise DataError("kmeans needs a non-empty 2-D point matrix")
    n = X.shape[0]
    if not 1 <= k <= n:
        raise DataError(f"cannot form {k} clusters from {n} points")
    if max_iter < 1:
        raise ConfigError("max_iter must be >= 1")
    rng = np.random.default_rng(seed)
    sq_norms = np.einsum("ij,ij->i", X, X)
    centers = _farthest_point_seeding(X, sq_norms, k, rng)
    dist = _sq_distances(X, sq_norms, centers)
    labels = np.argmin(dist, axis=1)
    history = [_inertia(X, centers, labels)]
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        counts = np.bincount(labels, minlength=k)
        own = dist[np.arange(n), labels]
        for j in np.flatnonzero(counts == 0):
            # only steal from clusters that keep at least one member
            far = int(np.argmax(np.where(counts[labels] > 1, own, -1.0)))
            counts[labels[far]] -= 1
            labels[far] = j
            counts[j] = 1
            own[far] = 0.0
        centers = np.zeros_like(centers)
        np.add.at(centers, labels, X)
        centers /= counts[:, None]
        dist = _sq_distances(X, sq_norms, centers)
        new_labels = np.argmin(dist, axis=1)
        history.append(_inertia(X, centers, new_labels))
        stable = np.array_equal(new_labels, labels)
        labels = new_labels
        if stable:
            break
    return KMeansModel(centers, labels, history[-1], tuple(history), n_iter, seed, max_iter)


def _subsample_categories(domain: CategoryDomain, subsample: int, seed: int):
    if domain.k <= subsample:
        return np.arange(domain.k)
    rng = np.random.default_rng(seed)
    return np.sort(rng.choice(domain.k, size=subsample, replace=False))


def _cluster_categories(domain, measure, d, seed, subsample):
    if not 1 <= d <= domain.k:
        raise DataError(f"cannot form {d} clusters from {domain.k} categories")
    picked = _subsample_categories(domain, subsample, seed)
    if picked.size < d:
        raise DataError(f"subsample of {picked.size} categories is smaller than d={d}")
    names = [domain.categories[i] for i in picked]
    rows = pairwise_similarity(names, domain.categories, measure)
    return picked, rows, kmeans(rows, d, seed=seed)


def kmeans_prototypes(domain: CategoryDomain, measure: SimilarityMeasure, d: int,
                      subsample: int = DEFAULT_SUBSAMPLE, seed: int = 0) -> PrototypeSet:
    """Per k-means cluster, the member category whose similarity row is nearest the center.

    Clustering runs on the similarity encodings of at most ``subsample``
    categories (seeded uniform draw) against the full domain.
    """
    picked, rows, model = _cluster_categories(domain, measure, d, seed, subsample)
    dist = _sq_distances(rows, np.einsum("ij,ij->i", rows, rows), model.centers)
    used: set = set()
    protos = []
    for j in range(d):
        members = np.flatnonzero(model.labels == j)
        if members.size == 0:
            members = np.array([i for i in range(picked.size) if i not in used])
        # stable sort keeps the lowest category index among equal distances
        best = members[np.argsort(dist[members, j], kind="stable")]
        choice = next(int(i) for i in best if int(i) not in used)
        used.add(choice)
        protos.append(domain.categories[picked[choice]])
    return PrototypeSet(tuple(protos), "kmeans")


def kmeans_cluster_map(domain: CategoryDomain, measure: SimilarityMeasure, d: int,
                       seed: int = 0, subsample: int = DEFAULT_SUBSAMPLE) -> tuple:
    """Cluster id of every domain category.

    Categories left out of the clustering subsample join the nearest center.
    """
    picked, rows, model = _cluster_categories(domain, measure, d, seed, subsample)
    cmap = np.full(domain.k, -1, dtype=np.int64)
    cmap[picked] = model.labels
    rest = np.flatnonzero(cmap < 0)
    for start in range(0, rest.size, 1024):
        chunk = rest[start:start + 1024]
        sims = pairwise_similarity([domain.categories[i] for i in chunk],
                                   domain.categories, measure)
        dist = _sq_distances(sims, np.einsum("ij,ij->i", sims, sims), model.centers)
        cmap[chunk] = np.argmin(dist, axis=1)
    return tuple(int(c) for c in cmap)


def reduce_by_prototypes(values, protos: PrototypeSet, measure: SimilarityMeasure) -> np.ndarray:
    return pairwise_similarity(list(values), protos.prototypes, measure)


def dedup_merge_encoder(domain: CategoryDomain, measure: SimilarityMeasure, d: int,
                        seed: int = 0, subsample: int = DEFAULT_SUBSAMPLE) -> FittedEncoder:
    """One-hot encoder over ``d`` k-means clusters of the categories."""
    cmap = kmeans_cluster_map(domain, measure, d, seed=seed, subsample=subsample)
    spec = EncoderSpec("cluster_one_hot", measure=measure, n_clusters=d, seed=seed)
    return FittedEncoder(spec, domain, d, cluster_map=cmap)


def fit_reduction(enc: FittedEncoder, kind: str, d: int, seed: int = 0,
                  subsample: int = DEFAULT_SUBSAMPLE) -> FittedEncoder:
    """Attach a reduction of kind ``kind`` to a fitted encoder.

    ``dedup_merge`` replaces the encoder by a cluster one-hot encoder using
    the same measure; the other kinds keep the encoder and shrink its output
    to ``d`` columns.
    """
    if kind == "none":
        return enc
    if kind not in REDUCTION_KINDS:
        raise ConfigError(f"unknown reduction {kind!r}")
    if kind in ("most_frequent", "kmeans", "dedup_merge") and enc.spec.kind != "similarity":
        raise ConfigError(f"{kind} reduction needs a similarity encoder")
    if kind == "projection":
        return with_reduction(enc, Reduction("projection", d, seed))
    if kind == "dedup_merge":
        return dedup_merge_encoder(enc.domain, enc.spec.measure, d, seed, subsample)
    if kind == "most_frequent":
        protos = most_frequent_prototypes(enc.domain, d)
    else:
        protos = kmeans_prototypes(enc.domain, enc.spec.measure, d, subsample, seed)
    return with_reduction(enc, Reduction(kind, d, seed, protos.prototypes))
