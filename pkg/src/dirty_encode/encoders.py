"""Categorical encoders under a common fit/transform contract.

Every encoder is fitted on a training column (and, for the supervised ones,
a target) and produces an immutable :class:`FittedEncoder` that can encode
any string, including categories never seen during fit.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
import hashlib
import re

import numpy as np

from .errors import ConfigError, DataError
from .text_similarity import SimilarityMeasure, ngram_counts, pairwise_similarity

__all__ = [
    "TASK_KINDS",
    "ENCODER_KINDS",
    "CategoryDomain",
    "EncoderSpec",
    "TargetStats",
    "Reduction",
    "FittedEncoder",
    "FeatureMatrix",
    "fit",
    "transform",
    "encode_one_hot",
    "encode_similarity",
    "encode_hashing",
    "encode_target",
    "encode_mdv",
    "encode_bag_of_ngrams",
    "encode_cluster_one_hot",
    "hash_index",
]

TASK_KINDS = ("regression", "binary-clf", "multiclass-clf")
ENCODER_KINDS = ("one_hot", "similarity", "hashing", "target", "mdv",
                 "bag_of_ngrams", "cluster_one_hot")


@dataclass(frozen=True)
class FeatureMatrix:
    """Dense encoded samples with one provenance label per column."""

    values: np.ndarray
    columns: tuple

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.shape[1] != len(self.columns):
            raise ValueError("columns must label every matrix column")

    @property
    def shape(self):
        return self.values.shape

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


@dataclass(frozen=True)
class CategoryDomain:
    """Distinct training categories in first-appearance order, with counts."""

    categories: tuple
    frequencies: tuple
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.categories) != len(self.frequencies):
            raise ValueError("one frequency per category is required")
        index = {c: i for i, c in enumerate(self.categories)}
        if len(index) != len(self.categories):
            raise ValueError("categories must be distinct")
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_column(cls, column) -> "CategoryDomain":
        counts: dict = {}
        for v in column:
            counts[v] = counts.get(v, 0) + 1
        return cls(tuple(counts), tuple(counts.values()))

    @property
    def k(self) -> int:
        return len(self.categories)

    def __len__(self):
        return len(self.categories)

    def __contains__(self, v):
        return v in self._index

    def index(self, v):
        """Position of ``v`` in the domain, or ``None`` if unseen."""
        return self._index.get(v)

    def lookup(self, values) -> np.ndarray:
        return np.fromiter((self._index.get(v, -1) for v in values), dtype=np.int64,
                           count=len(values))


_SPEC_RE = re.compile(r"(?P<kind>[a-z_]+?)(?P<num>\d+)?(?::(?P<arg>.+))?")


@dataclass(frozen=True)
class EncoderSpec:
    """What to fit: an encoder kind plus the parameters that kind uses.

    ``task`` is required by the supervised kinds (``target`` and ``mdv``).
    """

    kind: str
    measure: SimilarityMeasure | None = None
    dim: int = 256
    m_shrink: float = 1.0
    n: int = 3
    n_clusters: int = 0
    task: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ENCODER_KINDS:
            raise ConfigError(f"unknown encoder kind {self.kind!r}")
        if self.kind in ("similarity", "cluster_one_hot") and self.measure is None:
            raise ConfigError(f"{self.kind} encoder needs a similarity measure")
        if self.kind == "hashing" and self.dim < 1:
            raise ConfigError("hashing dimension must be >= 1")
        if self.kind == "target" and not self.m_shrink > 0:
            raise ConfigError("target shrinkage must be > 0")
        if self.kind == "bag_of_ngrams" and self.n < 1:
            raise ConfigError("n-gram size must be >= 1")
        if self.kind == "cluster_one_hot" and self.n_clusters < 1:
            raise ConfigError("cluster_one_hot needs n_clusters >= 1")
        if self.task is not None and self.task not in TASK_KINDS:
            raise ConfigError(f"unknown task kind {self.task!r}")

    @property
    def supervised(self) -> bool:
        return self.kind in ("target", "mdv")

    @classmethod
    def parse(cls, token: str, task: str | None = None, seed: int = 0) -> "EncoderSpec":
        """Parse a short method name.

        Accepted forms: ``one_hot``, ``hashing`` / ``hashing256``, ``target``,
        ``mdv``, ``bag_of_ngrams3`` / ``ngrams3``, ``similarity:<measure>``
        (alias ``sim:<measure>``), ``cluster_one_hot30:<measure>``.
        """
        token = token.strip().lower()
        m = _SPEC_RE.fullmatch(token)
        if not m:
            raise ConfigError(f"cannot parse encoder {token!r}")
        kind, num, arg = m.group("kind"), m.group("num"), m.group("arg")
        kind = {"onehot": "one_hot", "sim": "similarity", "hash": "hashing",
                "ngrams": "bag_of_ngrams", "bag_of_ngrams": "bag_of_ngrams",
                "cluster": "cluster_one_hot"}.get(kind, kind)
        kwargs: dict = {"task": task, "seed": seed}
        if kind in ("similarity", "cluster_one_hot"):
            kwargs["measure"] = SimilarityMeasure.parse(arg or "ngram3")
        elif arg is not None:
            raise ConfigError(f"encoder {kind} takes no measure argument")
        if num is not None:
            key = {"hashing": "dim", "bag_of_ngrams": "n",
                   "cluster_one_hot": "n_clusters"}.get(kind)
            if key is None:
                raise ConfigError(f"encoder {kind} takes no size suffix")
            kwargs[key] = int(num)
        return cls(kind, **kwargs)

    @property
    def name(self) -> str:
        if self.kind == "similarity":
            return f"similarity:{self.measure.name}"
        if self.kind == "hashing":
            return f"hashing{self.dim}"
        if self.kind == "bag_of_ngrams":
            return f"bag_of_ngrams{self.n}"
        if self.kind == "cluster_one_hot":
            return f"cluster_one_hot{self.n_clusters}:{self.measure.name}"
        return self.kind

    def to_dict(self) -> dict:
        return {"kind": self.kind,
                "measure": None if self.measure is None else self.measure.to_dict(),
                "dim": self.dim, "m_shrink": self.m_shrink, "n": self.n,
                "n_clusters": self.n_clusters, "task": self.task, "seed": self.seed}

    @classmethod
    def from_dict(cls, d: dict) -> "EncoderSpec":
        measure = None if d["measure"] is None else SimilarityMeasure.from_dict(d["measure"])
        return cls(d["kind"], measure=measure, dim=int(d["dim"]),
                   m_shrink=float(d["m_shrink"]), n=int(d["n"]),
                   n_clusters=int(d["n_clusters"]), task=d["task"], seed=int(d["seed"]))


@dataclass(frozen=True)
class TargetStats:
    """Target statistics per training category.

    ``conditional`` has one row per category: ``E[y | d]`` (regression),
    ``P(y = positive | d)`` (binary) or ``P(y = c | d)`` per class
    (multiclass). ``class_given`` holds ``P(d | y = c)`` for classification
    tasks and is ``None`` for regression.
    """

    task: str
    classes: tuple
    prior: np.ndarray
    conditional: np.ndarray
    counts: np.ndarray
    m_shrink: float
    class_given: np.ndarray | None = None

    def shrinkage(self, n) -> np.ndarray:
        n = np.asarray(n, dtype=np.float64)
        return n / (n + self.m_shrink)


@dataclass(frozen=True)
class Reduction:
    """Dimensionality reduction attached to a fitted encoder.

    ``projection`` regenerates its Gaussian matrix from ``seed``;
    ``most_frequent`` and ``kmeans`` restrict similarity encoding to
    ``prototypes``.
    """

    kind: str
    d: int
    seed: int = 0
    prototypes: tuple | None = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "d": self.d, "seed": self.seed,
                "prototypes": None if self.prototypes is None else list(self.prototypes)}

    @classmethod
    def from_dict(cls, d: dict) -> "Reduction":
        protos = None if d["prototypes"] is None else tuple(d["prototypes"])
        return cls(d["kind"], int(d["d"]), int(d["seed"]), protos)


@dataclass(frozen=True)
class FittedEncoder:
    spec: EncoderSpec
    domain: CategoryDomain
    output_dim: int
    target_stats: TargetStats | None = None
    vocabulary: tuple | None = None
    cluster_map: tuple | None = None
    reduction: Reduction | None = None

    def transform(self, values) -> FeatureMatrix:
        return transform(self, values)

    @property
    def base_dim(self) -> int:
        """Output dimension before any reduction."""
        if self.reduction is None:
            return self.output_dim
        return _base_dim(self)

    def feature_names(self) -> tuple:
        red = self.reduction
        if red is not None:
            if red.kind == "projection":
                return tuple(f"proj:{i}" for i in range(red.d))
            return tuple(f"sim:{p}" for p in red.prototypes)
        return _base_names(self)


# --------------------------------------------------------------------------
# single-value encoders

def encode_one_hot(domain: CategoryDomain, v: str) -> np.ndarray:
    """Indicator of ``v`` over the domain; all zeros for an unseen value."""
    out = np.zeros(domain.k)
    i = domain.index(v)
    if i is not None:
        out[i] = 1.0
    return out


def encode_similarity(domain: CategoryDomain, measure: SimilarityMeasure, v: str) -> np.ndarray:
    return np.array([measure(v, d) for d in domain.categories], dtype=np.float64)


def hash_index(v: str, dim: int) -> int:
    """MD5 digest of the UTF-8 string, read big-endian, modulo ``dim``."""
    digest = hashlib.md5(v.encode("utf-8")).digest()
    return int.from_bytes(digest, "big") % dim


def encode_hashing(v: str, dim: int = 256) -> np.ndarray:
    if dim < 1:
        raise ConfigError("hashing dimension must be >= 1")
    out = np.zeros(dim)
    out[hash_index(v, dim)] = 1.0
    return out


def encode_target(stats: TargetStats, domain: CategoryDomain, v: str) -> np.ndarray:
    """Shrunk target statistic of ``v``; the prior for unseen values."""
    i = domain.index(v)
    if i is None:
        return stats.prior.copy()
    lam = stats.shrinkage(stats.counts[i])
    return lam * stats.conditional[i] + (1.0 - lam) * stats.prior


def encode_mdv(stats: TargetStats, domain: CategoryDomain, v: str) -> np.ndarray:
    """``P(d = v | y = c)`` for every class ``c``; zeros for unseen values."""
    if stats.class_given is None:
        raise ConfigError("MDV requires classification")
    i = domain.index(v)
    if i is None:
        return np.zeros(len(stats.classes))
    return stats.class_given[i].copy()


def encode_bag_of_ngrams(vocabulary, n: int, v: str) -> np.ndarray:
    """Occurrence counts of each vocabulary gram in ``v``; other grams are dropped."""
    index = {g: j for j, g in enumerate(vocabulary)}
    out = np.zeros(len(vocabulary))
    for g, c in ngram_counts(v, n).items():
        j = index.get(g)
        if j is not None:
            out[j] = c
    return out


def encode_cluster_one_hot(domain: CategoryDomain, cluster_map, n_clusters: int,
                           measure: SimilarityMeasure, v: str) -> np.ndarray:
    """Indicator of the cluster of ``v``.

    Unseen values take the cluster of their most similar training category,
    ties going to the lowest category index.
    """
    i = domain.index(v)
    if i is None:
        sims = pairwise_similarity([v], domain.categories, measure)[0]
        i = int(np.argmax(sims))
    out = np.zeros(n_clusters)
    out[cluster_map[i]] = 1.0
    return out


# --------------------------------------------------------------------------
# fit

def _labels(target):
    y = np.asarray(target)
    if y.ndim != 1:
        raise DataError("target must be one-dimensional")
    return y


def _target_stats(spec: EncoderSpec, domain: CategoryDomain, column, target) -> TargetStats:
    task = spec.task
    if task is None:
        raise ConfigError(f"{spec.kind} encoding needs the task kind")
    if spec.kind == "mdv" and task == "regression":
        raise ConfigError("MDV requires classification")
    y = _labels(target)
    idx = domain.lookup(column)
    counts = np.asarray(domain.frequencies, dtype=np.float64)
    k = domain.k
    if task == "regression":
        y = y.astype(np.float64)
        sums = np.bincount(idx, weights=y, minlength=k)
        cond = (sums / counts)[:, None]
        prior = np.array([y.mean()])
        return TargetStats(task, (), prior, cond, counts, float(spec.m_shrink))
    classes, y_idx = np.unique(y, return_inverse=True)
    y_idx = y_idx.reshape(-1)
    joint = np.zeros((k, len(classes)))
    np.add.at(joint, (idx, y_idx), 1.0)
    class_totals = joint.sum(axis=0)
    class_given = joint / class_totals[None, :]
    cond = joint / counts[:, None]
    prior = class_totals / class_totals.sum()
    if task == "binary-clf":
        if len(classes) > 2:
            raise DataError(f"binary task has {len(classes)} classes")
        # a single observed class is its own positive column
        cond = cond[:, -1:]
        prior = prior[-1:]
    return TargetStats(task, tuple(classes.tolist()), prior, cond, counts,
                       float(spec.m_shrink), class_given)


def _ngram_vocabulary(column, n: int) -> tuple:
    vocab: dict = {}
    for v in column:
        for g in ngram_counts(v, n):
            vocab.setdefault(g, None)
    return tuple(vocab)


def fit(spec: EncoderSpec, column, target=None, cluster_map=None) -> FittedEncoder:
    """Fit ``spec`` on a training column.

    ``target`` must be given for the supervised kinds and must be omitted for
    the others. ``cluster_map`` (cluster id per domain category) may be
    passed for ``cluster_one_hot``; otherwise categories are clustered with
    k-means on their similarity encodings.

    >>> enc = fit(EncoderSpec("one_hot"), ["a", "b", "a"])
    >>> enc.output_dim
    2
    """
    column = list(column)
    if not column:
        raise DataError("cannot fit an encoder on an empty column")
    domain = CategoryDomain.from_column(column)
    if spec.supervised:
        if target is None:
            raise ConfigError(f"{spec.kind} encoding needs a target")
        if len(target) != len(column):
            raise DataError("target and column lengths differ")
    elif target is not None:
        raise ConfigError(f"{spec.kind} encoding does not take a target")

    if spec.kind in ("one_hot", "similarity"):
        return FittedEncoder(spec, domain, domain.k)
    if spec.kind == "hashing":
        return FittedEncoder(spec, domain, spec.dim)
    if spec.kind in ("target", "mdv"):
        stats = _target_stats(spec, domain, column, target)
        dim = stats.prior.shape[0] if spec.kind == "target" else len(stats.classes)
        return FittedEncoder(spec, domain, dim, target_stats=stats)
    if spec.kind == "bag_of_ngrams":
        vocab = _ngram_vocabulary(column, spec.n)
        return FittedEncoder(spec, domain, len(vocab), vocabulary=vocab)
    # cluster_one_hot
    if cluster_map is None:
        from .reduction import kmeans_cluster_map
        cluster_map = kmeans_cluster_map(domain, spec.measure, spec.n_clusters, spec.seed)
    cluster_map = tuple(int(c) for c in cluster_map)
    if len(cluster_map) != domain.k:
        raise DataError("cluster map must cover every domain category")
    if min(cluster_map) < 0 or max(cluster_map) >= spec.n_clusters:
        raise DataError("cluster ids must lie in [0, n_clusters)")
    return FittedEncoder(spec, domain, spec.n_clusters, cluster_map=cluster_map)


# --------------------------------------------------------------------------
# transform

def _base_dim(enc: FittedEncoder) -> int:
    spec = enc.spec
    if spec.kind in ("one_hot", "similarity"):
        return enc.domain.k
    if spec.kind == "hashing":
        return spec.dim
    if spec.kind == "target":
        return enc.target_stats.prior.shape[0]
    if spec.kind == "mdv":
        return len(enc.target_stats.classes)
    if spec.kind == "bag_of_ngrams":
        return len(enc.vocabulary)
    return spec.n_clusters


def _base_names(enc: FittedEncoder) -> tuple:
    spec = enc.spec
    if spec.kind == "one_hot":
        return tuple(f"onehot:{c}" for c in enc.domain.categories)
    if spec.kind == "similarity":
        return tuple(f"sim:{c}" for c in enc.domain.categories)
    if spec.kind == "hashing":
        return tuple(f"hash:{i}" for i in range(spec.dim))
    if spec.kind == "target":
        stats = enc.target_stats
        if stats.task == "multiclass-clf":
            return tuple(f"target:{c}" for c in stats.classes)
        return ("target",)
    if spec.kind == "mdv":
        return tuple(f"mdv:{c}" for c in enc.target_stats.classes)
    if spec.kind == "bag_of_ngrams":
        return tuple(f"ngram:{g}" for g in enc.vocabulary)
    return tuple(f"cluster:{i}" for i in range(spec.n_clusters))


def _encode_unique(enc: FittedEncoder, values: list) -> np.ndarray:
    spec = enc.spec
    domain = enc.domain
    n = len(values)
    red = enc.reduction
    if red is not None and red.kind in ("most_frequent", "kmeans"):
        return pairwise_similarity(values, red.prototypes, spec.measure)
    if spec.kind == "one_hot":
        out = np.zeros((n, domain.k))
        idx = domain.lookup(values)
        seen = np.flatnonzero(idx >= 0)
        out[seen, idx[seen]] = 1.0
    elif spec.kind == "similarity":
        out = pairwise_similarity(values, domain.categories, spec.measure)
    elif spec.kind == "hashing":
        out = np.zeros((n, spec.dim))
        out[np.arange(n), [hash_index(v, spec.dim) for v in values]] = 1.0
    elif spec.kind == "target":
        stats = enc.target_stats
        idx = domain.lookup(values)
        seen = idx >= 0
        counts = np.where(seen, stats.counts[np.maximum(idx, 0)], 0.0)
        lam = stats.shrinkage(counts)[:, None]
        cond = np.where(seen[:, None], stats.conditional[np.maximum(idx, 0)], 0.0)
        out = lam * cond + (1.0 - lam) * stats.prior[None, :]
    elif spec.kind == "mdv":
        stats = enc.target_stats
        idx = domain.lookup(values)
        out = np.zeros((n, len(stats.classes)))
        seen = np.flatnonzero(idx >= 0)
        out[seen] = stats.class_given[idx[seen]]
    elif spec.kind == "bag_of_ngrams":
        index = {g: j for j, g in enumerate(enc.vocabulary)}
        out = np.zeros((n, len(enc.vocabulary)))
        for i, v in enumerate(values):
            for g, c in ngram_counts(v, spec.n).items():
                j = index.get(g)
                if j is not None:
                    out[i, j] = c
    else:
        idx = domain.lookup(values)
        unseen = np.flatnonzero(idx < 0)
        if unseen.size:
            sims = pairwise_similarity([values[i] for i in unseen], domain.categories,
                                       spec.measure)
            idx[unseen] = np.argmax(sims, axis=1)
        out = np.zeros((n, spec.n_clusters))
        out[np.arange(n), np.asarray(enc.cluster_map, dtype=np.int64)[idx]] = 1.0
    if red is not None and red.kind == "projection":
        from .reduction import projection_matrix
        out = out @ projection_matrix(out.shape[1], red.d, red.seed)
    return out


def transform(enc: FittedEncoder, values) -> FeatureMatrix:
    """Encode every value; row ``i`` encodes ``values[i]``."""
    values = list(values)
    names = enc.feature_names()
    if not values:
        return FeatureMatrix(np.zeros((0, enc.output_dim)), names)
    uniq = list(dict.fromkeys(values))
    pos = {v: i for i, v in enumerate(uniq)}
    block = _encode_unique(enc, uniq)
    rows = np.fromiter((pos[v] for v in values), dtype=np.int64, count=len(values))
    return FeatureMatrix(block[rows], names)


def with_reduction(enc: FittedEncoder, reduction: Reduction) -> FittedEncoder:
    if reduction.kind in ("most_frequent", "kmeans") and enc.spec.kind != "similarity":
        raise ConfigError("prototype reductions apply to similarity encoders only")
    return replace(enc, reduction=reduction, output_dim=reduction.d)
