"""Benchmark pipeline: ingestion, splitting, feature assembly, scoring.

One designated dirty column is encoded with the method under test; other
categorical columns are one-hot encoded and numerical columns are passed
through. Every column is then scaled to unit variance using statistics of
the training rows only.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import dataclass, field
import io
import logging
import math
from pathlib import Path
import re

import numpy as np
from scipy.stats import rankdata

from .encoders import TASK_KINDS, EncoderSpec, FeatureMatrix, FittedEncoder, fit, transform
from .errors import ConfigError, DataError
from .learners import (DEFAULT_LAMBDA_GRID, DEFAULT_REG_GRID, logistic_fit,
                       logistic_predict, logistic_predict_proba, r2_score, ridge_fit,
                       ridge_predict)
from .reduction import DEFAULT_SUBSAMPLE, REDUCTION_KINDS, fit_reduction

log = logging.getLogger(__name__)

__all__ = [
    "Table",
    "TaskSpec",
    "Method",
    "BenchmarkConfig",
    "BenchmarkResult",
    "FeatureAssembler",
    "DirtyCorpusSpec",
    "DEFAULT_METHODS",
    "DEFAULT_D_GRID",
    "ingest_csv",
    "read_csv_table",
    "split",
    "split_tables",
    "fit_features",
    "assemble_features",
    "average_precision",
    "score",
    "rank_methods",
    "average_ranking",
    "run_benchmark",
    "generate_dirty_corpus",
    "cardinality_curve",
    "log_checkpoints",
]

DEFAULT_METHODS = ("one_hot", "hashing256", "target", "mdv", "bag_of_ngrams3",
                   "similarity:lev_ratio", "similarity:jaro_winkler", "similarity:ngram3")
DEFAULT_D_GRID = (30, 100, 300, None)


# --------------------------------------------------------------------------
# tables

@dataclass(frozen=True)
class Table:
    """Column-oriented table; every column is a 1-D numpy array."""

    columns: dict

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.columns.values()))) if self.columns else 0

    def __getitem__(self, name):
        return self.columns[name]

    def take(self, idx) -> "Table":
        return Table({k: v[idx] for k, v in self.columns.items()})

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        names = list(self.columns)
        writer.writerow(names)
        for i in range(self.n_rows):
            writer.writerow([_fmt(self.columns[c][i]) for c in names])
        return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


@dataclass(frozen=True)
class TaskSpec:
    """Column roles and prediction task of a dataset."""

    target: str
    dirty: str
    task: str
    categorical: tuple = ()
    numerical: tuple = ()
    input: str | None = None
    sample_cap: int | None = 100_000
    seed: int = 0
    name: str = "dataset"

    def __post_init__(self):
        if self.task not in TASK_KINDS:
            raise ConfigError(f"unknown task kind {self.task!r}; expected one of {TASK_KINDS}")
        roles = [self.target, self.dirty, *self.categorical, *self.numerical]
        if len(set(roles)) != len(roles):
            raise ConfigError("a column may take only one role")


def _missing(v) -> bool:
    return v is None or v.strip() == ""


def read_csv_table(path) -> tuple:
    """Header and raw string rows of a CSV file."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = [r for r in reader if r]
    except StopIteration:
        raise DataError(f"{path}: empty CSV file") from None
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    return header, rows


def ingest_csv(spec: TaskSpec, path=None) -> Table:
    """Load the columns named in ``spec``.

    Rows missing the target or any non-dirty explanatory value are dropped;
    missing dirty values become ``"nan"``; the dirty column is lower-cased.
    Tables larger than ``spec.sample_cap`` are subsampled with ``spec.seed``.
    """
    path = path or spec.input
    if path is None:
        raise ConfigError("no input CSV given")
    header, rows = read_csv_table(path)
    wanted = [spec.target, spec.dirty, *spec.categorical, *spec.numerical]
    missing = [c for c in wanted if c not in header]
    if missing:
        raise DataError(f"{path}: missing declared columns {missing}")
    pos = {c: header.index(c) for c in wanted}
    required = [spec.target, *spec.categorical, *spec.numerical]
    kept = []
    for r in rows:
        r = r + [""] * (len(header) - len(r))
        if any(_missing(r[pos[c]]) for c in required):
            continue
        kept.append(r)
    if not kept:
        raise DataError(f"{path}: no usable rows")
    cols: dict = {}
    dirty = [r[pos[spec.dirty]] for r in kept]
    cols[spec.dirty] = np.array(["nan" if _missing(v) else v.lower() for v in dirty],
                                dtype=object)
    for c in spec.categorical:
        cols[c] = np.array([r[pos[c]] for r in kept], dtype=object)
    for c in spec.numerical:
        cols[c] = _parse_floats([r[pos[c]] for r in kept], c)
    y = [r[pos[spec.target]] for r in kept]
    if spec.task == "regression":
        cols[spec.target] = _parse_floats(y, spec.target)
    else:
        cols[spec.target] = np.array([v.strip() for v in y], dtype=object)
        n_classes = len(set(cols[spec.target]))
        if spec.task == "binary-clf" and n_classes != 2:
            raise DataError(f"binary task but target has {n_classes} classes")
        if n_classes < 2:
            raise DataError("classification target has a single class")
    table = Table(cols)
    if spec.sample_cap is not None and table.n_rows > spec.sample_cap:
        rng = np.random.default_rng(spec.seed)
        idx = np.sort(rng.choice(table.n_rows, size=spec.sample_cap, replace=False))
        table = table.take(idx)
    return table


def _parse_floats(values, name) -> np.ndarray:
    try:
        return np.array([float(v) for v in values], dtype=np.float64)
    except ValueError as exc:
        raise DataError(f"column {name!r}: {exc}") from None


# --------------------------------------------------------------------------
# splitting

def _n_test(n, test_fraction):
    return min(n - 1, max(1, int(round(n * test_fraction))))


def split(n: int, test_fraction: float = 0.2, stratify=None, seed: int = 0):
    """Seeded train/test partition of ``range(n)`` as two sorted index arrays.

    With ``stratify`` labels each class contributes its share of the test
    set, within one sample.
    """
    if n < 2:
        raise DataError("need at least 2 samples to split")
    if not 0.0 < test_fraction < 1.0:
        raise ConfigError("test fraction must lie strictly between 0 and 1")
    rng = np.random.default_rng(seed)
    n_test = _n_test(n, test_fraction)
    if stratify is None:
        perm = rng.permutation(n)
        return np.sort(perm[n_test:]), np.sort(perm[:n_test])
    labels = np.asarray(stratify)
    if labels.shape[0] != n:
        raise DataError("stratification labels must have length n")
    classes, y_idx = np.unique(labels, return_inverse=True)
    y_idx = y_idx.reshape(-1)
    counts = np.bincount(y_idx)
    if counts.min() < 2:
        raise DataError("every class needs at least 2 members for a stratified split")
    exact = counts * n_test / n
    quota = np.floor(exact).astype(np.int64)
    order = np.lexsort((np.arange(len(counts)), -(exact - quota)))
    for c in order[: n_test - quota.sum()]:
        quota[c] += 1
    quota = np.clip(quota, 1, counts - 1)
    test = []
    for c in range(len(classes)):
        members = np.flatnonzero(y_idx == c)
        test.append(rng.permutation(members)[: quota[c]])
    test = np.sort(np.concatenate(test))
    mask = np.ones(n, dtype=bool)
    mask[test] = False
    return np.flatnonzero(mask), test


# --------------------------------------------------------------------------
# methods and features

_METHOD_RE = re.compile(r"(?P<enc>[^+]+)(?:\+(?P<red>[a-z_]+):?(?P<d>\d+|full)?)?")


@dataclass(frozen=True)
class Method:
    """An encoder for the dirty column plus an optional reduction to ``d`` columns."""

    encoder: str
    reduce: str = "none"
    d: int | None = None

    def __post_init__(self):
        if self.reduce not in REDUCTION_KINDS:
            raise ConfigError(f"unknown reduction {self.reduce!r}")
        if self.reduce != "none" and self.d is not None and self.d < 1:
            raise ConfigError("reduction dimension must be >= 1")
        EncoderSpec.parse(self.encoder)

    @classmethod
    def parse(cls, token: str) -> "Method":
        """``<encoder>[+<reduction><d>]``, e.g. ``similarity:ngram3+kmeans100``."""
        m = _METHOD_RE.fullmatch(token.strip().lower())
        if not m:
            raise ConfigError(f"cannot parse method {token!r}")
        red = m.group("red") or "none"
        d = m.group("d")
        d = None if d in (None, "full") else int(d)
        if red != "none" and d is None:
            red = "none"
        return cls(m.group("enc"), red, d)

    @property
    def name(self) -> str:
        base = EncoderSpec.parse(self.encoder).name
        if self.reduce == "none":
            return base
        return f"{base}+{self.reduce}{self.d}"

    def spec(self, task: str, seed: int) -> EncoderSpec:
        return EncoderSpec.parse(self.encoder, task=task, seed=seed)


@dataclass(frozen=True)
class FeatureAssembler:
    """Fitted state that turns table rows into a scaled feature matrix."""

    dirty_column: str
    dirty: FittedEncoder
    categorical: tuple
    others: tuple
    numerical: tuple
    scale: np.ndarray
    center: np.ndarray | None
    columns: tuple


def _fit_dirty_encoder(method: Method, task: str, column, target, seed: int,
                       subsample: int = DEFAULT_SUBSAMPLE) -> FittedEncoder:
    spec = method.spec(task, seed)
    enc = fit(spec, column, target if spec.supervised else None)
    if method.reduce != "none":
        enc = fit_reduction(enc, method.reduce, method.d, seed=seed, subsample=subsample)
    return enc


def _raw_features(table: Table, dirty: FittedEncoder, dirty_column, categorical, others,
                  numerical) -> np.ndarray:
    blocks = [transform(dirty, table[dirty_column]).values]
    for c, enc in zip(categorical, others):
        blocks.append(transform(enc, table[c]).values)
    for c in numerical:
        blocks.append(np.asarray(table[c], dtype=np.float64)[:, None])
    return np.hstack(blocks)


def fit_features(train: Table, task: TaskSpec, method: Method, seed: int = 0,
                 center: bool = False, subsample: int = DEFAULT_SUBSAMPLE) -> FeatureAssembler:
    """Fit all encoders and scaling factors on training rows only."""
    dirty = _fit_dirty_encoder(method, task.task, train[task.dirty], train[task.target],
                               seed, subsample)
    others = tuple(fit(EncoderSpec("one_hot"), train[c]) for c in task.categorical)
    raw = _raw_features(train, dirty, task.dirty, task.categorical, others, task.numerical)
    mean = raw.mean(axis=0)
    std = raw.std(axis=0)
    scale = np.where(std > 0, std, 1.0)
    names = [f"{task.dirty}={n}" for n in dirty.feature_names()]
    for c, enc in zip(task.categorical, others):
        names.extend(f"{c}={n}" for n in enc.feature_names())
    names.extend(task.numerical)
    return FeatureAssembler(task.dirty, dirty, tuple(task.categorical), others,
                            tuple(task.numerical), scale,
                            np.where(std > 0, mean, 0.0) if center else None, tuple(names))


def assemble_features(table: Table, assembler: FeatureAssembler) -> FeatureMatrix:
    """Encoded dirty column, one-hot categoricals and numericals, scaled."""
    a = assembler
    raw = _raw_features(table, a.dirty, a.dirty_column, a.categorical, a.others, a.numerical)
    if a.center is not None:
        raw = raw - a.center
    return FeatureMatrix(raw / a.scale, a.columns)


# --------------------------------------------------------------------------
# metrics

def average_precision(y_true, scores) -> float:
    """Step-wise average precision over the ranking by decreasing score.

    Tied scores keep their input order.
    """
    y = np.asarray(y_true).astype(bool)
    s = np.asarray(scores, dtype=np.float64)
    if y.size == 0:
        raise DataError("average precision of an empty ranking")
    n_pos = int(y.sum())
    if n_pos == 0:
        raise DataError("average precision needs at least one positive label")
    ranked = y[np.argsort(-s, kind="stable")]
    hits = np.cumsum(ranked)
    precision = hits / np.arange(1, y.size + 1)
    return float(np.sum(precision[ranked]) / n_pos)


def score(task: str, y_true, y_pred) -> float:
    """R^2 (regression), average precision (binary, ``y_pred`` = positive-class
    scores, ``y_true`` = 0/1 or booleans) or accuracy (multiclass)."""
    if len(y_true) == 0:
        raise DataError("cannot score empty predictions")
    if len(y_true) != len(y_pred):
        raise DataError("prediction and target lengths differ")
    if task == "regression":
        return r2_score(y_true, y_pred)
    if task == "binary-clf":
        return average_precision(y_true, y_pred)
    if task == "multiclass-clf":
        return float(np.mean(np.asarray(y_true, dtype=object) == np.asarray(y_pred, dtype=object)))
    raise ConfigError(f"unknown task kind {task!r}")


def rank_methods(medians: dict) -> dict:
    """Rank 1 for the highest median; tied medians share the mean rank."""
    names = list(medians)
    ranks = rankdata([-medians[m] for m in names], method="average")
    return {m: float(r) for m, r in zip(names, ranks)}


def average_ranking(per_dataset: dict) -> dict:
    """Mean rank of each method over datasets (``{dataset: {method: median}}``)."""
    totals: dict = {}
    for medians in per_dataset.values():
        for m, r in rank_methods(medians).items():
            totals.setdefault(m, []).append(r)
    return {m: float(np.mean(r)) for m, r in totals.items()}


# --------------------------------------------------------------------------
# benchmark

@dataclass(frozen=True)
class BenchmarkConfig:
    methods: tuple = tuple(Method.parse(m) for m in DEFAULT_METHODS)
    n_splits: int = 100
    test_fraction: float = 0.2
    learner: str = "auto"
    seed: int = 0
    center: bool = False
    lambda_grid: tuple = DEFAULT_LAMBDA_GRID
    reg_grid: tuple = DEFAULT_REG_GRID
    folds: int = 3
    class_weighting: str = "inverse_frequency"
    subsample: int = DEFAULT_SUBSAMPLE

    def __post_init__(self):
        if self.n_splits < 1:
            raise ConfigError("n_splits must be >= 1")
        if not 0.0 < self.test_fraction < 1.0:
            raise ConfigError("test fraction must lie strictly between 0 and 1")
        if self.learner not in ("auto", "ridge", "logistic"):
            raise ConfigError(f"unknown learner {self.learner!r}")
        if not self.methods:
            raise ConfigError("at least one method is required")
        names = [m.name for m in self.methods]
        if len(set(names)) != len(names):
            raise ConfigError("method names must be unique")


@dataclass(frozen=True)
class BenchmarkResult:
    """Scores per (method, split) with medians, means and ranks per method."""

    dataset: str
    learner: str
    methods: tuple
    scores: dict
    unseen_rate: tuple
    n_train: tuple
    n_test: tuple
    medians: dict = field(init=False)
    means: dict = field(init=False)
    ranks: dict = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "medians",
                           {m: float(np.median(self.scores[m])) for m in self.methods})
        object.__setattr__(self, "means",
                           {m: float(np.mean(self.scores[m])) for m in self.methods})
        object.__setattr__(self, "ranks", rank_methods(self.medians))

    def results_csv(self) -> str:
        lines = ["method,split,score"]
        for m in self.methods:
            lines.extend(f"{_q(m)},{i},{s!r}" for i, s in enumerate(self.scores[m]))
        return "\n".join(lines) + "\n"

    def summary_csv(self) -> str:
        lines = ["method,median,mean,average_rank"]
        for m in self.methods:
            lines.append(f"{_q(m)},{self.medians[m]!r},{self.means[m]!r},{self.ranks[m]!r}")
        return "\n".join(lines) + "\n"

    def splits_csv(self) -> str:
        lines = ["split,n_train,n_test,unseen_rate"]
        for i, (a, b, u) in enumerate(zip(self.n_train, self.n_test, self.unseen_rate)):
            lines.append(f"{i},{a},{b},{u!r}")
        return "\n".join(lines) + "\n"

    def plot_csv(self) -> str:
        """Long format, one box-plot sample per line."""
        lines = ["dataset,learner,method,split,score,average_rank"]
        for m in self.methods:
            for i, s in enumerate(self.scores[m]):
                lines.append(f"{_q(self.dataset)},{self.learner},{_q(m)},{i},{s!r},"
                             f"{self.ranks[m]!r}")
        return "\n".join(lines) + "\n"


def _q(s: str) -> str:
    if any(c in s for c in ',"\n'):
        return '"' + s.replace('"', '""') + '"'
    return s


def _resolve_learner(cfg: BenchmarkConfig, task: str) -> str:
    if cfg.learner != "auto":
        if cfg.learner == "ridge" and task != "regression":
            raise ConfigError("ridge learner needs a regression task")
        if cfg.learner == "logistic" and task == "regression":
            raise ConfigError("logistic learner needs a classification task")
        return cfg.learner
    return "ridge" if task == "regression" else "logistic"


def _split_seed(seed: int, i: int) -> int:
    return int(np.random.SeedSequence([seed, i]).generate_state(1)[0])


def _fit_predict(learner, X_train, y_train, X_test, cfg, seed, task):
    if learner == "ridge":
        model = ridge_fit(X_train, y_train, cfg.lambda_grid, cfg.folds, seed)
        return ridge_predict(model, X_test)
    model = logistic_fit(X_train, y_train, cfg.reg_grid, cfg.folds,
                         cfg.class_weighting, seed)
    if task == "binary-clf":
        return logistic_predict_proba(model, X_test)[:, -1]
    return logistic_predict(model, X_test)


def _binary_truth(y, classes):
    return np.asarray(y, dtype=object) == classes[-1]


def split_tables(table: Table, task: TaskSpec, cfg: BenchmarkConfig, i: int):
    """Train and test tables of split ``i``, plus the split's seed.

    Only binary tasks are stratified (on the target).
    """
    seed = _split_seed(cfg.seed, i)
    strat = table[task.target] if task.task == "binary-clf" else None
    train_idx, test_idx = split(table.n_rows, cfg.test_fraction, strat, seed)
    return table.take(train_idx), table.take(test_idx), seed


def _run_split(args):
    table, task, cfg, i = args
    train, test, seed = split_tables(table, task, cfg, i)
    y = table[task.target]
    seen = set(train[task.dirty].tolist())
    unseen = float(np.mean([v not in seen for v in test[task.dirty]]))
    learner = _resolve_learner(cfg, task.task)
    classes = sorted(set(y.tolist())) if task.task != "regression" else None
    out = []
    for method in cfg.methods:
        try:
            asm = fit_features(train, task, method, seed=seed % (2 ** 31), center=cfg.center,
                               subsample=cfg.subsample)
            X_train = assemble_features(train, asm).values
            X_test = assemble_features(test, asm).values
            pred = _fit_predict(learner, X_train, train[task.target], X_test, cfg, seed, task.task)
            y_test = test[task.target]
            if task.task == "binary-clf":
                y_test = _binary_truth(y_test, classes)
            s = score(task.task, y_test, pred)
        except (ConfigError, DataError) as exc:
            raise type(exc)(f"method {method.name}, split {i}: {exc}") from exc
        if not math.isfinite(s):
            raise DataError(f"method {method.name}, split {i}: non-finite score {s}")
        out.append(s)
    return out, unseen, train.n_rows, test.n_rows


def run_benchmark(table: Table, task: TaskSpec, cfg: BenchmarkConfig, jobs: int = 1) -> BenchmarkResult:
    """Score every method on ``cfg.n_splits`` seeded random splits.

    Each (split, method) cell depends only on its seeds, so the result does
    not depend on ``jobs``.
    """
    learner = _resolve_learner(cfg, task.task)
    log.info("benchmark %s: %d rows, %d methods, %d splits, learner=%s, seed=%d",
             task.name, table.n_rows, len(cfg.methods), cfg.n_splits, learner, cfg.seed)
    work = [(table, task, cfg, i) for i in range(cfg.n_splits)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(_run_split, work))
    else:
        cells = [_run_split(w) for w in work]
    names = tuple(m.name for m in cfg.methods)
    scores = {m: tuple(c[0][j] for c in cells) for j, m in enumerate(names)}
    return BenchmarkResult(task.name, learner, names, scores,
                           tuple(c[1] for c in cells), tuple(c[2] for c in cells),
                           tuple(c[3] for c in cells))


# --------------------------------------------------------------------------
# synthetic dirty data

CORRUPTIONS = ("typo", "abbreviation", "extraneous_token", "special_characters",
               "concatenated_hierarchy")
_TITLES = ("inc", "llc", "ltd", "corp", "co", "group", "intl", "dr", "mr", "dept")
_PUNCT = "-.,/&()'#"
_CONSONANTS = "bcdfghjklmnprstvwz"
_VOWELS = "aeiou"
_LETTERS = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class DirtyCorpusSpec:
    n_entities: int = 200
    n_samples: int = 5000
    corruption_mix: dict = field(default_factory=lambda: {k: 0.2 for k in CORRUPTIONS})
    corruption_prob: float = 0.3
    seed: int = 0
    task: str = "regression"
    n_classes: int = 2
    noise: float = 0.5
    label_noise: float = 0.1
    zipf: float = 0.5
    word_share: float = 0.8

    def __post_init__(self):
        if self.n_entities < 1 or self.n_samples < 1:
            raise ConfigError("n_entities and n_samples must be >= 1")
        unknown = set(self.corruption_mix) - set(CORRUPTIONS)
        if unknown:
            raise ConfigError(f"unknown corruption kinds {sorted(unknown)}")
        if any(w < 0 for w in self.corruption_mix.values()):
            raise ConfigError("corruption weights must be non-negative")
        if not math.isclose(sum(self.corruption_mix.values()), 1.0, abs_tol=1e-9):
            raise ConfigError("corruption mix must sum to 1")
        if not 0.0 <= self.corruption_prob < 1.0:
            raise ConfigError("corruption probability must lie in [0, 1)")
        if self.task not in TASK_KINDS:
            raise ConfigError(f"unknown task kind {self.task!r}")
        if not 0.0 <= self.word_share <= 1.0:
            raise ConfigError("word_share must lie in [0, 1]")
        if self.task != "regression" and self.n_classes < 2:
            raise ConfigError("classification corpora need n_classes >= 2")


def _word(rng, syllables):
    return "".join(_CONSONANTS[rng.integers(len(_CONSONANTS))] + _VOWELS[rng.integers(len(_VOWELS))]
                   for _ in range(syllables))


def _vocabulary(rng, n):
    words: list = []
    seen: set = set()
    while len(words) < n:
        w = _word(rng, int(rng.integers(2, 4)))
        if w not in seen:
            seen.add(w)
            words.append(w)
    return words


def _entity_names(rng, n, vocab):
    """Distinct names of 1 to 3 words; returns names and their word indices."""
    names: list = []
    tokens: list = []
    seen: set = set()
    while len(names) < n:
        idx = rng.choice(len(vocab), size=int(rng.integers(1, 4)), replace=False)
        name = " ".join(vocab[i] for i in idx)
        if name not in seen:
            seen.add(name)
            names.append(name)
            tokens.append(idx)
    return names, tokens


def _corrupt(s, kind, rng, region):
    if kind == "typo":
        i = int(rng.integers(len(s)))
        op = int(rng.integers(4))
        c = _LETTERS[rng.integers(26)]
        if op == 0 and len(s) > 1:
            i = min(i, len(s) - 2)
            return s[:i] + s[i + 1] + s[i] + s[i + 2:]
        if op == 1:
            return s[:i] + c + s[i + 1:]
        if op == 2 and len(s) > 1:
            return s[:i] + s[i + 1:]
        return s[:i] + c + s[i:]
    if kind == "abbreviation":
        tokens = s.split(" ")
        long = [j for j, t in enumerate(tokens) if len(t) >= 4 and not t.endswith(".")]
        if not long:
            return s
        j = long[int(rng.integers(len(long)))]
        tokens[j] = tokens[j][: int(rng.integers(1, 4))] + "."
        return " ".join(tokens)
    if kind == "extraneous_token":
        t = _TITLES[rng.integers(len(_TITLES))]
        return f"{s} {t}" if rng.random() < 0.7 else f"{t} {s}"
    if kind == "special_characters":
        ch = _PUNCT[rng.integers(len(_PUNCT))]
        if " " in s and rng.random() < 0.5:
            return s.replace(" ", ch, 1)
        i = int(rng.integers(len(s) + 1))
        return s[:i] + ch + s[i:]
    sep = (" - ", "/", " > ", "-")[rng.integers(4)]
    return f"{region}{sep}{s}"


def generate_dirty_corpus(spec: DirtyCorpusSpec):
    """Seeded table of dirty entity names with an entity-driven target.

    Entity names are built from a shared word vocabulary, and a
    ``word_share`` fraction of each entity's effect (or class logits) is the
    sum of per-word effects, so entities sharing words behave alike.

    Returns ``(table, truth)`` where ``truth`` maps every observed string to
    its entity id. The table has columns ``name`` (dirty), ``amount``
    (numerical), ``entity`` and ``target``.
    """
    rng = np.random.default_rng(spec.seed)
    vocab = _vocabulary(rng, max(8, spec.n_entities // 3))
    names, tokens = _entity_names(rng, spec.n_entities, vocab)
    regions = _vocabulary(rng, max(3, spec.n_entities // 20))
    region_of = rng.integers(len(regions), size=spec.n_entities)
    weights = 1.0 / np.arange(1, spec.n_entities + 1) ** spec.zipf
    weights /= weights.sum()
    entity = rng.choice(spec.n_entities, size=spec.n_samples, p=weights)
    kinds = [k for k in CORRUPTIONS if spec.corruption_mix.get(k, 0.0) > 0]
    probs = np.array([spec.corruption_mix[k] for k in kinds])
    truth = {n: i for i, n in enumerate(names)}
    dirty = []
    for e in entity:
        s = names[e]
        while kinds and rng.random() < spec.corruption_prob:
            candidate = _corrupt(s, kinds[rng.choice(len(kinds), p=probs)], rng,
                                 regions[region_of[e]])
            if truth.setdefault(candidate, int(e)) == e and candidate.strip():
                s = candidate
        dirty.append(s)
    amount = rng.normal(size=spec.n_samples)
    if spec.task == "regression":
        word_effect = rng.normal(size=len(vocab))
        shared = np.array([word_effect[t].sum() / np.sqrt(len(t)) for t in tokens])
        effect = (np.sqrt(spec.word_share) * shared
                  + np.sqrt(1.0 - spec.word_share) * rng.normal(size=spec.n_entities))
        y = effect[entity] + 0.5 * amount + spec.noise * rng.normal(size=spec.n_samples)
    else:
        k = 2 if spec.task == "binary-clf" else spec.n_classes
        word_score = rng.normal(size=(len(vocab), k))
        logits = np.array([word_score[t].sum(axis=0) for t in tokens])
        logits = (np.sqrt(spec.word_share) * logits
                  + np.sqrt(1.0 - spec.word_share) * rng.normal(size=logits.shape))
        label = np.argmax(logits, axis=1)[entity]
        flip = rng.random(spec.n_samples) < spec.label_noise
        label = np.where(flip, rng.integers(k, size=spec.n_samples), label)
        y = np.array([f"c{c}" for c in label], dtype=object)
    used = set(dirty)
    truth = {s: e for s, e in truth.items() if s in used}
    table = Table({"name": np.array(dirty, dtype=object), "amount": amount,
                   "entity": entity.astype(np.int64), "target": y})
    return table, truth


def cardinality_curve(column, checkpoints, seed: int | None = 0) -> list:
    """Distinct values among the first ``n`` entries of the shuffled column."""
    column = list(column)
    checkpoints = [int(c) for c in checkpoints]
    if any(b < a for a, b in zip(checkpoints, checkpoints[1:])):
        raise ConfigError("checkpoints must be sorted ascending")
    if checkpoints and checkpoints[-1] > len(column):
        raise DataError(f"checkpoint {checkpoints[-1]} exceeds column length {len(column)}")
    if seed is not None:
        order = np.random.default_rng(seed).permutation(len(column))
        column = [column[i] for i in order]
    out = []
    seen: set = set()
    pos = 0
    for c in checkpoints:
        seen.update(column[pos:c])
        pos = max(pos, c)
        out.append((c, len(seen)))
    return out


def log_checkpoints(n: int, num: int = 20, start: int = 10) -> list:
    """Log-spaced sample counts from ``start`` up to ``n`` (inclusive)."""
    if n < 1:
        raise DataError("empty column")
    start = min(start, n)
    pts = np.unique(np.round(np.geomspace(start, n, num)).astype(np.int64))
    return [int(p) for p in pts]
