"""String similarity primitives.

All measures map a pair of strings into [0, 1], are symmetric, and give 1
on identical strings. Characters are Unicode code points; no case folding
or padding happens here.

The Levenshtein and Jaro kernels are compiled with numba and operate on
code-point arrays, so the scalar functions and :func:`pairwise_similarity`
run the exact same arithmetic and agree bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass
import re

import numpy as np
import numba
from scipy import sparse

from .errors import ConfigError, DataError

__all__ = [
    "EditWeights",
    "SimilarityMeasure",
    "Histogram",
    "ngrams",
    "ngram_counts",
    "levenshtein_distance",
    "sim_levenshtein_ratio",
    "jaro",
    "sim_jaro_winkler",
    "sim_ngram",
    "sim_exact",
    "pairwise_similarity",
    "implicit_kernel",
    "similarity_histogram",
]

JW_PREFIX_CAP = 4


@dataclass(frozen=True)
class EditWeights:
    """Costs of the three edit operations (replace counts double by default)."""

    insert: float = 1.0
    delete: float = 1.0
    replace: float = 2.0

    def __post_init__(self):
        if min(self.insert, self.delete, self.replace) < 0:
            raise ConfigError("edit weights must be non-negative")


DEFAULT_WEIGHTS = EditWeights()


def _codepoints(s: str) -> np.ndarray:
    return np.fromiter((ord(c) for c in s), dtype=np.int32, count=len(s))


# --------------------------------------------------------------------------
# compiled kernels

@numba.njit(cache=True)
def _lev_kernel(a, b, w_ins, w_del, w_rep):
    la = a.shape[0]
    lb = b.shape[0]
    prev = np.empty(lb + 1, dtype=np.float64)
    cur = np.empty(lb + 1, dtype=np.float64)
    for j in range(lb + 1):
        prev[j] = j * w_ins
    for i in range(1, la + 1):
        cur[0] = i * w_del
        ai = a[i - 1]
        for j in range(1, lb + 1):
            best = prev[j] + w_del
            alt = cur[j - 1] + w_ins
            if alt < best:
                best = alt
            if ai == b[j - 1]:
                alt = prev[j - 1]
            else:
                alt = prev[j - 1] + w_rep
            if alt < best:
                best = alt
            cur[j] = best
        prev, cur = cur, prev
    return prev[lb]


@numba.njit(cache=True)
def _lev_ratio_kernel(a, b):
    total = a.shape[0] + b.shape[0]
    if total == 0:
        return 1.0
    return 1.0 - _lev_kernel(a, b, 1.0, 1.0, 2.0) / total


@numba.njit(cache=True)
def _jaro_kernel(a, b):
    la = a.shape[0]
    lb = b.shape[0]
    if la == 0 and lb == 0:
        return 1.0
    if la == 0 or lb == 0:
        return 0.0
    window = max(la, lb) // 2 - 1
    if window < 0:
        window = 0
    a_match = np.zeros(la, dtype=np.bool_)
    b_match = np.zeros(lb, dtype=np.bool_)
    m = 0
    for i in range(la):
        lo = max(0, i - window)
        hi = min(lb, i + window + 1)
        for j in range(lo, hi):
            if not b_match[j] and a[i] == b[j]:
                a_match[i] = True
                b_match[j] = True
                m += 1
                break
    if m == 0:
        return 0.0
    half_t = 0
    k = 0
    for i in range(la):
        if a_match[i]:
            while not b_match[k]:
                k += 1
            if a[i] != b[k]:
                half_t += 1
            k += 1
    t = half_t / 2.0
    return (m / la + m / lb + (m - t) / m) / 3.0


@numba.njit(cache=True)
def _jaro_winkler_kernel(a, b, p):
    j = _jaro_kernel(a, b)
    n = min(a.shape[0], b.shape[0], 4)
    prefix = 0
    while prefix < n and a[prefix] == b[prefix]:
        prefix += 1
    return j + prefix * p * (1.0 - j)


@numba.njit(cache=True)
def _pairwise_kernel(r_chars, r_off, c_chars, c_off, kind, p):
    nr = r_off.shape[0] - 1
    nc = c_off.shape[0] - 1
    out = np.empty((nr, nc), dtype=np.float64)
    for i in range(nr):
        a = r_chars[r_off[i]:r_off[i + 1]]
        for j in range(nc):
            b = c_chars[c_off[j]:c_off[j + 1]]
            if kind == 0:
                out[i, j] = _lev_ratio_kernel(a, b)
            else:
                out[i, j] = _jaro_winkler_kernel(a, b, p)
    return out


def _pack(strings):
    lengths = np.fromiter((len(s) for s in strings), dtype=np.int64,
                          count=len(strings))
    offsets = np.zeros(len(strings) + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])
    chars = np.fromiter((ord(c) for s in strings for c in s), dtype=np.int32,
                        count=int(offsets[-1]))
    return chars, offsets


# --------------------------------------------------------------------------
# scalar measures

def ngrams(s: str, n: int) -> frozenset:
    """Set of contiguous character n-grams of ``s`` (empty if ``len(s) < n``).

    >>> sorted(ngrams("Paris", 3))
    ['Par', 'ari', 'ris']
    """
    if n < 1:
        raise ConfigError(f"n-gram size must be >= 1, got {n}")
    return frozenset(s[i:i + n] for i in range(len(s) - n + 1))


def ngram_counts(s: str, n: int) -> dict:
    """N-gram occurrence counts of ``s``, keys in first-appearance order."""
    if n < 1:
        raise ConfigError(f"n-gram size must be >= 1, got {n}")
    counts: dict = {}
    for i in range(len(s) - n + 1):
        g = s[i:i + n]
        counts[g] = counts.get(g, 0) + 1
    return counts


def levenshtein_distance(s1: str, s2: str,
                         weights: EditWeights = DEFAULT_WEIGHTS) -> float:
    """Minimal weighted edit cost turning ``s1`` into ``s2``."""
    return float(_lev_kernel(_codepoints(s1), _codepoints(s2),
                             float(weights.insert), float(weights.delete),
                             float(weights.replace)))


def sim_levenshtein_ratio(s1: str, s2: str) -> float:
    """``1 - d_lev / (|s1| + |s2|)`` with replace weighted 2; two empty strings give 1."""
    return float(_lev_ratio_kernel(_codepoints(s1), _codepoints(s2)))


def jaro(s1: str, s2: str) -> float:
    """Jaro similarity with the usual ``max(|s1|, |s2|) // 2 - 1`` match window."""
    return float(_jaro_kernel(_codepoints(s1), _codepoints(s2)))


def sim_jaro_winkler(s1: str, s2: str, p: float = 0.1) -> float:
    """Jaro similarity boosted by the common prefix (capped at 4 characters)."""
    if not 0.0 <= p <= 0.25:
        raise ConfigError(f"Jaro-Winkler scaling factor must lie in [0, 0.25], got {p}")
    return float(_jaro_winkler_kernel(_codepoints(s1), _codepoints(s2), float(p)))


def sim_ngram(s1: str, s2: str, n: int = 3) -> float:
    """Shared n-grams over the union of both n-gram sets.

    Strings too short to hold a single n-gram fall back to exact matching.
    """
    g1 = ngrams(s1, n)
    g2 = ngrams(s2, n)
    inter = len(g1 & g2)
    union = len(g1) + len(g2) - inter
    if union == 0:
        return 1.0 if s1 == s2 else 0.0
    return inter / union


def sim_exact(s1: str, s2: str) -> float:
    return 1.0 if s1 == s2 else 0.0


# --------------------------------------------------------------------------
# measure objects

_ALIASES = {
    "levenshtein_ratio": "levenshtein_ratio",
    "lev_ratio": "levenshtein_ratio",
    "levenshtein": "levenshtein_ratio",
    "jaro_winkler": "jaro_winkler",
    "jaro-winkler": "jaro_winkler",
    "jw": "jaro_winkler",
    "exact_match": "exact_match",
    "exact": "exact_match",
}


@dataclass(frozen=True)
class SimilarityMeasure:
    """A named string similarity with its parameters.

    ``kind`` is one of ``levenshtein_ratio``, ``jaro_winkler``, ``ngram`` or
    ``exact_match``; ``n`` applies to ``ngram`` and ``p`` to ``jaro_winkler``.
    Instances are callable on a pair of strings.
    """

    kind: str
    n: int = 3
    p: float = 0.1

    def __post_init__(self):
        if self.kind not in ("levenshtein_ratio", "jaro_winkler", "ngram", "exact_match"):
            raise ConfigError(f"unknown similarity measure {self.kind!r}")
        if self.kind == "ngram" and self.n < 1:
            raise ConfigError(f"n-gram size must be >= 1, got {self.n}")
        if self.kind == "jaro_winkler" and not 0.0 <= self.p <= 0.25:
            raise ConfigError(f"Jaro-Winkler scaling factor must lie in [0, 0.25], got {self.p}")

    @classmethod
    def parse(cls, name: str) -> "SimilarityMeasure":
        """Build a measure from a short name such as ``ngram3`` or ``lev_ratio``."""
        key = name.strip().lower()
        if key in _ALIASES:
            return cls(_ALIASES[key])
        m = re.fullmatch(r"(?:ngram|(\d+)-?gram)(\d*)", key)
        if m:
            digits = m.group(1) or m.group(2) or "3"
            return cls("ngram", n=int(digits))
        m = re.fullmatch(r"(?:jaro_winkler|jw)\(?([0-9.]+)\)?", key)
        if m:
            return cls("jaro_winkler", p=float(m.group(1)))
        raise ConfigError(f"unknown similarity measure {name!r}")

    @property
    def name(self) -> str:
        if self.kind == "ngram":
            return f"ngram{self.n}"
        if self.kind == "jaro_winkler" and self.p != 0.1:
            return f"jaro_winkler({self.p:g})"
        return {"levenshtein_ratio": "lev_ratio", "jaro_winkler": "jaro_winkler",
                "exact_match": "exact"}[self.kind]

    def __call__(self, s1: str, s2: str) -> float:
        if self.kind == "ngram":
            return sim_ngram(s1, s2, self.n)
        if self.kind == "levenshtein_ratio":
            return sim_levenshtein_ratio(s1, s2)
        if self.kind == "jaro_winkler":
            return sim_jaro_winkler(s1, s2, self.p)
        return sim_exact(s1, s2)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "n": self.n, "p": self.p}

    @classmethod
    def from_dict(cls, d: dict) -> "SimilarityMeasure":
        return cls(d["kind"], n=int(d["n"]), p=float(d["p"]))


# --------------------------------------------------------------------------
# matrices

def _ngram_indicator(strings, n, vocab, grow):
    indptr = [0]
    indices = []
    sizes = np.empty(len(strings), dtype=np.int64)
    for i, s in enumerate(strings):
        grams = ngrams(s, n)
        sizes[i] = len(grams)
        for g in grams:
            j = vocab.get(g)
            if j is None:
                if not grow:
                    continue
                j = vocab[g] = len(vocab)
            indices.append(j)
        indptr.append(len(indices))
    data = np.ones(len(indices), dtype=np.int64)
    return (data, np.asarray(indices, dtype=np.int64), np.asarray(indptr)), sizes


def _pairwise_ngram(rows, cols, n):
    vocab: dict = {}
    c_parts, c_sizes = _ngram_indicator(cols, n, vocab, grow=True)
    r_parts, r_sizes = _ngram_indicator(rows, n, vocab, grow=False)
    shape_c = (len(cols), max(len(vocab), 1))
    c_mat = sparse.csr_matrix(c_parts, shape=shape_c)
    r_mat = sparse.csr_matrix(r_parts, shape=(len(rows), shape_c[1]))
    inter = (r_mat @ c_mat.T).toarray()
    union = r_sizes[:, None] + c_sizes[None, :] - inter
    out = np.zeros(inter.shape, dtype=np.float64)
    nz = union > 0
    out[nz] = inter[nz] / union[nz]
    if not nz.all():
        # neither side has an n-gram: exact-match fallback
        col_index: dict = {}
        for j, c in enumerate(cols):
            col_index.setdefault(c, []).append(j)
        for i in np.flatnonzero(r_sizes == 0):
            for j in col_index.get(rows[i], ()):
                if c_sizes[j] == 0:
                    out[i, j] = 1.0
    return out


def _pairwise_unique(rows, cols, measure):
    if measure.kind == "ngram":
        return _pairwise_ngram(rows, cols, measure.n)
    if measure.kind == "exact_match":
        out = np.zeros((len(rows), len(cols)), dtype=np.float64)
        col_index: dict = {}
        for j, c in enumerate(cols):
            col_index.setdefault(c, []).append(j)
        for i, r in enumerate(rows):
            for j in col_index.get(r, ()):
                out[i, j] = 1.0
        return out
    r_chars, r_off = _pack(rows)
    c_chars, c_off = _pack(cols)
    kind = 0 if measure.kind == "levenshtein_ratio" else 1
    return _pairwise_kernel(r_chars, r_off, c_chars, c_off, kind, float(measure.p))


def pairwise_similarity(rows, cols, measure: SimilarityMeasure) -> np.ndarray:
    """Matrix of ``measure(rows[i], cols[j])`` with shape ``(len(rows), len(cols))``.

    Repeated row strings are computed once.
    """
    cols = list(cols)
    if not cols:
        raise DataError("pairwise_similarity needs at least one column string")
    rows = list(rows)
    if not rows:
        return np.zeros((0, len(cols)), dtype=np.float64)
    uniq, inverse = np.unique(np.asarray(rows, dtype=object), return_inverse=True)
    block = _pairwise_unique(list(uniq), cols, measure)
    return block[inverse.reshape(-1)]


def implicit_kernel(d_i: str, d_j: str, domain, measure: SimilarityMeasure) -> float:
    """Inner product of the similarity encodings of two strings over ``domain``.

    ``domain`` is a :class:`~dirty_encode.encoders.CategoryDomain` or any
    sequence of category strings.
    """
    categories = getattr(domain, "categories", domain)
    if len(categories) == 0:
        raise DataError("implicit kernel needs a non-empty domain")
    total = 0.0
    for d_l in categories:
        total += measure(d_i, d_l) * measure(d_j, d_l)
    return total


# --------------------------------------------------------------------------
# histogram of pairwise similarities

@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    median: float
    values: np.ndarray

    def to_tsv(self) -> str:
        lines = ["bin_left\tbin_right\tcount"]
        for left, right, c in zip(self.edges[:-1], self.edges[1:], self.counts):
            lines.append(f"{left:.6g}\t{right:.6g}\t{int(c)}")
        lines.append(f"median\t{self.median:.17g}")
        return "\n".join(lines) + "\n"


def similarity_histogram(categories, measure: SimilarityMeasure, n_pairs: int = 10_000,
                         seed: int = 0, bins: int = 20) -> Histogram:
    """Similarities of ``n_pairs`` random pairs of distinct categories.

    Pairs are drawn uniformly with replacement from the unordered pairs of
    distinct categories.
    """
    uniq = list(dict.fromkeys(categories))
    k = len(uniq)
    if k < 2:
        raise DataError("degenerate vocabulary: need at least 2 distinct categories")
    if n_pairs < 1:
        raise ConfigError("n_pairs must be >= 1")
    rng = np.random.default_rng(seed)
    first = rng.integers(0, k, size=n_pairs)
    second = rng.integers(0, k - 1, size=n_pairs)
    second = second + (second >= first)
    values = np.fromiter((measure(uniq[a], uniq[b]) for a, b in zip(first, second)),
                         dtype=np.float64, count=n_pairs)
    counts, edges = np.histogram(values, bins=bins, range=(0.0, 1.0))
    return Histogram(edges=edges, counts=counts, median=float(np.median(values)),
                     values=values)
