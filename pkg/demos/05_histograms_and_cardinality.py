# %% [markdown]
# # How dirty is a column?
#
# Two diagnostics: the number of distinct values as rows accumulate, and
# the distribution of similarities between random pairs of categories.

# %%
from dirty_encode import SimilarityMeasure
from dirty_encode.pipeline import (DirtyCorpusSpec, cardinality_curve, generate_dirty_corpus,
                                   log_checkpoints)
from dirty_encode.text_similarity import similarity_histogram

names = list(generate_dirty_corpus(DirtyCorpusSpec(n_entities=200, n_samples=5000))[0]["name"])
clean = list(generate_dirty_corpus(DirtyCorpusSpec(n_entities=200, n_samples=5000,
                                                   corruption_prob=0.0))[0]["name"])

# %% [markdown]
# Clean data saturates at the number of entities; dirty data keeps growing.

# %%
for (n, dirty_k), (_, clean_k) in zip(cardinality_curve(names, log_checkpoints(5000, num=8)),
                                      cardinality_curve(clean, log_checkpoints(5000, num=8))):
    print(f"{n:>6} rows: {dirty_k:>5} dirty  {clean_k:>4} clean")

# %% [markdown]
# 3-gram similarity spreads random pairs closer to 0 than the Levenshtein
# ratio does, so it separates unrelated categories more sharply.

# %%
for measure in ("ngram3", "lev_ratio", "jaro_winkler"):
    h = similarity_histogram(names, SimilarityMeasure.parse(measure), n_pairs=10_000, seed=0)
    bars = "".join(" .:-=+*#%@"[min(9, int(10 * c / h.counts.max()))] for c in h.counts)
    print(f"{measure:<13} median {h.median:.3f}  |{bars}|")
