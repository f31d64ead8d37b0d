# %% [markdown]
# # Shrinking high-cardinality encodings
#
# Similarity encoding has one column per training category. With many
# categories we keep only d columns, by random projection or by picking d
# prototype categories.

# %%
import numpy as np

from dirty_encode import EncoderSpec, fit, transform
from dirty_encode.pipeline import DirtyCorpusSpec, generate_dirty_corpus
from dirty_encode.reduction import fit_reduction, kmeans_prototypes, most_frequent_prototypes

table, truth = generate_dirty_corpus(DirtyCorpusSpec(n_entities=80, n_samples=1500, seed=1))
names = list(table["name"])
enc = fit(EncoderSpec.parse("similarity:ngram3"), names)
print("categories:", enc.domain.k, "from", len(set(truth.values())), "entities")

# %% [markdown]
# Prototypes: the most frequent categories, or the category nearest each
# k-means center in similarity space.

# %%
print("most frequent:", most_frequent_prototypes(enc.domain, 8).prototypes)
print("k-means:      ", kmeans_prototypes(enc.domain, enc.spec.measure, 8, seed=0).prototypes)

# %% [markdown]
# Each reduction returns an encoder with d output columns.

# %%
for kind in ("projection", "most_frequent", "kmeans", "dedup_merge"):
    red = fit_reduction(enc, kind, 20, seed=0)
    X = transform(red, names[:5]).values
    print(f"{kind:<14} shape {X.shape}  first columns {red.feature_names()[:2]}")

# %% [markdown]
# Dedup-merge one-hot encodes cluster membership, so spelling variants of an
# entity should mostly land in one cluster.

# %%
red = fit_reduction(enc, "dedup_merge", 80, seed=0)
clusters = {}
for cat, c in zip(enc.domain.categories, red.cluster_map):
    clusters.setdefault(truth[cat], set()).add(c)
print("entities kept in a single cluster:",
      np.mean([len(c) == 1 for c in clusters.values()]).round(3))
