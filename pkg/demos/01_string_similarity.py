# %% [markdown]
# # Comparing dirty strings
#
# Three string similarities plus exact matching, all in [0, 1].
# A misspelling or an extra token barely moves them, which is what we want
# when categories are free-text entries typed by hand.

# %%
from dirty_encode import SimilarityMeasure, pairwise_similarity
from dirty_encode.text_similarity import (levenshtein_distance, ngrams, sim_jaro_winkler,
                                          sim_levenshtein_ratio, sim_ngram)

# %% [markdown]
# 3-grams of "Paris" and "Parisian": they share three of six grams.

# %%
print(sorted(ngrams("Paris", 3)))
print(sorted(ngrams("Parisian", 3)))
print("ngram3 similarity:", sim_ngram("Paris", "Parisian", 3))

# %% [markdown]
# Edit distance charges 1 per insertion or deletion and 2 per replacement.

# %%
print("distance kitten/sitting:", levenshtein_distance("kitten", "sitting"))
print("ratio:", sim_levenshtein_ratio("kitten", "sitting"))
print("jaro-winkler MARTHA/MARHTA:", round(sim_jaro_winkler("MARTHA", "MARHTA"), 4))

# %% [markdown]
# A small similarity matrix over employer names.

# %%
names = ["pfizer inc.", "pfizer", "pfizer incorporated", "merck & co", "merck"]
for measure in ("ngram3", "lev_ratio", "jaro_winkler"):
    m = SimilarityMeasure.parse(measure)
    print(f"\n{m.name}")
    S = pairwise_similarity(names, names, m)
    for name, row in zip(names, S):
        print(f"  {name:<22}" + " ".join(f"{v:5.2f}" for v in row))
