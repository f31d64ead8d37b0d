# %% [markdown]
# # Encoding a categorical column
#
# Every encoder is fitted on a training column and then applied to any
# strings, including ones it has never seen.

# %%
import numpy as np

from dirty_encode import EncoderSpec, fit, transform

train = ["london", "paris", "paris", "berlin", "parisian"]
y = np.array([3.0, 5.0, 4.0, 1.0, 6.0])
probe = ["paris", "pariss", "madrid"]

# %% [markdown]
# One-hot gives unseen values the zero vector. Similarity encoding still
# places "pariss" close to "paris".

# %%
for token in ("one_hot", "similarity:ngram3", "similarity:jaro_winkler"):
    enc = fit(EncoderSpec.parse(token), train)
    fm = transform(enc, probe)
    print(token, fm.columns)
    print(np.round(fm.values, 3))

# %% [markdown]
# Target encoding shrinks each category mean toward the global mean;
# an unseen category gets the global mean itself.

# %%
enc = fit(EncoderSpec.parse("target", task="regression"), train, y)
print(dict(zip(probe, transform(enc, probe).values[:, 0].round(3).tolist())))

# %% [markdown]
# Hashing needs no fit-time state and bag of n-grams counts grams with
# multiplicity.

# %%
enc = fit(EncoderSpec.parse("hashing256"), train)
print("hash bucket of 'paris':", int(np.argmax(transform(enc, ["paris"]).values)))
enc = fit(EncoderSpec.parse("bag_of_ngrams3"), train)
row = transform(enc, ["parpar"]).values[0]
print({g: int(c) for g, c in zip(enc.vocabulary, row) if c})

# %% [markdown]
# With exact matching as the similarity, similarity encoding is one-hot.

# %%
a = transform(fit(EncoderSpec.parse("one_hot"), train), probe).values
b = transform(fit(EncoderSpec.parse("similarity:exact"), train), probe).values
print("identical:", np.array_equal(a, b))
