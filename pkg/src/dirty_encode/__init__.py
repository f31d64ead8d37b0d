"""Encoding dirty, high-cardinality categorical columns for supervised learning.

The core idea is similarity encoding: a string is encoded by its similarity
to every training category, which generalizes one-hot encoding and handles
typos and unseen categories gracefully.

>>> from dirty_encode import EncoderSpec, fit
>>> enc = fit(EncoderSpec.parse("similarity:ngram3"), ["paris", "parisian"])
>>> enc.transform(["paris"]).values.tolist()
[[1.0, 0.5]]
"""
from .encoders import (CategoryDomain, EncoderSpec, FeatureMatrix, FittedEncoder, fit,
                       transform)
from .errors import ConfigError, DataError, DirtyEncodeError
from .text_similarity import SimilarityMeasure, pairwise_similarity

__version__ = "0.1.0"

__all__ = [
    "CategoryDomain",
    "EncoderSpec",
    "FeatureMatrix",
    "FittedEncoder",
    "fit",
    "transform",
    "SimilarityMeasure",
    "pairwise_similarity",
    "ConfigError",
    "DataError",
    "DirtyEncodeError",
]
