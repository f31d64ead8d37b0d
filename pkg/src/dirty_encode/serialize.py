"""Versioned flat-file (JSON) state for encoders and learners.

Every file carries ``format`` and ``version`` keys. Keys are sorted and
floats are written with ``repr`` precision, so loading then dumping a file
reproduces it byte for byte.

Encoder file layout (version 1)::

    {
      "format": "dirty_encode/encoder", "version": 1,
      "spec": {kind, measure, dim, m_shrink, n, n_clusters, task, seed},
      "domain": {"categories": [...], "frequencies": [...]},
      "output_dim": int,
      "target_stats": null | {task, classes, prior, conditional, counts,
                              m_shrink, class_given},
      "vocabulary": null | [...],       # bag_of_ngrams
      "cluster_map": null | [...],      # cluster_one_hot, one id per category
      "reduction": null | {kind, d, seed, prototypes}
    }
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .encoders import CategoryDomain, EncoderSpec, FittedEncoder, Reduction, TargetStats
from .errors import DataError
from .learners import LogisticModel, RidgeModel

ENCODER_FORMAT = "dirty_encode/encoder"
MODEL_FORMAT = "dirty_encode/model"
VERSION = 1


def _stats_to_dict(stats: TargetStats | None):
    if stats is None:
        return None
    return {"task": stats.task, "classes": list(stats.classes),
            "prior": stats.prior.tolist(), "conditional": stats.conditional.tolist(),
            "counts": stats.counts.tolist(), "m_shrink": stats.m_shrink,
            "class_given": None if stats.class_given is None else stats.class_given.tolist()}


def _stats_from_dict(d):
    if d is None:
        return None
    cg = d["class_given"]
    return TargetStats(d["task"], tuple(d["classes"]), np.asarray(d["prior"], dtype=np.float64),
                       np.asarray(d["conditional"], dtype=np.float64).reshape(len(d["counts"]), -1),
                       np.asarray(d["counts"], dtype=np.float64), float(d["m_shrink"]),
                       None if cg is None else
                       np.asarray(cg, dtype=np.float64).reshape(len(d["counts"]), -1))


def encoder_to_dict(enc: FittedEncoder) -> dict:
    return {
        "format": ENCODER_FORMAT,
        "version": VERSION,
        "spec": enc.spec.to_dict(),
        "domain": {"categories": list(enc.domain.categories),
                   "frequencies": list(enc.domain.frequencies)},
        "output_dim": enc.output_dim,
        "target_stats": _stats_to_dict(enc.target_stats),
        "vocabulary": None if enc.vocabulary is None else list(enc.vocabulary),
        "cluster_map": None if enc.cluster_map is None else list(enc.cluster_map),
        "reduction": None if enc.reduction is None else enc.reduction.to_dict(),
    }


def _check_header(d, fmt):
    if not isinstance(d, dict) or d.get("format") != fmt:
        raise DataError(f"not a {fmt} file")
    if d.get("version") != VERSION:
        raise DataError(f"unsupported {fmt} version {d.get('version')!r}")


def encoder_from_dict(d: dict) -> FittedEncoder:
    _check_header(d, ENCODER_FORMAT)
    dom = d["domain"]
    return FittedEncoder(
        spec=EncoderSpec.from_dict(d["spec"]),
        domain=CategoryDomain(tuple(dom["categories"]), tuple(int(f) for f in dom["frequencies"])),
        output_dim=int(d["output_dim"]),
        target_stats=_stats_from_dict(d["target_stats"]),
        vocabulary=None if d["vocabulary"] is None else tuple(d["vocabulary"]),
        cluster_map=None if d["cluster_map"] is None else tuple(int(c) for c in d["cluster_map"]),
        reduction=None if d["reduction"] is None else Reduction.from_dict(d["reduction"]),
    )


def model_to_dict(model) -> dict:
    return {"format": MODEL_FORMAT, "version": VERSION, "model": model.to_dict()}


def model_from_dict(d: dict):
    _check_header(d, MODEL_FORMAT)
    body = d["model"]
    if body["kind"] == "ridge":
        return RidgeModel.from_dict(body)
    return LogisticModel.from_dict(body)


def dumps(state: dict) -> str:
    return json.dumps(state, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def dump_encoder(enc: FittedEncoder, path) -> None:
    Path(path).write_text(dumps(encoder_to_dict(enc)), encoding="utf-8")


def load_encoder(path) -> FittedEncoder:
    try:
        state = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read encoder file {path}: {exc}") from exc
    return encoder_from_dict(state)


def dump_model(model, path) -> None:
    Path(path).write_text(dumps(model_to_dict(model)), encoding="utf-8")


def load_model(path):
    try:
        state = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read model file {path}: {exc}") from exc
    return model_from_dict(state)
