"""Command-line interface: ``dirty-encode <subcommand> [flags]``.

Subcommands: ``encode``, ``benchmark``, ``histogram``, ``cardinality``,
``generate-dirty`` and ``inspect``. Flags override values from the INI
config file given with ``--config``. The seed resolves from ``--seed``, then
the config file, then the ``DIRTY_ENCODE_SEED`` environment variable, then 0.

Exit codes: 0 success, 2 configuration error, 3 data error.
"""
from __future__ import annotations

import argparse
import configparser
import json
import logging
import os
from pathlib import Path
import sys

import numpy as np

from . import serialize
from .encoders import EncoderSpec, fit, transform
from .errors import ConfigError, DataError, DirtyEncodeError
from .pipeline import (CORRUPTIONS, DEFAULT_D_GRID, DEFAULT_METHODS, BenchmarkConfig,
                       DirtyCorpusSpec, Method, TaskSpec, cardinality_curve,
                       generate_dirty_corpus, ingest_csv, log_checkpoints, read_csv_table,
                       run_benchmark, score)
from .reduction import REDUCTION_KINDS, fit_reduction
from .text_similarity import SimilarityMeasure, similarity_histogram

log = logging.getLogger("dirty_encode")

SEED_ENV = "DIRTY_ENCODE_SEED"


def _split_list(value) -> list:
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        out = []
        for v in value:
            out.extend(_split_list(v))
        return out
    return [v.strip() for v in str(value).split(",") if v.strip()]


class Settings:
    """Flag values layered over a config file."""

    def __init__(self, args, sections):
        self.args = args
        self.cfg = configparser.ConfigParser()
        if getattr(args, "config", None):
            try:
                with open(args.config, encoding="utf-8") as fh:
                    self.cfg.read_file(fh)
            except (OSError, configparser.Error) as exc:
                raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        self.sections = sections

    def get(self, name, default=None):
        flag = getattr(self.args, name, None)
        if flag not in (None, []):
            return flag
        for section in self.sections:
            if self.cfg.has_option(section, name):
                return self.cfg.get(section, name)
        return default

    def get_int(self, name, default=None):
        v = self.get(name, default)
        if v is None:
            return None
        try:
            return int(v)
        except (TypeError, ValueError):
            raise ConfigError(f"{name} must be an integer, got {v!r}") from None

    def get_float(self, name, default=None):
        v = self.get(name, default)
        try:
            return float(v)
        except (TypeError, ValueError):
            raise ConfigError(f"{name} must be a number, got {v!r}") from None

    def get_bool(self, name, default=False):
        v = self.get(name, default)
        if isinstance(v, bool):
            return v
        if str(v).lower() in ("1", "true", "yes", "on"):
            return True
        if str(v).lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{name} must be a boolean, got {v!r}")

    def seed(self) -> int:
        v = self.get("seed")
        if v is None:
            v = os.environ.get(SEED_ENV, 0)
        try:
            return int(v)
        except ValueError:
            raise ConfigError(f"seed must be an integer, got {v!r}") from None

    def require(self, name):
        v = self.get(name)
        if v is None:
            raise ConfigError(f"missing required setting --{name.replace('_', '-')}")
        return v


def _out_dir(settings) -> Path:
    out = Path(settings.get("out_dir", "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8")
    log.info("wrote %s", path)


def _fmt_row(values) -> str:
    return ",".join(repr(float(v)) for v in values)


def _csv_header(names) -> str:
    out = []
    for n in names:
        out.append('"' + n.replace('"', '""') + '"' if any(c in n for c in ',"\n') else n)
    return ",".join(out)


def _read_column(path, column) -> list:
    header, rows = read_csv_table(path)
    if column not in header:
        raise DataError(f"{path}: missing column {column!r}")
    j = header.index(column)
    out = []
    for r in rows:
        v = r[j] if j < len(r) else ""
        out.append("nan" if not v.strip() else v.lower())
    return out


# --------------------------------------------------------------------------
# subcommands

def _encoder_token(settings) -> str:
    method = settings.get("method", "similarity")
    if isinstance(method, list):
        if len(method) != 1:
            raise ConfigError("encode takes a single --method")
        method = method[0]
    measure = settings.get("measure")
    if measure is not None and ":" not in method:
        method = f"{method}:{measure}"
    return method


def cmd_encode(args) -> int:
    s = Settings(args, ["encode", "data"])
    seed = s.seed()
    column_name = s.get("column") or s.get("dirty")
    if column_name is None:
        raise ConfigError("missing required setting --column")
    column = _read_column(s.require("input"), column_name)
    out = _out_dir(s)
    if s.get("encoder"):
        enc = serialize.load_encoder(s.get("encoder"))
    else:
        task = s.get("task")
        spec = EncoderSpec.parse(_encoder_token(s), task=task, seed=seed)
        target = None
        if spec.supervised:
            target_name = s.require("target")
            ts = TaskSpec(target=target_name, dirty=column_name, task=task or "regression",
                          input=s.get("input"), sample_cap=None)
            table = ingest_csv(ts)
            column = list(table[column_name])
            target = table[target_name]
        enc = fit(spec, column, target)
        reduce = s.get("reduce", "none")
        if reduce != "none":
            d = s.get("d")
            d = _split_list(d)
            if len(d) != 1:
                raise ConfigError("encode needs a single --d with --reduce")
            enc = fit_reduction(enc, reduce, int(d[0]), seed=seed)
        log.info("encode: method=%s reduce=%s seed=%d", enc.spec.name, reduce, seed)
    fm = transform(enc, column)
    lines = [_csv_header(fm.columns)]
    lines.extend(_fmt_row(row) for row in fm.values)
    _write(out / "features.csv", "\n".join(lines) + "\n")
    _write(out / "encoder.json", serialize.dumps(serialize.encoder_to_dict(enc)))
    return 0


def _methods(s) -> tuple:
    tokens = _split_list(s.get("method")) or _split_list(s.get("methods")) or list(DEFAULT_METHODS)
    measure = s.get("measure")
    if measure is not None:
        tokens = [f"{t}:{measure}" if t in ("similarity", "sim") else t for t in tokens]
    base = [Method.parse(t) for t in tokens]
    reduce = s.get("reduce", "none")
    if reduce not in REDUCTION_KINDS:
        raise ConfigError(f"unknown reduction {reduce!r}")
    if reduce == "none":
        return tuple(base)
    grid = _split_list(s.get("d")) or ["full" if d is None else str(d) for d in DEFAULT_D_GRID]
    methods = []
    for m in base:
        if m.reduce != "none":
            methods.append(m)
            continue
        is_sim = EncoderSpec.parse(m.encoder).kind == "similarity"
        if reduce != "projection" and not is_sim:
            methods.append(m)
            continue
        for d in grid:
            methods.append(m if d == "full" else Method(m.encoder, reduce, int(d)))
    return tuple(methods)


def _task_spec(s, seed) -> TaskSpec:
    cap = s.get("sample_cap", "100000")
    return TaskSpec(
        target=s.require("target"),
        dirty=s.get("column") or s.require("dirty"),
        task=s.require("task"),
        categorical=tuple(_split_list(s.get("categorical"))),
        numerical=tuple(_split_list(s.get("numerical"))),
        input=s.require("input"),
        sample_cap=None if str(cap).lower() in ("none", "") else int(cap),
        seed=seed,
        name=s.get("name") or Path(s.require("input")).stem,
    )


def _resolved_config(task: TaskSpec, cfg: BenchmarkConfig, jobs: int) -> str:
    cp = configparser.ConfigParser()
    cp["data"] = {"input": task.input, "name": task.name, "target": task.target,
                  "dirty": task.dirty, "task": task.task,
                  "categorical": ", ".join(task.categorical),
                  "numerical": ", ".join(task.numerical),
                  "sample_cap": str(task.sample_cap)}
    cp["benchmark"] = {"methods": ", ".join(m.name if m.reduce == "none" else
                                            f"{m.encoder}+{m.reduce}{m.d}" for m in cfg.methods),
                       "splits": str(cfg.n_splits), "test_frac": repr(cfg.test_fraction),
                       "seed": str(cfg.seed), "learner": cfg.learner,
                       "center": str(cfg.center).lower(), "jobs": str(jobs)}
    lines = []
    for section in cp.sections():
        lines.append(f"[{section}]")
        lines.extend(f"{k} = {v}" for k, v in cp[section].items())
        lines.append("")
    return "\n".join(lines)


def _score_external(path, table, task: TaskSpec) -> float:
    header, rows = read_csv_table(path)
    if header[:2] != ["row_id", "prediction"]:
        raise DataError(f"{path}: expected header row_id,prediction")
    try:
        ids = np.array([int(r[0]) for r in rows])
    except (ValueError, IndexError) as exc:
        raise DataError(f"{path}: bad row id: {exc}") from None
    if ids.size == 0 or ids.min() < 0 or ids.max() >= table.n_rows:
        raise DataError(f"{path}: row ids out of range")
    y = table[task.target][ids]
    preds = [r[1] for r in rows]
    if task.task == "multiclass-clf":
        return score(task.task, y, preds)
    try:
        preds = np.array([float(p) for p in preds])
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None
    if task.task == "binary-clf":
        y = np.asarray(y, dtype=object) == sorted(set(table[task.target].tolist()))[-1]
    return score(task.task, y, preds)


def cmd_benchmark(args) -> int:
    s = Settings(args, ["benchmark", "data"])
    seed = s.seed()
    task = _task_spec(s, seed)
    cfg = BenchmarkConfig(methods=_methods(s), n_splits=s.get_int("splits", 100),
                          test_fraction=s.get_float("test_frac", 0.2),
                          learner=s.get("learner", "auto"), seed=seed,
                          center=s.get_bool("center", False))
    jobs = s.get_int("jobs", 1)
    log.info("resolved config:\n%s", _resolved_config(task, cfg, jobs))
    table = ingest_csv(task)
    out = _out_dir(s)
    if s.get("external_predictions"):
        value = _score_external(s.get("external_predictions"), table, task)
        _write(out / "external_score.csv", f"method,score\nexternal,{value!r}\n")
        return 0
    result = run_benchmark(table, task, cfg, jobs=jobs)
    _write(out / "results.csv", result.results_csv())
    _write(out / "summary.csv", result.summary_csv())
    _write(out / "splits.csv", result.splits_csv())
    _write(out / "plot.csv", result.plot_csv())
    _write(out / "config.ini", _resolved_config(task, cfg, jobs))
    return 0


def cmd_histogram(args) -> int:
    s = Settings(args, ["histogram", "data"])
    seed = s.seed()
    column = _read_column(s.require("input"), s.get("column") or s.require("dirty"))
    measures = _split_list(s.get("measure")) or ["ngram3", "lev_ratio", "jaro_winkler"]
    n_pairs = s.get_int("pairs", 10_000)
    bins = s.get_int("bins", 20)
    out = _out_dir(s)
    log.info("histogram: measures=%s pairs=%d seed=%d", measures, n_pairs, seed)
    for name in measures:
        m = SimilarityMeasure.parse(name)
        hist = similarity_histogram(column, m, n_pairs=n_pairs, seed=seed, bins=bins)
        _write(out / f"histogram_{m.name}.tsv", hist.to_tsv())
    return 0


def cmd_cardinality(args) -> int:
    s = Settings(args, ["cardinality", "data"])
    seed = s.seed()
    column = _read_column(s.require("input"), s.get("column") or s.require("dirty"))
    checkpoints = [int(c) for c in _split_list(s.get("checkpoints"))] or \
        log_checkpoints(len(column))
    curve = cardinality_curve(column, checkpoints, seed=seed)
    lines = ["n_samples\tn_distinct"] + [f"{n}\t{k}" for n, k in curve]
    _write(_out_dir(s) / "cardinality.tsv", "\n".join(lines) + "\n")
    return 0


def cmd_generate_dirty(args) -> int:
    s = Settings(args, ["generate-dirty"])
    seed = s.seed()
    prob = s.get_float("corruption", 0.3)
    mix = {k: 1.0 / len(CORRUPTIONS) for k in CORRUPTIONS}
    spec = DirtyCorpusSpec(n_entities=s.get_int("n_entities", 200),
                           n_samples=s.get_int("samples", 5000), corruption_mix=mix,
                           corruption_prob=prob, seed=seed,
                           task=s.get("task") or "regression",
                           n_classes=s.get_int("n_classes", 2))
    log.info("generate-dirty: %s", spec)
    table, truth = generate_dirty_corpus(spec)
    out = _out_dir(s)
    _write(out / "corpus.csv", table.to_csv())
    lines = ["value,entity"] + [f"{_csv_header([k])},{v}" for k, v in sorted(truth.items())]
    _write(out / "truth.csv", "\n".join(lines) + "\n")
    return 0


def cmd_inspect(args) -> int:
    text = Path(args.path).read_text(encoding="utf-8") if Path(args.path).exists() else None
    if text is None:
        raise DataError(f"no such file {args.path}")
    try:
        state = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"{args.path}: {exc}") from None
    if state.get("format") == serialize.MODEL_FORMAT:
        obj = serialize.model_from_dict(state)
        again = serialize.dumps(serialize.model_to_dict(obj))
        summary = {"format": state["format"], "version": state["version"],
                   "kind": state["model"]["kind"]}
    else:
        enc = serialize.encoder_from_dict(state)
        again = serialize.dumps(serialize.encoder_to_dict(enc))
        summary = {"format": state["format"], "version": state["version"],
                   "encoder": enc.spec.name, "cardinality": enc.domain.k,
                   "output_dim": enc.output_dim,
                   "reduction": None if enc.reduction is None else
                   f"{enc.reduction.kind}{enc.reduction.d}"}
    summary["round_trip_identical"] = again == text
    print(json.dumps(summary, sort_keys=True))
    if args.reserialize:
        Path(args.reserialize).write_text(again, encoding="utf-8")
    return 0


# --------------------------------------------------------------------------

def _common(p, data=True):
    p.add_argument("--config", help="INI config file; flags take precedence")
    p.add_argument("--seed", type=int, help=f"random seed (fallback: ${SEED_ENV})")
    p.add_argument("--out-dir", dest="out_dir", help="output directory")
    if data:
        p.add_argument("--input", help="input CSV with header row")
        p.add_argument("--column", help="dirty categorical column")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dirty-encode", description=__doc__.splitlines()[0])
    parser.add_argument("-q", "--quiet", action="store_true", help="only log warnings")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="encode one column to a feature CSV")
    _common(p)
    p.add_argument("--method", help="encoder, e.g. one_hot, similarity, hashing256, target")
    p.add_argument("--measure", help="similarity measure, e.g. ngram3, lev_ratio, jaro_winkler")
    p.add_argument("--reduce", choices=REDUCTION_KINDS)
    p.add_argument("--d", help="reduction dimension")
    p.add_argument("--target", help="target column (target and mdv encoders)")
    p.add_argument("--task", help="regression, binary-clf or multiclass-clf")
    p.add_argument("--encoder", help="reuse a saved encoder.json instead of fitting")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("benchmark", help="run the split/score protocol")
    _common(p)
    p.add_argument("--target")
    p.add_argument("--task")
    p.add_argument("--categorical", action="append", help="other categorical columns")
    p.add_argument("--numerical", action="append", help="numerical columns")
    p.add_argument("--method", action="append", help="method (repeatable)")
    p.add_argument("--measure")
    p.add_argument("--reduce", choices=REDUCTION_KINDS)
    p.add_argument("--d", action="append", help="reduction dimensions, 'full' for none")
    p.add_argument("--splits", type=int)
    p.add_argument("--test-frac", dest="test_frac", type=float)
    p.add_argument("--learner", choices=("auto", "ridge", "logistic"))
    p.add_argument("--center", action="store_const", const=True, default=None,
                   help="also mean-center features before scaling")
    p.add_argument("--sample-cap", dest="sample_cap")
    p.add_argument("--jobs", type=int)
    p.add_argument("--external-predictions", dest="external_predictions",
                   help="CSV of row_id,prediction to score instead of benchmarking")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("histogram", help="histogram of pairwise category similarities")
    _common(p)
    p.add_argument("--measure", action="append")
    p.add_argument("--pairs", type=int)
    p.add_argument("--bins", type=int)
    p.set_defaults(func=cmd_histogram)

    p = sub.add_parser("cardinality", help="distinct categories versus sample count")
    _common(p)
    p.add_argument("--checkpoints", help="comma-separated sample counts (default log-spaced)")
    p.set_defaults(func=cmd_cardinality)

    p = sub.add_parser("generate-dirty", help="write a synthetic dirty corpus")
    _common(p, data=False)
    p.add_argument("--n-entities", dest="n_entities", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--corruption", type=float, help="per-step corruption probability")
    p.add_argument("--task")
    p.add_argument("--n-classes", dest="n_classes", type=int)
    p.set_defaults(func=cmd_generate_dirty)

    p = sub.add_parser("inspect", help="summarize and round-trip a state file")
    p.add_argument("path")
    p.add_argument("--reserialize", help="write the re-serialized state here")
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except DirtyEncodeError as exc:
        print(f"dirty-encode: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
