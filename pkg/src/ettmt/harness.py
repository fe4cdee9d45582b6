"""Benchmark runner: repeated seeded splits, training, translation, scoring.

One benchmark evaluates one or more model configurations on the same corpus
protocol: for each run r in 0..repeats-1, split with seed base_seed+r (or use
the full corpus when full_eval is set), optionally augment the training half,
train, translate the held-out half, and score. Mean and sample standard
deviation are reported per metric.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .augment import AugmentConfig, augment_pairs
from .baselines import build_dict_model, train_random
from .corpus import Lexicon, load_corpus, load_lexicon, split_corpus
from .errors import BenchmarkError, DataError
from .ibm import train_ibm1, train_ibm2
from .metrics import score_corpus
from .modelio import translate
from .ngram import train_naive_bayes, train_ngram
from .tokenize import tokenize_suffix, tokenize_whitespace

METRICS = ("bleu", "chrf", "ter")


@dataclass
class BenchmarkConfig:
    corpus: str
    corpus_format: str = "tsv"
    lexicon: str | None = None
    suffix_file: str | None = None
    models: list[dict] = field(default_factory=lambda: [{"family": "dict"}])
    tokenizer: str = "whitespace"
    train_size: float = 0.8
    repeats: int = 10
    seed: int = 0
    augment: dict | None = None
    full_eval: bool = False
    output_dir: str | None = None

    def __post_init__(self):
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        if not 0.0 < self.train_size < 1.0:
            raise ValueError("train_size must be in (0, 1)")
        if self.tokenizer not in ("whitespace", "suffix"):
            raise ValueError(f"unknown tokenizer {self.tokenizer!r}")

    @classmethod
    def from_json(cls, path) -> "BenchmarkConfig":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        if "model" in raw and "models" not in raw:
            raw["models"] = [raw.pop("model")]
        unknown = set(raw) - set(cls.__dataclass_fields__)
        if unknown:
            raise DataError(f"{path}: unknown config keys {sorted(unknown)}")
        return cls(**raw)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ModelResult:
    label: str
    runs: list[dict]
    mean: dict[str, float]
    std: dict[str, float]
    single_run: bool


@dataclass
class BenchmarkResult:
    config: dict
    results: list[ModelResult]

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "results": [asdict(r) for r in self.results],
        }

    def to_json(self, include_wall_clock: bool = True) -> str:
        doc = self.to_dict()
        if not include_wall_clock:
            for result in doc["results"]:
                for run in result["runs"]:
                    run.pop("wall_clock", None)
        return json.dumps(doc, sort_keys=True, indent=1)


def _model_label(model_cfg: dict) -> str:
    family = model_cfg["family"]
    parts = [family]
    if family in ("ngram", "naive-bayes"):
        parts.append(f"n={model_cfg.get('n', 1)}")
        parts.append(model_cfg.get("context_mode", "ett"))
        if family == "ngram" and not model_cfg.get("ordered", True):
            parts.append("unordered")
    if family in ("ibm1", "ibm2") and model_cfg.get("use_lexicon"):
        parts.append("with-lexicon")
    return ":".join(parts)


def _train_model(model_cfg: dict, pairs, lexicon: Lexicon | None, tok):
    family = model_cfg.get("family")
    if family == "random":
        return train_random([eng for _, eng in pairs])
    if family == "dict":
        if lexicon is None:
            raise DataError("the dict family needs a lexicon")
        return build_dict_model(lexicon)
    if family == "ngram":
        return train_ngram(
            pairs,
            n=model_cfg.get("n", 1),
            context_mode=model_cfg.get("context_mode", "ett"),
            ordered=model_cfg.get("ordered", True),
            alpha=model_cfg.get("alpha", 1.0),
        )
    if family == "naive-bayes":
        return train_naive_bayes(
            pairs,
            n=model_cfg.get("n", 2),
            context_mode=model_cfg.get("context_mode", "ett"),
            alpha=model_cfg.get("alpha", 1.0),
        )
    if family in ("ibm1", "ibm2"):
        train_pairs = list(pairs)
        if model_cfg.get("use_lexicon"):
            if lexicon is None:
                raise DataError("use_lexicon requires a lexicon")
            train_pairs += [
                (tok(entry.etruscan), entry.english.split())
                for entry in lexicon.entries
                if entry.translatable
            ]
        iterations = model_cfg.get("iterations", 10)
        if family == "ibm1":
            return train_ibm1(train_pairs, iterations=iterations)
        return train_ibm2(train_pairs, iterations=iterations)
    raise DataError(f"unknown model family {family!r}")


def _aggregate(values: list[float]) -> tuple[float, float]:
    arr = np.asarray(values)
    if len(arr) == 1:
        return float(arr[0]), 0.0
    return float(arr.mean()), float(arr.std(ddof=1))


def run_benchmark(cfg: BenchmarkConfig) -> BenchmarkResult:
    """Execute the full protocol; any stage failure aborts with stage and run index."""

    def stage(run: int | str, name: str, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (DataError, ValueError, OSError) as exc:
            raise BenchmarkError(f"run {run}, stage '{name}': {exc}") from exc

    corpus, _report = stage("setup", "load-corpus", load_corpus, cfg.corpus, cfg.corpus_format)
    lexicon = None
    if cfg.lexicon:
        lexicon = stage("setup", "load-lexicon", load_lexicon, cfg.lexicon, cfg.suffix_file)
    translated = corpus.translated()
    if cfg.tokenizer == "suffix":
        if lexicon is None or not lexicon.suffixes:
            raise BenchmarkError("run setup, stage 'tokenizer': suffix tokenizer needs a suffix file")
        suffixes = lexicon.suffixes
        tok = lambda text: tokenize_suffix(text, suffixes)
    else:
        tok = tokenize_whitespace

    per_model: list[ModelResult] = []
    for model_cfg in cfg.models:
        label = _model_label(model_cfg)
        runs = []
        for r in range(cfg.repeats):
            seed_r = cfg.seed + r
            started = time.perf_counter()
            if cfg.full_eval:
                train_c = test_c = translated
            else:
                train_c, test_c = stage(r, "split", split_corpus, translated, cfg.train_size, seed_r)
            pairs = [(tok(i.etruscan_norm), i.english.split()) for i in train_c]
            if cfg.augment:
                aug_cfg = stage(r, "augment-config", AugmentConfig, seed=seed_r, **cfg.augment)
                pairs = stage(r, "augment", augment_pairs, pairs, lexicon, aug_cfg)
            model = stage(r, "train", _train_model, model_cfg, pairs, lexicon, tok)
            rng = np.random.default_rng(seed_r)
            beams = model_cfg.get("beams", 8)
            hyps = [
                " ".join(translate(model_cfg["family"], model, tok(i.etruscan_norm), rng=rng, beams=beams))
                for i in test_c
            ]
            refs = [i.english for i in test_c]
            report = stage(r, "evaluate", score_corpus, hyps, refs)
            runs.append(
                {
                    "seed": seed_r,
                    "bleu": report.bleu,
                    "chrf": report.chrf,
                    "ter": report.ter,
                    "n_pairs": report.n_pairs,
                    "wall_clock": time.perf_counter() - started,
                }
            )
        mean = {}
        std = {}
        for metric in METRICS:
            mean[metric], std[metric] = _aggregate([run[metric] for run in runs])
        per_model.append(
            ModelResult(label=label, runs=runs, mean=mean, std=std, single_run=cfg.repeats == 1)
        )

    result = BenchmarkResult(config=cfg.to_dict(), results=per_model)
    if cfg.output_dir:
        out = Path(cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "result.json").write_text(result.to_json(), encoding="utf-8")
        (out / "result.txt").write_text(format_table(result), encoding="utf-8")
    return result


def format_table(result: BenchmarkResult) -> str:
    """Model rows, metric columns, standard deviation in parentheses."""
    headers = ["model", "BLEU", "chr-F", "TER"]
    rows = []
    for res in result.results:
        rows.append(
            [
                res.label,
                f"{res.mean['bleu']:.3f}",
                f"{res.mean['chrf']:.3f}",
                f"{res.mean['ter']:.3f}",
            ]
        )
        rows.append(
            ["", f"({res.std['bleu']:.3f})", f"({res.std['chrf']:.3f})", f"({res.std['ter']:.3f})"]
        )
    widths = [max(len(r[i]) for r in rows + [headers]) for i in range(4)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)))
    return "\n".join(lines) + "\n"
