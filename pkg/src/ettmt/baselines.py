"""The two context-free translators: a random generator and a dictionary lookup."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .corpus import Lexicon
from .errors import DataError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RandomModel:
    """Emits token sequences whose length is normally distributed and whose
    tokens are drawn i.i.d. from the training unigram distribution."""

    length_mean: float
    length_std: float
    tokens: tuple[str, ...]
    probs: np.ndarray = field(repr=False)

    def translate(self, source: list[str], rng: np.random.Generator) -> list[str]:
        return translate_random(self, source, rng)

    def to_dict(self) -> dict:
        return {
            "length_mean": self.length_mean,
            "length_std": self.length_std,
            "tokens": list(self.tokens),
            "probs": [float(p) for p in self.probs],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "RandomModel":
        return cls(
            length_mean=payload["length_mean"],
            length_std=payload["length_std"],
            tokens=tuple(payload["tokens"]),
            probs=np.asarray(payload["probs"], dtype=np.float64),
        )


def train_random(sequences: list[list[str]]) -> RandomModel:
    """Estimate length mean/sample std and unigram frequencies from English sides."""
    if len(sequences) < 2:
        raise ValueError(f"need at least 2 sequences to estimate a spread, got {len(sequences)}")
    lengths = np.array([len(s) for s in sequences], dtype=np.float64)
    counts: dict[str, int] = {}
    for seq in sequences:
        for tok in seq:
            counts[tok] = counts.get(tok, 0) + 1
    if not counts:
        raise ValueError("training sequences contain no tokens")
    tokens = tuple(sorted(counts))
    probs = np.array([counts[t] for t in tokens], dtype=np.float64)
    probs /= probs.sum()
    return RandomModel(
        length_mean=float(lengths.mean()),
        length_std=float(lengths.std(ddof=1)),
        tokens=tokens,
        probs=probs,
    )


def translate_random(model: RandomModel, source: list[str], rng: np.random.Generator) -> list[str]:
    """Sample a translation; the source is ignored by construction."""
    length = int(round(rng.normal(model.length_mean, model.length_std)))
    if length <= 0:
        return []
    idx = rng.choice(len(model.tokens), size=length, p=model.probs)
    return [model.tokens[i] for i in idx]


@dataclass(frozen=True)
class DictModel:
    """Exact-match, order-preserving token lookup; unknown tokens are dropped."""

    table: dict[str, str]

    def translate(self, source: list[str], rng=None) -> list[str]:
        return translate_dict(self, source)

    def to_dict(self) -> dict:
        return {"table": dict(self.table)}

    @classmethod
    def from_dict(cls, payload: dict) -> "DictModel":
        return cls(table=dict(payload["table"]))


def build_dict_model(lexicon: Lexicon) -> DictModel:
    """One gloss per vocable; duplicate keys keep the first and log a warning."""
    table: dict[str, str] = {}
    for entry in lexicon.entries:
        if not entry.translatable:
            continue
        if entry.etruscan in table:
            log.warning("duplicate dictionary key %r: keeping first gloss %r",
                        entry.etruscan, table[entry.etruscan])
            continue
        table[entry.etruscan] = entry.english
    return DictModel(table=table)


def translate_dict(model: DictModel, tokens: list[str]) -> list[str]:
    """Look each token up in source order; multiword glosses expand."""
    out: list[str] = []
    for token in tokens:
        gloss = model.table.get(token)
        if gloss is not None:
            out.extend(gloss.split())
    return out


def save_dict_tsv(model: DictModel, path):
    """Write the lookup table as a two-column TSV (etruscan, english)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("etruscan\tenglish\n")
        for key in sorted(model.table):
            fh.write(f"{key}\t{model.table[key]}\n")


def load_dict_tsv(path) -> DictModel:
    table: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if header[:2] != ["etruscan", "english"]:
            raise DataError(f"{path}: expected header etruscan<TAB>english, got {header}")
        for line_no, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) < 2:
                raise DataError(f"{path} line {line_no}: expected two tab-separated columns")
            if parts[0] not in table:
                table[parts[0]] = parts[1]
    return DictModel(table=table)
