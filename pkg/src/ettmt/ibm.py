"""EM-trained word-alignment translation models (lexical, and lexical+position).

Model 1 learns t(e | f), the probability that source token f translates to
target token e, ignoring positions; every source sentence is prefixed with a
virtual empty token so target words can align to nothing. Model 2 adds a
position table a(i | j, l_e, l_f) conditioned on the sentence-length pair and
is initialized from a Model-1 run.

The t-table is stored sparsely over co-occurring (f, e) type pairs: with a
uniform initialization, EM provably never moves mass onto pairs that do not
co-occur in some training pair, so the sparse table is exact, not an
approximation. The hot expected-count loops live in ``_kernels``.

Decoding is a lexical argmax per source token. A token is skipped when its
trained drop mass (expected fraction of its occurrences left unaligned in a
final expectation pass) outweighs its best lexical probability; Model 2
additionally reorders the emitted tokens by their most probable target
position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DataError

NULL_TOKEN = "<null>"

Pair = tuple[list[str], list[str]]


@dataclass
class TTable:
    source_vocab: tuple[str, ...]  # index 0 is the virtual empty token
    target_vocab: tuple[str, ...]
    indptr: np.ndarray = field(repr=False)
    cols: np.ndarray = field(repr=False)
    probs: np.ndarray = field(repr=False)
    drop_probs: np.ndarray = field(repr=False)
    loglik_history: list[float] = field(default_factory=list)

    def __post_init__(self):
        self._src_index = {t: i for i, t in enumerate(self.source_vocab)}
        self._tgt_index = {t: i for i, t in enumerate(self.target_vocab)}

    def prob(self, f: str, e: str) -> float:
        fi = self._src_index.get(f)
        ei = self._tgt_index.get(e)
        if fi is None or ei is None:
            return 0.0
        lo, hi = self.indptr[fi], self.indptr[fi + 1]
        k = lo + np.searchsorted(self.cols[lo:hi], ei)
        if k < hi and self.cols[k] == ei:
            return float(self.probs[k])
        return 0.0

    def row(self, f: str) -> dict[str, float]:
        fi = self._src_index.get(f)
        if fi is None:
            return {}
        lo, hi = self.indptr[fi], self.indptr[fi + 1]
        return {self.target_vocab[c]: float(p) for c, p in zip(self.cols[lo:hi], self.probs[lo:hi])}

    def best_target(self, f: str) -> tuple[str, float] | None:
        """Highest-probability target for f; ties go to the smaller token."""
        fi = self._src_index.get(f)
        if fi is None:
            return None
        lo, hi = self.indptr[fi], self.indptr[fi + 1]
        if hi == lo:
            return None
        k = lo + int(np.argmax(self.probs[lo:hi]))
        return self.target_vocab[self.cols[k]], float(self.probs[k])

    def drop_prob(self, f: str) -> float:
        fi = self._src_index.get(f)
        return 0.0 if fi is None else float(self.drop_probs[fi])

    def to_dict(self, prune: float = 1e-6) -> dict:
        entries = []
        for fi, f in enumerate(self.source_vocab):
            lo, hi = self.indptr[fi], self.indptr[fi + 1]
            for c, p in zip(self.cols[lo:hi], self.probs[lo:hi]):
                if p >= prune:
                    entries.append([f, self.target_vocab[c], float(p)])
        return {
            "entries": entries,
            "drop_probs": {
                f: float(d) for f, d in zip(self.source_vocab, self.drop_probs) if d > 0.0
            },
            "loglik_history": list(self.loglik_history),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "TTable":
        entries = payload["entries"]
        source_vocab = (NULL_TOKEN,) + tuple(sorted({f for f, _, _ in entries} - {NULL_TOKEN}))
        target_vocab = tuple(sorted({e for _, e, _ in entries}))
        src_index = {t: i for i, t in enumerate(source_vocab)}
        tgt_index = {t: i for i, t in enumerate(target_vocab)}
        rows: list[list[tuple[int, float]]] = [[] for _ in source_vocab]
        for f, e, p in entries:
            rows[src_index[f]].append((tgt_index[e], p))
        indptr = np.zeros(len(source_vocab) + 1, dtype=np.int64)
        cols = []
        probs = []
        for fi, row in enumerate(rows):
            row.sort()
            indptr[fi + 1] = indptr[fi] + len(row)
            cols.extend(c for c, _ in row)
            probs.extend(p for _, p in row)
        drop = np.zeros(len(source_vocab))
        for f, d in payload.get("drop_probs", {}).items():
            if f in src_index:
                drop[src_index[f]] = d
        return cls(
            source_vocab=source_vocab,
            target_vocab=target_vocab,
            indptr=indptr,
            cols=np.asarray(cols, dtype=np.int32),
            probs=np.asarray(probs, dtype=np.float64),
            drop_probs=drop,
            loglik_history=list(payload.get("loglik_history", [])),
        )


@dataclass
class AlignTable:
    """Position distributions a(i | j, l_e, l_f), one block per length pair."""

    blocks: dict[tuple[int, int], np.ndarray]  # shape (l_e, l_f + 1)

    def prob(self, i: int, j: int, l_e: int, l_f: int) -> float:
        block = self.blocks.get((l_e, l_f))
        if block is None:
            return 1.0 / (l_f + 1)
        return float(block[j - 1, i])

    def to_dict(self, prune: float = 1e-6) -> dict:
        return {
            "blocks": {
                f"{l_e},{l_f}": [[p if p >= prune else 0.0 for p in row] for row in block.tolist()]
                for (l_e, l_f), block in sorted(self.blocks.items())
            }
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "AlignTable":
        blocks = {}
        for key, rows in payload["blocks"].items():
            l_e, l_f = (int(x) for x in key.split(","))
            blocks[(l_e, l_f)] = np.asarray(rows, dtype=np.float64)
        return cls(blocks=blocks)


# ---------------------------------------------------------------------------
# Training
# ---------------------------------------------------------------------------

@dataclass
class _Encoded:
    source_vocab: tuple[str, ...]
    target_vocab: tuple[str, ...]
    src_flat: np.ndarray
    src_indptr: np.ndarray
    tgt_flat: np.ndarray
    tgt_indptr: np.ndarray
    indptr: np.ndarray
    cols: np.ndarray


def _encode(pairs: list[Pair]) -> _Encoded:
    if not pairs:
        raise DataError("cannot train on an empty pair list")
    source_vocab = (NULL_TOKEN,) + tuple(sorted({t for ett, _ in pairs for t in ett}))
    target_vocab = tuple(sorted({t for _, eng in pairs for t in eng}))
    if not target_vocab:
        raise DataError("training pairs have no target tokens")
    src_index = {t: i for i, t in enumerate(source_vocab)}
    tgt_index = {t: i for i, t in enumerate(target_vocab)}

    src_flat: list[int] = []
    tgt_flat: list[int] = []
    src_indptr = np.zeros(len(pairs) + 1, dtype=np.int64)
    tgt_indptr = np.zeros(len(pairs) + 1, dtype=np.int64)
    cooc: list[set[int]] = [set() for _ in source_vocab]
    for p, (ett, eng) in enumerate(pairs):
        fids = [0] + [src_index[t] for t in ett]
        eids = [tgt_index[t] for t in eng]
        src_flat.extend(fids)
        tgt_flat.extend(eids)
        src_indptr[p + 1] = len(src_flat)
        tgt_indptr[p + 1] = len(tgt_flat)
        for fi in fids:
            cooc[fi].update(eids)

    indptr = np.zeros(len(source_vocab) + 1, dtype=np.int64)
    cols: list[int] = []
    for fi, row in enumerate(cooc):
        ordered = sorted(row)
        indptr[fi + 1] = indptr[fi] + len(ordered)
        cols.extend(ordered)
    return _Encoded(
        source_vocab=source_vocab,
        target_vocab=target_vocab,
        src_flat=np.asarray(src_flat, dtype=np.int32),
        src_indptr=src_indptr,
        tgt_flat=np.asarray(tgt_flat, dtype=np.int32),
        tgt_indptr=tgt_indptr,
        indptr=indptr,
        cols=np.asarray(cols, dtype=np.int32),
    )


def _normalize_rows(indptr: np.ndarray, values: np.ndarray) -> np.ndarray:
    out = values.copy()
    for fi in range(len(indptr) - 1):
        lo, hi = indptr[fi], indptr[fi + 1]
        total = out[lo:hi].sum()
        if total > 0.0:
            out[lo:hi] /= total
    return out


def _drop_probs(enc: _Encoded, counts: np.ndarray, recv: np.ndarray) -> np.ndarray:
    """Drop mass per source type from a final expectation pass.

    recv holds the expected number of target words aligned to each source
    occurrence; the shortfall below one word accumulates as evidence that the
    type translates to nothing.
    """
    n_src = len(enc.source_vocab)
    eps_counts = np.zeros(n_src)
    shortfall = np.maximum(0.0, 1.0 - recv)
    np.add.at(eps_counts, enc.src_flat, shortfall)
    real = np.zeros(n_src)
    for fi in range(n_src):
        real[fi] = counts[enc.indptr[fi] : enc.indptr[fi + 1]].sum()
    total = eps_counts + real
    out = np.zeros(n_src)
    mask = total > 0
    out[mask] = eps_counts[mask] / total[mask]
    out[0] = 0.0  # the virtual empty token is never emitted anyway
    return out


def train_ibm1(pairs: list[Pair], iterations: int = 10) -> TTable:
    """EM training of the lexical table; uniform initialization.

    The recorded log-likelihood history has one value per iteration,
    evaluated under the parameters entering that iteration, plus a final
    value under the trained parameters.
    """
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    enc = _encode(pairs)
    probs = np.full(len(enc.cols), 1.0 / len(enc.target_vocab))
    history: list[float] = []
    for _ in range(iterations):
        counts = np.zeros_like(probs)
        recv = np.zeros(len(enc.src_flat))
        ll = _kernels.ibm1_estep(
            enc.src_flat, enc.src_indptr, enc.tgt_flat, enc.tgt_indptr,
            enc.indptr, enc.cols, probs, counts, recv,
        )
        history.append(float(ll))
        probs = _normalize_rows(enc.indptr, counts)
    counts = np.zeros_like(probs)
    recv = np.zeros(len(enc.src_flat))
    history.append(float(_kernels.ibm1_estep(
        enc.src_flat, enc.src_indptr, enc.tgt_flat, enc.tgt_indptr,
        enc.indptr, enc.cols, probs, counts, recv,
    )))
    return TTable(
        source_vocab=enc.source_vocab,
        target_vocab=enc.target_vocab,
        indptr=enc.indptr,
        cols=enc.cols,
        probs=probs,
        drop_probs=_drop_probs(enc, counts, recv),
        loglik_history=history,
    )


def _align_layout(pairs: list[Pair]) -> tuple[dict[tuple[int, int], int], np.ndarray, int]:
    """Flat layout for the shared position blocks: one block per (l_e, l_f)."""
    offsets: dict[tuple[int, int], int] = {}
    size = 0
    for ett, eng in pairs:
        shape = (len(eng), len(ett))
        if shape not in offsets:
            offsets[shape] = size
            size += shape[0] * (shape[1] + 1)
    bases = np.array([offsets[(len(eng), len(ett))] for ett, eng in pairs], dtype=np.int64)
    return offsets, bases, size


def train_ibm2(pairs: list[Pair], iterations: int = 10) -> tuple[TTable, AlignTable]:
    """Model-1 initialization, then joint EM over the lexical and position tables."""
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    init = train_ibm1(pairs, iterations)
    enc = _encode(pairs)
    probs = init.probs.copy()
    offsets, bases, size = _align_layout(pairs)
    a_vals = np.zeros(size)
    for (l_e, l_f), off in offsets.items():
        a_vals[off : off + l_e * (l_f + 1)] = 1.0 / (l_f + 1)

    history = list(init.loglik_history)
    counts = np.zeros_like(probs)
    a_counts = np.zeros_like(a_vals)
    recv = np.zeros(len(enc.src_flat))
    for _ in range(iterations):
        counts[:] = 0.0
        a_counts[:] = 0.0
        recv[:] = 0.0
        ll = _kernels.ibm2_estep(
            enc.src_flat, enc.src_indptr, enc.tgt_flat, enc.tgt_indptr, bases,
            enc.indptr, enc.cols, probs, a_vals, counts, a_counts, recv,
        )
        history.append(float(ll))
        probs = _normalize_rows(enc.indptr, counts)
        for (l_e, l_f), off in offsets.items():
            block = a_counts[off : off + l_e * (l_f + 1)].reshape(l_e, l_f + 1)
            totals = block.sum(axis=1, keepdims=True)
            np.divide(block, totals, out=block, where=totals > 0)
            a_vals[off : off + l_e * (l_f + 1)] = block.reshape(-1)
    counts[:] = 0.0
    a_counts[:] = 0.0
    recv[:] = 0.0
    history.append(float(_kernels.ibm2_estep(
        enc.src_flat, enc.src_indptr, enc.tgt_flat, enc.tgt_indptr, bases,
        enc.indptr, enc.cols, probs, a_vals, counts, a_counts, recv,
    )))
    blocks = {
        shape: a_vals[off : off + shape[0] * (shape[1] + 1)].reshape(shape[0], shape[1] + 1).copy()
        for shape, off in offsets.items()
    }
    ttable = TTable(
        source_vocab=enc.source_vocab,
        target_vocab=enc.target_vocab,
        indptr=enc.indptr,
        cols=enc.cols,
        probs=probs,
        drop_probs=_drop_probs(enc, counts, recv),
        loglik_history=history,
    )
    return ttable, AlignTable(blocks=blocks)


# ---------------------------------------------------------------------------
# Diagnostics and decoding
# ---------------------------------------------------------------------------

def corpus_log_likelihood(
    ttable: TTable, pairs: list[Pair], align_table: AlignTable | None = None
) -> float:
    """Sum over pairs of log P(target sentence | source sentence)."""
    total = 0.0
    for ett, eng in pairs:
        src = [NULL_TOKEN] + list(ett)
        for j, e in enumerate(eng, start=1):
            if align_table is None:
                s = sum(ttable.prob(f, e) for f in src) / len(src)
            else:
                s = sum(
                    ttable.prob(f, e) * align_table.prob(i, j, len(eng), len(ett))
                    for i, f in enumerate(src)
                )
            total += math.log(s) if s > 0.0 else -math.inf
    return total


def translate_ibm(
    ttable: TTable, source: list[str], align_table: AlignTable | None = None
) -> list[str]:
    """Per-token lexical argmax; unknown and drop-dominated tokens are skipped.

    With a position table, emitted tokens are reordered by their most
    probable target position (stable on ties).
    """
    emitted: list[tuple[int, str]] = []
    for i, f in enumerate(source, start=1):
        best = ttable.best_target(f)
        if best is None:
            continue
        target, p = best
        if ttable.drop_prob(f) > p:
            continue
        emitted.append((i, target))
    if align_table is None or not emitted:
        return [t for _, t in emitted]
    block = align_table.blocks.get((len(emitted), len(source)))
    if block is None:
        return [t for _, t in emitted]
    keyed = [(int(np.argmax(block[:, i])), k, t) for k, (i, t) in enumerate(emitted)]
    keyed.sort()
    return [t for _, _, t in keyed]
