"""Context-conditioned token translators and their shared beam-search decoder.

Training aligns each pair position-by-position: both sides are left-padded
with n-1 padding tokens, the target sequence is the English tokens followed
by an end-of-sequence marker, and whichever side is shorter is right-padded
so every position has a full context. The context of position i consists of
the n source tokens ending at i, plus, in "ett-eng" mode, the n previously
generated English tokens.

Two estimators share that alignment:

* ``NgramModel`` stores raw context -> target counts and answers with
  additive smoothing; with ``ordered=False`` the source slots of the key are
  sorted so permuted contexts collapse onto one entry.
* ``NaiveBayesModel`` factors the conditional into a target prior times
  per-slot likelihoods and scores candidates in log space.

``beam_translate`` decodes either model. With a source-only context every
live hypothesis sees the same distribution, so any beam width reproduces
greedy search; with English context the hypotheses diverge and the beam
matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DataError

PAD = "<pad>"
EOS = "<eos>"

CONTEXT_ETT = "ett"
CONTEXT_ETT_ENG = "ett-eng"
_MODES = (CONTEXT_ETT, CONTEXT_ETT_ENG)

Pair = tuple[list[str], list[str]]


def align_pair(ett: list[str], eng: list[str], n: int) -> tuple[list[str], list[str]]:
    """Pad a pair for position-wise alignment.

    Returns (padded source, targets): the source carries n-1 left pads plus
    right pads up to the number of training positions; the targets are the
    English tokens, then EOS, then pads filling up to the source length.
    """
    n_pos = max(len(ett), len(eng) + 1)
    src = [PAD] * (n - 1) + list(ett) + [PAD] * (n_pos - len(ett))
    targets = list(eng) + [EOS] + [PAD] * (n_pos - len(eng) - 1)
    return src, targets


def training_positions(ett: list[str], eng: list[str], n: int, context_mode: str):
    """Yield (source slots, english slots, target) for every aligned position."""
    src, targets = align_pair(ett, eng, n)
    history = [PAD] * n + targets
    for i, target in enumerate(targets):
        src_slots = tuple(src[i : i + n])
        eng_slots = tuple(history[i : i + n]) if context_mode == CONTEXT_ETT_ENG else ()
        yield src_slots, eng_slots, target


def _context_key(src_slots: tuple, eng_slots: tuple, ordered: bool) -> tuple:
    if not ordered:
        src_slots = tuple(sorted(src_slots))
    return src_slots + eng_slots


@dataclass
class NgramModel:
    n: int
    context_mode: str
    ordered: bool
    alpha: float
    counts: dict[tuple, dict[str, int]]
    context_totals: dict[tuple, int]
    vocab: tuple[str, ...]  # sorted; always contains EOS and PAD

    def distribution(self, src_slots: tuple, eng_slots: tuple = ()) -> dict[str, float]:
        return ngram_distribution(self, src_slots, eng_slots)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "context_mode": self.context_mode,
            "ordered": self.ordered,
            "alpha": self.alpha,
            "vocab": list(self.vocab),
            "counts": [[list(ctx), list(tgts.items())] for ctx, tgts in sorted(self.counts.items())],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "NgramModel":
        counts = {}
        for ctx, tgts in payload["counts"]:
            counts[tuple(ctx)] = {t: int(c) for t, c in tgts}
        return cls(
            n=payload["n"],
            context_mode=payload["context_mode"],
            ordered=payload["ordered"],
            alpha=payload["alpha"],
            counts=counts,
            context_totals={ctx: sum(t.values()) for ctx, t in counts.items()},
            vocab=tuple(payload["vocab"]),
        )


def train_ngram(
    pairs: list[Pair],
    n: int,
    context_mode: str = CONTEXT_ETT,
    ordered: bool = True,
    alpha: float = 1.0,
) -> NgramModel:
    """Accumulate context -> target counts over all aligned positions."""
    if not pairs:
        raise DataError("cannot train on an empty pair list")
    if context_mode not in _MODES:
        raise ValueError(f"context_mode must be one of {_MODES}, got {context_mode!r}")
    if n < 1:
        raise ValueError(f"context size must be >= 1, got {n}")
    if alpha <= 0:
        raise ValueError(f"smoothing parameter must be > 0, got {alpha}")
    counts: dict[tuple, dict[str, int]] = {}
    totals: dict[tuple, int] = {}
    vocab = {EOS, PAD}
    for ett, eng in pairs:
        vocab.update(eng)
        for src_slots, eng_slots, target in training_positions(ett, eng, n, context_mode):
            key = _context_key(src_slots, eng_slots, ordered)
            bucket = counts.setdefault(key, {})
            bucket[target] = bucket.get(target, 0) + 1
            totals[key] = totals.get(key, 0) + 1
    return NgramModel(
        n=n,
        context_mode=context_mode,
        ordered=ordered,
        alpha=alpha,
        counts=counts,
        context_totals=totals,
        vocab=tuple(sorted(vocab)),
    )


def ngram_distribution(model: NgramModel, src_slots: tuple, eng_slots: tuple = ()) -> dict[str, float]:
    """Additively smoothed P(target | context); unseen contexts are uniform."""
    if len(src_slots) != model.n:
        raise ValueError(f"expected {model.n} source slots, got {len(src_slots)}")
    key = _context_key(tuple(src_slots), tuple(eng_slots), model.ordered)
    bucket = model.counts.get(key, {})
    total = model.context_totals.get(key, 0)
    denom = total + model.alpha * len(model.vocab)
    return {tok: (bucket.get(tok, 0) + model.alpha) / denom for tok in model.vocab}


@dataclass
class NaiveBayesModel:
    """Factored estimator: prior(target) times per-slot P(slot value | target)."""

    n: int
    context_mode: str
    alpha: float
    target_counts: dict[str, int]
    total_positions: int
    # one map per context slot: target -> {value -> count}
    slot_counts: list[dict[str, dict[str, int]]] = field(repr=False)
    slot_vocab_sizes: list[int] = field(default_factory=list)
    slot_vocabs: list[tuple[str, ...]] = field(default_factory=list, repr=False)
    vocab: tuple[str, ...] = ()

    ordered: bool = True  # the factored model always respects slot order

    def distribution(self, src_slots: tuple, eng_slots: tuple = ()) -> dict[str, float]:
        return nb_posterior(self, src_slots, eng_slots)

    def prior(self) -> dict[str, float]:
        denom = self.total_positions + self.alpha * len(self.vocab)
        return {t: (self.target_counts.get(t, 0) + self.alpha) / denom for t in self.vocab}

    def slot_likelihood(self, slot: int, target: str, value: str) -> float:
        count = self.slot_counts[slot].get(target, {}).get(value, 0)
        total = self.target_counts.get(target, 0)
        return (count + self.alpha) / (total + self.alpha * self.slot_vocab_sizes[slot])

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "context_mode": self.context_mode,
            "alpha": self.alpha,
            "target_counts": dict(self.target_counts),
            "total_positions": self.total_positions,
            "slot_counts": [
                {t: dict(vals) for t, vals in slot.items()} for slot in self.slot_counts
            ],
            "slot_vocabs": [list(v) for v in self.slot_vocabs],
            "vocab": list(self.vocab),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "NaiveBayesModel":
        slot_vocabs = [tuple(v) for v in payload["slot_vocabs"]]
        return cls(
            n=payload["n"],
            context_mode=payload["context_mode"],
            alpha=payload["alpha"],
            target_counts={t: int(c) for t, c in payload["target_counts"].items()},
            total_positions=payload["total_positions"],
            slot_counts=[
                {t: {v: int(c) for v, c in vals.items()} for t, vals in slot.items()}
                for slot in payload["slot_counts"]
            ],
            slot_vocab_sizes=[len(v) for v in slot_vocabs],
            slot_vocabs=slot_vocabs,
            vocab=tuple(payload["vocab"]),
        )


def train_naive_bayes(
    pairs: list[Pair],
    n: int,
    context_mode: str = CONTEXT_ETT,
    alpha: float = 1.0,
) -> NaiveBayesModel:
    """Estimate the target prior and the per-slot conditionals."""
    if not pairs:
        raise DataError("cannot train on an empty pair list")
    if context_mode not in _MODES:
        raise ValueError(f"context_mode must be one of {_MODES}, got {context_mode!r}")
    n_slots = 2 * n if context_mode == CONTEXT_ETT_ENG else n
    target_counts: dict[str, int] = {}
    slot_counts: list[dict[str, dict[str, int]]] = [{} for _ in range(n_slots)]
    src_vocab = {PAD}
    tgt_vocab = {EOS, PAD}
    total = 0
    for ett, eng in pairs:
        src_vocab.update(ett)
        tgt_vocab.update(eng)
        for src_slots, eng_slots, target in training_positions(ett, eng, n, context_mode):
            total += 1
            target_counts[target] = target_counts.get(target, 0) + 1
            for slot, value in enumerate(src_slots + eng_slots):
                bucket = slot_counts[slot].setdefault(target, {})
                bucket[value] = bucket.get(value, 0) + 1
    src_sorted = tuple(sorted(src_vocab))
    tgt_sorted = tuple(sorted(tgt_vocab))
    slot_vocabs = [src_sorted] * n + [tgt_sorted] * (n_slots - n)
    return NaiveBayesModel(
        n=n,
        context_mode=context_mode,
        alpha=alpha,
        target_counts=target_counts,
        total_positions=total,
        slot_counts=slot_counts,
        slot_vocab_sizes=[len(v) for v in slot_vocabs],
        slot_vocabs=slot_vocabs,
        vocab=tgt_sorted,
    )


def nb_posterior(model: NaiveBayesModel, src_slots: tuple, eng_slots: tuple = ()) -> dict[str, float]:
    """Normalized posterior over the target vocabulary, computed in log space."""
    if len(src_slots) != model.n:
        raise ValueError(f"expected {model.n} source slots, got {len(src_slots)}")
    context = tuple(src_slots) + tuple(eng_slots)
    prior_denom = model.total_positions + model.alpha * len(model.vocab)
    log_scores = []
    for target in model.vocab:
        score = math.log((model.target_counts.get(target, 0) + model.alpha) / prior_denom)
        for slot, value in enumerate(context):
            score += math.log(model.slot_likelihood(slot, target, value))
        log_scores.append(score)
    peak = max(log_scores)
    weights = [math.exp(s - peak) for s in log_scores]
    z = sum(weights)
    return {t: w / z for t, w in zip(model.vocab, weights)}


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------

def beam_translate(model, source: list[str], beams: int = 8, max_len: int | None = None) -> list[str]:
    """Decode position by position, keeping the `beams` best hypotheses.

    Generation runs for at most len(source) positions (or max_len, if
    smaller). With English context a hypothesis finishes early when it emits
    EOS; with source-only context EOS is just another dropped emission, so
    the output covers every source position. The winner is the completed
    hypothesis with the highest summed log-probability, ties going to the
    one that stopped earlier and then to the lexicographically smaller token
    sequence. PAD emissions never reach the output.
    """
    if beams < 1:
        raise ValueError(f"beam count must be >= 1, got {beams}")
    n = model.n
    n_positions = len(source) if max_len is None else min(len(source), max_len)
    padded = [PAD] * (n - 1) + list(source)
    uses_history = model.context_mode == CONTEXT_ETT_ENG

    # hypothesis: (summed -log p, emitted tokens)
    alive: list[tuple[float, tuple[str, ...]]] = [(0.0, ())]
    done: list[tuple[float, float, tuple[str, ...]]] = []
    for i in range(n_positions):
        src_slots = tuple(padded[i : i + n])
        expansions: list[tuple[float, tuple[str, ...]]] = []
        shared = None if uses_history else model.distribution(src_slots)
        for score, tokens in alive:
            if uses_history:
                history = tuple(([PAD] * n + list(tokens))[-n:])
                dist = model.distribution(src_slots, history)
            else:
                dist = shared
            for tok, p in dist.items():
                cost = score - math.log(p)
                if tok == EOS and uses_history:
                    done.append((cost, float(i), tokens))
                else:
                    expansions.append((cost, tokens + (tok,)))
        expansions.sort(key=lambda h: (h[0], h[1]))
        alive = expansions[:beams]
        if not alive:
            break
    done.extend((score, math.inf, tokens) for score, tokens in alive)
    done.sort(key=lambda h: (h[0], h[1], h[2]))
    best_tokens = done[0][2]
    return [t for t in best_tokens if t not in (PAD, EOS)]
