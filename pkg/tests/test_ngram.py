import itertools
import math

import pytest

import oracles
from ettmt.errors import DataError
from ettmt.ngram import (
    CONTEXT_ETT,
    CONTEXT_ETT_ENG,
    EOS,
    PAD,
    NaiveBayesModel,
    NgramModel,
    align_pair,
    beam_translate,
    ngram_distribution,
    nb_posterior,
    train_naive_bayes,
    train_ngram,
    training_positions,
)


class TestAlignment:
    def test_left_padding_contexts(self):
        positions = list(training_positions(["e1", "e2"], ["g1", "g2"], 3, CONTEXT_ETT))
        assert positions[0] == ((PAD, PAD, "e1"), (), "g1")
        assert positions[1] == ((PAD, "e1", "e2"), (), "g2")
        # the end-of-sequence marker gets its own position
        assert positions[2] == (("e1", "e2", PAD), (), EOS)

    def test_n1_no_left_padding(self):
        src, targets = align_pair(["a", "b"], ["x", "y"], 1)
        assert src == ["a", "b", PAD]
        assert targets == ["x", "y", EOS]

    def test_short_english_pads_targets(self):
        _, targets = align_pair(["a", "b", "c", "d"], ["x"], 1)
        assert targets == ["x", EOS, PAD, PAD]

    def test_short_source_pads_source(self):
        src, targets = align_pair(["a"], ["x", "y", "z"], 2)
        assert src == [PAD, "a", PAD, PAD, PAD]
        assert targets == ["x", "y", "z", EOS]

    def test_english_history_slots(self):
        positions = list(training_positions(["e1", "e2"], ["g1", "g2"], 2, CONTEXT_ETT_ENG))
        assert positions[0] == ((PAD, "e1"), (PAD, PAD), "g1")
        assert positions[1] == (("e1", "e2"), (PAD, "g1"), "g2")


class TestTrainNgram:
    def test_single_pair_count(self):
        model = train_ngram([(["a"], ["x"])], n=1)
        assert model.counts[("a",)] == {"x": 1}

    def test_unordered_contexts_share_keys(self):
        pairs = [(["a", "b"], ["x", "y"]), (["b", "a"], ["x", "y"])]
        model = train_ngram(pairs, n=2, ordered=False)
        # both orderings of the source bigram land on the sorted key
        assert model.counts[("a", "b")]["y"] == 2

    def test_even_split_before_smoothing(self):
        model = train_ngram([(["a"], ["x"]), (["a"], ["y"])], n=1)
        bucket = model.counts[("a",)]
        assert bucket["x"] == bucket["y"] == 1

    def test_empty_training_set(self):
        with pytest.raises(DataError):
            train_ngram([], n=1)

    def test_serialization_roundtrip(self):
        model = train_ngram([(["a", "b"], ["x"]), (["b"], ["y", "z"])], n=2, ordered=False)
        again = NgramModel.from_dict(model.to_dict())
        assert again.counts == model.counts
        assert again.vocab == model.vocab
        ctx = ((PAD, "a"), ())
        assert again.distribution(*ctx) == model.distribution(*ctx)


class TestNgramDistribution:
    def test_unseen_context_uniform(self):
        model = train_ngram([(["a"], ["x"]), (["b"], ["y"])], n=1)
        dist = ngram_distribution(model, ("never-seen",))
        assert len(dist) == 4  # x, y, EOS, PAD
        for p in dist.values():
            assert p == pytest.approx(0.25)

    def test_smoothing_formula(self):
        model = train_ngram([(["a"], ["x"])], n=1, alpha=1.0)
        dist = ngram_distribution(model, ("a",))
        # V = {x, EOS, PAD}; count(x|a)=1, total(a)=1
        assert dist["x"] == pytest.approx(2 / 4)
        assert dist[EOS] == pytest.approx(1 / 4)
        assert dist[PAD] == pytest.approx(1 / 4)

    def test_sums_to_one_and_positive(self):
        pairs = [(["a", "b"], ["x"]), (["c"], ["y", "z", "w"]), (["a"], [])]
        for n, mode, ordered in itertools.product((1, 2, 3), (CONTEXT_ETT, CONTEXT_ETT_ENG), (True, False)):
            model = train_ngram(pairs, n=n, context_mode=mode, ordered=ordered)
            for src_slots, eng_slots, _ in training_positions(["a", "q"], ["x"], n, mode):
                dist = model.distribution(src_slots, eng_slots)
                assert sum(dist.values()) == pytest.approx(1.0, abs=1e-9)
                assert all(p > 0 for p in dist.values())

    def test_permutation_invariance_unordered(self):
        pairs = [(["a", "b", "c"], ["x", "y", "z"]), (["c", "b"], ["y", "x"])]
        model = train_ngram(pairs, n=3, ordered=False)
        base = ("a", "b", "c")
        expected = ngram_distribution(model, base)
        for perm in itertools.permutations(base):
            assert ngram_distribution(model, perm) == expected

    def test_arity_checked(self):
        model = train_ngram([(["a"], ["x"])], n=2)
        with pytest.raises(ValueError):
            ngram_distribution(model, ("a",))

    def test_unordered_keeps_english_slot_order(self):
        # only the source slots are canonicalized; the generated-English
        # history is inherently ordered
        pairs = [(["a", "b"], ["x", "y"]), (["b", "a"], ["y", "x"])]
        model = train_ngram(pairs, n=2, context_mode=CONTEXT_ETT_ENG, ordered=False)
        src = ("a", "b")
        assert model.distribution(("b", "a"), (PAD, "x")) == model.distribution(src, (PAD, "x"))
        assert model.distribution(src, ("x", PAD)) != model.distribution(src, (PAD, "x"))


class TestNaiveBayes:
    def test_posterior_argmax_single_pair(self):
        model = train_naive_bayes([(["a"], ["x"])], n=1)
        post = nb_posterior(model, ("a",))
        assert max(post, key=post.get) == "x"

    def test_posterior_sums_to_one(self):
        model = train_naive_bayes([(["a", "b"], ["x", "y"]), (["b"], ["z"])], n=2)
        post = nb_posterior(model, ("a", "b"))
        assert sum(post.values()) == pytest.approx(1.0, abs=1e-9)

    def test_symmetry(self):
        model = train_naive_bayes([(["a"], ["x"]), (["a"], ["y"])], n=1)
        post = nb_posterior(model, ("a",))
        assert post["x"] == pytest.approx(post["y"], abs=1e-12)

    def test_log_space_matches_direct_space(self):
        pairs = [(["a", "b"], ["x", "y"]), (["b", "c"], ["y"]), (["a"], ["z"])]
        model = train_naive_bayes(pairs, n=2, context_mode=CONTEXT_ETT_ENG)
        prior = model.prior()
        conditionals = [
            {t: {v: model.slot_likelihood(slot, t, v) for v in model.slot_vocabs[slot]} for t in model.vocab}
            for slot in range(len(model.slot_vocabs))
        ]
        context = ("a", "b", PAD, "x")
        direct = oracles.oracle_factored_posterior(prior, conditionals, context)
        log_space = nb_posterior(model, ("a", "b"), (PAD, "x"))
        for target in model.vocab:
            assert log_space[target] == pytest.approx(direct[target], abs=1e-9)

    def test_prior_scaling_keeps_argmax(self):
        # multiplying every prior by a constant cancels in the normalization
        pairs = [(["a"], ["x"]), (["a"], ["x"]), (["a"], ["y"])]
        model = train_naive_bayes(pairs, n=1)
        post = nb_posterior(model, ("a",))
        prior = model.prior()
        scaled = {t: 7.5 * p for t, p in prior.items()}
        scores = {
            t: scaled[t] * model.slot_likelihood(0, t, "a") for t in model.vocab
        }
        assert max(scores, key=scores.get) == max(post, key=post.get)

    def test_conditionals_sum_to_one(self):
        model = train_naive_bayes([(["a", "b"], ["x"]), (["c"], ["y", "z"])], n=2)
        for slot, vocab in enumerate(model.slot_vocabs):
            for target in model.vocab:
                total = sum(model.slot_likelihood(slot, target, v) for v in vocab)
                assert total == pytest.approx(1.0, abs=1e-9)

    def test_serialization_roundtrip(self):
        model = train_naive_bayes([(["a", "b"], ["x", "y"])], n=2, context_mode=CONTEXT_ETT_ENG)
        again = NaiveBayesModel.from_dict(model.to_dict())
        ctx = (("a", "b"), (PAD, "x"))
        assert again.distribution(*ctx) == pytest.approx(model.distribution(*ctx))


class TestBeamTranslate:
    def test_copy_corpus(self):
        model = train_ngram([(["a"], ["x"]), (["b"], ["y"])], n=1)
        assert beam_translate(model, ["a", "b"]) == ["x", "y"]

    def test_beam_width_irrelevant_with_source_only_context(self):
        pairs = [(["a", "b", "c"], ["x", "y"]), (["b", "a"], ["z"]), (["c", "c"], ["x", "w"])]
        for n in (1, 2):
            model = train_ngram(pairs, n=n)
            for source in (["a", "b"], ["c", "a", "b"], ["q"], []):
                assert beam_translate(model, source, beams=1) == beam_translate(model, source, beams=8)

    def test_source_only_output_covers_every_position(self):
        model = train_ngram([(["a", "b", "c"], ["x"])], n=1)
        # EOS and PAD wins at padded positions are dropped, never truncating
        out = beam_translate(model, ["a", "b", "c"])
        assert len(out) <= 3

    def test_eos_dominant_model_yields_empty(self):
        pairs = [(["a"], []), (["b"], []), (["c", "d"], [])]
        model = train_ngram(pairs, n=1, context_mode=CONTEXT_ETT_ENG)
        assert beam_translate(model, ["a", "b"], beams=8) == []

    def test_invalid_beams(self):
        model = train_ngram([(["a"], ["x"])], n=1)
        with pytest.raises(ValueError):
            beam_translate(model, ["a"], beams=0)

    def test_training_set_reproduced_exactly(self):
        pairs = [([f"s{i}", f"t{i}"], [f"u{i}", f"v{i}"]) for i in range(30)]
        model = train_ngram(pairs, n=1)
        for src, ref in pairs:
            assert beam_translate(model, src) == ref

    def test_naive_bayes_decodes(self):
        pairs = [(["a"], ["x"]), (["b"], ["y"])]
        model = train_naive_bayes(pairs, n=1)
        assert beam_translate(model, ["a"], beams=2) == ["x"]

    def test_max_len_caps_positions(self):
        model = train_ngram([(["a", "b"], ["x", "y"])], n=1)
        assert beam_translate(model, ["a", "b"], max_len=1) == ["x"]

    def _exhaustive_best(self, model, source):
        """Enumerate every emission sequence and score it exactly.

        Mirrors the decoder contract: at most len(source) positions, EOS may
        end the sequence early (its emission cost counts), PAD emissions stay
        in the history but not the output. Ties prefer earlier EOS, then the
        lexicographically smaller sequence.
        """
        n = model.n
        padded = [PAD] * (n - 1) + list(source)
        candidates = []

        def walk(pos, emitted, cost):
            src_slots = tuple(padded[pos : pos + n])
            history = tuple(([PAD] * n + list(emitted))[-n:])
            dist = model.distribution(src_slots, history)
            for tok, p in dist.items():
                step = cost - math.log(p)
                if tok == EOS:
                    candidates.append((step, float(pos), emitted))
                elif pos + 1 == len(source):
                    candidates.append((step, math.inf, emitted + (tok,)))
                else:
                    walk(pos + 1, emitted + (tok,), step)

        if source:
            walk(0, (), 0.0)
        else:
            candidates.append((0.0, math.inf, ()))
        candidates.sort(key=lambda c: (c[0], c[1], c[2]))
        return [t for t in candidates[0][2] if t not in (PAD, EOS)]

    def test_beam_matches_exhaustive_search(self):
        pairs = [(["a", "b"], ["x", "y"]), (["b", "c"], ["y"]), (["a"], ["z", "x"])]
        model = train_ngram(pairs, n=1, context_mode=CONTEXT_ETT_ENG)
        nb = train_naive_bayes(pairs, n=1, context_mode=CONTEXT_ETT_ENG)
        wide = 10 ** 4  # larger than the whole search space
        for source in (["a"], ["a", "b"], ["c", "a", "b"], ["q", "q"]):
            for m in (model, nb):
                assert beam_translate(m, source, beams=wide) == self._exhaustive_best(m, source)

    def test_narrow_beam_is_no_better_than_wide(self):
        pairs = [(["a", "b"], ["x", "y"]), (["b", "a"], ["y", "z"]), (["a", "a"], ["z"])]
        model = train_ngram(pairs, n=2, context_mode=CONTEXT_ETT_ENG)

        def cost(tokens, source):
            # replay the emissions through the model to score a full path
            padded = [PAD] * (model.n - 1) + list(source)
            total = 0.0
            emitted = []
            for pos, tok in enumerate(tokens):
                src_slots = tuple(padded[pos : pos + model.n])
                history = tuple(([PAD] * model.n + emitted)[-model.n :])
                total -= math.log(model.distribution(src_slots, history)[tok])
                emitted.append(tok)
            return total

        source = ["a", "b"]
        narrow = beam_translate(model, source, beams=1)
        wide = beam_translate(model, source, beams=64)
        # the wide beam's winner never scores worse than the greedy one when
        # both run the full length (no early EOS in this construction)
        if len(narrow) == len(wide) == len(source):
            assert cost(wide, source) <= cost(narrow, source) + 1e-12
