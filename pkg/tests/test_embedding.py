"""Skip-gram training tests.

The pair loss gradient is checked against central finite differences, and
training quality is asserted on a synthetic two-topic corpus where
within-topic words co-occur and cross-topic words never do.
"""

import numpy as np
import pytest

from ligvec import corpus_io, embedding
from ligvec.embedding import TrainConfig, build_vocab, pair_gradients, pair_loss, train


def two_topic_corpus(n_sentences=2000, seed=5):
    """Sentences over {a1,a2,a3} or {b1,b2,b3}; topics never mix."""
    rng = np.random.default_rng(seed)
    topics = [["a1", "a2", "a3"], ["b1", "b2", "b3"]]
    corpus = []
    for i in range(n_sentences):
        words = topics[i % 2]
        corpus.append([words[j] for j in rng.integers(0, 3, size=6)])
    return corpus


def mean_cosines(model):
    """(mean within-topic cosine, mean cross-topic cosine)."""
    def cos(u, v):
        return float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))

    a = [model.lookup(w) for w in ("a1", "a2", "a3")]
    b = [model.lookup(w) for w in ("b1", "b2", "b3")]
    within = [cos(x, y) for grp in (a, b) for i, x in enumerate(grp) for y in grp[i + 1 :]]
    cross = [cos(x, y) for x in a for y in b]
    return np.mean(within), np.mean(cross)


class TestBuildVocab:
    def test_counts_and_order(self):
        vocab = build_vocab([["a", "b", "a"]], min_count=1)
        assert vocab.counts == {"a": 2, "b": 1}
        assert vocab.index == {"a": 0, "b": 1}

    def test_min_count_filter(self):
        vocab = build_vocab([["a", "b", "a"]], min_count=2)
        assert list(vocab.counts) == ["a"]

    def test_empty_after_filter(self):
        with pytest.raises(ValueError, match="empty"):
            build_vocab([["a", "b", "a"]], min_count=3)

    def test_ties_lexicographic(self):
        vocab = build_vocab([["z", "y", "x", "x"]], min_count=1)
        assert vocab.words == ["x", "y", "z"]

    def test_empty_corpus(self):
        with pytest.raises(ValueError):
            build_vocab([], min_count=1)


class TestPairGradients:
    def test_matches_central_finite_differences(self):
        rng = np.random.default_rng(42)
        h = 1e-5
        for _ in range(12):
            d = int(rng.integers(3, 12))
            center = rng.normal(size=d)
            context = rng.normal(size=d)
            negs = rng.normal(size=(int(rng.integers(1, 6)), d))
            g_center, g_context, g_negs = pair_gradients(center, context, negs)

            def fd(param, grad, setter):
                flat_param = param.reshape(-1)
                flat_grad = grad.reshape(-1)
                for idx in range(flat_param.size):
                    orig = flat_param[idx]
                    flat_param[idx] = orig + h
                    up = pair_loss(center, context, negs)
                    flat_param[idx] = orig - h
                    down = pair_loss(center, context, negs)
                    flat_param[idx] = orig
                    numeric = (up - down) / (2 * h)
                    denom = max(abs(numeric), abs(flat_grad[idx]), 1e-8)
                    assert abs(numeric - flat_grad[idx]) / denom < 1e-4

            fd(center, g_center, None)
            fd(context, g_context, None)
            fd(negs, g_negs, None)

    def test_loss_positive(self):
        rng = np.random.default_rng(0)
        loss = pair_loss(rng.normal(size=5), rng.normal(size=5), rng.normal(size=(3, 5)))
        assert loss > 0.0


class TestTraining:
    def test_two_topic_separation(self):
        corpus = two_topic_corpus()
        cfg = TrainConfig(dimension=32, window=2, negatives=5, epochs=5, seed=7)
        model = train(corpus, cfg)
        within, cross = mean_cosines(model)
        assert within > cross

    def test_deterministic_model_files(self, tmp_path):
        corpus = two_topic_corpus(n_sentences=200)
        cfg = TrainConfig(dimension=16, window=2, epochs=2, seed=7, workers=1)
        p1, p2 = tmp_path / "m1.txt", tmp_path / "m2.txt"
        corpus_io.save_model(p1, train(corpus, cfg))
        corpus_io.save_model(p2, train(corpus, cfg))
        assert p1.read_bytes() == p2.read_bytes()

    def test_eval_loss_decreases_over_first_epoch(self):
        corpus = two_topic_corpus(n_sentences=400)
        cfg = TrainConfig(dimension=16, window=2, epochs=2, seed=3)
        model = train(corpus, cfg)
        losses = model.metadata["eval_losses"]
        assert len(losses) == cfg.epochs + 1
        assert losses[1] < losses[0]

    def test_all_entries_finite(self):
        model = train(two_topic_corpus(n_sentences=300), TrainConfig(dimension=8, epochs=2, seed=1))
        assert np.all(np.isfinite(model.vectors))

    def test_vocab_invariant_to_worker_count(self):
        corpus = two_topic_corpus(n_sentences=100)
        cfg1 = TrainConfig(dimension=8, epochs=1, seed=7, workers=1)
        cfg2 = TrainConfig(dimension=8, epochs=1, seed=7, workers=3)
        m1, m2 = train(corpus, cfg1), train(corpus, cfg2)
        assert m1.vocab == m2.vocab
        assert m1.vectors.shape == m2.vectors.shape
        assert np.all(np.isfinite(m2.vectors))

    def test_invalid_config_rejected(self):
        for bad in (
            TrainConfig(dimension=0),
            TrainConfig(window=0),
            TrainConfig(negatives=0),
            TrainConfig(epochs=0),
            TrainConfig(learning_rate=0.0),
        ):
            with pytest.raises(ValueError):
                train([["a", "b"]], bad)

    def test_subsampling_runs(self):
        model = train(
            two_topic_corpus(n_sentences=200),
            TrainConfig(dimension=8, epochs=1, seed=2, subsample=1e-3),
        )
        assert np.all(np.isfinite(model.vectors))

    def test_metadata_records_settings(self):
        cfg = TrainConfig(dimension=8, window=3, epochs=1, seed=9)
        model = train(two_topic_corpus(n_sentences=50), cfg, metadata={"token_kind": "smiles_word"})
        assert model.metadata["window"] == 3
        assert model.metadata["token_kind"] == "smiles_word"


class TestLookup:
    def test_present_and_absent(self):
        model = train(two_topic_corpus(n_sentences=50), TrainConfig(dimension=8, epochs=1, seed=4))
        assert embedding.lookup(model, "a1") is not None
        assert embedding.lookup(model, "zz") is None

    def test_lookup_survives_round_trip(self, tmp_path):
        model = train(two_topic_corpus(n_sentences=50), TrainConfig(dimension=8, epochs=1, seed=4))
        path = tmp_path / "m.txt"
        corpus_io.save_model(path, model)
        loaded = corpus_io.load_model(path)
        assert np.array_equal(embedding.lookup(loaded, "a1"), embedding.lookup(model, "a1"))
