"""Skip-gram word embeddings trained with negative sampling.

For a positive center/context pair (w, c) and negative words n the model
maximizes

    log sigmoid(u_c . v_w) + sum_n log sigmoid(-u_n . v_w)

by stochastic gradient ascent, where v are the input vectors (the
published embeddings) and u the output vectors.  Negatives are drawn from
the unigram distribution raised to the 3/4 power.

Training is deterministic given (seed, workers=1): sentences are visited
in corpus order and every random draw comes from one seeded generator.
With workers > 1 the sentence shards update shared arrays without
synchronization, which is fast but nondeterministic.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np

from .corpus_io import EmbeddingModel

# pairs sampled for the fixed evaluation batch used by loss diagnostics
EVAL_BATCH_SIZE = 512


@dataclass(frozen=True)
class TrainConfig:
    dimension: int = 100
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    min_count: int = 1
    subsample: float = 0.0  # 0 disables frequent-token downsampling
    seed: int = 1
    workers: int = 1

    def validate(self) -> None:
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if self.window < 1:
            raise ValueError(f"window must be >= 1, got {self.window}")
        if self.negatives < 1:
            raise ValueError(f"negatives must be >= 1, got {self.negatives}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning rate must be > 0, got {self.learning_rate}")
        if self.min_count < 1:
            raise ValueError(f"min_count must be >= 1, got {self.min_count}")
        if self.subsample < 0:
            raise ValueError(f"subsample must be >= 0, got {self.subsample}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


@dataclass
class Vocabulary:
    """Token -> index with unigram counts; index order is descending count,
    ties broken lexicographically."""

    words: list[str]
    counts: dict[str, int]
    index: dict[str, int] = field(init=False)

    def __post_init__(self):
        self.index = {w: i for i, w in enumerate(self.words)}

    def __len__(self) -> int:
        return len(self.words)


def build_vocab(corpus: list[list[str]], min_count: int = 1) -> Vocabulary:
    """Count tokens over all sentences and keep those with count >= min_count."""
    if not corpus:
        raise ValueError("empty corpus")
    counts: dict[str, int] = {}
    for sentence in corpus:
        for tok in sentence:
            counts[tok] = counts.get(tok, 0) + 1
    kept = {w: c for w, c in counts.items() if c >= min_count}
    if not kept:
        raise ValueError(f"vocabulary empty after min_count={min_count} filtering")
    words = sorted(kept, key=lambda w: (-kept[w], w))
    return Vocabulary(words, kept)


def _log_sigmoid(x: np.ndarray | float) -> np.ndarray | float:
    # log(1/(1+exp(-x))) computed without overflow
    return -np.logaddexp(0.0, -x)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(x, -60.0, 60.0)))


def pair_loss(center: np.ndarray, context: np.ndarray, negatives: np.ndarray) -> float:
    """Negative-sampling loss of one positive pair with its negatives:
    -log sigmoid(u_c . v_w) - sum_n log sigmoid(-u_n . v_w)."""
    s_pos = float(np.dot(context, center))
    s_neg = negatives @ center
    return float(-_log_sigmoid(s_pos) - np.sum(_log_sigmoid(-s_neg)))


def pair_gradients(
    center: np.ndarray, context: np.ndarray, negatives: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Analytic gradients of pair_loss wrt (center, context, negatives)."""
    s_pos = float(np.dot(context, center))
    s_neg = negatives @ center
    sig_pos = float(_sigmoid(np.array(s_pos)))
    sig_neg = _sigmoid(s_neg)
    g_center = -(1.0 - sig_pos) * context + sig_neg @ negatives
    g_context = -(1.0 - sig_pos) * center
    g_negatives = np.outer(sig_neg, center)
    return g_center, g_context, g_negatives


def _noise_cdf(vocab: Vocabulary) -> np.ndarray:
    """Cumulative unigram^(3/4) distribution over vocabulary indices."""
    freqs = np.array([vocab.counts[w] for w in vocab.words], dtype=np.float64)
    weights = freqs**0.75
    return np.cumsum(weights / weights.sum())


def _keep_probabilities(vocab: Vocabulary, subsample: float) -> np.ndarray | None:
    """Per-word retention probability for frequent-token downsampling."""
    if subsample <= 0:
        return None
    total = sum(vocab.counts.values())
    counts = np.array([vocab.counts[w] for w in vocab.words], dtype=np.float64)
    ratio = subsample * total / counts
    return np.minimum(1.0, np.sqrt(ratio) + ratio)


class _Trainer:
    """Shared state for one training run; worker threads update the
    vector arrays without locks."""

    def __init__(self, corpus: list[list[str]], config: TrainConfig):
        config.validate()
        self.config = config
        self.vocab = build_vocab(corpus, config.min_count)
        self.sentences = [
            idx
            for idx in ([self.vocab.index[t] for t in sent if t in self.vocab.index] for sent in corpus)
            if idx
        ]
        if not self.sentences:
            raise ValueError("no in-vocabulary sentences to train on")
        rng = np.random.default_rng(config.seed)
        n, d = len(self.vocab), config.dimension
        # word2vec-style init: small uniform input vectors, zero outputs
        self.vec_in = (rng.random((n, d)) - 0.5) / d
        self.vec_out = np.zeros((n, d))
        self.cdf = _noise_cdf(self.vocab)
        self.keep = _keep_probabilities(self.vocab, config.subsample)
        self.total_tokens = sum(len(s) for s in self.sentences) * config.epochs
        self.tokens_done = 0
        self.lr_floor = config.learning_rate * 1e-4
        self.eval_batch = self._build_eval_batch(rng)
        self.eval_losses: list[float] = []

    def _build_eval_batch(self, rng: np.random.Generator) -> list[tuple[int, int, np.ndarray]]:
        """Fixed (center, context, negatives) triples for loss diagnostics."""
        pairs = []
        w = self.config.window
        for sent in self.sentences:
            for i, center in enumerate(sent):
                for j in range(max(0, i - w), min(len(sent), i + w + 1)):
                    if j != i:
                        pairs.append((center, sent[j]))
            if len(pairs) >= EVAL_BATCH_SIZE:
                break
        pairs = pairs[:EVAL_BATCH_SIZE]
        return [
            (w_, c_, np.searchsorted(self.cdf, rng.random(self.config.negatives)))
            for w_, c_ in pairs
        ]

    def eval_loss(self) -> float:
        """Mean pair loss over the fixed evaluation batch."""
        total = 0.0
        for w_, c_, negs in self.eval_batch:
            total += pair_loss(self.vec_in[w_], self.vec_out[c_], self.vec_out[negs])
        return total / len(self.eval_batch)

    def _train_sentence(self, sent: list[int], rng: np.random.Generator, alpha: float) -> None:
        cfg = self.config
        vec_in, vec_out = self.vec_in, self.vec_out
        if self.keep is not None:
            sent = [t for t in sent if rng.random() < self.keep[t]]
        for i, center in enumerate(sent):
            lo = max(0, i - cfg.window)
            hi = min(len(sent), i + cfg.window + 1)
            for j in range(lo, hi):
                if j == i:
                    continue
                context = sent[j]
                negs = np.searchsorted(self.cdf, rng.random(cfg.negatives))
                negs = negs[negs != context]
                rows = np.concatenate(([context], negs))
                u = vec_out[rows]
                v = vec_in[center]
                sig = _sigmoid(u @ v)
                g = -sig * alpha
                g[0] += alpha  # positive label
                if len(np.unique(rows)) == len(rows):
                    vec_out[rows] += np.outer(g, v)
                else:
                    np.add.at(vec_out, rows, np.outer(g, v))
                vec_in[center] = v + g @ u

    def run(self) -> None:
        cfg = self.config
        self.eval_losses.append(self.eval_loss())
        for epoch in range(cfg.epochs):
            if cfg.workers == 1:
                rng = np.random.default_rng((cfg.seed, epoch))
                for sent in self.sentences:
                    alpha = max(
                        self.lr_floor,
                        cfg.learning_rate * (1.0 - self.tokens_done / self.total_tokens),
                    )
                    self._train_sentence(sent, rng, alpha)
                    self.tokens_done += len(sent)
            else:
                self._run_epoch_threaded(epoch)
            self.eval_losses.append(self.eval_loss())

    def _run_epoch_threaded(self, epoch: int) -> None:
        cfg = self.config
        shards = [self.sentences[k :: cfg.workers] for k in range(cfg.workers)]

        def work(worker_id: int) -> None:
            rng = np.random.default_rng((cfg.seed, epoch, worker_id))
            for sent in shards[worker_id]:
                alpha = max(
                    self.lr_floor,
                    cfg.learning_rate * (1.0 - self.tokens_done / self.total_tokens),
                )
                self._train_sentence(sent, rng, alpha)
                self.tokens_done += len(sent)  # racy, only used for decay

        threads = [threading.Thread(target=work, args=(k,)) for k in range(cfg.workers)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()


def train(
    corpus: list[list[str]], config: TrainConfig | None = None, metadata: dict | None = None
) -> EmbeddingModel:
    """Train skip-gram embeddings over tokenized sentences.

    Returns an EmbeddingModel whose vectors are the input vectors.  The
    model metadata records the effective settings plus per-epoch losses on
    a fixed evaluation batch ('eval_losses', length epochs + 1).
    """
    config = config or TrainConfig()
    trainer = _Trainer(corpus, config)
    trainer.run()
    meta = {
        "dimension": config.dimension,
        "window": config.window,
        "negatives": config.negatives,
        "epochs": config.epochs,
        "learning_rate": config.learning_rate,
        "min_count": config.min_count,
        "subsample": config.subsample,
        "seed": config.seed,
        "workers": config.workers,
        "eval_losses": trainer.eval_losses,
    }
    if metadata:
        meta.update(metadata)
    return EmbeddingModel(config.dimension, dict(trainer.vocab.index), trainer.vec_in, meta)


def lookup(model: EmbeddingModel, word: str) -> np.ndarray | None:
    """Exact-match vector lookup; None for out-of-vocabulary words."""
    return model.lookup(word)
