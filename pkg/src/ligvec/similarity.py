"""Pairwise similarity: cosine over vectors, word-frequency over token
multisets, all-pairs matrix assembly, and Pearson correlation between two
similarity matrices."""

from __future__ import annotations

from collections import Counter
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from . import tokenizer
from .corpus_io import SimilarityMatrix


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Standard cosine similarity; zero-norm inputs are an error because a
    silent 0 would mask upstream coverage failures."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"vector lengths differ: {a.shape[0]} vs {b.shape[0]}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine similarity undefined for zero-norm vector")
    return float(np.dot(a, b) / (na * nb))


def word_frequency_similarity(counts_a: Mapping[str, int], counts_b: Mapping[str, int]) -> float:
    """Mean over the unique words of both multisets of
    1 - |N1 - N2| / (N1 + N2); 1.0 iff the multisets are identical."""
    if not counts_a and not counts_b:
        raise ValueError("both word multisets are empty")
    # sorted iteration keeps the sum independent of dict ordering, so the
    # score is exactly symmetric
    words = sorted(set(counts_a) | set(counts_b))
    total = 0.0
    for w in words:
        n1 = counts_a.get(w, 0)
        n2 = counts_b.get(w, 0)
        total += 1.0 - abs(n1 - n2) / (n1 + n2)
    return total / len(words)


def smiles_word_counts(smiles_list: Sequence[str], k: int = tokenizer.SMILES_WORD_LENGTH) -> Counter:
    """Pooled chemical-word multiset over all of a protein's ligands."""
    counts: Counter = Counter()
    for smiles in smiles_list:
        counts.update(tokenizer.smiles_words(smiles, k))
    return counts


def protein_word_counts(sequence: str) -> Counter:
    """Biological-word multiset over all three offset lists."""
    off0, off1, off2 = tokenizer.protein_words(sequence)
    return Counter(off0 + off1 + off2)


def smiles_word_frequency_similarity(
    ligands_a: Sequence[str], ligands_b: Sequence[str], k: int = tokenizer.SMILES_WORD_LENGTH
) -> float:
    """Word-frequency similarity between two proteins described by the
    pooled chemical words of their interacting ligands' SMILES."""
    if not ligands_a or not ligands_b:
        raise ValueError("each protein needs at least one ligand")
    return word_frequency_similarity(smiles_word_counts(ligands_a, k), smiles_word_counts(ligands_b, k))


def build_similarity_matrix(
    entities: Mapping[str, np.ndarray] | Mapping[str, Mapping[str, int]],
    method: str = "cosine",
    pairs: set[tuple[str, str]] | None = None,
) -> SimilarityMatrix:
    """Score all unordered pairs of entities (or only the supplied pair
    restriction).  method 'cosine' expects vectors, 'wordfreq' expects
    word-count multisets."""
    if method not in ("cosine", "wordfreq"):
        raise ValueError(f"unknown method {method!r}, expected 'cosine' or 'wordfreq'")
    ids = sorted(entities)
    if len(ids) < 2:
        raise ValueError(f"need >= 2 entities, got {len(ids)}")
    score = cosine if method == "cosine" else word_frequency_similarity
    scores: dict[tuple[str, str], float] = {}
    for a, b in combinations(ids, 2):
        if pairs is not None and (a, b) not in pairs:
            continue
        try:
            scores[(a, b)] = score(entities[a], entities[b])
        except ValueError as exc:
            raise ValueError(f"pair ({a}, {b}): {exc}") from exc
    return SimilarityMatrix(scores, orientation="similarity")


def common_pair_scores(
    a: SimilarityMatrix, b: SimilarityMatrix
) -> tuple[np.ndarray, np.ndarray, int, int]:
    """Aligned score vectors over the pairs present in both matrices, plus
    the counts of pairs exclusive to each side."""
    common = sorted(set(a.scores) & set(b.scores))
    va = np.array([a.scores[p] for p in common], dtype=np.float64)
    vb = np.array([b.scores[p] for p in common], dtype=np.float64)
    return va, vb, len(a.scores) - len(common), len(b.scores) - len(common)


def pearson(a: SimilarityMatrix, b: SimilarityMatrix) -> float:
    """Pearson correlation over the raw scores of the pairs shared by both
    matrices; pairs present in only one matrix are excluded."""
    va, vb, _, _ = common_pair_scores(a, b)
    if len(va) < 2:
        raise ValueError(f"need >= 2 common pairs, got {len(va)}")
    if np.ptp(va) == 0.0 or np.ptp(vb) == 0.0:
        raise ValueError("zero variance in aligned scores")
    return float(np.corrcoef(va, vb)[0, 1])
