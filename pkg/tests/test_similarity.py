"""Similarity tests: hand-evaluated oracle values, an independent multiset
oracle for the pooled-ligand word similarity, and the standard invariance
properties."""

import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ligvec import similarity as sim
from ligvec.corpus_io import SimilarityMatrix
from ligvec.tokenizer import smiles_words

nonzero_vecs = st.integers(min_value=2, max_value=6).flatmap(
    lambda d: st.tuples(
        st.lists(st.floats(-100, 100, allow_nan=False, width=32), min_size=d, max_size=d),
        st.lists(st.floats(-100, 100, allow_nan=False, width=32), min_size=d, max_size=d),
    )
).filter(lambda ab: np.linalg.norm(ab[0]) > 1e-3 and np.linalg.norm(ab[1]) > 1e-3)


def wordfreq_oracle(counts_a, counts_b):
    """Independent implementation: iterate the union explicitly."""
    words = sorted(set(counts_a) | set(counts_b))
    acc = 0.0
    for w in words:
        n1, n2 = counts_a.get(w, 0), counts_b.get(w, 0)
        acc += 1 - abs(n1 - n2) / (n1 + n2)
    return acc / len(words)


class TestCosine:
    def test_identity(self):
        assert sim.cosine([1, 0], [1, 0]) == 1.0

    def test_orthogonal(self):
        assert sim.cosine([1, 0], [0, 1]) == 0.0

    def test_hand_value(self):
        assert sim.cosine([1, 1], [1, 0]) == pytest.approx(1 / math.sqrt(2), abs=1e-15)

    def test_zero_norm_rejected(self):
        with pytest.raises(ValueError, match="zero-norm"):
            sim.cosine([0, 0], [1, 0])

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="lengths"):
            sim.cosine([1, 0], [1, 0, 0])

    @given(nonzero_vecs)
    def test_symmetry_and_bounds(self, ab):
        a, b = ab
        s = sim.cosine(a, b)
        assert sim.cosine(b, a) == s
        assert -1.0 - 1e-12 <= s <= 1.0 + 1e-12

    @given(nonzero_vecs, st.floats(0.01, 100), st.floats(0.01, 100))
    def test_scale_invariance(self, ab, alpha, beta):
        a, b = np.array(ab[0]), np.array(ab[1])
        assert sim.cosine(alpha * a, beta * b) == pytest.approx(sim.cosine(a, b), abs=1e-9)


class TestWordFrequencySimilarity:
    def test_identical_multisets(self):
        c = Counter({"AAA": 2, "AAB": 1})
        assert sim.word_frequency_similarity(c, c) == 1.0

    def test_disjoint_vocabularies(self):
        assert sim.word_frequency_similarity(Counter({"AAA": 1}), Counter({"BBB": 2})) == 0.0

    def test_hand_value(self):
        a = Counter({"AAA": 2, "AAB": 1})
        b = Counter({"AAA": 1})
        assert sim.word_frequency_similarity(a, b) == pytest.approx((2 / 3 + 0) / 2, abs=1e-15)

    def test_both_empty_rejected(self):
        with pytest.raises(ValueError):
            sim.word_frequency_similarity(Counter(), Counter())

    @given(
        st.dictionaries(st.sampled_from(["u", "v", "w", "x"]), st.integers(1, 9), max_size=4),
        st.dictionaries(st.sampled_from(["u", "v", "w", "x"]), st.integers(1, 9), max_size=4),
    )
    def test_symmetry_bounds_and_identity_condition(self, a, b):
        if not a and not b:
            return
        s = sim.word_frequency_similarity(a, b)
        assert sim.word_frequency_similarity(b, a) == s
        assert 0.0 <= s <= 1.0
        assert (s == 1.0) == (a == b)

    @given(
        st.dictionaries(st.sampled_from(["u", "v", "w"]), st.integers(1, 5), min_size=1, max_size=3),
        st.dictionaries(st.sampled_from(["u", "v", "w"]), st.integers(1, 5), max_size=3),
    )
    def test_matches_independent_oracle(self, a, b):
        assert sim.word_frequency_similarity(a, b) == pytest.approx(wordfreq_oracle(a, b), abs=1e-15)


class TestSmilesWordFrequency:
    def test_identical_single_ligand(self):
        assert sim.smiles_word_frequency_similarity(["CCOCCNCCO"], ["CCOCCNCCO"]) == 1.0

    def test_no_shared_words(self):
        assert sim.smiles_word_frequency_similarity(["CCCCCCCC"], ["NNNNNNNN"]) == 0.0

    def test_matches_multiset_oracle(self):
        shared = "CCOCCNCCOCC"
        a = [shared, "CCCCCCCCCC"]
        b = [shared, "OCCNOCCNOCCN"]
        expected = wordfreq_oracle(
            Counter(smiles_words(a[0]) + smiles_words(a[1])),
            Counter(smiles_words(b[0]) + smiles_words(b[1])),
        )
        assert sim.smiles_word_frequency_similarity(a, b) == pytest.approx(expected, abs=1e-15)

    def test_ligandless_protein_rejected(self):
        with pytest.raises(ValueError, match="ligand"):
            sim.smiles_word_frequency_similarity([], ["CCO"])


class TestBuildSimilarityMatrix:
    def test_three_entities_three_pairs(self):
        vecs = {"a": [1.0, 0.0], "b": [0.0, 1.0], "c": [1.0, 1.0]}
        m = sim.build_similarity_matrix(vecs, method="cosine")
        assert len(m.scores) == 3

    def test_pair_count(self):
        rng = np.random.default_rng(1)
        vecs = {f"e{i}": rng.normal(size=4) for i in range(7)}
        m = sim.build_similarity_matrix(vecs)
        assert len(m.scores) == 7 * 6 // 2

    def test_permuted_input_equal(self):
        rng = np.random.default_rng(2)
        vecs = {f"e{i}": rng.normal(size=4) for i in range(5)}
        permuted = dict(reversed(list(vecs.items())))
        assert sim.build_similarity_matrix(vecs) == sim.build_similarity_matrix(permuted)

    def test_pair_restriction(self):
        vecs = {"a": [1.0], "b": [2.0], "c": [3.0]}
        m = sim.build_similarity_matrix(vecs, pairs={("a", "b")})
        assert set(m.scores) == {("a", "b")}

    def test_error_names_pair(self):
        vecs = {"a": [1.0, 0.0], "b": [0.0, 0.0]}
        with pytest.raises(ValueError, match=r"\(a, b\)"):
            sim.build_similarity_matrix(vecs)

    def test_wordfreq_method(self):
        counts = {"a": Counter({"w": 1}), "b": Counter({"w": 1}), "c": Counter({"z": 1})}
        m = sim.build_similarity_matrix(counts, method="wordfreq")
        assert m.scores[("a", "b")] == 1.0
        assert m.scores[("a", "c")] == 0.0

    def test_single_entity_rejected(self):
        with pytest.raises(ValueError, match=">= 2"):
            sim.build_similarity_matrix({"a": [1.0]})


class TestPearson:
    def matrix(self, scores):
        return SimilarityMatrix(dict(scores))

    def test_self_correlation(self):
        m = self.matrix({("a", "b"): 0.1, ("a", "c"): 0.5, ("b", "c"): 0.9})
        assert sim.pearson(m, m) == pytest.approx(1.0, abs=1e-12)

    def test_negation(self):
        m = self.matrix({("a", "b"): 0.1, ("a", "c"): 0.5, ("b", "c"): 0.9})
        neg = self.matrix({p: -s for p, s in m.scores.items()})
        assert sim.pearson(m, neg) == pytest.approx(-1.0, abs=1e-12)

    def test_affine_invariance(self):
        a = self.matrix({("a", "b"): 1.0, ("a", "c"): 2.0, ("b", "c"): 3.0})
        b = self.matrix({("a", "b"): 2.0, ("a", "c"): 4.0, ("b", "c"): 6.0})
        assert sim.pearson(a, b) == pytest.approx(1.0, abs=1e-12)

    def test_uncommon_pairs_excluded(self):
        a = self.matrix({("a", "b"): 1.0, ("a", "c"): 2.0, ("b", "c"): 3.0, ("a", "d"): 9.0})
        b = self.matrix({("a", "b"): 1.0, ("a", "c"): 2.0, ("b", "c"): 3.0, ("c", "d"): -9.0})
        va, vb, only_a, only_b = sim.common_pair_scores(a, b)
        assert len(va) == 3 and only_a == 1 and only_b == 1
        assert sim.pearson(a, b) == pytest.approx(1.0, abs=1e-12)

    def test_too_few_common_pairs(self):
        a = self.matrix({("a", "b"): 1.0})
        b = self.matrix({("a", "b"): 1.0})
        with pytest.raises(ValueError, match="common pairs"):
            sim.pearson(a, b)

    def test_zero_variance(self):
        a = self.matrix({("a", "b"): 1.0, ("a", "c"): 1.0})
        b = self.matrix({("a", "b"): 1.0, ("a", "c"): 2.0})
        with pytest.raises(ValueError, match="variance"):
            sim.pearson(a, b)
