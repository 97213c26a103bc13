"""Pool token vectors into ligand and protein vectors.

A ligand vector is the mean of the embedding vectors of its chemical words
(or characters).  A protein vector is either the mean of its biological-word
(or residue) vectors, the mean of its interacting ligands' vectors, or the
mean of those ligands' fingerprint bit vectors.  Min/max pooling
concatenates per-feature minima and maxima and is supported for
sequence-derived protein vectors only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import tokenizer
from .corpus_io import EmbeddingModel

POOLINGS = ("average", "minmax")
PROVENANCES = (
    "protvec_word",
    "protvec_char",
    "smilesvec_word",
    "smilesvec_char",
    "ligand_avg",
    "fingerprint_avg",
)


class NoCoverageError(ValueError):
    """Every token of the entity is out of vocabulary."""


@dataclass
class EntityVector:
    """A pooled dense vector for one ligand or protein."""

    id: str
    values: np.ndarray
    provenance: str
    pooling: str = "average"
    oov_count: int = 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if self.pooling not in POOLINGS:
            raise ValueError(f"unknown pooling {self.pooling!r}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError(f"entity {self.id!r}: non-finite vector entries")


def _stack(vectors: Sequence[np.ndarray] | Iterable[np.ndarray]) -> np.ndarray:
    vectors = [np.asarray(v, dtype=np.float64) for v in vectors]
    if not vectors:
        raise ValueError("empty vector list")
    lengths = {v.shape for v in vectors}
    if len(lengths) > 1:
        raise ValueError(f"mixed vector lengths: {sorted(l[0] for l in lengths)}")
    return np.stack(vectors)


def avg_pool(vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Elementwise arithmetic mean of same-length vectors.

    Each feature is summed with math.fsum, so the result is exactly
    invariant under permutations of the input list.
    """
    stacked = _stack(vectors)
    n, d = stacked.shape
    return np.array([math.fsum(stacked[:, j]) for j in range(d)]) / n


def minmax_pool(vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Per-feature minima followed by per-feature maxima, concatenated;
    output has twice the input dimensionality."""
    stacked = _stack(vectors)
    return np.concatenate([stacked.min(axis=0), stacked.max(axis=0)])


def _check_model_kind(model: EmbeddingModel, kind: str) -> None:
    model_kind = model.metadata.get("token_kind")
    if model_kind is not None and model_kind != kind:
        raise ValueError(f"model was trained on {model_kind!r} tokens, requested {kind!r}")


def _pool_tokens(
    tokens: list[str], model: EmbeddingModel, pooling: str, entity: str
) -> tuple[np.ndarray, int]:
    """Look up tokens, drop out-of-vocabulary ones, pool the rest."""
    found = []
    oov = 0
    for tok in tokens:
        vec = model.lookup(tok)
        if vec is None:
            oov += 1
        else:
            found.append(vec)
    if not found:
        raise NoCoverageError(f"{entity}: all {len(tokens)} tokens out of vocabulary")
    pooled = avg_pool(found) if pooling == "average" else minmax_pool(found)
    return pooled, oov


def ligand_vector(
    smiles: str,
    model: EmbeddingModel,
    kind: str = "word",
    k: int = tokenizer.SMILES_WORD_LENGTH,
    ligand_id: str | None = None,
) -> EntityVector:
    """Mean of the ligand's chemical-word (kind='word') or character
    (kind='char') vectors; out-of-vocabulary tokens are dropped from the
    mean and counted."""
    if kind not in ("word", "char"):
        raise ValueError(f"kind must be 'word' or 'char', got {kind!r}")
    _check_model_kind(model, f"smiles_{kind}")
    tokens = tokenizer.smiles_words(smiles, k) if kind == "word" else tokenizer.smiles_chars(smiles)
    eid = ligand_id if ligand_id is not None else smiles
    values, oov = _pool_tokens(tokens, model, "average", f"ligand {eid!r}")
    return EntityVector(eid, values, f"smilesvec_{kind}", "average", oov)


def protein_vector_from_sequence(
    sequence: str,
    model: EmbeddingModel,
    kind: str = "word",
    pooling: str = "average",
    protein_id: str | None = None,
) -> EntityVector:
    """Pool over the union of the three biological-word offset lists
    (kind='word') or over residues (kind='char')."""
    if kind not in ("word", "char"):
        raise ValueError(f"kind must be 'word' or 'char', got {kind!r}")
    if pooling not in POOLINGS:
        raise ValueError(f"unknown pooling {pooling!r}")
    _check_model_kind(model, f"protein_{kind}")
    if kind == "word":
        off0, off1, off2 = tokenizer.protein_words(sequence)
        tokens = off0 + off1 + off2
    else:
        tokens = tokenizer.protein_chars(sequence)
    eid = protein_id if protein_id is not None else sequence
    values, oov = _pool_tokens(tokens, model, pooling, f"protein {eid!r}")
    return EntityVector(eid, values, f"protvec_{kind}", pooling, oov)


def protein_vector_from_ligands(
    ligand_vectors: Sequence[EntityVector | np.ndarray], protein_id: str = ""
) -> EntityVector:
    """Elementwise mean over the protein's ligand vectors.

    A protein with zero ligands has no ligand-centric vector and must be
    filtered out upstream; an empty list is therefore an error.
    """
    if not ligand_vectors:
        raise ValueError(
            f"protein {protein_id!r} has no ligand vectors; "
            "proteins without ligand interactions must be filtered out"
        )
    raw = [v.values if isinstance(v, EntityVector) else v for v in ligand_vectors]
    return EntityVector(protein_id, avg_pool(raw), "ligand_avg", "average")


def protein_vector_from_fingerprints(
    fingerprints: Sequence[np.ndarray], protein_id: str = ""
) -> EntityVector:
    """Elementwise mean of the ligands' fingerprint bits; each output
    feature is the fraction of ligands with that bit set."""
    if not len(fingerprints):
        raise ValueError(
            f"protein {protein_id!r} has no fingerprints; "
            "proteins without ligand interactions must be filtered out"
        )
    return EntityVector(protein_id, avg_pool(fingerprints), "fingerprint_avg", "average")
