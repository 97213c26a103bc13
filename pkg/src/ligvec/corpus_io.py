"""File formats for corpora, interactions, gold standards, models,
similarity matrices, clusterings and fingerprint tables.

All formats are line-oriented UTF-8 text with LF endings.  Floats are
written with Python's shortest round-trip representation, so
load(save(x)) reproduces x bitwise on every float.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Iterable

import numpy as np

if TYPE_CHECKING:
    from .clustering import Clustering


class FormatError(ValueError):
    """Malformed input file; message carries the offending line number."""


@dataclass(frozen=True)
class LigandRecord:
    """A ligand identifier with its canonical SMILES string."""

    id: str
    smiles: str

    def __post_init__(self):
        if not self.smiles:
            raise ValueError(f"ligand {self.id!r}: empty SMILES")
        if any(ch.isspace() for ch in self.smiles):
            raise ValueError(f"ligand {self.id!r}: SMILES contains whitespace")


@dataclass
class ProteinRecord:
    """A protein identifier with optional sequence and known ligand ids."""

    id: str
    sequence: str | None = None
    ligand_ids: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.sequence is not None and not self.sequence:
            raise ValueError(f"protein {self.id!r}: sequence present but empty")
        if len(set(self.ligand_ids)) != len(self.ligand_ids):
            raise ValueError(f"protein {self.id!r}: duplicate ligand ids")


@dataclass
class GoldStandard:
    """Protein id -> (family label, super-family label).

    Labels use dotted hierarchical codes; the super-family label is always
    the family label with its last dotted component removed.
    """

    labels: dict[str, tuple[str, str]]

    def __post_init__(self):
        for pid, (fam, sf) in self.labels.items():
            if fam.rsplit(".", 1)[0] != sf:
                raise ValueError(f"protein {pid!r}: super-family {sf!r} is not the parent of family {fam!r}")

    def family(self, pid: str) -> str:
        return self.labels[pid][0]

    def superfamily(self, pid: str) -> str:
        return self.labels[pid][1]

    def level_labels(self, level: str) -> dict[str, str]:
        """Mapping protein id -> label at the requested level."""
        if level == "family":
            return {p: fam for p, (fam, _) in self.labels.items()}
        if level == "superfamily":
            return {p: sf for p, (_, sf) in self.labels.items()}
        raise ValueError(f"unknown level {level!r}, expected 'family' or 'superfamily'")

    def filter_singletons(self) -> "GoldStandard":
        """Drop proteins whose family contains a single protein.

        After this pass every surviving family has >= 2 members, and hence
        every surviving super-family does too.
        """
        sizes = Counter(fam for fam, _ in self.labels.values())
        kept = {p: lab for p, lab in self.labels.items() if sizes[lab[0]] > 1}
        return GoldStandard(kept)


@dataclass
class EmbeddingModel:
    """Learned word vectors: vocabulary index plus a dense vector table.

    metadata records provenance (token kind, word length, corpus tag,
    training settings); it is informational and not persisted by
    save_model.
    """

    dimension: int
    vocab: dict[str, int]
    vectors: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=np.float64).reshape(len(self.vocab), self.dimension)

    def lookup(self, word: str) -> np.ndarray | None:
        """Vector for word, or None when out of vocabulary."""
        idx = self.vocab.get(word)
        return None if idx is None else self.vectors[idx]

    @property
    def words(self) -> list[str]:
        return sorted(self.vocab, key=self.vocab.get)


@dataclass
class SimilarityMatrix:
    """Sparse symmetric pairwise scores keyed by unordered id pairs.

    orientation is 'similarity' (higher means more similar) or 'distance'
    (lower means more similar, e.g. BLAST e-values).
    """

    scores: dict[tuple[str, str], float]
    orientation: str = "similarity"

    def __post_init__(self):
        if self.orientation not in ("similarity", "distance"):
            raise ValueError(f"unknown orientation {self.orientation!r}")
        normalized = {}
        for (a, b), s in self.scores.items():
            key = (a, b) if a <= b else (b, a)
            if key in normalized and normalized[key] != s:
                raise ValueError(f"conflicting scores for pair {key}: {normalized[key]} vs {s}")
            normalized[key] = float(s)
        self.scores = normalized

    def get(self, a: str, b: str, default: float = 0.0) -> float:
        key = (a, b) if a <= b else (b, a)
        return self.scores.get(key, default)

    def ids(self) -> list[str]:
        """All entity ids, sorted."""
        seen = set()
        for a, b in self.scores:
            seen.add(a)
            seen.add(b)
        return sorted(seen)


@dataclass
class FingerprintTable:
    """Ligand id -> fixed-width bit vector; one width per table."""

    bits: dict[str, np.ndarray]

    def __post_init__(self):
        widths = {len(v) for v in self.bits.values()}
        if len(widths) > 1:
            raise ValueError(f"mixed fingerprint widths in table: {sorted(widths)}")
        self.bits = {k: np.asarray(v, dtype=np.uint8) for k, v in self.bits.items()}

    @property
    def width(self) -> int:
        return len(next(iter(self.bits.values()))) if self.bits else 0


def _float_repr(x: float) -> str:
    """Shortest decimal string that parses back to exactly x."""
    return repr(float(x))


# ---------------------------------------------------------------------------
# corpora, interactions, gold standards
# ---------------------------------------------------------------------------


def load_smiles_corpus(path: str | Path) -> list[str]:
    """One SMILES per line; blank lines skipped, surrounding space trimmed."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if any(ch.isspace() for ch in line):
                raise FormatError(f"{path}:{lineno}: SMILES contains internal whitespace: {line!r}")
            out.append(line)
    return out


def save_smiles_corpus(path: str | Path, smiles: Iterable[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for s in smiles:
            fh.write(s + "\n")


def load_interactions(path: str | Path) -> dict[str, list[LigandRecord]]:
    """Tab-separated protein_id / ligand_id / smiles rows, grouped by protein.

    Duplicate (protein, ligand) pairs keep the first SMILES seen.
    """
    out: dict[str, list[LigandRecord]] = {}
    seen: set[tuple[str, str]] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise FormatError(f"{path}:{lineno}: expected 3 tab-separated columns, got {len(parts)}")
            pid, lid, smiles = parts
            if (pid, lid) in seen:
                continue
            seen.add((pid, lid))
            out.setdefault(pid, []).append(LigandRecord(lid, smiles))
    return out


def save_interactions(path: str | Path, interactions: dict[str, list[LigandRecord]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for pid in interactions:
            for rec in interactions[pid]:
                fh.write(f"{pid}\t{rec.id}\t{rec.smiles}\n")


def load_gold_standard(path: str | Path, filter_singletons: bool = False) -> GoldStandard:
    """Tab-separated protein_id / family code rows.

    The family label is the full dotted code, the super-family label is the
    code with its last component removed; codes therefore need at least two
    dotted components.
    """
    labels: dict[str, tuple[str, str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected 2 tab-separated columns, got {len(parts)}")
            pid, code = parts
            if code.count(".") < 1:
                raise FormatError(f"{path}:{lineno}: family code {code!r} needs >= 2 dotted components")
            labels[pid] = (code, code.rsplit(".", 1)[0])
    gold = GoldStandard(labels)
    return gold.filter_singletons() if filter_singletons else gold


def save_gold_standard(path: str | Path, gold: GoldStandard) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for pid, (fam, _) in gold.labels.items():
            fh.write(f"{pid}\t{fam}\n")


# ---------------------------------------------------------------------------
# embedding models
# ---------------------------------------------------------------------------


def save_model(path: str | Path, model: EmbeddingModel) -> None:
    """Text format: header 'vocab_size dimension', then one 'word v1 ... v_d'
    line per vocabulary word in index order."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{len(model.vocab)} {model.dimension}\n")
        for word in model.words:
            vec = model.vectors[model.vocab[word]]
            fh.write(word + " " + " ".join(_float_repr(x) for x in vec) + "\n")


def load_model(path: str | Path) -> EmbeddingModel:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise FormatError(f"{path}:1: expected 'vocab_size dimension' header")
        n_words, dim = int(header[0]), int(header[1])
        vocab: dict[str, int] = {}
        vectors = np.zeros((n_words, dim), dtype=np.float64)
        lineno = 1
        for lineno, raw in enumerate(fh, start=2):
            parts = raw.rstrip("\n").split(" ")
            if len(parts) != dim + 1:
                raise FormatError(f"{path}:{lineno}: expected word + {dim} values, got {len(parts)} fields")
            word = parts[0]
            idx = lineno - 2
            if idx >= n_words:
                raise FormatError(f"{path}:{lineno}: more vectors than header vocab_size {n_words}")
            if word in vocab:
                raise FormatError(f"{path}:{lineno}: duplicate word {word!r}")
            vocab[word] = idx
            vectors[idx] = [float(x) for x in parts[1:]]
        if len(vocab) != n_words:
            raise FormatError(f"{path}: header says {n_words} words but body has {len(vocab)}")
    return EmbeddingModel(dim, vocab, vectors)


# ---------------------------------------------------------------------------
# similarity matrices, clusterings, fingerprints, vector tables
# ---------------------------------------------------------------------------


def save_similarity(path: str | Path, matrix: SimilarityMatrix) -> None:
    """Lines 'idA<TAB>idB<TAB>score' with idA <= idB, sorted by pair."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for (a, b) in sorted(matrix.scores):
            fh.write(f"{a}\t{b}\t{_float_repr(matrix.scores[(a, b)])}\n")


def load_similarity(path: str | Path, orientation: str = "similarity") -> SimilarityMatrix:
    """Orientation is supplied by the caller; it is not stored in the file."""
    scores: dict[tuple[str, str], float] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise FormatError(f"{path}:{lineno}: expected 3 tab-separated columns, got {len(parts)}")
            a, b, score_txt = parts
            key = (a, b) if a <= b else (b, a)
            score = float(score_txt)
            if key in scores and scores[key] != score:
                raise FormatError(
                    f"{path}:{lineno}: conflicting scores for pair {key}: {scores[key]} vs {score}"
                )
            scores[key] = score
    return SimilarityMatrix(scores, orientation=orientation)


def save_clusters(path: str | Path, clustering: "Clustering") -> None:
    """Lines 'cluster_index<TAB>protein_id', clusters numbered from 0 in
    list order, members sorted within each cluster."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for idx, members in enumerate(clustering.clusters):
            for pid in sorted(members):
                fh.write(f"{idx}\t{pid}\n")


def load_clusters(path: str | Path) -> "Clustering":
    from .clustering import Clustering

    groups: dict[int, set[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected 2 tab-separated columns, got {len(parts)}")
            groups.setdefault(int(parts[0]), set()).add(parts[1])
    return Clustering([groups[i] for i in sorted(groups)])


def load_fingerprints(path: str | Path) -> FingerprintTable:
    """Lines 'ligand_id<TAB>bitstring' where bitstring is 0/1 characters."""
    bits: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected 2 tab-separated columns, got {len(parts)}")
            lid, bitstring = parts
            if not bitstring or set(bitstring) - {"0", "1"}:
                raise FormatError(f"{path}:{lineno}: bitstring must be non-empty 0/1 characters")
            bits[lid] = np.frombuffer(bitstring.encode("ascii"), dtype=np.uint8) - ord("0")
    return FingerprintTable(bits)


def save_vector_table(path: str | Path, vectors: dict[str, np.ndarray]) -> None:
    """Lines 'id<TAB>v1 ... v_d', sorted by id."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for eid in sorted(vectors):
            vec = np.asarray(vectors[eid], dtype=np.float64)
            fh.write(eid + "\t" + " ".join(_float_repr(x) for x in vec) + "\n")


def load_vector_table(path: str | Path) -> dict[str, np.ndarray]:
    out: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected 2 tab-separated columns, got {len(parts)}")
            eid, values = parts
            out[eid] = np.array([float(x) for x in values.split(" ")], dtype=np.float64)
    return out


def load_id_text_table(path: str | Path) -> dict[str, str]:
    """Generic 'id<TAB>text' table (ligand smiles, protein sequences)."""
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected 2 tab-separated columns, got {len(parts)}")
            out[parts[0]] = parts[1]
    return out


def load_pairs(path: str | Path) -> set[tuple[str, str]]:
    """Pair restriction file: lines 'idA<TAB>idB'; pairs normalized unordered."""
    pairs: set[tuple[str, str]] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected 2 tab-separated columns, got {len(parts)}")
            a, b = parts
            pairs.add((a, b) if a <= b else (b, a))
    return pairs
