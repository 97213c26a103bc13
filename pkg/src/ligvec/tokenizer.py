"""Tokenizers that split SMILES strings and protein sequences into words.

Chemical words are fixed-length overlapping substrings of a SMILES string
(sliding window, stride 1, default length 8).  Biological words are
non-overlapping 3-mers of a protein sequence, extracted three times with
start offsets 0, 1 and 2, giving three word lists per sequence.

All tokenizers are pure functions over case-sensitive strings; SMILES case
is meaningful (aromaticity) and is never altered.
"""

from __future__ import annotations

from dataclasses import dataclass

SMILES_WORD_LENGTH = 8
PROTEIN_WORD_LENGTH = 3

# tested range for the chemical word length
SMILES_WORD_MIN = 4
SMILES_WORD_MAX = 12

TOKEN_KINDS = ("smiles_word", "smiles_char", "protein_word", "protein_char")


@dataclass(frozen=True)
class TokenizationSpec:
    """How to turn an entity string into tokens.

    kind selects the tokenizer; k is the word length and only meaningful
    for the word kinds (protein words are always 3-mers).
    """

    kind: str
    k: int = SMILES_WORD_LENGTH

    def __post_init__(self):
        if self.kind not in TOKEN_KINDS:
            raise ValueError(f"unknown token kind {self.kind!r}, expected one of {TOKEN_KINDS}")
        if self.k < 1:
            raise ValueError(f"word length must be >= 1, got {self.k}")
        if self.kind == "smiles_word" and not (SMILES_WORD_MIN <= self.k <= SMILES_WORD_MAX):
            raise ValueError(
                f"smiles_word length must be in [{SMILES_WORD_MIN}, {SMILES_WORD_MAX}], got {self.k}"
            )
        if self.kind == "protein_word" and self.k != PROTEIN_WORD_LENGTH:
            raise ValueError(f"protein words are fixed 3-mers, got k={self.k}")


def smiles_words(smiles: str, k: int = SMILES_WORD_LENGTH) -> list[str]:
    """Overlapping k-character substrings of a SMILES string, stride 1.

    A SMILES shorter than k yields a single word equal to the whole
    string, so small molecules are never dropped.
    """
    TokenizationSpec("smiles_word", k)  # validates k against the supported range
    if not smiles:
        raise ValueError("empty SMILES string")
    if len(smiles) < k:
        return [smiles]
    return [smiles[i : i + k] for i in range(len(smiles) - k + 1)]


def smiles_chars(smiles: str) -> list[str]:
    """One token per SMILES character, order and case preserved."""
    if not smiles:
        raise ValueError("empty SMILES string")
    return list(smiles)


def protein_words(sequence: str) -> tuple[list[str], list[str], list[str]]:
    """Three lists of non-overlapping 3-mers, starting at offsets 0, 1, 2.

    A trailing remainder shorter than 3 residues is dropped, so every word
    has exactly 3 characters.  Requires a sequence of length >= 3.
    """
    if len(sequence) < PROTEIN_WORD_LENGTH:
        raise ValueError(f"protein sequence must have length >= 3, got {len(sequence)}")
    lists = []
    for offset in range(PROTEIN_WORD_LENGTH):
        words = []
        for i in range(offset, len(sequence) - PROTEIN_WORD_LENGTH + 1, PROTEIN_WORD_LENGTH):
            words.append(sequence[i : i + PROTEIN_WORD_LENGTH])
        lists.append(words)
    return lists[0], lists[1], lists[2]


def protein_chars(sequence: str) -> list[str]:
    """One token per residue."""
    if not sequence:
        raise ValueError("empty protein sequence")
    return list(sequence)


def tokenize(spec: TokenizationSpec, text: str) -> list[str]:
    """Apply the tokenizer selected by spec; protein words are flattened
    in offset order 0, 1, 2."""
    if spec.kind == "smiles_word":
        return smiles_words(text, spec.k)
    if spec.kind == "smiles_char":
        return smiles_chars(text)
    if spec.kind == "protein_word":
        off0, off1, off2 = protein_words(text)
        return off0 + off1 + off2
    return protein_chars(text)
