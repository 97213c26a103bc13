"""Ligand-centric protein representations and clustering evaluation.

Pipeline: tokenize SMILES / protein sequences into words, train skip-gram
embeddings, pool token vectors into ligand and protein vectors, score
pairwise similarities, cluster with cluster editing or Markov clustering,
and evaluate partitions against family / super-family gold standards.
"""

from .clustering import Clustering, MclConfig, mcl, transclust
from .corpus_io import (
    EmbeddingModel,
    FingerprintTable,
    GoldStandard,
    LigandRecord,
    ProteinRecord,
    SimilarityMatrix,
)
from .embedding import TrainConfig, build_vocab, train
from .evaluation import fmeasure, threshold_sweep
from .representation import (
    EntityVector,
    avg_pool,
    ligand_vector,
    minmax_pool,
    protein_vector_from_fingerprints,
    protein_vector_from_ligands,
    protein_vector_from_sequence,
)
from .similarity import build_similarity_matrix, cosine, pearson, word_frequency_similarity

__all__ = [
    "Clustering",
    "EmbeddingModel",
    "EntityVector",
    "FingerprintTable",
    "GoldStandard",
    "LigandRecord",
    "MclConfig",
    "ProteinRecord",
    "SimilarityMatrix",
    "TrainConfig",
    "avg_pool",
    "build_similarity_matrix",
    "build_vocab",
    "cosine",
    "fmeasure",
    "ligand_vector",
    "mcl",
    "minmax_pool",
    "pearson",
    "protein_vector_from_fingerprints",
    "protein_vector_from_ligands",
    "protein_vector_from_sequence",
    "threshold_sweep",
    "train",
    "transclust",
    "word_frequency_similarity",
]

__version__ = "0.1.0"
