"""Deterministic synthetic fixture: three protein families whose ligands
are drawn from family-specific SMILES fragment pools.

The three pools use disjoint character alphabets, so chemical words never
collide across families; word embeddings trained on the pooled corpus
separate the families, and a similarity-based clustering should recover
them.  Everything is generated from one seed, byte-identical across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import corpus_io
from .corpus_io import GoldStandard, LigandRecord

# family code -> SMILES fragment pool (alphabets pairwise disjoint); small
# pools keep the chemical-word vocabulary dense enough to train well on a
# desk-sized corpus
FAMILY_FRAGMENTS = {
    "a.1.1.1": ["CC(=O)", "CCNC", "OC(=N)", "NCCO"],
    "b.1.1.1": ["c1ccc2", "n1cco2", "c2ncc1", "o1ccn2"],
    "c.1.1.1": ["SP5F6", "FSI6P", "PF5SI", "S6IF5"],
}

DEFAULT_SEED = 11
PROTEINS_PER_FAMILY = 10
LIGANDS_PER_FAMILY = 40
EXTRA_CORPUS_PER_FAMILY = 200
MIN_FRAGMENTS = 3
MAX_FRAGMENTS = 5
MIN_LIGANDS_PER_PROTEIN = 6
MAX_LIGANDS_PER_PROTEIN = 10


@dataclass
class ToyDataset:
    corpus_path: Path
    interactions_path: Path
    gold_path: Path
    config_path: Path


def _make_smiles(rng: np.random.Generator, fragments: list[str]) -> str:
    n_frag = int(rng.integers(MIN_FRAGMENTS, MAX_FRAGMENTS + 1))
    picks = rng.integers(0, len(fragments), size=n_frag)
    return "".join(fragments[i] for i in picks)


def generate(out_dir: str | Path, seed: int = DEFAULT_SEED) -> ToyDataset:
    """Write corpus.smi, interactions.tsv, gold.tsv and pipeline.cfg into
    out_dir and return their paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    corpus: list[str] = []
    interactions: dict[str, list[LigandRecord]] = {}
    labels: dict[str, tuple[str, str]] = {}

    for fam_idx, (family, fragments) in enumerate(sorted(FAMILY_FRAGMENTS.items())):
        tag = family[0]
        ligands = []
        seen: set[str] = set()
        while len(ligands) < LIGANDS_PER_FAMILY:
            smiles = _make_smiles(rng, fragments)
            if smiles not in seen:
                seen.add(smiles)
                ligands.append(LigandRecord(f"L{tag}{len(ligands):02d}", smiles))
        corpus.extend(rec.smiles for rec in ligands)
        corpus.extend(_make_smiles(rng, fragments) for _ in range(EXTRA_CORPUS_PER_FAMILY))

        for p in range(PROTEINS_PER_FAMILY):
            pid = f"prot_{tag}{p:02d}"
            n_lig = int(rng.integers(MIN_LIGANDS_PER_PROTEIN, MAX_LIGANDS_PER_PROTEIN + 1))
            chosen = rng.choice(LIGANDS_PER_FAMILY, size=n_lig, replace=False)
            interactions[pid] = [ligands[i] for i in sorted(chosen)]
            labels[pid] = (family, family.rsplit(".", 1)[0])

    corpus_path = out_dir / "corpus.smi"
    interactions_path = out_dir / "interactions.tsv"
    gold_path = out_dir / "gold.tsv"
    config_path = out_dir / "pipeline.cfg"

    corpus_io.save_smiles_corpus(corpus_path, corpus)
    corpus_io.save_interactions(interactions_path, interactions)
    corpus_io.save_gold_standard(gold_path, GoldStandard(labels))
    config_path.write_text(
        "# planted three-family pipeline configuration\n"
        "corpus = corpus.smi\n"
        "interactions = interactions.tsv\n"
        "gold = gold.tsv\n"
        "token_kind = smiles_word\n"
        "word_length = 8\n"
        "dimension = 32\n"
        "window = 5\n"
        "negatives = 1\n"
        "epochs = 6\n"
        "learning_rate = 0.025\n"
        "min_count = 1\n"
        "seed = 7\n"
        "workers = 1\n"
        "method = cosine\n"
        "algo = transclust\n"
        "level = family\n"
        "sweep_lo = 0.0\n"
        "sweep_hi = 1.0\n"
        "sweep_step = 0.001\n"
        "inflation = 2.0\n"
        "outdir = out\n",
        encoding="utf-8",
    )
    return ToyDataset(corpus_path, interactions_path, gold_path, config_path)
