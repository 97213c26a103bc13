"""End-to-end pipeline: corpus -> embeddings -> ligand/protein vectors ->
similarity matrix -> clustering (threshold sweep or Markov clustering) ->
gold-standard evaluation.

Configuration comes from a declarative 'key = value' text file; every
artifact is written into the configured output directory, and a rerun
with identical inputs and seed produces byte-identical files.
"""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import clustering, corpus_io, embedding, evaluation, representation, similarity
from .corpus_io import LigandRecord
from .tokenizer import smiles_chars, smiles_words

logger = logging.getLogger(__name__)

TOKEN_KINDS = ("smiles_word", "smiles_char")
METHODS = ("cosine", "wordfreq")
ALGOS = ("transclust", "mcl")
LEVELS = ("family", "superfamily")


class PipelineError(RuntimeError):
    """A pipeline stage failed; stage names which one."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineConfig:
    interactions: Path
    gold: Path
    outdir: Path
    corpus: Path | None = None
    token_kind: str = "smiles_word"
    word_length: int = 8
    dimension: int = 100
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    min_count: int = 1
    subsample: float = 0.0
    seed: int = 1
    workers: int = 1
    method: str = "cosine"
    algo: str = "transclust"
    level: str = "family"
    pooling: str = "average"
    sweep_lo: float = 0.0
    sweep_hi: float = 1.0
    sweep_step: float = 0.001
    inflation: float = 2.0
    filter_singletons: bool = False
    overrides: dict = field(default_factory=dict, repr=False)

    def validate(self) -> None:
        if self.token_kind not in TOKEN_KINDS:
            raise ValueError(f"token_kind must be one of {TOKEN_KINDS}, got {self.token_kind!r}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.algo not in ALGOS:
            raise ValueError(f"algo must be one of {ALGOS}, got {self.algo!r}")
        if self.level not in LEVELS:
            raise ValueError(f"level must be one of {LEVELS}, got {self.level!r}")
        if self.pooling != "average":
            # ligand vectors are averaged by definition; min/max pooling is a
            # sequence-vector technique, reachable via `represent --entities
            # proteins-seq --pooling minmax`
            raise ValueError(
                f"the ligand-averaged pipeline supports pooling 'average' only, got {self.pooling!r}"
            )
        if self.method == "cosine" and self.corpus is None:
            raise ValueError("method 'cosine' needs a training corpus")
        self.train_config()  # validates the embedding settings

    def train_config(self) -> embedding.TrainConfig:
        cfg = embedding.TrainConfig(
            dimension=self.dimension,
            window=self.window,
            negatives=self.negatives,
            epochs=self.epochs,
            learning_rate=self.learning_rate,
            min_count=self.min_count,
            subsample=self.subsample,
            seed=self.seed,
            workers=self.workers,
        )
        cfg.validate()
        return cfg

    def effective_settings(self) -> dict:
        settings = asdict(self)
        settings.pop("overrides")
        # the output directory is self-evident from where run_meta.json
        # lives; omitting it keeps rerun artifacts byte-identical across
        # different output directories
        settings.pop("outdir")
        for key in ("interactions", "gold", "corpus"):
            if settings[key] is not None:
                settings[key] = str(settings[key])
        return settings


_BOOL_KEYS = {"filter_singletons"}
_INT_KEYS = {"word_length", "dimension", "window", "negatives", "epochs", "min_count", "seed", "workers"}
_FLOAT_KEYS = {"learning_rate", "subsample", "sweep_lo", "sweep_hi", "sweep_step", "inflation"}
_PATH_KEYS = {"corpus", "interactions", "gold", "outdir"}
_STR_KEYS = {"token_kind", "method", "algo", "level", "pooling"}
_ALL_KEYS = _BOOL_KEYS | _INT_KEYS | _FLOAT_KEYS | _PATH_KEYS | _STR_KEYS


def _coerce(key: str, value: str, base_dir: Path):
    if key in _BOOL_KEYS:
        if value.lower() not in ("true", "false"):
            raise ValueError(f"{key}: expected true/false, got {value!r}")
        return value.lower() == "true"
    if key in _INT_KEYS:
        return int(value)
    if key in _FLOAT_KEYS:
        return float(value)
    if key in _PATH_KEYS:
        path = Path(value)
        return path if path.is_absolute() else base_dir / path
    return value


def parse_config_text(text: str, base_dir: Path, overrides: dict[str, str] | None = None) -> PipelineConfig:
    """Parse 'key = value' lines ('#' starts a comment); relative paths are
    resolved against base_dir.  Overrides are applied on top and recorded."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in _ALL_KEYS:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        raw[key] = value
    raw.update(overrides or {})
    for key in raw:
        if key not in _ALL_KEYS:
            raise ValueError(f"unknown config key {key!r}")
    missing = {"interactions", "gold", "outdir"} - set(raw)
    if missing:
        raise ValueError(f"config missing required keys: {sorted(missing)}")
    values = {key: _coerce(key, value, base_dir) for key, value in raw.items()}
    config = PipelineConfig(**values, overrides=dict(overrides or {}))
    config.validate()
    return config


def load_config(path: str | Path, overrides: dict[str, str] | None = None) -> PipelineConfig:
    path = Path(path)
    return parse_config_text(path.read_text(encoding="utf-8"), path.parent, overrides)


def _tokenize_corpus(config: PipelineConfig, corpus: list[str]) -> list[list[str]]:
    if config.token_kind == "smiles_word":
        return [smiles_words(s, config.word_length) for s in corpus]
    return [smiles_chars(s) for s in corpus]


def _unique_ligands(interactions: dict[str, list[LigandRecord]]) -> dict[str, str]:
    """Ligand id -> SMILES over all proteins; first SMILES wins."""
    out: dict[str, str] = {}
    for records in interactions.values():
        for rec in records:
            out.setdefault(rec.id, rec.smiles)
    return out


def _ligand_vectors(config, model, ligands: dict[str, str]) -> dict[str, representation.EntityVector]:
    kind = "word" if config.token_kind == "smiles_word" else "char"
    vectors = {}
    skipped = []
    for lid in sorted(ligands):
        try:
            vectors[lid] = representation.ligand_vector(
                ligands[lid], model, kind=kind, k=config.word_length, ligand_id=lid
            )
        except representation.NoCoverageError:
            skipped.append(lid)
    if skipped:
        logger.warning("dropped %d ligands with no in-vocabulary tokens", len(skipped))
    return vectors


def _protein_vectors(interactions, ligand_vectors) -> dict[str, representation.EntityVector]:
    vectors = {}
    skipped = []
    for pid in sorted(interactions):
        covered = [ligand_vectors[r.id] for r in interactions[pid] if r.id in ligand_vectors]
        if not covered:
            skipped.append(pid)
            continue
        vectors[pid] = representation.protein_vector_from_ligands(covered, protein_id=pid)
    if skipped:
        logger.warning("dropped %d proteins with no covered ligands", len(skipped))
    return vectors


def run(config: PipelineConfig) -> dict:
    """Execute the configured pipeline and return the report dict (also
    written to <outdir>/report.json)."""
    config.validate()
    outdir = config.outdir
    outdir.mkdir(parents=True, exist_ok=True)
    stage = "load"
    try:
        interactions = corpus_io.load_interactions(config.interactions)
        gold = corpus_io.load_gold_standard(config.gold, filter_singletons=config.filter_singletons)
    except Exception as exc:
        raise PipelineError(stage, exc) from exc

    matrix = None
    if config.method == "cosine":
        try:
            stage = "train"
            corpus = corpus_io.load_smiles_corpus(config.corpus)
            sentences = _tokenize_corpus(config, corpus)
            model = embedding.train(
                sentences,
                config.train_config(),
                metadata={"token_kind": config.token_kind, "k": config.word_length},
            )
            corpus_io.save_model(outdir / "model.txt", model)
        except PipelineError:
            raise
        except Exception as exc:
            raise PipelineError(stage, exc) from exc
        try:
            stage = "represent"
            ligand_vecs = _ligand_vectors(config, model, _unique_ligands(interactions))
            protein_vecs = _protein_vectors(interactions, ligand_vecs)
            corpus_io.save_vector_table(
                outdir / "ligand_vectors.tsv", {k: v.values for k, v in ligand_vecs.items()}
            )
            corpus_io.save_vector_table(
                outdir / "protein_vectors.tsv", {k: v.values for k, v in protein_vecs.items()}
            )
        except Exception as exc:
            raise PipelineError(stage, exc) from exc
        try:
            stage = "similarity"
            matrix = similarity.build_similarity_matrix(
                {k: v.values for k, v in protein_vecs.items()}, method="cosine"
            )
        except Exception as exc:
            raise PipelineError(stage, exc) from exc
    else:
        try:
            stage = "similarity"
            counts = {
                pid: similarity.smiles_word_counts(
                    [r.smiles for r in recs], k=config.word_length
                )
                for pid, recs in sorted(interactions.items())
            }
            matrix = similarity.build_similarity_matrix(counts, method="wordfreq")
        except Exception as exc:
            raise PipelineError(stage, exc) from exc
    corpus_io.save_similarity(outdir / "similarity.tsv", matrix)

    report = {
        "method": config.method,
        "algo": config.algo,
        "level": config.level,
        "n_proteins": len(matrix.ids()),
        "best_threshold": None,
    }
    try:
        stage = "cluster"
        if config.algo == "transclust":
            sweep = evaluation.threshold_sweep(
                matrix,
                gold,
                level=config.level,
                lo=config.sweep_lo,
                hi=config.sweep_hi,
                step=config.sweep_step,
            )
            with open(outdir / "sweep_curve.tsv", "w", encoding="utf-8", newline="\n") as fh:
                for point in sweep.curve:
                    fh.write(f"{point.threshold!r}\t{point.f!r}\t{point.n_clusters}\n")
            clusters = clustering.transclust(matrix, sweep.best_threshold)
            report["best_threshold"] = sweep.best_threshold
        else:
            mcl_matrix = clustering.as_mcl_input(matrix, clip_negative=True)
            clusters = clustering.mcl(mcl_matrix, clustering.MclConfig(inflation=config.inflation))
        corpus_io.save_clusters(outdir / "clusters.tsv", clusters)
    except PipelineError:
        raise
    except Exception as exc:
        raise PipelineError(stage, exc) from exc

    try:
        stage = "evaluate"
        scores = evaluation.fmeasure(clusters, gold, level=config.level)
    except Exception as exc:
        raise PipelineError(stage, exc) from exc

    report["n_clusters"] = len(clusters)
    report["f"] = scores.f
    with open(outdir / "report.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report, fh, sort_keys=True, indent=2)
        fh.write("\n")
    with open(outdir / "run_meta.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(config.effective_settings(), fh, sort_keys=True, indent=2)
        fh.write("\n")
    return report
