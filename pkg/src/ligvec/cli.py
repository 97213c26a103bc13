"""Command-line entry point wiring the modules into one tool.

Subcommands: fetch, tokenize, train, represent, similarity, cluster,
evaluate, sweep, correlate, pipeline.  Every stage is deterministic given
its inputs and seed settings, so artifacts are byte-identical across
reruns.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import acquisition, clustering, corpus_io, embedding, evaluation, pipeline, representation, similarity
from .evaluation import SWEEP_PRESETS
from .tokenizer import PROTEIN_WORD_LENGTH, SMILES_WORD_LENGTH, TOKEN_KINDS, TokenizationSpec, tokenize


def _write_json(path: str | None, payload: dict) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_matrix(path: str, orientation: str) -> corpus_io.SimilarityMatrix:
    return corpus_io.load_similarity(path, orientation=orientation)


def cmd_tokenize(args) -> int:
    k = args.k if args.k is not None else (
        SMILES_WORD_LENGTH if args.kind == "smiles_word" else PROTEIN_WORD_LENGTH
    )
    spec = TokenizationSpec(args.kind, k)
    if args.text is not None:
        lines = [args.text]
    else:
        lines = [ln.strip() for ln in Path(args.input).read_text(encoding="utf-8").splitlines() if ln.strip()]
    for line in lines:
        sys.stdout.write(" ".join(tokenize(spec, line)) + "\n")
    return 0


def cmd_train(args) -> int:
    corpus = corpus_io.load_smiles_corpus(args.corpus) if args.kind.startswith("smiles") else [
        ln.strip() for ln in Path(args.corpus).read_text(encoding="utf-8").splitlines() if ln.strip()
    ]
    k = args.k if args.k is not None else (
        SMILES_WORD_LENGTH if args.kind == "smiles_word" else PROTEIN_WORD_LENGTH
    )
    spec = TokenizationSpec(args.kind, k)
    sentences = [tokenize(spec, line) for line in corpus]
    config = embedding.TrainConfig(
        dimension=args.dimension,
        window=args.window,
        negatives=args.negatives,
        epochs=args.epochs,
        learning_rate=args.learning_rate,
        min_count=args.min_count,
        subsample=args.subsample,
        seed=args.seed,
        workers=args.workers,
    )
    config.validate()
    model = embedding.train(sentences, config, metadata={"token_kind": args.kind, "k": k})
    corpus_io.save_model(args.output, model)
    meta = {key: value for key, value in model.metadata.items() if key != "eval_losses"}
    _write_json(args.output + ".meta.json", meta)
    return 0


def cmd_represent(args) -> int:
    if args.entities != "proteins-seq" and args.pooling != "average":
        raise ValueError(
            f"--pooling {args.pooling} only applies to --entities proteins-seq; "
            f"{args.entities} vectors are averaged by definition"
        )
    if args.entities == "ligands":
        model = corpus_io.load_model(args.model)
        model.metadata.setdefault("token_kind", f"smiles_{args.kind}")
        table = corpus_io.load_id_text_table(args.smiles)
        vectors = {
            lid: representation.ligand_vector(smiles, model, kind=args.kind, k=args.k, ligand_id=lid).values
            for lid, smiles in table.items()
        }
    elif args.entities == "proteins-seq":
        model = corpus_io.load_model(args.model)
        model.metadata.setdefault("token_kind", f"protein_{args.kind}")
        table = corpus_io.load_id_text_table(args.sequences)
        vectors = {
            pid: representation.protein_vector_from_sequence(
                seq, model, kind=args.kind, pooling=args.pooling, protein_id=pid
            ).values
            for pid, seq in table.items()
        }
    elif args.entities == "proteins-ligand":
        ligand_vectors = corpus_io.load_vector_table(args.ligand_vectors)
        interactions = corpus_io.load_interactions(args.interactions)
        vectors = {}
        for pid, records in interactions.items():
            member_vectors = [ligand_vectors[r.id] for r in records if r.id in ligand_vectors]
            vectors[pid] = representation.protein_vector_from_ligands(member_vectors, protein_id=pid).values
    else:  # proteins-fingerprint
        fingerprints = corpus_io.load_fingerprints(args.fingerprints)
        interactions = corpus_io.load_interactions(args.interactions)
        vectors = {}
        for pid, records in interactions.items():
            member_bits = [fingerprints.bits[r.id] for r in records if r.id in fingerprints.bits]
            vectors[pid] = representation.protein_vector_from_fingerprints(member_bits, protein_id=pid).values
    corpus_io.save_vector_table(args.output, vectors)
    return 0


def cmd_similarity(args) -> int:
    pairs = corpus_io.load_pairs(args.pairs) if args.pairs else None
    if args.method == "cosine":
        entities = corpus_io.load_vector_table(args.vectors)
    elif args.interactions:
        interactions = corpus_io.load_interactions(args.interactions)
        entities = {
            pid: similarity.smiles_word_counts([r.smiles for r in records], k=args.k)
            for pid, records in interactions.items()
        }
    else:
        sequences = corpus_io.load_id_text_table(args.sequences)
        entities = {pid: similarity.protein_word_counts(seq) for pid, seq in sequences.items()}
    matrix = similarity.build_similarity_matrix(entities, method=args.method, pairs=pairs)
    corpus_io.save_similarity(args.output, matrix)
    return 0


def cmd_cluster(args) -> int:
    matrix = _load_matrix(args.matrix, args.orientation)
    if args.algo == "transclust":
        adapted = clustering.as_transclust_input(matrix)
        threshold = -args.threshold if matrix.orientation == "distance" else args.threshold
        clusters = clustering.transclust(adapted, threshold)
        meta = {"algo": "transclust", "threshold": args.threshold, "orientation": args.orientation}
    else:
        config = clustering.MclConfig(
            inflation=args.inflation,
            expansion=args.expansion,
            pruning=args.pruning,
            max_iterations=args.max_iterations,
            epsilon=args.epsilon,
            self_loop=args.self_loop,
        )
        adapted = clustering.as_mcl_input(matrix, clip_negative=args.clip_negative)
        clusters, flow = clustering.mcl_with_flow(adapted, config)
        meta = {
            "algo": "mcl",
            "inflation": args.inflation,
            "expansion": args.expansion,
            "pruning": args.pruning,
            "epsilon": args.epsilon,
            "self_loop": args.self_loop,
            "orientation": args.orientation,
            "iterations": flow.iterations,
            "residual": flow.residual,
        }
    corpus_io.save_clusters(args.output, clusters)
    stats = clustering.cluster_stats(clusters)
    meta["n_clusters"] = stats.n_clusters
    meta["size_histogram"] = {str(k): v for k, v in stats.size_histogram.items()}
    _write_json(args.metadata or args.output + ".meta.json", meta)
    return 0


def cmd_evaluate(args) -> int:
    clusters = corpus_io.load_clusters(args.clusters)
    gold = corpus_io.load_gold_standard(args.gold, filter_singletons=args.filter_singletons)
    report = evaluation.fmeasure(clusters, gold, level=args.level)
    _write_json(args.output, {"f": report.f, "level": report.level, "n": report.n,
                              "n_clusters": len(clusters.clusters)})
    if args.per_family:
        with open(args.per_family, "w", encoding="utf-8", newline="\n") as fh:
            for row in report.families:
                fh.write(f"{row.family}\t{row.size}\t{row.best_cluster}\t{row.precision!r}\t{row.recall!r}\t{row.f!r}\n")
    return 0


def cmd_sweep(args) -> int:
    matrix = _load_matrix(args.matrix, args.orientation)
    adapted = clustering.as_transclust_input(matrix)
    gold = corpus_io.load_gold_standard(args.gold, filter_singletons=args.filter_singletons)
    if args.preset:
        lo, hi, step = SWEEP_PRESETS[args.preset]
    else:
        lo, hi, step = args.lo, args.hi, args.step
    distance = matrix.orientation == "distance"
    if distance:
        lo, hi = -hi, -lo  # thresholds live on the negated axis internally
    result = evaluation.threshold_sweep(adapted, gold, level=args.level, lo=lo, hi=hi, step=step)
    # report thresholds back on the user's axis
    sign = -1.0 if distance else 1.0
    with open(args.curve, "w", encoding="utf-8", newline="\n") as fh:
        for point in result.curve:
            fh.write(f"{sign * point.threshold!r}\t{point.f!r}\t{point.n_clusters}\n")
    _write_json(args.output, {
        "best_threshold": sign * result.best_threshold,
        "best_f": result.best_f,
        "points": len(result.curve),
        "level": args.level,
    })
    return 0


def cmd_correlate(args) -> int:
    matrix_a = _load_matrix(args.matrix_a, args.orientation_a)
    matrix_b = _load_matrix(args.matrix_b, args.orientation_b)
    va, vb, only_a, only_b = similarity.common_pair_scores(matrix_a, matrix_b)
    r = similarity.pearson(matrix_a, matrix_b)
    _write_json(args.output, {
        "pearson": r,
        "common_pairs": len(va),
        "only_a": only_a,
        "only_b": only_b,
    })
    return 0


def cmd_fetch(args) -> int:
    config = acquisition.AcquisitionConfig.from_env(
        **({"cache_dir": Path(args.cache_dir)} if args.cache_dir else {})
    )
    domains = [ln.strip() for ln in Path(args.domains).read_text(encoding="utf-8").splitlines() if ln.strip()]
    rows = []
    skipped = []
    for domain_id in domains:
        try:
            accession = acquisition.resolve_accession(domain_id, config)
        except acquisition.AccessionNotFoundError:
            skipped.append(domain_id)
            continue
        for record in acquisition.fetch_ligands(accession, config):
            rows.append((domain_id, record.id, record.smiles))
    with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write("\t".join(row) + "\n")
    if skipped:
        sys.stderr.write(f"skipped {len(skipped)} domains without accession: {' '.join(skipped)}\n")
    return 0


def cmd_pipeline(args) -> int:
    overrides = {}
    for item in args.set or []:
        if "=" not in item:
            raise ValueError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()
    if args.outdir:
        overrides["outdir"] = args.outdir
    config = pipeline.load_config(args.config, overrides)
    report = pipeline.run(config)
    sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ligvec",
        description="SMILES n-gram embeddings, ligand-centric protein vectors, "
                    "similarity matrices, clustering and F-measure evaluation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tokenize", help="split SMILES / protein sequences into words (debugging aid)")
    p.add_argument("--kind", choices=TOKEN_KINDS, default="smiles_word")
    p.add_argument("--k", type=int, default=None, help="word length (smiles_word only)")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--text", help="tokenize one string")
    group.add_argument("--input", help="tokenize every line of a file")
    p.set_defaults(func=cmd_tokenize)

    p = sub.add_parser("train", help="train skip-gram embeddings on a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--kind", choices=TOKEN_KINDS, default="smiles_word")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--dimension", type=int, default=100)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--negatives", type=int, default=5)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--learning-rate", type=float, default=0.025)
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--subsample", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("represent", help="pool token vectors into entity vector tables")
    p.add_argument("--entities", required=True,
                   choices=["ligands", "proteins-seq", "proteins-ligand", "proteins-fingerprint"])
    p.add_argument("--model")
    p.add_argument("--kind", choices=["word", "char"], default="word")
    p.add_argument("--k", type=int, default=SMILES_WORD_LENGTH)
    p.add_argument("--pooling", choices=["average", "minmax"], default="average")
    p.add_argument("--smiles", help="ligand table: id<TAB>smiles")
    p.add_argument("--sequences", help="protein table: id<TAB>sequence")
    p.add_argument("--interactions", help="protein<TAB>ligand<TAB>smiles table")
    p.add_argument("--ligand-vectors", help="vector table for proteins-ligand")
    p.add_argument("--fingerprints", help="bit table for proteins-fingerprint")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_represent)

    p = sub.add_parser("similarity", help="score all entity pairs into a similarity matrix")
    p.add_argument("--method", choices=["cosine", "wordfreq"], required=True)
    p.add_argument("--vectors", help="vector table (cosine)")
    p.add_argument("--interactions", help="interaction table (wordfreq over ligand words)")
    p.add_argument("--sequences", help="sequence table (wordfreq over protein words)")
    p.add_argument("--k", type=int, default=SMILES_WORD_LENGTH)
    p.add_argument("--pairs", help="restrict to pairs listed in this file")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_similarity)

    p = sub.add_parser("cluster", help="partition a similarity matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--orientation", choices=["similarity", "distance"], default="similarity",
                   help="distance matrices are negated (transclust) or shifted (mcl)")
    p.add_argument("--algo", choices=["transclust", "mcl"], required=True)
    p.add_argument("--threshold", type=float, default=0.5, help="transclust editing threshold")
    p.add_argument("--inflation", type=float, default=2.0)
    p.add_argument("--expansion", type=int, default=2)
    p.add_argument("--pruning", type=float, default=1e-5)
    p.add_argument("--max-iterations", type=int, default=200)
    p.add_argument("--epsilon", type=float, default=1e-9)
    p.add_argument("--self-loop", choices=["max", "unit"], default="max")
    p.add_argument("--clip-negative", action="store_true",
                   help="clip negative similarities to 0 before mcl")
    p.add_argument("--output", required=True)
    p.add_argument("--metadata", help="JSON sidecar path (default: <output>.meta.json)")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("evaluate", help="score clusters against a gold standard")
    p.add_argument("--clusters", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--level", choices=["family", "superfamily"], default="family")
    p.add_argument("--filter-singletons", action="store_true")
    p.add_argument("--per-family", help="write per-family precision/recall/F TSV")
    p.add_argument("--output", help="JSON summary path (default: stdout)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="threshold sweep with transclust, report the F curve")
    p.add_argument("--matrix", required=True)
    p.add_argument("--orientation", choices=["similarity", "distance"], default="similarity")
    p.add_argument("--gold", required=True)
    p.add_argument("--level", choices=["family", "superfamily"], default="family")
    p.add_argument("--filter-singletons", action="store_true")
    p.add_argument("--preset", choices=sorted(SWEEP_PRESETS),
                   help="unit: [0,1] step 0.001; blast: [0,100] step 0.05")
    p.add_argument("--lo", type=float, default=0.0)
    p.add_argument("--hi", type=float, default=1.0)
    p.add_argument("--step", type=float, default=0.001)
    p.add_argument("--curve", required=True, help="TSV output: threshold, F, cluster count")
    p.add_argument("--output", help="JSON summary path (default: stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("correlate", help="Pearson correlation between two similarity matrices")
    p.add_argument("--matrix-a", required=True)
    p.add_argument("--matrix-b", required=True)
    p.add_argument("--orientation-a", choices=["similarity", "distance"], default="similarity")
    p.add_argument("--orientation-b", choices=["similarity", "distance"], default="similarity")
    p.add_argument("--output", help="JSON output path (default: stdout)")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("fetch", help="resolve domain ids and fetch interacting ligands "
                                     "(LIGVEC_MAPPING_URL / LIGVEC_ACTIVITY_URL / LIGVEC_CACHE_DIR)")
    p.add_argument("--domains", required=True, help="file with one domain id per line")
    p.add_argument("--cache-dir")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_fetch)

    p = sub.add_parser("pipeline", help="run the whole chain from a declarative config file")
    p.add_argument("--config", required=True)
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")
    p.add_argument("--outdir", help="override the output directory")
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except pipeline.PipelineError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except Exception as exc:  # surface a clean diagnostic, not a traceback
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
