"""Command-line interface tests on a miniature planted dataset; the full
fixture is exercised by the acceptance suite."""

import json

import pytest

from ligvec import acquisition, corpus_io, toydata
from ligvec.cli import main

MINI = [
    "--set", "dimension=8",
    "--set", "epochs=1",
    "--set", "sweep_step=0.05",
]


@pytest.fixture(scope="module")
def toy(tmp_path_factory):
    return toydata.generate(tmp_path_factory.mktemp("toy"), seed=toydata.DEFAULT_SEED)


class TestBasics:
    def test_unknown_subcommand_exits_nonzero_with_usage(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["frobnicate"])
        assert err.value.code != 0
        assert "usage" in capsys.readouterr().err

    def test_tokenize_text(self, capsys):
        assert main(["tokenize", "--kind", "smiles_word", "--text", "CCOCCNCC"]) == 0
        out = capsys.readouterr().out.strip()
        assert out == "CCOCCNCC"

    def test_tokenize_protein(self, capsys):
        assert main(["tokenize", "--kind", "protein_word", "--text", "MKVLAT"]) == 0
        assert capsys.readouterr().out.split() == ["MKV", "LAT", "KVL", "VLA"]

    def test_train_dim_zero_rejected(self, toy, tmp_path, capsys):
        rc = main([
            "train", "--corpus", str(toy.corpus_path), "--dimension", "0",
            "--output", str(tmp_path / "m.txt"),
        ])
        assert rc != 0
        assert "dimension" in capsys.readouterr().err

    def test_minmax_pooling_limited_to_sequence_vectors(self, tmp_path, capsys):
        rc = main([
            "represent", "--entities", "ligands", "--model", "whatever.txt",
            "--smiles", "whatever.tsv", "--pooling", "minmax",
            "--output", str(tmp_path / "v.tsv"),
        ])
        assert rc != 0
        assert "proteins-seq" in capsys.readouterr().err


@pytest.fixture(scope="module")
def work(tmp_path_factory, toy):
    work = tmp_path_factory.mktemp("chain")
    rc = main([
        "train", "--corpus", str(toy.corpus_path), "--kind", "smiles_word",
        "--dimension", "8", "--epochs", "1", "--negatives", "1", "--seed", "7",
        "--output", str(work / "model.txt"),
    ])
    assert rc == 0
    return work


class TestStageChain:
    """train -> represent -> similarity -> cluster -> evaluate, via files."""

    def test_model_written_with_meta(self, work):
        model = corpus_io.load_model(work / "model.txt")
        assert model.dimension == 8
        meta = json.loads((work / "model.txt.meta.json").read_text())
        assert meta["token_kind"] == "smiles_word"

    def test_ligand_and_protein_vectors(self, work, toy, tmp_path):
        interactions = corpus_io.load_interactions(toy.interactions_path)
        smiles_table = tmp_path / "ligands.tsv"
        seen = {}
        for records in interactions.values():
            for rec in records:
                seen.setdefault(rec.id, rec.smiles)
        smiles_table.write_text("".join(f"{k}\t{v}\n" for k, v in sorted(seen.items())))
        assert main([
            "represent", "--entities", "ligands", "--model", str(work / "model.txt"),
            "--smiles", str(smiles_table), "--output", str(work / "ligvec.tsv"),
        ]) == 0
        assert main([
            "represent", "--entities", "proteins-ligand",
            "--ligand-vectors", str(work / "ligvec.tsv"),
            "--interactions", str(toy.interactions_path),
            "--output", str(work / "protvec.tsv"),
        ]) == 0
        table = corpus_io.load_vector_table(work / "protvec.tsv")
        assert len(table) == 30
        assert len(next(iter(table.values()))) == 8

    def test_similarity_cluster_evaluate(self, work, toy):
        assert main([
            "similarity", "--method", "cosine", "--vectors", str(work / "protvec.tsv"),
            "--output", str(work / "sim.tsv"),
        ]) == 0
        matrix = corpus_io.load_similarity(work / "sim.tsv")
        assert len(matrix.scores) == 30 * 29 // 2
        assert main([
            "cluster", "--matrix", str(work / "sim.tsv"), "--algo", "mcl",
            "--clip-negative", "--output", str(work / "clusters.tsv"),
        ]) == 0
        meta = json.loads((work / "clusters.tsv.meta.json").read_text())
        assert meta["algo"] == "mcl"
        assert meta["n_clusters"] >= 1
        assert main([
            "evaluate", "--clusters", str(work / "clusters.tsv"),
            "--gold", str(toy.gold_path), "--level", "family",
            "--output", str(work / "eval.json"),
        ]) == 0
        payload = json.loads((work / "eval.json").read_text())
        assert 0.0 <= payload["f"] <= 1.0

    def test_sweep_and_transclust_cluster(self, work, toy):
        assert main([
            "sweep", "--matrix", str(work / "sim.tsv"), "--gold", str(toy.gold_path),
            "--level", "family", "--lo", "0", "--hi", "1", "--step", "0.1",
            "--curve", str(work / "curve.tsv"), "--output", str(work / "sweep.json"),
        ]) == 0
        summary = json.loads((work / "sweep.json").read_text())
        assert summary["points"] == 11
        assert main([
            "cluster", "--matrix", str(work / "sim.tsv"), "--algo", "transclust",
            "--threshold", str(summary["best_threshold"]),
            "--output", str(work / "tc.tsv"),
        ]) == 0
        clusters = corpus_io.load_clusters(work / "tc.tsv")
        matrix_ids = set(corpus_io.load_similarity(work / "sim.tsv").ids())
        assert clusters.ids() == matrix_ids
        assert matrix_ids

    def test_correlate_matrix_with_itself(self, work, capsys):
        assert main([
            "correlate", "--matrix-a", str(work / "sim.tsv"), "--matrix-b", str(work / "sim.tsv"),
        ]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["pearson"] == pytest.approx(1.0, abs=1e-12)
        assert payload["only_a"] == payload["only_b"] == 0


class TestWordfreqSimilarity:
    def test_interactions_input(self, toy, tmp_path):
        out = tmp_path / "wf.tsv"
        assert main([
            "similarity", "--method", "wordfreq", "--interactions", str(toy.interactions_path),
            "--output", str(out),
        ]) == 0
        matrix = corpus_io.load_similarity(out)
        assert all(0.0 <= s <= 1.0 for s in matrix.scores.values())

    def test_sequences_input(self, tmp_path):
        seqs = tmp_path / "seqs.tsv"
        seqs.write_text("p1\tMKVLATGQW\np2\tMKVLATGQW\np3\tAAAAAAAAA\n")
        out = tmp_path / "wf.tsv"
        assert main(["similarity", "--method", "wordfreq", "--sequences", str(seqs),
                     "--output", str(out)]) == 0
        matrix = corpus_io.load_similarity(out)
        assert matrix.get("p1", "p2") == 1.0
        assert matrix.get("p1", "p3") == 0.0

    def test_distance_matrix_sweep_reports_user_axis(self, tmp_path):
        # e-value-like scores: low within the planted groups, high across
        matrix = tmp_path / "evalues.tsv"
        ids = ["a1", "a2", "a3", "b1", "b2", "b3"]
        lines = []
        for i, x in enumerate(ids):
            for y in ids[i + 1 :]:
                lines.append(f"{x}\t{y}\t{1.0 if x[0] == y[0] else 80.0}\n")
        matrix.write_text("".join(lines))
        gold = tmp_path / "gold.tsv"
        gold.write_text("".join(f"{p}\t{p[0]}.1\n" for p in ids))
        out = tmp_path / "sweep.json"
        assert main([
            "sweep", "--matrix", str(matrix), "--orientation", "distance",
            "--gold", str(gold), "--level", "superfamily",
            "--lo", "0", "--hi", "100", "--step", "5",
            "--curve", str(tmp_path / "curve.tsv"), "--output", str(out),
        ]) == 0
        summary = json.loads(out.read_text())
        assert summary["best_f"] == 1.0
        assert 1.0 <= summary["best_threshold"] <= 80.0  # user (e-value) axis

    def test_pairs_restriction(self, tmp_path):
        seqs = tmp_path / "seqs.tsv"
        seqs.write_text("p1\tMKVLATGQW\np2\tMKVLATGQW\np3\tAAAAAAAAA\n")
        pairs = tmp_path / "pairs.tsv"
        pairs.write_text("p2\tp1\n")
        out = tmp_path / "wf.tsv"
        assert main(["similarity", "--method", "wordfreq", "--sequences", str(seqs),
                     "--pairs", str(pairs), "--output", str(out)]) == 0
        matrix = corpus_io.load_similarity(out)
        assert set(matrix.scores) == {("p1", "p2")}


class TestPipelineCommand:
    def test_mini_pipeline_runs_and_reports(self, toy, tmp_path, capsys):
        rc = main(["pipeline", "--config", str(toy.config_path),
                   "--outdir", str(tmp_path / "run")] + MINI)
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert report["n_proteins"] == 30
        assert (tmp_path / "run" / "report.json").exists()
        assert (tmp_path / "run" / "sweep_curve.tsv").exists()

    def test_pipeline_matches_manual_stages(self, toy, tmp_path):
        run_dir = tmp_path / "auto"
        assert main(["pipeline", "--config", str(toy.config_path),
                     "--outdir", str(run_dir)] + MINI) == 0
        manual = tmp_path / "manual"
        manual.mkdir()
        assert main([
            "train", "--corpus", str(toy.corpus_path), "--kind", "smiles_word",
            "--dimension", "8", "--epochs", "1", "--negatives", "1",
            "--learning-rate", "0.025", "--min-count", "1", "--seed", "7", "--workers", "1",
            "--output", str(manual / "model.txt"),
        ]) == 0
        assert (manual / "model.txt").read_bytes() == (run_dir / "model.txt").read_bytes()

        interactions = corpus_io.load_interactions(toy.interactions_path)
        seen = {}
        for records in interactions.values():
            for rec in records:
                seen.setdefault(rec.id, rec.smiles)
        (manual / "ligands.tsv").write_text(
            "".join(f"{k}\t{v}\n" for k, v in sorted(seen.items()))
        )
        assert main([
            "represent", "--entities", "ligands", "--model", str(manual / "model.txt"),
            "--smiles", str(manual / "ligands.tsv"), "--output", str(manual / "ligvec.tsv"),
        ]) == 0
        assert main([
            "represent", "--entities", "proteins-ligand",
            "--ligand-vectors", str(manual / "ligvec.tsv"),
            "--interactions", str(toy.interactions_path),
            "--output", str(manual / "protvec.tsv"),
        ]) == 0
        assert main([
            "similarity", "--method", "cosine", "--vectors", str(manual / "protvec.tsv"),
            "--output", str(manual / "sim.tsv"),
        ]) == 0
        assert (manual / "ligvec.tsv").read_bytes() == (run_dir / "ligand_vectors.tsv").read_bytes()
        assert (manual / "protvec.tsv").read_bytes() == (run_dir / "protein_vectors.tsv").read_bytes()
        assert (manual / "sim.tsv").read_bytes() == (run_dir / "similarity.tsv").read_bytes()

    def test_unknown_config_key_rejected(self, toy, tmp_path, capsys):
        rc = main(["pipeline", "--config", str(toy.config_path),
                   "--outdir", str(tmp_path / "x"), "--set", "warp_speed=9"])
        assert rc != 0
        assert "warp_speed" in capsys.readouterr().err

    def test_missing_input_names_stage(self, toy, tmp_path, capsys):
        rc = main(["pipeline", "--config", str(toy.config_path),
                   "--outdir", str(tmp_path / "x"),
                   "--set", "corpus=does_not_exist.smi"] + MINI)
        assert rc != 0
        assert "train" in capsys.readouterr().err

    def test_wordfreq_pipeline_skips_training(self, toy, tmp_path, capsys):
        run_dir = tmp_path / "wf"
        rc = main(["pipeline", "--config", str(toy.config_path),
                   "--outdir", str(run_dir), "--set", "method=wordfreq",
                   "--set", "sweep_step=0.05"])
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert report["method"] == "wordfreq"
        assert report["f"] == 1.0  # disjoint family alphabets separate perfectly
        assert not (run_dir / "model.txt").exists()
        assert (run_dir / "similarity.tsv").exists()

    def test_char_token_pipeline(self, toy, tmp_path, capsys):
        rc = main(["pipeline", "--config", str(toy.config_path),
                   "--outdir", str(tmp_path / "chars"),
                   "--set", "token_kind=smiles_char"] + MINI)
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert report["n_proteins"] == 30
        assert 0.0 <= report["f"] <= 1.0

    def test_minmax_pooling_rejected_for_ligand_route(self, toy, tmp_path, capsys):
        rc = main(["pipeline", "--config", str(toy.config_path),
                   "--outdir", str(tmp_path / "x"), "--set", "pooling=minmax"])
        assert rc != 0
        assert "average" in capsys.readouterr().err


class TestFetchCommand:
    def test_fetch_with_stubbed_transport(self, tmp_path, monkeypatch):
        bodies = {
            "http://m.test/d2yxma_": json.dumps({"d2yxma_": ["Q14896"]}).encode(),
            "http://a.test/Q14896?offset=0": json.dumps(
                {"activities": [{"molecule_chembl_id": "CHEMBL81", "canonical_smiles": "CCO"}],
                 "page_meta": {"next": None}}
            ).encode(),
        }
        monkeypatch.setattr(acquisition, "http_transport", lambda url, timeout: bodies[url])
        monkeypatch.setenv("LIGVEC_MAPPING_URL", "http://m.test")
        monkeypatch.setenv("LIGVEC_ACTIVITY_URL", "http://a.test")
        domains = tmp_path / "domains.txt"
        domains.write_text("d2yxma_\n")
        out = tmp_path / "interactions.tsv"
        assert main([
            "fetch", "--domains", str(domains), "--cache-dir", str(tmp_path / "cache"),
            "--output", str(out),
        ]) == 0
        assert out.read_text() == "d2yxma_\tCHEMBL81\tCCO\n"
