import json
import subprocess
import sys

import pytest

from dirty_encode.cli import main


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    assert main(["-q", "generate-dirty", "--n-entities", "25", "--samples", "300",
                 "--seed", "2", "--out-dir", str(out)]) == 0
    return out / "corpus.csv"


@pytest.fixture
def tiny(tmp_path):
    p = tmp_path / "tiny.csv"
    p.write_text("city,y\nParis,1\nLondon,2\nParis,3\nBerlin,4\n", encoding="utf-8")
    return p


def read(path):
    return path.read_text(encoding="utf-8")


class TestEncode:
    def test_one_hot(self, tiny, tmp_path):
        out = tmp_path / "o"
        assert main(["-q", "encode", "--input", str(tiny), "--column", "city",
                     "--method", "one_hot", "--out-dir", str(out)]) == 0
        lines = read(out / "features.csv").splitlines()
        assert lines[0] == "onehot:paris,onehot:london,onehot:berlin"
        assert lines[1] == "1.0,0.0,0.0"
        assert len(lines) == 5

    def test_reduced_similarity(self, corpus, tmp_path):
        out = tmp_path / "o"
        assert main(["-q", "encode", "--input", str(corpus), "--column", "name",
                     "--method", "similarity", "--measure", "ngram3", "--reduce", "kmeans",
                     "--d", "10", "--out-dir", str(out)]) == 0
        header = read(out / "features.csv").splitlines()[0]
        assert len(header.split(",")) == 10
        assert all(h.startswith("sim:") for h in header.split(","))

    def test_byte_identical_rerun(self, corpus, tmp_path):
        argv = ["-q", "encode", "--input", str(corpus), "--column", "name", "--method",
                "similarity:ngram3", "--reduce", "projection", "--d", "5", "--seed", "4"]
        assert main(argv + ["--out-dir", str(tmp_path / "a")]) == 0
        assert main(argv + ["--out-dir", str(tmp_path / "b")]) == 0
        for f in ("features.csv", "encoder.json"):
            assert read(tmp_path / "a" / f) == read(tmp_path / "b" / f)

    def test_saved_encoder_reuse(self, tiny, tmp_path):
        main(["-q", "encode", "--input", str(tiny), "--column", "city", "--method",
              "target", "--target", "y", "--task", "regression", "--out-dir", str(tmp_path / "a")])
        main(["-q", "encode", "--input", str(tiny), "--column", "city",
              "--encoder", str(tmp_path / "a" / "encoder.json"), "--out-dir", str(tmp_path / "b")])
        assert read(tmp_path / "a" / "features.csv") == read(tmp_path / "b" / "features.csv")
        assert float(read(tmp_path / "a" / "features.csv").splitlines()[1]) == pytest.approx(13 / 6)

    def test_missing_file_is_data_error(self, tmp_path):
        assert main(["-q", "encode", "--input", str(tmp_path / "nope.csv"), "--column", "c",
                     "--out-dir", str(tmp_path)]) == 3

    def test_missing_column_is_config_error(self, tiny, tmp_path):
        assert main(["-q", "encode", "--input", str(tiny), "--out-dir", str(tmp_path)]) == 2

    def test_mdv_regression_is_config_error(self, tiny, tmp_path):
        assert main(["-q", "encode", "--input", str(tiny), "--column", "city", "--method", "mdv",
                     "--target", "y", "--task", "regression", "--out-dir", str(tmp_path)]) == 2


class TestBenchmark:
    def argv(self, corpus, out, *extra):
        return ["-q", "benchmark", "--input", str(corpus), "--column", "name", "--target",
                "target", "--task", "regression", "--numerical", "amount", "--splits", "2",
                "--out-dir", str(out), *extra]

    def test_smoke_and_reproducible(self, corpus, tmp_path):
        extra = ["--method", "one_hot", "--method", "similarity:ngram3"]
        assert main(self.argv(corpus, tmp_path / "a", *extra)) == 0
        assert main(self.argv(corpus, tmp_path / "b", *extra, "--jobs", "2")) == 0
        for f in ("results.csv", "summary.csv", "splits.csv", "plot.csv"):
            assert read(tmp_path / "a" / f) == read(tmp_path / "b" / f)
        summary = read(tmp_path / "a" / "summary.csv").splitlines()
        assert summary[0] == "method,median,mean,average_rank"
        assert len(summary) == 3

    def test_d_sweep(self, corpus, tmp_path):
        assert main(self.argv(corpus, tmp_path, "--method", "similarity:ngram3", "--method",
                              "one_hot", "--reduce", "most_frequent", "--d", "5",
                              "--d", "full")) == 0
        methods = [l.split(",")[0] for l in read(tmp_path / "summary.csv").splitlines()[1:]]
        assert methods == ["similarity:ngram3+most_frequent5", "similarity:ngram3", "one_hot"]

    def test_config_file_and_flag_override(self, corpus, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text(f"[data]\ninput = {corpus}\ndirty = name\ntarget = target\n"
                       "task = regression\n[benchmark]\nmethods = one_hot, target\n"
                       "splits = 5\nseed = 3\n", encoding="utf-8")
        assert main(["-q", "benchmark", "--config", str(ini), "--splits", "1",
                     "--out-dir", str(tmp_path / "o")]) == 0
        assert len(read(tmp_path / "o" / "splits.csv").splitlines()) == 2
        cfg = read(tmp_path / "o" / "config.ini")
        assert "seed = 3" in cfg and "splits = 1" in cfg

    def test_env_seed(self, corpus, tmp_path, monkeypatch):
        monkeypatch.setenv("DIRTY_ENCODE_SEED", "11")
        assert main(self.argv(corpus, tmp_path / "a", "--method", "one_hot")) == 0
        assert main(self.argv(corpus, tmp_path / "b", "--method", "one_hot", "--seed", "11")) == 0
        assert read(tmp_path / "a" / "results.csv") == read(tmp_path / "b" / "results.csv")
        assert "seed = 11" in read(tmp_path / "a" / "config.ini")

    def test_bad_env_seed(self, corpus, tmp_path, monkeypatch):
        monkeypatch.setenv("DIRTY_ENCODE_SEED", "abc")
        assert main(self.argv(corpus, tmp_path, "--method", "one_hot")) == 2

    def test_external_predictions(self, tiny, tmp_path):
        preds = tmp_path / "p.csv"
        preds.write_text("row_id,prediction\n0,1\n1,2\n2,3\n3,4\n", encoding="utf-8")
        assert main(["-q", "benchmark", "--input", str(tiny), "--column", "city", "--target",
                     "y", "--task", "regression", "--external-predictions", str(preds),
                     "--out-dir", str(tmp_path / "o")]) == 0
        assert read(tmp_path / "o" / "external_score.csv") == "method,score\nexternal,1.0\n"

    def test_bad_method(self, corpus, tmp_path):
        assert main(self.argv(corpus, tmp_path, "--method", "word2vec")) == 2


class TestAnalysis:
    def test_histogram(self, corpus, tmp_path):
        argv = ["-q", "histogram", "--input", str(corpus), "--column", "name",
                "--pairs", "500", "--measure", "ngram3", "--measure", "lev_ratio"]
        assert main(argv + ["--out-dir", str(tmp_path / "a")]) == 0
        assert main(argv + ["--out-dir", str(tmp_path / "b")]) == 0
        for name in ("histogram_ngram3.tsv", "histogram_lev_ratio.tsv"):
            text = read(tmp_path / "a" / name)
            assert text == read(tmp_path / "b" / name)
            counts = [int(l.split("\t")[2]) for l in text.splitlines()[1:-1]]
            assert sum(counts) == 500

    def test_histogram_default_pairs(self, corpus, tmp_path):
        assert main(["-q", "histogram", "--input", str(corpus), "--column", "name",
                     "--measure", "exact", "--out-dir", str(tmp_path)]) == 0
        lines = read(tmp_path / "histogram_exact.tsv").splitlines()
        assert sum(int(l.split("\t")[2]) for l in lines[1:-1]) == 10_000

    def test_cardinality(self, corpus, tmp_path):
        assert main(["-q", "cardinality", "--input", str(corpus), "--column", "name",
                     "--out-dir", str(tmp_path)]) == 0
        lines = read(tmp_path / "cardinality.tsv").splitlines()
        assert lines[0] == "n_samples\tn_distinct"
        ns = [int(l.split("\t")[0]) for l in lines[1:]]
        assert ns[0] == 10 and ns[-1] == 300

    def test_generate_clean(self, tmp_path):
        assert main(["-q", "generate-dirty", "--n-entities", "12", "--samples", "200",
                     "--corruption", "0", "--out-dir", str(tmp_path)]) == 0
        assert len(read(tmp_path / "truth.csv").splitlines()) == 13

    def test_generate_bad_probability(self, tmp_path):
        assert main(["-q", "generate-dirty", "--corruption", "1.5", "--out-dir",
                     str(tmp_path)]) == 2


class TestInspect:
    def test_round_trip(self, corpus, tmp_path, capsys):
        main(["-q", "encode", "--input", str(corpus), "--column", "name", "--method",
              "similarity:jaro_winkler", "--reduce", "kmeans", "--d", "4",
              "--out-dir", str(tmp_path)])
        capsys.readouterr()
        again = tmp_path / "again.json"
        assert main(["-q", "inspect", str(tmp_path / "encoder.json"),
                     "--reserialize", str(again)]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["round_trip_identical"] is True
        assert summary["output_dim"] == 4
        assert read(again) == read(tmp_path / "encoder.json")

    def test_garbage(self, tmp_path):
        p = tmp_path / "x.json"
        p.write_text("{not json", encoding="utf-8")
        assert main(["-q", "inspect", str(p)]) == 3
        p.write_text('{"format": "other"}', encoding="utf-8")
        assert main(["-q", "inspect", str(p)]) == 3


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "dirty_encode", "generate-dirty",
                           "--n-entities", "5", "--samples", "20", "--out-dir", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "seed" in proc.stderr
