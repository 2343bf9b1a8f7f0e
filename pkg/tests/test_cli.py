"""CLI subcommands: exit codes, output shapes, determinism."""

import numpy as np
import pytest

from mfir.cli import main
from mfir.evaluate import generate_synthetic_corpus
from mfir.fusion import ColumnStats, FeatureMatrix
from mfir.gabor import GaborBankParams
from mfir.index import RetrievalIndex, load_index, save_index

BANK_FLAGS = ["--scales", "2", "--orientations", "3", "--ulow", "0.08", "--uhigh", "0.3"]


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli_corpus")
    generate_synthetic_corpus(3, 4, seed=31, out=root)
    return root


@pytest.fixture(scope="module")
def index_file(tmp_path_factory, corpus):
    out = tmp_path_factory.mktemp("cli_index") / "corpus.mfir"
    code = main(["index", "--root", str(corpus), "--out", str(out), "--bins", "2", *BANK_FLAGS])
    assert code == 0
    return out


class TestIndexCommand:
    def test_reports_shape_and_writes_file(self, corpus, tmp_path, capsys):
        out = tmp_path / "idx.mfir"
        code = main(["index", "--root", str(corpus), "--out", str(out), *BANK_FLAGS])
        captured = capsys.readouterr()
        assert code == 0
        assert out.exists()
        lines = dict(line.split("\t") for line in captured.out.strip().splitlines())
        assert lines["rows"] == "12"
        assert lines["cols"] == str(2 * 3 * 2 + 72)

    def test_bank_flags_recorded_in_header(self, index_file):
        index = load_index(index_file)
        assert index.params.scales == 2
        assert index.params.orientations == 3

    def test_missing_root_exits_nonzero(self, tmp_path, capsys):
        code = main(["index", "--root", str(tmp_path / "nope"), "--out", str(tmp_path / "x")])
        assert code == 1
        assert "error:" in capsys.readouterr().err

    def test_precondition_violations_exit_cleanly(self, corpus, index_file, tmp_path, capsys):
        query = corpus / "class_00" / "img_000.png"
        assert main(["query", "--index", str(index_file), "--query", str(query), "--k", "0"]) == 1
        assert "error:" in capsys.readouterr().err
        assert main(["synth", "--out", str(tmp_path / "c"), "--classes", "1"]) == 1
        assert "error:" in capsys.readouterr().err


class TestQueryCommand:
    def test_self_retrieval_first_line(self, corpus, index_file, capsys):
        query = corpus / "class_01" / "img_002.png"
        code = main(["query", "--index", str(index_file), "--query", str(query), "--k", "3"])
        captured = capsys.readouterr()
        assert code == 0
        lines = captured.out.strip().splitlines()
        assert len(lines) == 3
        first = lines[0].split("\t")
        assert first[0] == "1"
        assert first[5] == "class_01/img_002.png"

    def test_k_larger_than_index_truncates(self, corpus, index_file, capsys):
        query = corpus / "class_00" / "img_000.png"
        code = main(["query", "--index", str(index_file), "--query", str(query), "--k", "999"])
        assert code == 0
        assert len(capsys.readouterr().out.strip().splitlines()) == 12

    def test_line_format(self, corpus, index_file, capsys):
        query = corpus / "class_02" / "img_001.png"
        main(["query", "--index", str(index_file), "--query", str(query), "--k", "2"])
        for line in capsys.readouterr().out.strip().splitlines():
            rank_pos, fused, tex, col, label, path = line.split("\t")
            float(fused), float(tex), float(col)
            assert rank_pos.isdigit()
            assert label.startswith("class_")
            assert "." in fused and len(fused.split(".")[1]) == 6

    def test_texture_only_weights_follow_texture_channel(self, corpus, index_file, capsys):
        query = corpus / "class_00" / "img_001.png"
        code = main(["query", "--index", str(index_file), "--query", str(query),
                     "--k", "12", "--weights", "1,0"])
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        tex_stars = [float(line.split("\t")[2]) for line in lines]
        assert tex_stars == sorted(tex_stars)
        # independent rerank: raw texture distances recomputed from the index
        from mfir.gabor import build_filter_bank
        from mfir.index import extract_features, load_index
        index = load_index(index_file)
        feats = extract_features(query, build_filter_bank(index.params))
        n_tex = index.n_texture_cols
        std = np.where(index.stats.std == 0, 1.0, index.stats.std)
        tex = (index.matrix.values[:, :n_tex] - index.stats.mean) / std
        tex[:, index.stats.std == 0] = 0.0
        q = np.where(index.stats.std == 0, 0.0, (feats.texture - index.stats.mean) / std)
        raw = np.linalg.norm(tex[:, index.retained] - q[list(index.retained)], axis=1)
        want = [index.matrix.paths[i] for i in np.argsort(raw, kind="stable")]
        assert [line.split("\t")[5] for line in lines] == want

    def test_deterministic(self, corpus, index_file, capsys):
        query = corpus / "class_01" / "img_000.png"
        main(["query", "--index", str(index_file), "--query", str(query)])
        first = capsys.readouterr().out
        main(["query", "--index", str(index_file), "--query", str(query)])
        assert capsys.readouterr().out == first

    def test_corrupt_index_exits_nonzero(self, tmp_path, corpus, capsys):
        bad = tmp_path / "bad.mfir"
        bad.write_bytes(b"garbage")
        code = main(["query", "--index", str(bad), "--query",
                     str(corpus / "class_00" / "img_000.png")])
        assert code == 1
        assert "error:" in capsys.readouterr().err


class TestReduceCommand:
    def test_gammas_match_and_rerun_is_stable(self, index_file, capsys):
        assert main(["reduce", "--index", str(index_file), "--bins", "2"]) == 0
        first = capsys.readouterr().out.strip()
        fields = first.split("\t")
        assert fields[0] == fields[1]
        assert main(["reduce", "--index", str(index_file), "--bins", "2"]) == 0
        assert capsys.readouterr().out.strip() == first

    def test_duplicate_texture_columns_collapse(self, tmp_path, capsys):
        params = GaborBankParams(scales=2, orientations=1, u_low=0.1, u_high=0.3)
        rng = np.random.default_rng(33)
        col = rng.random((6, 1))
        tex = np.repeat(col, params.n_features, axis=1)
        hist = rng.random((6, 72))
        hist /= hist.sum(axis=1, keepdims=True)
        matrix = FeatureMatrix(values=np.hstack([tex, hist]),
                               labels=("a", "a", "b", "b", "c", "c"),
                               paths=tuple(f"p{i}" for i in range(6)))
        index = RetrievalIndex(params=params, hist_scheme="hsv-8x3x3", matrix=matrix,
                               stats=ColumnStats(mean=tex.mean(axis=0), std=tex.std(axis=0)),
                               retained=(0, 1, 2, 3), gamma_full=1.0, gamma_reduct=1.0)
        path = tmp_path / "dup.mfir"
        save_index(index, path)
        assert main(["reduce", "--index", str(path), "--bins", "3"]) == 0
        capsys.readouterr()
        assert len(load_index(path).retained) <= 1


class TestEvaluateCommand:
    def test_report_to_stdout_and_file(self, corpus, tmp_path, capsys):
        out = tmp_path / "report.tsv"
        code = main(["evaluate", "--root", str(corpus),
                     "--training-sizes", "2", "--db-sizes", "6",
                     "--k", "3", "--seed", "7", "--bins", "2",
                     "--out", str(out), *BANK_FLAGS])
        captured = capsys.readouterr()
        assert code == 0
        assert out.read_text() == captured.out
        lines = captured.out.strip().splitlines()
        assert lines[0].startswith("training_size\tdb_size")
        assert len(lines) == 2

    def test_insufficient_corpus_exits_nonzero(self, corpus, capsys):
        code = main(["evaluate", "--root", str(corpus),
                     "--training-sizes", "50", "--db-sizes", "6", *BANK_FLAGS])
        assert code == 1
        assert "error:" in capsys.readouterr().err


class TestSynthCommand:
    def test_writes_corpus(self, tmp_path, capsys):
        code = main(["synth", "--out", str(tmp_path / "c"), "--classes", "2",
                     "--per-class", "3", "--seed", "3"])
        captured = capsys.readouterr()
        assert code == 0
        assert "images\t6" in captured.out
        assert len(list((tmp_path / "c").rglob("*.png"))) == 6
