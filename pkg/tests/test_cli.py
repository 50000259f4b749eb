import csv
import json
import shutil

import pytest

from fomc_dissent.cli import main

from conftest import CORPUS, DATA


@pytest.fixture
def root(tmp_path):
    dst = tmp_path / "corpus"
    shutil.copytree(CORPUS, dst)
    return dst


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def classify_all(capsys, root, out):
    for kind, gran in [("statement", "sentence"), ("statement", "document"), ("transcript", "speaker"),
                       ("minutes", "document")]:
        code, stdout, _ = run(capsys, "classify", "--root", root, "--kind", kind, "--granularity", gran,
                              "--out", out, "--parallelism", 2)
        assert code == 0, stdout


def test_ingest_writes_manifest(capsys, root):
    code, out, err = run(capsys, "ingest", "--root", root)
    assert code == 0
    rows = json.loads((root / "manifest.json").read_text())
    assert len(rows) == 11
    assert "11 documents, 4 meetings (2001-01-31 .. 2016-01-27)" in out
    assert "2001-12-11" in err and "minutes" in err


def test_ingest_missing_root(capsys, tmp_path):
    code, _, err = run(capsys, "ingest", "--root", tmp_path / "nope")
    assert code == 2 and err.startswith("error:")


def test_ingest_fetch(capsys, stub_server, tmp_path):
    stub_server.routes["/20160127/statement.txt"] = (200, "Rates held.")
    code, out, _ = run(capsys, "ingest", "--root", tmp_path / "c", "--fetch", "20160127:statement",
                       "--base-url", stub_server.url)
    assert code == 0
    assert (tmp_path / "c" / "20160127" / "statement.txt").read_text() == "Rates held."
    code, _, err = run(capsys, "ingest", "--root", tmp_path / "c", "--fetch", "20160127:minutes",
                       "--base-url", stub_server.url)
    assert code == 2 and "404" in err


def test_classify_then_warm_rerun(capsys, root, tmp_path):
    out = tmp_path / "out"
    argv = ["classify", "--root", root, "--kind", "statement", "--granularity", "sentence", "--out", out]
    code, first, _ = run(capsys, *argv)
    assert code == 0
    assert first.strip() == "16 units, 16 backend calls, 0 cache hits (0%), 0 errors"
    code, second, _ = run(capsys, *argv)
    assert second.strip() == "16 units, 0 backend calls, 16 cache hits (100%), 0 errors"
    rows = list(csv.DictReader((out / "scored_statement_sentence.csv").open()))
    assert [r["category"] for r in rows[:4]] == ["Mostly Dovish", "Mostly Dovish", "Mostly Hawkish", "Mostly Dovish"]
    assert json.loads((out / "errors_statement_sentence.json").read_text()) == []


def test_classify_unsupported_pair(capsys, root, tmp_path):
    code, _, err = run(capsys, "classify", "--root", root, "--kind", "transcript", "--granularity", "sentence",
                       "--out", tmp_path)
    assert code == 2 and "unsupported" in err


def test_classify_http_without_key(capsys, root, tmp_path, monkeypatch):
    monkeypatch.delenv("FOMC_DISSENT_API_KEY", raising=False)
    code, _, err = run(capsys, "classify", "--root", root, "--kind", "statement", "--granularity", "document",
                       "--backend", "http", "--api-base", "http://127.0.0.1:9", "--model", "m", "--out", tmp_path)
    assert code == 2 and "FOMC_DISSENT_API_KEY" in err


def test_classify_http_backend(capsys, root, tmp_path, stub_server, monkeypatch):
    from conftest import chat_response

    monkeypatch.setenv("FOMC_DISSENT_API_KEY", "k")
    stub_server.routes["/chat/completions"] = (200, chat_response("Neutral"))
    code, out, _ = run(capsys, "classify", "--root", root, "--kind", "minutes", "--granularity", "document",
                       "--backend", "http", "--api-base", stub_server.url, "--model", "m", "--out", tmp_path)
    assert code == 0 and out.startswith("3 units, 3 backend calls")
    assert len(stub_server.posts) == 3


def test_bad_argument_exit_code(capsys):
    code, _, _ = run(capsys, "classify", "--kind", "pamphlet")
    assert code == 2


def test_report_artifacts(capsys, root, tmp_path):
    out = tmp_path / "out"
    classify_all(capsys, root, out)
    code, stdout, _ = run(capsys, "report", "--out", out, "--gold", DATA / "gold.csv")
    assert code == 0
    for name in ["scores.csv", "dissent.json", "dissent.csv", "plot_series.csv", "plot_dissent.csv",
                 "eval.json", "confusion.csv"]:
        assert (out / name).exists(), name
    rep = json.loads((out / "dissent.json").read_text())
    assert rep["statement_rate"]["value"] == 0.5
    assert rep["transcript_rate"]["value"] == 0.75
    assert rep["p_t_given_s1"]["value"] == 1.0
    assert rep["p_t_given_s0"]["value"] == 0.5
    ev = json.loads((out / "eval.json").read_text())
    # predicted whole statements: Dovish, Dovish, Mostly Dovish, Neutral
    assert ev["f1_macro"] == pytest.approx(0.5, abs=1e-12)
    assert "f1_macro 0.500 over 4 meetings" in stdout
    series = list(csv.DictReader((out / "plot_series.csv").open()))
    assert {r["measure"] for r in series} == {"mean_score", "logit_score"}
    scores = list(csv.DictReader((out / "scores.csv").open()))
    assert len(scores) == 4 + 4 + 4 + 3


def test_report_without_scores(capsys, tmp_path):
    code, _, err = run(capsys, "report", "--out", tmp_path)
    assert code == 2 and "no scored units" in err


def test_negativity_command(capsys, root, tmp_path):
    topics = tmp_path / "topics.json"
    topics.write_text(json.dumps([{"topic": "round", "start_line": 6, "end_line": 10}]))
    code, out, _ = run(capsys, "negativity", "--root", root, "--date", "20010131", "--topics", topics,
                       "--threshold-sweep", "0.05,0.1,0.15", "--out", tmp_path / "o")
    assert code == 0
    rows = list(csv.DictReader((tmp_path / "o" / "negativity.csv").open()))
    assert len(rows) == 6
    assert rows[0] == {"topic": "round", "n_sentences": "3", "n_negative": "2",
                       "fraction_negative": repr(2 / 3), "n_speakers": "3", "threshold": "0.05"}
    assert "threshold 0.1: 2/3 negative sentences" in out


def test_negativity_bad_span(capsys, root, tmp_path):
    topics = tmp_path / "topics.json"
    topics.write_text(json.dumps([{"topic": "x", "start_line": 0, "end_line": 99}]))
    code, _, err = run(capsys, "negativity", "--root", root, "--date", "20010131", "--topics", topics,
                       "--out", tmp_path)
    assert code == 2 and "outside" in err


def test_module_entry_point(root, tmp_path):
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "fomc_dissent", "ingest", "--root", str(root)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "11 documents" in proc.stdout
