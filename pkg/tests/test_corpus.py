import datetime as dt
import json

import pytest

from fomc_dissent.corpus import (
    INFO,
    WARN,
    ContentError,
    Corpus,
    CorpusFormatError,
    DocumentKind,
    DuplicateDocumentError,
    RawDocument,
    TransportError,
    fetch_remote,
    load_corpus,
    save_corpus,
    save_manifest,
    validate_alignment,
)

S, M, T = DocumentKind.STATEMENT, DocumentKind.MINUTES, DocumentKind.TRANSCRIPT


def write(root, rel, text):
    p = root / rel
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text, encoding="utf-8")


def test_load_counts_files_and_span(tmp_path):
    write(tmp_path, "19940204/statement.txt", "Rates rose.")
    write(tmp_path, "20160127/statement.txt", "Rates held.")
    write(tmp_path, "20160127/transcript.txt", "CHAIR YELLEN. Hello.")
    corpus = load_corpus(tmp_path)
    assert len(corpus) == 3
    assert corpus.span == (dt.date(1994, 2, 4), dt.date(2016, 1, 27))
    assert [(d.meeting.isoformat(), d.kind) for d in corpus] == [
        ("1994-02-04", S), ("2016-01-27", S), ("2016-01-27", T),
    ]


def test_empty_root(tmp_path):
    corpus = load_corpus(tmp_path)
    assert len(corpus) == 0
    assert corpus.span is None


def test_aliased_names_collide(tmp_path):
    write(tmp_path, "20160127/statement.txt", "a")
    write(tmp_path, "20160127/Statement.TXT", "b")
    with pytest.raises(DuplicateDocumentError):
        load_corpus(tmp_path)


def test_malformed_date_dir_names_path(tmp_path):
    write(tmp_path, "2016-01-27/statement.txt", "a")
    with pytest.raises(CorpusFormatError, match="2016-01-27"):
        load_corpus(tmp_path)
    (tmp_path / "2016-01-27" / "statement.txt").unlink()
    (tmp_path / "2016-01-27").rmdir()
    write(tmp_path, "20160231/statement.txt", "a")
    with pytest.raises(CorpusFormatError, match="20160231"):
        load_corpus(tmp_path)


def test_missing_root(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_corpus(tmp_path / "nope")


def test_line_endings_normalized_and_unknown_files_ignored(tmp_path):
    (tmp_path / "20010131").mkdir()
    (tmp_path / "20010131" / "statement.txt").write_bytes(b"One.\r\nTwo.\rThree.")
    (tmp_path / "20010131" / "notes.md").write_text("ignored")
    (tmp_path / "manifest.json").write_text("[]")
    corpus = load_corpus(tmp_path)
    assert len(corpus) == 1
    assert corpus.documents[0].text == "One.\nTwo.\nThree."


def test_empty_document_rejected(tmp_path):
    write(tmp_path, "20010131/statement.txt", "")
    with pytest.raises(ContentError):
        load_corpus(tmp_path)


def test_manifest(tmp_path, corpus_root):
    corpus = load_corpus(corpus_root)
    out = tmp_path / "manifest.json"
    save_manifest(corpus, out)
    rows = json.loads(out.read_text())
    assert len(rows) == len(corpus) == 11
    assert set(rows[0]) == {"date", "kind", "sha256", "bytes"}
    assert rows[0]["date"] == "2001-01-31"


def test_round_trip_is_fixed_point(tmp_path, corpus_root):
    first = load_corpus(corpus_root)
    save_corpus(first, tmp_path / "a")
    second = load_corpus(tmp_path / "a")
    save_corpus(second, tmp_path / "b")
    third = load_corpus(tmp_path / "b")

    def key(c):
        return [(d.meeting, d.kind, d.text) for d in c]

    assert key(first) == key(second) == key(third)
    assert first.manifest() == second.manifest() == third.manifest()


def _doc(day, kind):
    return RawDocument(dt.date.fromisoformat(day), kind, "x")


def test_alignment_complete_has_no_flags():
    corpus = Corpus(tuple(_doc("2016-01-27", k) for k in DocumentKind))
    assert validate_alignment(corpus).flags == []


def test_alignment_transcript_only_is_info():
    report = validate_alignment(Corpus((_doc("2001-01-31", T),)))
    flags = report.flags
    assert {(f.level, f.kind) for _, f in flags} == {(INFO, S), (INFO, M)}


def test_alignment_statement_only_warns_for_transcript():
    report = validate_alignment(Corpus((_doc("1994-02-04", S),)))
    levels = {f.kind: f.level for _, f in report.flags}
    assert levels == {T: WARN, M: INFO}


@pytest.mark.parametrize("present", [{S}, {M}, {T}, {S, M}, {S, T}, {M, T}, {S, M, T}])
def test_alignment_flags_are_set_difference(present):
    docs = tuple(_doc("2008-01-30", k) for k in present)
    (m,) = validate_alignment(Corpus(docs)).meetings
    assert {f.kind for f in m.flags} == set(DocumentKind) - present
    assert m.present == frozenset(present)


def test_fetch_remote_writes_into_layout(stub_server, tmp_path):
    stub_server.routes["/20160127/statement.txt"] = (200, "The Committee decided.\r\n")
    doc = fetch_remote(dt.date(2016, 1, 27), S, stub_server.url, root=tmp_path)
    assert doc.text == "The Committee decided.\n"
    assert (tmp_path / "20160127" / "statement.txt").read_text() == doc.text
    again = fetch_remote(dt.date(2016, 1, 27), S, stub_server.url + "/", root=tmp_path)
    assert again.text == doc.text
    assert len(load_corpus(tmp_path)) == 1


def test_fetch_remote_404(stub_server):
    with pytest.raises(TransportError) as info:
        fetch_remote(dt.date(2016, 1, 27), S, stub_server.url)
    assert info.value.status == 404


def test_fetch_remote_empty_body(stub_server):
    stub_server.routes["/20160127/minutes.txt"] = (200, "")
    with pytest.raises(ContentError):
        fetch_remote(dt.date(2016, 1, 27), M, stub_server.url)
