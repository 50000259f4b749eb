"""Command-line pipeline: ingest -> classify -> report, plus negativity.

Exit codes: 0 success, 1 internal error, 2 user or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from pathlib import Path

from fomc_dissent import classify as cl
from fomc_dissent import corpus as cp
from fomc_dissent import dissent as ds
from fomc_dissent import evaluation as ev
from fomc_dissent import negativity as ng
from fomc_dissent import score as sc
from fomc_dissent.backends import API_KEY_ENV, HttpBackend, MockBackend
from fomc_dissent.cache import Cache
from fomc_dissent.textparse import ParseError

log = logging.getLogger("fomc_dissent")


class UsageError(Exception):
    pass


def _out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load(root) -> cp.Corpus:
    try:
        return cp.load_corpus(root)
    except FileNotFoundError as exc:
        raise UsageError(str(exc)) from exc


def cmd_ingest(args) -> int:
    root = Path(args.root)
    if args.fetch:
        if not args.base_url:
            raise UsageError("--fetch needs --base-url")
        root.mkdir(parents=True, exist_ok=True)
        for item in args.fetch:
            date, _, kind = item.partition(":")
            try:
                meeting = cp.parse_meeting_id(date)
                doc_kind = cp.DocumentKind(kind.lower())
            except ValueError as exc:
                raise UsageError(f"bad --fetch value {item!r}; expected YYYYMMDD:kind") from exc
            doc = cp.fetch_remote(meeting, doc_kind, args.base_url, root=root)
            print(f"fetched {doc.source}")

    corpus = _load(root)
    manifest = Path(args.manifest) if args.manifest else root / cp.MANIFEST_NAME
    cp.save_manifest(corpus, manifest)
    report = cp.validate_alignment(corpus)
    for line in report.lines():
        print(line, file=sys.stderr)
    span = corpus.span
    span_txt = f"{span[0]} .. {span[1]}" if span else "empty"
    print(f"{len(corpus)} documents, {len(corpus.meetings)} meetings ({span_txt}); manifest {manifest}")
    return 0


def _backend(args):
    if args.backend == "mock":
        return MockBackend()
    if not args.api_base:
        raise UsageError("--backend http needs --api-base")
    if not os.environ.get(API_KEY_ENV):
        raise UsageError(f"--backend http needs the {API_KEY_ENV} environment variable")
    if not args.model:
        raise UsageError("--backend http needs --model")
    return HttpBackend(args.api_base, args.model, max_input_chars=args.max_input_chars)


def scored_name(kind: cp.DocumentKind, gran: cl.Granularity) -> str:
    return f"scored_{kind.value}_{gran.value}.csv"


def errors_name(kind: cp.DocumentKind, gran: cl.Granularity) -> str:
    return f"errors_{kind.value}_{gran.value}.json"


def cmd_classify(args) -> int:
    kind = cp.DocumentKind(args.kind)
    gran = cl.Granularity(args.granularity)
    if (kind, gran) not in cl.SUPPORTED:
        ok = ", ".join(sorted(f"{k.value}/{g.value}" for k, g in cl.SUPPORTED))
        raise UsageError(f"unsupported --kind/--granularity {kind.value}/{gran.value}; choose one of {ok}")
    if args.parallelism < 1:
        raise UsageError("--parallelism must be >= 1")

    out = _out(args)
    corpus = _load(args.root)
    backend = _backend(args)
    cache = Cache(args.cache or out / "cache.jsonl")
    few_shot = cl.load_few_shot(args.few_shot) if args.few_shot else []

    units = []
    for doc in corpus.of_kind(kind):
        units.extend(cl.make_units(doc, gran))
    result = cl.classify_units(
        units, backend, cache, few_shot,
        retries=args.retries, parallelism=args.parallelism, backoff=args.backoff,
        max_input_chars=args.max_input_chars,
    )
    cl.write_scored_csv(result.scored, out / scored_name(kind, gran))
    cl.write_errors_json(result.errors, out / errors_name(kind, gran))
    n = result.n_units
    hit_rate = result.cache_hits / n if n else 0.0
    print(
        f"{n} units, {result.backend_calls} backend calls, "
        f"{result.cache_hits} cache hits ({hit_rate:.0%}), {len(result.errors)} errors"
    )
    return 0


def _write_plot_series(rows, path: Path):
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", "kind", "granularity", "measure", "value"])
        for r in rows:
            for measure in ("mean_score", "logit_score"):
                value = getattr(r, measure)
                w.writerow([
                    r.meeting.isoformat(), r.kind.value, r.granularity.value, measure,
                    "" if value is None else repr(value),
                ])


def _write_plot_dissent(records, path: Path):
    flags: dict = {}
    for r in records:
        flags.setdefault(r.meeting, {})[r.kind] = r.dissent
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", "statement_dissent", "transcript_dissent"])
        for meeting in sorted(flags):
            f = flags[meeting]
            w.writerow([
                meeting.isoformat(),
                f.get(cp.DocumentKind.STATEMENT, ""),
                f.get(cp.DocumentKind.TRANSCRIPT, ""),
            ])


def cmd_report(args) -> int:
    out = Path(args.out)
    scored_files = sorted(out.glob("scored_*.csv")) if out.is_dir() else []
    scored = []
    excluded = []
    for path in scored_files:
        scored.extend(cl.read_scored_csv(path))
        err = path.with_name(path.name.replace("scored_", "errors_")).with_suffix(".json")
        if err.exists():
            excluded.extend(cl.read_errors_json(err))
    if not scored:
        raise UsageError(f"no scored units in {out}; run `ingest` and then `classify` first")

    rows = sc.meeting_series(scored, excluded)
    sc.write_scores_csv(rows, out / "scores.csv")
    records = ds.dissent_records(scored)
    report = ds.dissent_report(records)
    ds.write_report_json(report, out / "dissent.json")
    ds.write_records_csv(records, out / "dissent.csv")
    _write_plot_series(rows, out / "plot_series.csv")
    _write_plot_dissent(records, out / "plot_dissent.csv")

    if args.gold:
        gold = ev.load_gold_csv(args.gold)
        pred = [
            (s.unit.meeting, s.label)
            for s in scored
            if s.unit.kind is cp.DocumentKind.STATEMENT and s.unit.granularity is cl.Granularity.DOCUMENT
        ]
        if not pred:
            raise UsageError("--gold needs whole-statement labels; run `classify --kind statement --granularity document`")
        er = ev.f1_macro(gold, pred)
        ev.write_eval_json(er, out / "eval.json")
        ev.write_confusion_csv(er, out / "confusion.csv")
        print(f"f1_macro {er.f1_macro:.3f} over {er.n} meetings")

    def pct(rate):
        return "n/a" if rate.value is None else f"{rate.value:.0%} ({rate.numerator}/{rate.denominator})"

    print(f"{len(rows)} score rows; statement dissent {pct(report.statement_rate)}, "
          f"transcript dissent {pct(report.transcript_rate)}")
    print(f"P(T=1|S=1) {pct(report.p_t_given_s1)}, P(T=1|S=0) {pct(report.p_t_given_s0)}")
    return 0


def cmd_negativity(args) -> int:
    corpus = _load(args.root)
    try:
        meeting = cp.parse_meeting_id(args.date)
    except cp.CorpusFormatError as exc:
        raise UsageError(str(exc)) from exc
    doc = corpus.get(meeting, cp.DocumentKind.TRANSCRIPT)
    if doc is None:
        raise UsageError(f"no transcript for {meeting} under {args.root}")
    spans = ng.load_spans(args.topics)
    lexicon = ng.load_lexicon(args.lexicon) if args.lexicon else None
    if args.threshold_sweep:
        thresholds = [float(x) for x in args.threshold_sweep.split(",") if x.strip()]
    else:
        thresholds = [args.threshold]
    rows = ng.threshold_sweep(doc, spans, thresholds, lexicon)
    out = _out(args)
    ng.write_negativity_csv(rows, out / "negativity.csv")
    for r in rows:
        if r.topic == ng.ALL_TOPICS:
            print(f"threshold {r.threshold}: {r.n_negative}/{r.n_sentences} negative sentences")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fomc-dissent", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load the corpus, write manifest.json, report alignment")
    p.add_argument("--root", required=True)
    p.add_argument("--fetch", action="append", metavar="YYYYMMDD:KIND", help="download a document first")
    p.add_argument("--base-url")
    p.add_argument("--manifest", help="manifest path (default: <root>/manifest.json)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("classify", help="label units of one kind/granularity")
    p.add_argument("--root", required=True)
    p.add_argument("--kind", required=True, choices=[k.value for k in cp.DocumentKind])
    p.add_argument("--granularity", required=True, choices=[g.value for g in cl.Granularity])
    p.add_argument("--backend", choices=["mock", "http"], default="mock")
    p.add_argument("--api-base")
    p.add_argument("--model")
    p.add_argument("--cache", help="cache file (default: <out>/cache.jsonl)")
    p.add_argument("--few-shot", help="JSON Lines of {text, label}")
    p.add_argument("--parallelism", type=int, default=cl.DEFAULT_PARALLELISM)
    p.add_argument("--retries", type=int, default=cl.DEFAULT_RETRIES)
    p.add_argument("--backoff", type=float, default=cl.DEFAULT_BACKOFF, help="base retry delay in seconds")
    p.add_argument("--max-input-chars", type=int, help="truncate longer unit texts (keeps the head)")
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("report", help="scores, dissent, evaluation and plot data from scored units")
    p.add_argument("--out", default="out")
    p.add_argument("--gold", help="CSV of date,label")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("negativity", help="negative-sentence fractions by topic for one transcript")
    p.add_argument("--root", required=True)
    p.add_argument("--date", required=True)
    p.add_argument("--topics", required=True, help="JSON list of {topic, start_line, end_line}")
    p.add_argument("--threshold", type=float, default=ng.DEFAULT_THRESHOLD)
    p.add_argument("--threshold-sweep", help="comma-separated thresholds, e.g. 0.05,0.1,0.15")
    p.add_argument("--lexicon", help="token<TAB>valence file (default: shipped mini-lexicon)")
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_negativity)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, cp.CorpusError, ParseError, ng.SpanError, ev.DuplicateLabelError, ev.EmptyComparison) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        log.exception("internal error")
        return 1


if __name__ == "__main__":
    sys.exit(main())
