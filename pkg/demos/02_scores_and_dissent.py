"""
Scoring meetings with the offline classifier
============================================

Label statement sentences and transcript speakers with the keyword backend,
then compute per-meeting scores and the dissent measures.
"""

# %%
from pathlib import Path

from fomc_dissent import load_corpus
from fomc_dissent.backends import MockBackend
from fomc_dissent.cache import Cache
from fomc_dissent.classify import Granularity, classify_units, make_units
from fomc_dissent.corpus import DocumentKind
from fomc_dissent.dissent import dissent_records, dissent_report
from fomc_dissent.score import meeting_series

ROOT = Path(__file__).resolve().parent.parent / "tests" / "data" / "corpus"
corpus = load_corpus(ROOT)

units = []
for kind, gran in [(DocumentKind.STATEMENT, Granularity.SENTENCE), (DocumentKind.TRANSCRIPT, Granularity.SPEAKER)]:
    for doc in corpus.of_kind(kind):
        units.extend(make_units(doc, gran))

# An in-memory cache; pass a path to keep labels between runs.
result = classify_units(units, MockBackend(), Cache())
print(result.n_units, "units,", result.backend_calls, "backend calls")

# %%
# Mean score lives in [-1, 1]. The logit score ignores Neutral units and is
# zero whenever hawkish and dovish mass balance.
for row in meeting_series(result.scored):
    print(row.meeting, row.kind.value, f"mean={row.mean_score:+.3f}", f"logit={row.logit_score:+.3f}")

# %%
# A meeting shows dissent when it has both a hawkish-side and a dovish-side unit.
report = dissent_report(dissent_records(result.scored))
for r in report.records:
    print(r.meeting, r.kind.value, r.dissent)
print("statements", report.statement_rate.value, "transcripts", report.transcript_rate.value)
print("P(T=1|S=1)", report.p_t_given_s1.value, "P(T=1|S=0)", report.p_t_given_s0.value)
