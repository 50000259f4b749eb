"""
Negative sentences by topic
===========================

Count transcript sentences whose lexicon negativity reaches a threshold,
separately for each hand-marked topic span.
"""

# %%
import datetime as dt
from pathlib import Path

from fomc_dissent import load_corpus
from fomc_dissent.corpus import DocumentKind
from fomc_dissent.negativity import TopicSpan, negativity_score, threshold_sweep

ROOT = Path(__file__).resolve().parent.parent / "tests" / "data" / "corpus"
doc = load_corpus(ROOT).get(dt.date(2001, 1, 31), DocumentKind.TRANSCRIPT)
print(doc.text)

# %%
# A sentence's score is the negative share of its lexicon valence mass.
for text in ["Growth is strong.", "growth is terrible and weak", "The Committee met."]:
    print(f"{negativity_score(text):.2f}  {text}")

# %%
# Spans are 0-based, half-open line ranges. Each threshold gets per-topic rows
# plus an ALL row.
spans = [TopicSpan("proposal", 6, 7), TopicSpan("views", 7, 10)]
for r in threshold_sweep(doc, spans, (0.05, 0.1, 0.15)):
    print(r.threshold, r.topic, r.n_negative, "/", r.n_sentences, "speakers:", r.n_speakers)
