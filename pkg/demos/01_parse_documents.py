"""
Parsing a meeting's documents
=============================

Load the small fixture corpus, split one transcript into speaker turns and
one statement into sentences.
"""

# %%
from pathlib import Path

from fomc_dissent import load_corpus, validate_alignment
from fomc_dissent.corpus import DocumentKind
from fomc_dissent.textparse import aggregate_by_speaker, partition_transcript, segment_sentences

ROOT = Path(__file__).resolve().parent.parent / "tests" / "data" / "corpus"
corpus = load_corpus(ROOT)
print(len(corpus), "documents spanning", corpus.span)

# %%
# Meetings missing a document are flagged; a missing transcript is a warning.
for line in validate_alignment(corpus).lines():
    print(line)

# %%
# Transcripts split on speaker tags at the start of a line. "CHAIRMAN X." and
# "MR. X." map to the same speaker.
meeting = corpus.meetings[0]
turns = partition_transcript(corpus.get(meeting, DocumentKind.TRANSCRIPT))
for t in turns:
    print(f"{t.index:2d} {t.speaker:10s} {t.text[:60]!r}")

for agg in aggregate_by_speaker(turns):
    print(agg.speaker, agg.turn_count, "turn(s)")

# %%
# Statements split into sentences; "U.S." and titles do not end a sentence.
for s in segment_sentences(corpus.get(meeting, DocumentKind.STATEMENT)):
    print(s.index, s.text)
