"""
Comparing whole-statement labels with gold labels
=================================================
"""

# %%
from pathlib import Path

from fomc_dissent import load_corpus
from fomc_dissent.backends import MockBackend
from fomc_dissent.cache import Cache
from fomc_dissent.classify import Granularity, classify_units, make_units
from fomc_dissent.corpus import DocumentKind
from fomc_dissent.evaluation import f1_macro, load_gold_csv

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"
corpus = load_corpus(DATA / "corpus")
units = [u for d in corpus.of_kind(DocumentKind.STATEMENT) for u in make_units(d, Granularity.DOCUMENT)]
pred = [(s.unit.meeting, s.label) for s in classify_units(units, MockBackend(), Cache()).scored]

# %%
rep = f1_macro(load_gold_csv(DATA / "gold.csv"), pred)
print("macro F1", rep.f1_macro)
print(rep.confusion)
# Of the disagreements: how many were one step apart, and how many crossed zero.
print("adjacent", rep.adjacent_rate, "flip", rep.flip_rate)
