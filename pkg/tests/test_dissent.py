import datetime as dt
import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fomc_dissent.classify import Granularity
from fomc_dissent.corpus import DocumentKind
from fomc_dissent.dissent import (
    DissentRecord,
    GroupingError,
    detect_dissent,
    dissent_records,
    dissent_report,
    write_records_csv,
    write_report_json,
)
from fomc_dissent.labels import Label

from conftest import scored

H, MH, N, MD, D = Label.HAWKISH, Label.MOSTLY_HAWKISH, Label.NEUTRAL, Label.MOSTLY_DOVISH, Label.DOVISH
S_KIND, T_KIND = DocumentKind.STATEMENT, DocumentKind.TRANSCRIPT


DAY = dt.date(2001, 1, 31)


def detect(labels):
    return detect_dissent(scored(labels, DAY), DAY, S_KIND)


def oracle(labels):
    hawkish = {"Hawkish", "Mostly Hawkish"}
    dovish = {"Dovish", "Mostly Dovish"}
    names = [lab.value for lab in labels]
    return int(any(n in hawkish for n in names) and any(n in dovish for n in names))


def test_examples():
    assert detect_dissent(scored([H, D, N])).dissent == 1
    assert detect_dissent(scored([N, N])).dissent == 0
    rec = detect_dissent(scored([MH, H, N]))
    assert (rec.n_hawkish_side, rec.n_dovish_side, rec.dissent) == (2, 0, 0)


def test_mixed_groups_rejected():
    units = scored([H], dt.date(2001, 1, 31)) + scored([D], dt.date(2001, 12, 11))
    with pytest.raises(GroupingError):
        detect_dissent(units)
    with pytest.raises(GroupingError):
        detect_dissent([])
    assert detect_dissent([], dt.date(2001, 1, 31), S_KIND).dissent == 0


@pytest.mark.parametrize("size", range(5))
def test_exhaustive_small(size):
    for combo in itertools.product(Label, repeat=size):
        assert detect(combo).dissent == oracle(combo)


@given(st.lists(st.sampled_from(list(Label)), max_size=40), st.sampled_from(list(Label)))
def test_monotone_and_mirror(labels, extra):
    before = detect(labels).dissent
    assert detect(labels + [extra]).dissent >= before
    assert detect([lab.mirror() for lab in labels]).dissent == before


def _records(pairs):
    out = []
    for i, (s, t) in enumerate(pairs):
        day = dt.date(2000, 1, 1) + dt.timedelta(days=i)
        out.append(DissentRecord(day, S_KIND, s, s))
        out.append(DissentRecord(day, T_KIND, t, t))
    return out


def test_report_hand_example():
    rep = dissent_report(_records([(1, 1), (0, 1), (0, 0), (1, 1)]))
    assert rep.statement_rate.value == 0.5
    assert rep.transcript_rate.value == 0.75
    assert rep.p_t_given_s1.value == 1.0
    assert rep.p_t_given_s0.value == 0.5
    assert (rep.p_t_given_s0.numerator, rep.p_t_given_s0.denominator) == (1, 2)
    assert rep.n_pairs == 4


def test_report_all_zero():
    rep = dissent_report(_records([(0, 0), (0, 0)]))
    assert rep.statement_rate.value == 0 and rep.transcript_rate.value == 0
    assert rep.p_t_given_s1.value is None
    assert rep.p_t_given_s0.value == 0


def test_report_transcript_only():
    rep = dissent_report([DissentRecord(dt.date(1995, 2, 1), T_KIND, 1, 1)])
    assert rep.transcript_rate.value == 1.0
    assert rep.statement_rate.value is None
    assert rep.n_pairs == 0
    assert rep.p_t_given_s1.value is None and rep.p_t_given_s0.value is None


def test_unpaired_statement_excluded_from_conditionals():
    recs = _records([(1, 1)]) + [DissentRecord(dt.date(1994, 2, 4), S_KIND, 0, 0)]
    rep = dissent_report(recs)
    assert rep.statement_rate.value == 0.5
    assert rep.n_pairs == 1
    assert rep.p_t_given_s0.value is None


@given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), min_size=1, max_size=60))
def test_total_probability(pairs):
    rep = dissent_report(_records(pairs))
    c1, c0 = rep.p_t_given_s1.fraction, rep.p_t_given_s0.fraction
    ps1 = rep.paired_statement_rate.fraction
    if c1 is not None and c0 is not None:
        assert rep.paired_transcript_rate.fraction == c1 * ps1 + c0 * (1 - ps1)
    for rate in (rep.statement_rate, rep.transcript_rate, rep.p_t_given_s1, rep.p_t_given_s0):
        assert rate.value is None or 0 <= rate.value <= 1


def test_records_use_granularity_per_kind():
    d = dt.date(2004, 6, 30)
    units = (
        scored([MH, MD], d, S_KIND, Granularity.SENTENCE)
        + scored([N], d, S_KIND, Granularity.DOCUMENT)
        + scored([H, N], d, T_KIND, Granularity.SPEAKER)
        + scored([H, D], d, DocumentKind.MINUTES, Granularity.DOCUMENT)
    )
    recs = dissent_records(units)
    assert [(r.kind, r.dissent) for r in recs] == [(S_KIND, 1), (T_KIND, 0)]


def test_exports(tmp_path):
    rep = dissent_report(_records([(1, 1), (0, 1)]))
    data = json.loads(write_report_json(rep, tmp_path / "d.json").read_text())
    assert data["p_t_given_s0"] == {"value": 1.0, "numerator": 1, "denominator": 1}
    assert len(data["records"]) == 4
    lines = write_records_csv(rep.records, tmp_path / "d.csv").read_text().splitlines()
    assert lines[0] == "date,kind,n_hawkish_side,n_dovish_side,dissent"
    assert lines[1] == "2000-01-01,statement,1,1,1"


def test_fraction_exactness():
    rep = dissent_report(_records([(1, 1), (1, 0), (1, 1)]))
    assert rep.p_t_given_s1.fraction == Fraction(2, 3)
