from collections import defaultdict

import hypothesis.strategies as st
from hypothesis import assume, given

from aodcomm.concerns import read_config
from aodcomm.crosscut import AspectCandidateSet, detect_aspect_candidates, repetition_counts
from aodcomm.errors import TransformError
from aodcomm.metrics import aod_base_rows, coupling_report, coupling_total, fan_in, fan_out
from aodcomm.model import MessageKind, MessageTable
from aodcomm.transform import transform_model
from conftest import FIXTURES, make_row, random_tables


def bank_full_aod(table):
    cmap = read_config(FIXTURES / "concerns.cfg").concerns
    return transform_model(table, detect_aspect_candidates(repetition_counts(table), cmap, 4))


def adjacency(rows):
    """Independent oracle: build the class graph first, then read degrees off it."""
    out, inn = defaultdict(set), defaultdict(set)
    for r in rows:
        if r.kind is not MessageKind.CALL or r.sender_class == r.receiver_class:
            continue
        out[r.sender_class].add(r.receiver_class)
        inn[r.receiver_class].add(r.sender_class)
    return out, inn


def test_home_page_fan_out(bank_full_table):
    aod = bank_full_aod(bank_full_table)
    assert fan_out("home page", bank_full_table) == 3
    assert fan_out("home page", aod_base_rows(aod)) == 1


def test_account_data_base_fan_in(bank_full_table):
    assert fan_in("account data base", bank_full_table) == 3


def test_aspect_reports_zero(bank_full_table):
    report = coupling_report(bank_full_table, bank_full_aod(bank_full_table))
    assert report.per_class["security"]["aod"] == {"fan_in": 0, "fan_out": 0}
    assert report.aspects == ("login page", "security")


def test_bank_full_totals(bank_full_table):
    report = coupling_report(bank_full_table, bank_full_aod(bank_full_table))
    assert (report.ood_total, report.aod_total, report.delta) == (14, 6, 8)
    assert report.to_dict()["totals"] == {"ood_total": 14, "aod_total": 6}


def test_empty_table():
    empty = MessageTable()
    assert fan_in("x", empty) == fan_out("x", empty) == coupling_total(empty) == 0
    report = coupling_report(empty, transform_model(empty, AspectCandidateSet(threshold=1)))
    assert report.delta == 0 and report.per_class == {}


def test_self_calls_ignored():
    a = ("a", "A")
    t = MessageTable((make_row("x", a, a, (1,)),))
    assert fan_out("A", t) == fan_in("A", t) == 0


def test_single_functional_message_has_zero_delta():
    t = MessageTable((make_row("x", ("a", "A"), ("b", "B"), (1,)),))
    report = coupling_report(t, transform_model(t, AspectCandidateSet(threshold=1)))
    assert report.delta == 0 and report.ood_total == 1


def test_messages_weighting(bank_full_table):
    distinct = fan_out("home page", bank_full_table)
    weighted = fan_out("home page", bank_full_table, "messages")
    assert weighted >= distinct
    rows = [r for r in bank_full_table.rows if r.is_call and r.sender_class == "home page" and r.receiver_class != "home page"]
    assert weighted == len(rows)


def test_text_report_lists_every_class(bank_full_table):
    report = coupling_report(bank_full_table, bank_full_aod(bank_full_table))
    text = report.to_text()
    for cls in report.per_class:
        assert cls in text
    assert "delta 8" in text


@given(random_tables())
def test_matches_graph_oracle(drawn):
    table, _ = drawn
    out, inn = adjacency(table.rows)
    for cls in table.classes():
        assert fan_out(cls, table) == len(out[cls])
        assert fan_in(cls, table) == len(inn[cls])
    assert coupling_total(table) == sum(len(v) for v in out.values())


@given(random_tables())
def test_fan_in_and_out_sums_agree(drawn):
    table, _ = drawn
    classes = table.classes()
    assert sum(fan_in(c, table) for c in classes) == sum(fan_out(c, table) for c in classes) == coupling_total(table)


@given(random_tables(), st.integers(1, 3))
def test_aspectization_never_increases_coupling(drawn, t):
    table, cmap = drawn
    cand = detect_aspect_candidates(repetition_counts(table), cmap, t)
    try:
        aod = transform_model(table, cand)
    except TransformError:
        assume(False)
    report = coupling_report(table, aod)
    assert report.delta >= 0
    for cls, v in report.per_class.items():
        assert v["aod"]["fan_out"] <= v["ood"]["fan_out"]
        assert v["aod"]["fan_in"] <= v["ood"]["fan_in"]


@given(random_tables())
def test_identity_transform_has_zero_delta(drawn):
    table, _ = drawn
    report = coupling_report(table, transform_model(table, AspectCandidateSet(threshold=1)))
    assert report.delta == 0
