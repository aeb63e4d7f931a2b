import sys
from pathlib import Path

import hypothesis.strategies as st
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from aodcomm.concerns import ConcernMap, ConcernType, read_config
from aodcomm.crosscut import annotate_repetitions
from aodcomm.model import MessageKind, MessageRecord, MessageTable, SequenceExpr, build_message_table, order_rows
from aodcomm.xmi_ingest import parse_xmi

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"
GOLDEN = Path(__file__).parent / "golden"

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("fast", max_examples=20, deadline=None)
settings.load_profile("default")

F = ConcernType.FUNCTIONAL
NF = ConcernType.NON_FUNCTIONAL


@pytest.fixture(scope="session")
def bank_config():
    return read_config(FIXTURES / "concerns.cfg")


@pytest.fixture(scope="session")
def bank_table(bank_config):
    return annotate_repetitions(build_message_table(parse_xmi(FIXTURES / "bank.xmi"), bank_config.concerns))


@pytest.fixture(scope="session")
def cheque_table(bank_table):
    return bank_table.with_rows(bank_table.diagram_rows("cheque service"))


@pytest.fixture(scope="session")
def bank_full_table(bank_config):
    return annotate_repetitions(build_message_table(parse_xmi(FIXTURES / "bank_full.xmi"), bank_config.concerns))


# ---- random tables -------------------------------------------------------

CLASSES = ("alpha", "beta", "gamma", "delta", "epsilon", "zeta")
NAMES = ("ping", "save", "log", "auth", "read", "Log")
DIAGRAMS = ("d1", "d2", "d3")


def make_row(name, sender, receiver, seq, diagram="d1", concerns=None, kind=MessageKind.CALL, guard=None, xmi_id=""):
    """Row builder; objects are named after their class with an index suffix."""
    (s_obj, s_cls), (r_obj, r_cls) = sender, receiver
    concerns = concerns or {}
    return MessageRecord(
        name=name,
        sender_object=s_obj,
        sender_class=s_cls,
        sender_concern=concerns.get(s_cls, F),
        receiver_object=r_obj,
        receiver_class=r_cls,
        receiver_concern=concerns.get(r_cls, F),
        seq=SequenceExpr(tuple(seq)),
        diagram=diagram,
        guard=guard,
        kind=kind,
        xmi_id=xmi_id,
    )


@st.composite
def concern_maps(draw):
    nonfunc = draw(st.sets(st.sampled_from(CLASSES)))
    return ConcernMap(entries={c: (NF if c in nonfunc else F) for c in CLASSES})


@st.composite
def random_tables(draw, max_rows=30, cmap=None):
    """(MessageTable, ConcernMap) with unique (diagram, seq) keys."""
    cmap = cmap if cmap is not None else draw(concern_maps())
    participants = st.tuples(st.sampled_from(CLASSES), st.integers(0, 1)).map(lambda p: (f"{p[0]}#{p[1]}", p[0]))
    row = st.tuples(
        st.sampled_from(DIAGRAMS),
        st.lists(st.integers(1, 3), min_size=1, max_size=3).map(tuple),
        participants,
        participants,
        st.sampled_from(NAMES),
        st.sampled_from([MessageKind.CALL] * 5 + [MessageKind.OTHER]),
        st.sampled_from([None, None, "cond"]),
    )
    drawn = draw(st.lists(row, max_size=max_rows, unique_by=lambda r: (r[0], r[1])))
    concerns = {c: cmap.entries[c] for c in CLASSES}
    rows = [
        make_row(name, s, r, seq, diagram, concerns, kind, guard, xmi_id=f"id{i:03d}")
        for i, (diagram, seq, s, r, name, kind, guard) in enumerate(drawn)
    ]
    return MessageTable(order_rows(rows, DIAGRAMS)), cmap


# ---- acceptance reporting ------------------------------------------------

ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
