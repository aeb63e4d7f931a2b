import re

import pytest

from aodcomm.errors import UnsupportedFormatError, XmiParseError
from aodcomm.xmi_ingest import UNRESOLVED, parse_xmi, resolve_participants
from conftest import FIXTURES
from xmi_builder import Diagram, Msg, bank_full_diagrams, build_xmi

BLOCK_USER = FIXTURES / "block_user_message.xmi"


def test_block_user_fragment_fields():
    raw = parse_xmi(BLOCK_USER)
    assert len(raw.messages) == 1
    msg = raw.messages[0]
    assert msg.name == "block user"
    assert msg.xmi_id == "EAID_B479EEB2_DC42_43fe_BC24_6FAA8A70B5E8"
    assert msg.sender_id == "EAID_ODF2BC6D_B53B_4536_BC6D_2E5B175A905C"
    assert msg.tagged["seqno"] == "15"
    assert msg.seqno == 15
    assert msg.tagged["conditional"] == "any misuse"
    assert msg.tagged["privatedata4"] == "5.2.1"
    assert msg.tagged["privatedata1"] == "Synchronous"
    assert msg.tagged["privatedata3"] == "Call"
    assert msg.tagged["lt"] == "5.2.1: [any misuse]:block user()"
    assert msg.tagged["ea_targetName"] == "h-page"
    assert msg.tagged["diagram"] == "EAID_62A38B1B_58D5_4985_A568_43A9024B9734"
    # entity in an unknown tag is decoded and kept
    assert msg.tagged["direction"] == "Source -> Destination"


def test_tag_whitespace_kept_until_resolution():
    raw = parse_xmi(BLOCK_USER)
    assert raw.messages[0].tagged["ea_sourceName"] == "monitoring "
    (p,) = resolve_participants(raw)
    assert p.sender_object == "monitoring"
    assert p.receiver_object == "h-page"


def test_empty_model_has_no_messages():
    raw = parse_xmi(FIXTURES / "empty.xmi")
    assert raw.messages == ()


def test_missing_seqno_is_absent():
    text = BLOCK_USER.read_text().replace('<UML:TaggedValue tag="seqno" value="15"/>\n', "")
    raw = parse_xmi(text.encode())
    assert "seqno" not in raw.messages[0].tagged
    assert raw.messages[0].seqno is None
    assert raw.messages[0].tagged["privatedata4"] == "5.2.1"


def test_message_count_matches_text_scan():
    data = (FIXTURES / "bank_full.xmi").read_bytes()
    independent = len(re.findall(rb"<UML:Message[\s>]", data))
    assert len(parse_xmi(data).messages) == independent == 15 + 7 + 3 * 15 + 12


def test_parsing_is_deterministic():
    data = (FIXTURES / "bank.xmi").read_bytes()
    assert parse_xmi(data) == parse_xmi(data)


def test_accepts_path_bytes_and_stream():
    data = BLOCK_USER.read_bytes()
    with open(BLOCK_USER, "rb") as fh:
        from_stream = parse_xmi(fh)
    assert parse_xmi(str(BLOCK_USER)) == parse_xmi(data) == from_stream


def test_malformed_xml_reports_position():
    bad = b'<?xml version="1.0"?>\n<XMI xmi.version="1.1">\n<UML:Message name="x">\n</XMI>\n'
    with pytest.raises(XmiParseError) as info:
        parse_xmi(bad)
    assert info.value.line == 4
    assert info.value.column is not None


@pytest.mark.parametrize(
    "doc",
    [
        b"<root/>",
        b'<xmi:XMI xmi:version="2.1" xmlns:xmi="http://schema.omg.org/spec/XMI/2.1"/>',
        b'<XMI xmi.version="1.2"/>',
        b"<XMI/>",
    ],
)
def test_other_formats_rejected(doc):
    with pytest.raises(UnsupportedFormatError):
        parse_xmi(doc)


def test_namespace_prefix_does_not_matter():
    text = BLOCK_USER.read_text().replace("UML:", "uml13:").replace('xmlns:UML="omg.org/UML1.3"', 'xmlns:uml13="omg.org/UML1.3"')
    raw = parse_xmi(text.encode())
    assert raw.messages[0].name == "block user"
    assert raw.diagrams


def test_duplicate_id_first_wins():
    d = Diagram("d", [("a", "A"), ("b", "B")], [Msg("1: first()", "a", "b"), Msg("2: second()", "a", "b")])
    text = build_xmi([d])
    ids = re.findall(r'<UML:Message name="[^"]+" xmi.id="([^"]+)"', text)
    text = text.replace(ids[1], ids[0])
    raw = parse_xmi(text.encode())
    assert [m.name for m in raw.messages] == ["first"]
    assert any("duplicate xmi.id" in d.message for d in raw.diagnostics)


def test_object_table_resolution():
    raw = parse_xmi(build_xmi(bank_full_diagrams()).encode())
    diags = []
    parts = resolve_participants(raw, diags)
    assert diags == []
    assert {(p.sender_object, p.sender_class) for p in parts} >= {("monitoring", "security"), ("user", "customer")}


def test_resolution_falls_back_to_tags_with_one_diagnostic():
    d = Diagram("d", [("a", "A"), ("b", "B")], [Msg("1: call()", "a", "b")])
    text = build_xmi([d])
    sender = re.search(r'sender="([^"]+)"', text).group(1)
    receiver = re.search(r'receiver="([^"]+)"', text).group(1)
    text = text.replace(f'sender="{sender}"', 'sender="EAID_GONE_1"').replace(f'receiver="{receiver}"', 'receiver="EAID_GONE_2"')
    diags = []
    (p,) = resolve_participants(parse_xmi(text.encode()), diags)
    assert (p.sender_object, p.receiver_object) == ("a", "b")
    # classes are still found through the uniquely named objects
    assert (p.sender_class, p.receiver_class) == ("A", "B")
    assert len(diags) == 1 and diags[0].severity == "warning"


def test_unresolvable_participant_gets_placeholder():
    text = BLOCK_USER.read_text().replace('<UML:TaggedValue tag="ea_sourceName" value="monitoring "/>\n', "")
    diags = []
    (p,) = resolve_participants(parse_xmi(text.encode()), diags)
    assert p.sender_object == UNRESOLVED
    assert p.receiver_object == "h-page"
    assert len(diags) == 1 and diags[0].severity == "error"
