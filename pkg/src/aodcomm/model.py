"""Message table reconstruction: label grammar, sequence ordering, table serialization."""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field, replace
from functools import total_ordering
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from aodcomm.concerns import ConcernMap, ConcernType, classify
from aodcomm.errors import Diagnostic, LabelParseError
from aodcomm.xmi_ingest import RawModel, resolve_participants

UNASSIGNED_DIAGRAM = "unassigned"

COLUMNS = (
    "Message Name",
    "Object Sender",
    "Class Sender",
    "Concern Type",
    "Object Receiver",
    "Class Receiver",
    "Concern Type",
    "Message Sequence",
    "Diagram Name",
    "Repetition",
)


@total_ordering
@dataclass(frozen=True)
class SequenceExpr:
    components: Tuple[int, ...]

    def __post_init__(self):
        if not self.components or any(c < 1 for c in self.components):
            raise ValueError(f"sequence components must be positive integers, got {self.components!r}")

    @classmethod
    def parse(cls, text: str) -> "SequenceExpr":
        parts = text.strip().split(".")
        if not all(p.isdigit() for p in parts):
            raise ValueError(f"not a dotted sequence: {text!r}")
        return cls(tuple(int(p) for p in parts))

    def __str__(self) -> str:
        return ".".join(str(c) for c in self.components)

    def __lt__(self, other: "SequenceExpr") -> bool:
        return self.components < other.components

    def is_nested_under(self, other: "SequenceExpr") -> bool:
        """True when `other` is a strict prefix of this expression."""
        n = len(other.components)
        return len(self.components) > n and self.components[:n] == other.components


def compare_seq(a: SequenceExpr, b: SequenceExpr) -> int:
    """Dewey order: -1, 0 or 1. A strict prefix precedes its extensions."""
    if a.components == b.components:
        return 0
    return -1 if a.components < b.components else 1


_LABEL_RE = re.compile(
    r"""^\s*
    (?P<seq>\d+(?:\.\d+)*)\s*:\s*
    (?:\[(?P<guard>[^\]]*)\]\s*:\s*)?
    (?:(?P<assign>[A-Za-z_]\w*)\s*=\s*)?
    (?P<name>[^()\[\]=:]*?[^()\[\]=:\s])\s*
    \((?P<args>[^()]*)\)\s*$""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class Label:
    seq: SequenceExpr
    guard: Optional[str]
    assignment: Optional[str]
    name: str
    args: Tuple[str, ...] = ()

    def render(self) -> str:
        return render_label(self.seq, self.name, self.args, self.guard, self.assignment)


def render_label(
    seq: SequenceExpr,
    name: str,
    args: Sequence[str] = (),
    guard: Optional[str] = None,
    assignment: Optional[str] = None,
) -> str:
    text = f"{seq}: "
    if guard is not None:
        text += f"[{guard}]:"
    if assignment is not None:
        text += f"{assignment}= "
    return text + f"{name}({', '.join(args)})"


def parse_label(text: str) -> Label:
    """Parse an EA message label such as ``5.2.1: [any misuse]:block user()``."""
    if not text or not text.strip():
        raise LabelParseError(text, "is empty")
    m = _LABEL_RE.match(text)
    if m is None:
        raise LabelParseError(text)
    try:
        seq = SequenceExpr.parse(m["seq"])
    except ValueError:
        raise LabelParseError(text, "has a zero sequence component") from None
    args_text = m["args"].strip()
    args = tuple(a.strip() for a in args_text.split(",")) if args_text else ()
    guard = m["guard"].strip() if m["guard"] is not None else None
    return Label(seq=seq, guard=guard, assignment=m["assign"], name=m["name"].strip(), args=args)


class Synchronicity(str, enum.Enum):
    SYNCHRONOUS = "synchronous"
    ASYNCHRONOUS = "asynchronous"
    UNKNOWN = "unknown"

    @classmethod
    def from_tag(cls, value: Optional[str]) -> "Synchronicity":
        v = (value or "").strip().lower()
        if v == "synchronous":
            return cls.SYNCHRONOUS
        if v == "asynchronous":
            return cls.ASYNCHRONOUS
        return cls.UNKNOWN


class MessageKind(str, enum.Enum):
    CALL = "call"
    OTHER = "other"


@dataclass(frozen=True)
class MessageRecord:
    name: str
    sender_object: str
    sender_class: str
    sender_concern: ConcernType
    receiver_object: str
    receiver_class: str
    receiver_concern: ConcernType
    seq: SequenceExpr
    diagram: str
    seqno: Optional[int] = None
    guard: Optional[str] = None
    assignment: Optional[str] = None
    args: Tuple[str, ...] = ()
    synchronicity: Synchronicity = Synchronicity.UNKNOWN
    kind: MessageKind = MessageKind.CALL
    repetition: Optional[int] = None
    xmi_id: str = ""

    @property
    def is_call(self) -> bool:
        return self.kind is MessageKind.CALL

    @property
    def label(self) -> str:
        return render_label(self.seq, self.name, self.args, self.guard, self.assignment)

    def to_dict(self) -> dict:
        return {
            "xmi_id": self.xmi_id,
            "name": self.name,
            "sender_object": self.sender_object,
            "sender_class": self.sender_class,
            "sender_concern": self.sender_concern.value,
            "receiver_object": self.receiver_object,
            "receiver_class": self.receiver_class,
            "receiver_concern": self.receiver_concern.value,
            "seq": str(self.seq),
            "seqno": self.seqno,
            "guard": self.guard,
            "assignment": self.assignment,
            "args": list(self.args),
            "synchronicity": self.synchronicity.value,
            "kind": self.kind.value,
            "diagram": self.diagram,
            "repetition": self.repetition,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MessageRecord":
        return cls(
            xmi_id=d.get("xmi_id", ""),
            name=d["name"],
            sender_object=d["sender_object"],
            sender_class=d["sender_class"],
            sender_concern=ConcernType(d["sender_concern"]),
            receiver_object=d["receiver_object"],
            receiver_class=d["receiver_class"],
            receiver_concern=ConcernType(d["receiver_concern"]),
            seq=SequenceExpr.parse(d["seq"]),
            seqno=d.get("seqno"),
            guard=d.get("guard"),
            assignment=d.get("assignment"),
            args=tuple(d.get("args", ())),
            synchronicity=Synchronicity(d.get("synchronicity", "unknown")),
            kind=MessageKind(d.get("kind", "call")),
            diagram=d["diagram"],
            repetition=d.get("repetition"),
        )


def _order_key(row: MessageRecord, use_seqno: bool):
    primary = (row.seqno,) if use_seqno else ()
    return primary + (row.seq.components, row.xmi_id, row.name)


def order_rows(rows: Iterable[MessageRecord], diagram_order: Sequence[str] = ()) -> Tuple[MessageRecord, ...]:
    """Group rows by diagram and order each group.

    Within a diagram, seqno is the key when every row carries one, otherwise
    the dotted sequence. Diagrams follow `diagram_order`, then the rest by name.
    """
    groups: Dict[str, List[MessageRecord]] = {}
    for row in rows:
        groups.setdefault(row.diagram, []).append(row)
    rank = {name: i for i, name in enumerate(diagram_order)}
    ordered: List[MessageRecord] = []
    for diagram in sorted(groups, key=lambda d: (rank.get(d, len(rank)), d)):
        group = groups[diagram]
        use_seqno = all(r.seqno is not None for r in group)
        ordered.extend(sorted(group, key=lambda r: _order_key(r, use_seqno)))
    return tuple(ordered)


@dataclass(frozen=True)
class MessageTable:
    rows: Tuple[MessageRecord, ...] = ()
    diagnostics: Tuple[Diagnostic, ...] = field(default=(), compare=False)

    def __iter__(self) -> Iterator[MessageRecord]:
        return iter(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def diagrams(self) -> Tuple[str, ...]:
        seen: Dict[str, None] = {}
        for r in self.rows:
            seen.setdefault(r.diagram)
        return tuple(seen)

    def diagram_rows(self, diagram: str) -> Tuple[MessageRecord, ...]:
        return tuple(r for r in self.rows if r.diagram == diagram)

    def classes(self) -> Tuple[str, ...]:
        seen: Dict[str, None] = {}
        for r in self.rows:
            seen.setdefault(r.sender_class)
            seen.setdefault(r.receiver_class)
        return tuple(seen)

    def with_rows(self, rows: Iterable[MessageRecord]) -> "MessageTable":
        return MessageTable(rows=tuple(rows), diagnostics=self.diagnostics)

    def to_dict(self) -> dict:
        return {"columns": list(COLUMNS), "rows": [r.to_dict() for r in self.rows]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "MessageTable":
        return cls(rows=tuple(MessageRecord.from_dict(r) for r in d.get("rows", ())))

    def to_text(self) -> str:
        """Plain aligned table, one line per message, columns as in COLUMNS."""
        body = [
            (
                r.name,
                r.sender_object,
                r.sender_class,
                r.sender_concern.label,
                r.receiver_object,
                r.receiver_class,
                r.receiver_concern.label,
                r.label,
                r.diagram,
                "" if r.repetition is None else str(r.repetition),
            )
            for r in self.rows
        ]
        widths = [len(c) for c in COLUMNS]
        for line in body:
            widths = [max(w, len(cell)) for w, cell in zip(widths, line)]
        out = []
        for line in [COLUMNS, tuple("-" * w for w in widths)] + body:
            out.append("  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip())
        return "\n".join(out) + "\n"


def _message_label(msg, sink: List[Diagnostic]) -> Optional[Label]:
    loc = f"line {msg.line}" if msg.line else None
    dotted = msg.tagged.get("privatedata4", "").strip()
    label = None
    lt = msg.tagged.get("lt")
    if lt is not None and lt.strip():
        try:
            label = parse_label(lt)
        except LabelParseError as exc:
            sink.append(Diagnostic("warning", f"{exc}; falling back to name and privatedata4", loc))
    if label is not None:
        if dotted and dotted != str(label.seq):
            sink.append(
                Diagnostic(
                    "warning",
                    f"message {msg.name!r}: label sequence {label.seq} disagrees with privatedata4 {dotted}; using the label",
                    loc,
                )
            )
        return label
    try:
        seq = SequenceExpr.parse(dotted)
    except ValueError:
        sink.append(Diagnostic("error", f"message {msg.name!r} has no usable sequence; row skipped", loc))
        return None
    return Label(seq=seq, guard=None, assignment=None, name=msg.name.strip(), args=())


def build_message_table(
    raw: RawModel, concerns: ConcernMap, diagnostics: Optional[List[Diagnostic]] = None
) -> MessageTable:
    """One row per UML:Message, ordered within each diagram.

    Rows whose privatedata3 names something other than a call are kept with
    kind=other; downstream analysis ignores them.
    """
    sink: List[Diagnostic] = list(raw.diagnostics)
    participants = {p.message_id: p for p in resolve_participants(raw, sink)}
    rows = []
    for msg in raw.messages:
        label = _message_label(msg, sink)
        if label is None:
            continue
        p = participants[msg.xmi_id]
        diagram_id = msg.tagged.get("diagram")
        loc = f"line {msg.line}" if msg.line else None
        if not diagram_id:
            sink.append(Diagnostic("warning", f"message {msg.name!r} has no diagram tag; assigned to {UNASSIGNED_DIAGRAM!r}", loc))
            diagram = UNASSIGNED_DIAGRAM
        elif diagram_id in raw.diagrams:
            diagram = raw.diagrams[diagram_id].strip()
        else:
            sink.append(Diagnostic("warning", f"message {msg.name!r} references unknown diagram {diagram_id!r}", loc))
            diagram = diagram_id
        raw_seqno = msg.tagged.get("seqno")
        if raw_seqno is not None and msg.seqno is None:
            sink.append(Diagnostic("warning", f"message {msg.name!r} has non-integer seqno {raw_seqno!r}", loc))
        guard = label.guard
        if guard is None:
            conditional = msg.tagged.get("conditional", "").strip()
            guard = conditional or None
        msg_type = msg.tagged.get("privatedata3")
        kind = MessageKind.CALL if msg_type is None or msg_type.strip().lower() == "call" else MessageKind.OTHER
        rows.append(
            MessageRecord(
                xmi_id=msg.xmi_id,
                name=label.name,
                sender_object=p.sender_object,
                sender_class=p.sender_class,
                sender_concern=classify(p.sender_class, concerns),
                receiver_object=p.receiver_object,
                receiver_class=p.receiver_class,
                receiver_concern=classify(p.receiver_class, concerns),
                seq=label.seq,
                seqno=msg.seqno,
                guard=guard,
                assignment=label.assignment,
                args=label.args,
                synchronicity=Synchronicity.from_tag(msg.tagged.get("privatedata1")),
                kind=kind,
                diagram=diagram,
            )
        )
    diagram_order = [name.strip() for name in raw.diagrams.values()]
    ordered = order_rows(rows, diagram_order)
    _check_order_collisions(ordered, sink)
    if diagnostics is not None:
        diagnostics.extend(sink)
    return MessageTable(rows=ordered, diagnostics=tuple(sink))


def _check_order_collisions(rows: Sequence[MessageRecord], sink: List[Diagnostic]) -> None:
    by_diagram: Dict[str, List[MessageRecord]] = {}
    for r in rows:
        by_diagram.setdefault(r.diagram, []).append(r)
    for diagram, group in by_diagram.items():
        use_seqno = all(r.seqno is not None for r in group)
        keys = [(r.seqno,) if use_seqno else r.seq.components for r in group]
        if len(set(keys)) != len(keys):
            sink.append(
                Diagnostic("warning", f"diagram {diagram!r} has messages with equal order keys; tie broken by xmi.id")
            )


def with_concerns(table: MessageTable, concerns: ConcernMap) -> MessageTable:
    """Reclassify every row under a different ConcernMap."""
    return table.with_rows(
        replace(
            r,
            sender_concern=classify(r.sender_class, concerns),
            receiver_concern=classify(r.receiver_class, concerns),
            repetition=None,
        )
        for r in table.rows
    )
