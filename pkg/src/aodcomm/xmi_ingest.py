"""Streaming reader for Enterprise Architect XMI 1.1 exports.

Only the handful of element kinds the pipeline needs are captured: messages
(with their tagged values), object/classifier-role instances, classifiers and
diagrams. Everything else is skipped as the SAX events go by, so memory use is
bounded by the largest single captured element.
"""

from __future__ import annotations

import io
import os
import xml.sax
from dataclasses import dataclass, field
from typing import BinaryIO, Dict, List, Optional, Tuple, Union

from aodcomm.errors import Diagnostic, UnsupportedFormatError, XmiParseError

UNRESOLVED = "«unresolved»"

SUPPORTED_XMI_VERSIONS = ("1.1",)

MESSAGE_TAGS = (
    "seqno",
    "ea_sourceName",
    "ea_targetName",
    "ea_sourceType",
    "ea_targetType",
    "diagram",
    "conditional",
    "privatedata1",
    "privatedata3",
    "privatedata4",
    "lt",
)

_OBJECT_ELEMENTS = {"ClassifierRole", "Object", "Instance"}
_CLASSIFIER_ELEMENTS = {"Class", "Actor", "Interface", "Component"}

Source = Union[str, os.PathLike, bytes, BinaryIO]


@dataclass(frozen=True)
class RawMessage:
    xmi_id: str
    name: str
    sender_id: str
    receiver_id: str
    tagged: Dict[str, str] = field(default_factory=dict)
    line: Optional[int] = None

    @property
    def seqno(self) -> Optional[int]:
        value = self.tagged.get("seqno")
        if value is None:
            return None
        try:
            return int(value.strip())
        except ValueError:
            return None


@dataclass(frozen=True)
class RawObject:
    name: str
    classifier_id: Optional[str]


@dataclass(frozen=True)
class RawModel:
    messages: Tuple[RawMessage, ...] = ()
    objects: Dict[str, RawObject] = field(default_factory=dict)
    classifiers: Dict[str, str] = field(default_factory=dict)
    diagrams: Dict[str, str] = field(default_factory=dict)
    diagnostics: Tuple[Diagnostic, ...] = ()


@dataclass(frozen=True)
class Participants:
    message_id: str
    sender_object: str
    sender_class: str
    receiver_object: str
    receiver_class: str


def _local(qname: str) -> str:
    return qname.rsplit(":", 1)[-1]


class _Pending:
    """An element being collected between its start and end events."""

    __slots__ = ("kind", "attrs", "tagged", "line")

    def __init__(self, kind: str, attrs: Dict[str, str], line: Optional[int]):
        self.kind = kind
        self.attrs = attrs
        self.tagged: Dict[str, str] = {}
        self.line = line


_SHADOW = object()
_TRANSPARENT = object()


class _XmiHandler(xml.sax.handler.ContentHandler):
    def __init__(self) -> None:
        super().__init__()
        self._locator = None
        self._seen_root = False
        self._owners: List[object] = []
        self._ids: Dict[str, int] = {}
        self.messages: List[RawMessage] = []
        self.objects: Dict[str, RawObject] = {}
        self.classifiers: Dict[str, str] = {}
        self.diagrams: Dict[str, str] = {}
        self.diagnostics: List[Diagnostic] = []

    def setDocumentLocator(self, locator) -> None:
        self._locator = locator

    def _line(self) -> Optional[int]:
        return self._locator.getLineNumber() if self._locator is not None else None

    def _check_root(self, local: str, attrs) -> None:
        self._seen_root = True
        if local != "XMI":
            raise UnsupportedFormatError(
                f"root element <{local}> is not an XMI document (expected <XMI xmi.version=\"1.1\">)"
            )
        version = attrs.get("xmi.version")
        if version is None:
            other = attrs.get("xmi:version") or attrs.get("version")
            if other:
                raise UnsupportedFormatError(
                    f"XMI version {other} is not supported; only the EA XMI 1.1 export dialect is"
                )
            raise UnsupportedFormatError("XMI root lacks an xmi.version attribute")
        if version.strip() not in SUPPORTED_XMI_VERSIONS:
            raise UnsupportedFormatError(
                f"XMI version {version} is not supported; only the EA XMI 1.1 export dialect is"
            )

    def _claim_id(self, xmi_id: str, kind: str) -> bool:
        """Record an xmi.id; False when it is a duplicate (first occurrence wins)."""
        if xmi_id in self._ids:
            self.diagnostics.append(
                Diagnostic(
                    "warning",
                    f"duplicate xmi.id {xmi_id!r} on {kind}; keeping the occurrence at line {self._ids[xmi_id]}",
                    f"line {self._line()}",
                )
            )
            return False
        self._ids[xmi_id] = self._line() or 0
        return True

    def startElement(self, name, attrs) -> None:
        local = _local(name)
        if not self._seen_root:
            self._check_root(local, attrs)
        if local == "Message" or local in _OBJECT_ELEMENTS:
            self._owners.append(_Pending(local, dict(attrs), self._line()))
            return
        if local == "TaggedValue":
            owner = self._current_owner()
            if owner is not None and "tag" in attrs:
                # keep the first value when a tag repeats
                owner.tagged.setdefault(attrs["tag"], attrs.get("value", ""))
            self._owners.append(_SHADOW)
            return
        if local in _CLASSIFIER_ELEMENTS:
            xmi_id = attrs.get("xmi.id")
            if xmi_id and "name" in attrs and self._claim_id(xmi_id, local):
                self.classifiers[xmi_id] = attrs["name"]
        elif local == "Diagram":
            xmi_id = attrs.get("xmi.id")
            if xmi_id and self._claim_id(xmi_id, local):
                self.diagrams[xmi_id] = attrs.get("name", xmi_id)
        # property containers such as ModelElement.taggedValue pass tags
        # through to their owner; any other element owns its own tags
        self._owners.append(_TRANSPARENT if "." in local else _SHADOW)

    def _current_owner(self) -> Optional[_Pending]:
        for entry in reversed(self._owners):
            if entry is _TRANSPARENT:
                continue
            return entry if isinstance(entry, _Pending) else None
        return None

    def endElement(self, name) -> None:
        pending = self._owners.pop() if self._owners else None
        if not isinstance(pending, _Pending):
            return
        if pending.kind == "Message":
            self._finish_message(pending)
        else:
            self._finish_object(pending)

    def _finish_message(self, p: _Pending) -> None:
        xmi_id = p.attrs.get("xmi.id", "")
        if not xmi_id:
            self.diagnostics.append(
                Diagnostic("error", "UML:Message without xmi.id skipped", f"line {p.line}")
            )
            return
        if not self._claim_id(xmi_id, "Message"):
            return
        self.messages.append(
            RawMessage(
                xmi_id=xmi_id,
                name=p.attrs.get("name", ""),
                sender_id=p.attrs.get("sender", ""),
                receiver_id=p.attrs.get("receiver", ""),
                tagged=dict(p.tagged),
                line=p.line,
            )
        )

    def _finish_object(self, p: _Pending) -> None:
        xmi_id = p.attrs.get("xmi.id", "")
        if not xmi_id or not self._claim_id(xmi_id, p.kind):
            return
        classifier = (
            p.attrs.get("classifier")
            or p.attrs.get("base")
            or p.tagged.get("classifier")
            or None
        )
        self.objects[xmi_id] = RawObject(name=p.attrs.get("name", ""), classifier_id=classifier)


def _open(source: Source) -> Tuple[BinaryIO, bool]:
    if isinstance(source, (bytes, bytearray)):
        return io.BytesIO(bytes(source)), True
    if isinstance(source, (str, os.PathLike)):
        return open(source, "rb"), True
    return source, False


def parse_xmi(source: Source) -> RawModel:
    """Parse an EA XMI 1.1 document in one streaming pass.

    `source` may be a path, raw bytes, or a binary file object. Raises
    XmiParseError (with line/column) for malformed XML and
    UnsupportedFormatError for anything that is not an XMI 1.1 document.
    """
    stream, owned = _open(source)
    handler = _XmiHandler()
    parser = xml.sax.make_parser()
    parser.setFeature(xml.sax.handler.feature_namespaces, False)
    parser.setFeature(xml.sax.handler.feature_external_ges, False)
    parser.setContentHandler(handler)
    try:
        parser.parse(stream)
    except xml.sax.SAXParseException as exc:
        raise XmiParseError(exc.getMessage(), exc.getLineNumber(), exc.getColumnNumber()) from exc
    finally:
        if owned:
            stream.close()
    if not handler._seen_root:
        raise UnsupportedFormatError("document has no root element")
    return RawModel(
        messages=tuple(handler.messages),
        objects=handler.objects,
        classifiers=handler.classifiers,
        diagrams=handler.diagrams,
        diagnostics=tuple(handler.diagnostics),
    )


def _lookup_object(raw: RawModel, name: str) -> Optional[RawObject]:
    matches = [o for o in raw.objects.values() if o.name.strip() == name]
    if len(matches) == 1:
        return matches[0]
    return None


def _class_of(raw: RawModel, obj: Optional[RawObject]) -> Optional[str]:
    if obj is None or obj.classifier_id is None:
        return None
    name = raw.classifiers.get(obj.classifier_id)
    return name.strip() if name is not None else None


def _resolve_end(raw: RawModel, object_id: str, tag_name: Optional[str]) -> Tuple[str, str, bool]:
    """(object name, class name, resolved via object table)."""
    obj = raw.objects.get(object_id)
    if obj is not None:
        return obj.name.strip(), _class_of(raw, obj) or UNRESOLVED, True
    if tag_name is not None and tag_name.strip():
        name = tag_name.strip()
        return name, _class_of(raw, _lookup_object(raw, name)) or UNRESOLVED, False
    return UNRESOLVED, UNRESOLVED, False


def resolve_participants(
    raw: RawModel, diagnostics: Optional[List[Diagnostic]] = None
) -> List[Participants]:
    """Join message sender/receiver ids to object and class names.

    The object table is preferred; the denormalized ea_sourceName and
    ea_targetName tags are the fallback. Failures are reported to
    `diagnostics` and never raise.
    """
    sink = diagnostics if diagnostics is not None else []
    out = []
    for msg in raw.messages:
        s_obj, s_cls, s_ok = _resolve_end(raw, msg.sender_id, msg.tagged.get("ea_sourceName"))
        r_obj, r_cls, r_ok = _resolve_end(raw, msg.receiver_id, msg.tagged.get("ea_targetName"))
        loc = f"line {msg.line}" if msg.line else None
        head = f"message {msg.name!r} ({msg.xmi_id})"
        if UNRESOLVED in (s_obj, r_obj):
            sink.append(Diagnostic("error", f"{head}: participant could not be resolved", loc))
        else:
            problems = []
            if not (s_ok and r_ok):
                problems.append("participant ids not in object table, names taken from ea_* tags")
            if UNRESOLVED in (s_cls, r_cls):
                problems.append("classifier could not be resolved")
            if problems:
                sink.append(Diagnostic("warning", f"{head}: {'; '.join(problems)}", loc))
        out.append(Participants(msg.xmi_id, s_obj, s_cls, r_obj, r_cls))
    return out
