"""Rewrite an object-oriented interaction table into an aspect-oriented design.

Calls into aspectized classes disappear from the base model. Each one becomes
advice whose pointcut is the enclosing join point: the latest earlier message
in the same diagram that was received by the caller. Messages the aspect
sends in the nested scope of the intercepted call become the advice body.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from aodcomm.concerns import ADVICE_KINDS, Config, normalize
from aodcomm.crosscut import AspectCandidateSet
from aodcomm.errors import Diagnostic, TransformError
from aodcomm.model import MessageRecord, MessageTable


@dataclass(frozen=True)
class BodyCall:
    target_class: str
    operation: str
    guard: Optional[str] = None

    def to_dict(self) -> dict:
        return {"target_class": self.target_class, "operation": self.operation, "guard": self.guard}


@dataclass(frozen=True)
class AdviceSpec:
    aspect_class: str
    operation: str
    kind: str
    pointcut_class: str
    pointcut_operation: str
    guard: Optional[str] = None
    body_calls: Tuple[BodyCall, ...] = ()

    def __post_init__(self):
        if self.kind not in ADVICE_KINDS:
            raise ValueError(f"advice kind must be one of {ADVICE_KINDS}, got {self.kind!r}")

    @property
    def identity(self) -> Tuple[str, str, str, str, str]:
        return (
            normalize(self.aspect_class),
            normalize(self.operation),
            normalize(self.pointcut_class),
            normalize(self.pointcut_operation),
            self.kind,
        )

    def to_dict(self) -> dict:
        return {
            "aspect_class": self.aspect_class,
            "operation": self.operation,
            "kind": self.kind,
            "pointcut_class": self.pointcut_class,
            "pointcut_operation": self.pointcut_operation,
            "guard": self.guard,
            "body_calls": [b.to_dict() for b in self.body_calls],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AdviceSpec":
        return cls(
            aspect_class=d["aspect_class"],
            operation=d["operation"],
            kind=d["kind"],
            pointcut_class=d["pointcut_class"],
            pointcut_operation=d["pointcut_operation"],
            guard=d.get("guard"),
            body_calls=tuple(BodyCall(**b) for b in d.get("body_calls", ())),
        )


@dataclass(frozen=True)
class AspectSpec:
    name: str
    source_class: str
    advices: Tuple[AdviceSpec, ...]

    def to_dict(self) -> dict:
        return {"name": self.name, "source_class": self.source_class, "advices": [a.to_dict() for a in self.advices]}

    @classmethod
    def from_dict(cls, d: dict) -> "AspectSpec":
        return cls(d["name"], d["source_class"], tuple(AdviceSpec.from_dict(a) for a in d["advices"]))


@dataclass(frozen=True)
class AodModel:
    base_messages: MessageTable
    aspects: Tuple[AspectSpec, ...] = ()
    aspect_classes: Tuple[str, ...] = ()
    removed_rows: Tuple[MessageRecord, ...] = ()
    absorbed_rows: Tuple[MessageRecord, ...] = ()
    diagnostics: Tuple[Diagnostic, ...] = field(default=(), compare=False)

    def is_aspect(self, class_name: str) -> bool:
        return normalize(class_name) in {normalize(c) for c in self.aspect_classes}

    def advices(self) -> Tuple[AdviceSpec, ...]:
        return tuple(a for spec in self.aspects for a in spec.advices)

    def to_dict(self) -> dict:
        return {
            "aspect_classes": list(self.aspect_classes),
            "aspects": [a.to_dict() for a in self.aspects],
            "base_messages": self.base_messages.to_dict()["rows"],
            "removed_rows": [r.to_dict() for r in self.removed_rows],
            "absorbed_rows": [r.to_dict() for r in self.absorbed_rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "AodModel":
        return cls(
            base_messages=MessageTable.from_dict({"rows": d["base_messages"]}),
            aspects=tuple(AspectSpec.from_dict(a) for a in d.get("aspects", ())),
            aspect_classes=tuple(d.get("aspect_classes", ())),
            removed_rows=tuple(MessageRecord.from_dict(r) for r in d.get("removed_rows", ())),
            absorbed_rows=tuple(MessageRecord.from_dict(r) for r in d.get("absorbed_rows", ())),
        )


def enclosing_join_point(m: MessageRecord, rows: Sequence[MessageRecord]) -> Optional[MessageRecord]:
    """Latest row strictly before `m` whose receiver is m's sender object."""
    found = None
    for row in rows:
        if row is m:
            return found
        if row.receiver_object == m.sender_object:
            found = row
    raise ValueError(f"message {m.name!r} is not part of the given diagram rows")


def _nested_body_rows(
    m: MessageRecord, rows: Sequence[MessageRecord], aspects: frozenset
) -> List[MessageRecord]:
    return [
        r
        for r in rows
        if r is not m
        and r.is_call
        and r.sender_object == m.receiver_object
        and r.seq.is_nested_under(m.seq)
        and normalize(r.receiver_class) not in aspects
    ]


def derive_advice(
    m: MessageRecord,
    rows: Sequence[MessageRecord],
    config: Optional[Config] = None,
    aspects: Iterable[str] = (),
) -> AdviceSpec:
    """Package a crosscutting call as advice at its enclosing join point.

    `aspects` names the aspectized classes so nested calls back into other
    aspects are not treated as body calls; m's receiver is always included.
    Raises TransformError when `m` has no enclosing join point.
    """
    kind = config.advice_kind if config is not None else "before"
    jp = enclosing_join_point(m, rows)
    if jp is None:
        raise TransformError(f"message {m.seq}: {m.name!r} in {m.diagram!r} has no enclosing join point")
    aspect_set = frozenset(normalize(a) for a in aspects) | {normalize(m.receiver_class)}
    if normalize(jp.receiver_class) in aspect_set:
        raise TransformError(
            f"message {m.seq}: {m.name!r} in {m.diagram!r} would be advised at aspect class {jp.receiver_class!r}"
        )
    body = tuple(BodyCall(r.receiver_class, r.name, r.guard) for r in _nested_body_rows(m, rows, aspect_set))
    return AdviceSpec(
        aspect_class=m.receiver_class,
        operation=m.name,
        kind=kind,
        pointcut_class=jp.receiver_class,
        pointcut_operation=jp.name,
        guard=m.guard,
        body_calls=body,
    )


def _merge(existing: AdviceSpec, new: AdviceSpec) -> AdviceSpec:
    calls = list(existing.body_calls)
    for call in new.body_calls:
        if call not in calls:
            calls.append(call)
    return AdviceSpec(
        existing.aspect_class,
        existing.operation,
        existing.kind,
        existing.pointcut_class,
        existing.pointcut_operation,
        existing.guard,
        tuple(calls),
    )


def _aspect_name(class_name: str) -> str:
    from aodcomm.codegen import mangle_type_name

    return mangle_type_name(class_name)


def transform_model(
    table: MessageTable, candidates: AspectCandidateSet, config: Optional[Config] = None
) -> AodModel:
    """Aspectize every candidate class.

    Rows into a candidate are removed; those with a usable join point become
    advice, the rest are reported as warnings. Rows the aspect sends in the
    nested scope of an intercepted call are absorbed into the advice body.
    Everything else passes through unchanged.
    """
    aspects = candidates.normalized()
    if not aspects:
        return AodModel(base_messages=table, diagnostics=table.diagnostics)

    classes = {normalize(c) for r in table.rows if r.is_call for c in (r.sender_class, r.receiver_class)}
    if classes and classes <= aspects:
        raise TransformError("every class in the model is aspectized; no base classes remain to anchor pointcuts")

    diagnostics: List[Diagnostic] = list(table.diagnostics)
    for cls in candidates.classes:
        if not any(normalize(r.receiver_class) == normalize(cls) for r in table.rows if r.is_call):
            diagnostics.append(Diagnostic("warning", f"aspect class {cls!r} receives no calls in this model"))

    removed: Dict[int, MessageRecord] = {}
    absorbed: Dict[int, MessageRecord] = {}
    advices: Dict[tuple, AdviceSpec] = {}
    for diagram in table.diagrams():
        rows = table.diagram_rows(diagram)
        for m in rows:
            if normalize(m.receiver_class) not in aspects:
                continue
            removed[id(m)] = m
            if not m.is_call:
                continue
            if normalize(m.sender_class) in aspects:
                diagnostics.append(
                    Diagnostic("warning", f"{diagram}: {m.seq}: {m.name!r} is aspect-to-aspect; no advice derived")
                )
                continue
            try:
                advice = derive_advice(m, rows, config, aspects)
            except TransformError as exc:
                diagnostics.append(Diagnostic("warning", f"{exc}; call removed without advice"))
                continue
            for r in _nested_body_rows(m, rows, aspects | {normalize(m.receiver_class)}):
                if id(r) not in removed:
                    absorbed.setdefault(id(r), r)
            key = advice.identity
            advices[key] = _merge(advices[key], advice) if key in advices else advice

    base = [r for r in table.rows if id(r) not in removed and id(r) not in absorbed]
    removed_rows = [r for r in table.rows if id(r) in removed]
    absorbed_rows = [r for r in table.rows if id(r) in absorbed]

    specs = []
    for cls in candidates.classes:
        own = sorted(
            (a for a in advices.values() if normalize(a.aspect_class) == normalize(cls)),
            key=lambda a: a.identity,
        )
        if not own:
            diagnostics.append(Diagnostic("warning", f"aspect class {cls!r} yielded no advice"))
            continue
        specs.append(AspectSpec(name=_aspect_name(cls), source_class=cls, advices=tuple(own)))

    return AodModel(
        base_messages=table.with_rows(base),
        aspects=tuple(specs),
        aspect_classes=tuple(candidates.classes),
        removed_rows=tuple(removed_rows),
        absorbed_rows=tuple(absorbed_rows),
        diagnostics=tuple(diagnostics),
    )
