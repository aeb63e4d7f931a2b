"""DOT renderings of one diagram, with aspectized classes filled red."""

from __future__ import annotations

import re
from typing import Dict, Iterable, Optional, Sequence, Tuple

from aodcomm.concerns import normalize
from aodcomm.model import MessageRecord, MessageTable
from aodcomm.transform import AodModel

Participant = Tuple[str, str]  # (object, class)


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def participants_of(rows: Iterable[MessageRecord]) -> Tuple[Participant, ...]:
    seen: Dict[Participant, None] = {}
    for r in rows:
        seen.setdefault((r.sender_object, r.sender_class))
        seen.setdefault((r.receiver_object, r.receiver_class))
    return tuple(seen)


def to_dot(
    rows: Sequence[MessageRecord],
    aspects: Iterable[str] = (),
    participants: Optional[Iterable[Participant]] = None,
    name: str = "diagram",
) -> str:
    """Render one diagram as a DOT digraph.

    `participants` adds nodes beyond those the rows mention, which is how
    AOD renderings keep aspect nodes whose links were all woven away.
    """
    aspect_set = {normalize(a) for a in aspects}
    nodes = set(participants_of(rows))
    if participants is not None:
        nodes.update(participants)
    ordered = sorted(nodes, key=lambda p: (normalize(p[1]), normalize(p[0]), p))
    ids = {p: f"n{i}" for i, p in enumerate(ordered)}

    lines = [f"digraph {_quote(name)} {{"]
    if ordered:
        lines.append("  node [shape=box];")
    for p in ordered:
        attrs = [f"label={_quote(f'{p[0]}:{p[1]}')}"]
        if normalize(p[1]) in aspect_set:
            attrs.append("style=filled, fillcolor=red")
        lines.append(f"  {ids[p]} [{', '.join(attrs)}];")
    for r in rows:
        src = ids[(r.sender_object, r.sender_class)]
        dst = ids[(r.receiver_object, r.receiver_class)]
        lines.append(f"  {src} -> {dst} [label={_quote(r.label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dot_file_stem(diagram: str) -> str:
    return re.sub(r"[^\w.-]+", "_", diagram.strip()) or "diagram"


def render_all(ood: MessageTable, aod: AodModel) -> Dict[str, str]:
    """``{file name: DOT text}`` with an OOD and an AOD rendering per diagram."""
    out: Dict[str, str] = {}
    for diagram in ood.diagrams():
        stem = dot_file_stem(diagram)
        rows = ood.diagram_rows(diagram)
        out[f"{stem}__ood.dot"] = to_dot(rows, (), name=f"{diagram} (OOD)")
        out[f"{stem}__aod.dot"] = to_dot(
            aod.base_messages.diagram_rows(diagram),
            aod.aspect_classes,
            participants=participants_of(rows),
            name=f"{diagram} (AOD)",
        )
    return out
