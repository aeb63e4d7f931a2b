"""Fan-in / fan-out coupling before and after aspectization.

Fan-out of C is the number of distinct classes C calls, fan-in the number of
distinct classes calling C; self-calls do not count. ``weighting="messages"``
counts call rows instead of distinct classes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, Tuple

from aodcomm.concerns import normalize
from aodcomm.model import MessageRecord, MessageTable
from aodcomm.transform import AodModel


def _call_rows(table) -> Iterable[MessageRecord]:
    rows = table.rows if isinstance(table, MessageTable) else table
    return (r for r in rows if r.is_call and r.sender_class != r.receiver_class)


def fan_out(class_name: str, table, weighting: str = "distinct") -> int:
    targets = [r.receiver_class for r in _call_rows(table) if r.sender_class == class_name]
    return len(targets) if weighting == "messages" else len(set(targets))


def fan_in(class_name: str, table, weighting: str = "distinct") -> int:
    sources = [r.sender_class for r in _call_rows(table) if r.receiver_class == class_name]
    return len(sources) if weighting == "messages" else len(set(sources))


def coupling_total(table, weighting: str = "distinct") -> int:
    pairs = [(r.sender_class, r.receiver_class) for r in _call_rows(table)]
    return len(pairs) if weighting == "messages" else len(set(pairs))


def aod_base_rows(aod: AodModel) -> Tuple[MessageRecord, ...]:
    """Base rows with any aspect-side link dropped (woven coupling is reported apart)."""
    return tuple(
        r for r in aod.base_messages.rows if not (aod.is_aspect(r.sender_class) or aod.is_aspect(r.receiver_class))
    )


@dataclass(frozen=True)
class CouplingReport:
    per_class: Dict[str, Dict[str, Dict[str, int]]]
    aspects: Tuple[str, ...]
    ood_total: int
    aod_total: int
    weighting: str = "distinct"
    aspect_links: Dict[str, Dict[str, int]] = field(default_factory=dict)

    @property
    def delta(self) -> int:
        return self.ood_total - self.aod_total

    def to_dict(self) -> dict:
        return {
            "weighting": self.weighting,
            "per_class": self.per_class,
            "aspects": list(self.aspects),
            "aspect_links": self.aspect_links,
            "totals": {"ood_total": self.ood_total, "aod_total": self.aod_total},
            "delta": self.delta,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        head = ("Class", "OOD fan-in", "OOD fan-out", "AOD fan-in", "AOD fan-out")
        lines = [head]
        for cls, v in self.per_class.items():
            name = f"{cls} (aspect)" if cls in self.aspects else cls
            lines.append(
                (name, str(v["ood"]["fan_in"]), str(v["ood"]["fan_out"]), str(v["aod"]["fan_in"]), str(v["aod"]["fan_out"]))
            )
        widths = [max(len(line[i]) for line in lines) for i in range(len(head))]
        out = ["  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip() for line in lines]
        out.append("")
        out.append(f"coupling total: OOD {self.ood_total}, AOD {self.aod_total}, delta {self.delta}")
        return "\n".join(out) + "\n"


def coupling_report(ood: MessageTable, aod: AodModel, weighting: str = "distinct") -> CouplingReport:
    """Per-class fan-in/fan-out for the OOD table and the AOD base model.

    Aspectized classes report 0/0 on the AOD side; their remaining outgoing
    base links are listed under ``aspect_links`` instead.
    """
    base = aod_base_rows(aod)
    classes = sorted(set(ood.classes()) | set(aod.base_messages.classes()), key=lambda c: (normalize(c), c))
    per_class = {}
    for cls in classes:
        per_class[cls] = {
            "ood": {"fan_in": fan_in(cls, ood, weighting), "fan_out": fan_out(cls, ood, weighting)},
            "aod": {"fan_in": fan_in(cls, base, weighting), "fan_out": fan_out(cls, base, weighting)},
        }
    aspects = tuple(c for c in classes if aod.is_aspect(c))
    aspect_links = {
        cls: {
            "fan_in": fan_in(cls, aod.base_messages, weighting),
            "fan_out": fan_out(cls, aod.base_messages, weighting),
        }
        for cls in aspects
    }
    return CouplingReport(
        per_class=per_class,
        aspects=aspects,
        ood_total=coupling_total(ood, weighting),
        aod_total=coupling_total(base, weighting),
        weighting=weighting,
        aspect_links=aspect_links,
    )
