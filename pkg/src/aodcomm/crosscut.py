"""Crosscutting-concern detection by counting calls into non-functional classes."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Dict, List, Mapping, Tuple

from aodcomm.concerns import ConcernMap, ConcernType, classify, normalize
from aodcomm.errors import ConfigError
from aodcomm.model import MessageRecord, MessageTable


@dataclass(frozen=True)
class RepetitionKey:
    """(message, receiver class), compared case- and whitespace-insensitively."""

    message_name: str = field(compare=False)
    receiver_class: str = field(compare=False)
    _norm: Tuple[str, str] = field(init=False, repr=False)

    def __post_init__(self):
        norm = (normalize(self.message_name), normalize(self.receiver_class))
        if not all(norm):
            raise ValueError("repetition key fields must be non-empty")
        object.__setattr__(self, "_norm", norm)

    @classmethod
    def of(cls, row: MessageRecord) -> "RepetitionKey":
        return cls(row.name.strip(), row.receiver_class.strip())


def is_crosscutting_call(row: MessageRecord) -> bool:
    return (
        row.is_call
        and row.sender_concern is ConcernType.FUNCTIONAL
        and row.receiver_concern is ConcernType.NON_FUNCTIONAL
    )


def repetition_counts(table: MessageTable) -> Dict[RepetitionKey, int]:
    """Model-wide count of functional -> non-functional calls per (message, receiver class)."""
    counts: Dict[RepetitionKey, int] = {}
    for row in table.rows:
        if is_crosscutting_call(row):
            key = RepetitionKey.of(row)
            counts[key] = counts.get(key, 0) + 1
    return counts


def annotate_repetitions(table: MessageTable) -> MessageTable:
    counts = repetition_counts(table)
    return table.with_rows(
        replace(
            row,
            repetition=counts.get(RepetitionKey.of(row), 0)
            if row.receiver_concern is ConcernType.NON_FUNCTIONAL
            else None,
        )
        for row in table.rows
    )


@dataclass(frozen=True)
class AspectCandidateSet:
    threshold: int
    classes: Tuple[str, ...] = ()
    evidence: Mapping[str, Tuple[Tuple[RepetitionKey, int], ...]] = field(default_factory=dict)

    def __contains__(self, class_name: str) -> bool:
        n = normalize(class_name)
        return any(normalize(c) == n for c in self.classes)

    def normalized(self) -> frozenset:
        return frozenset(normalize(c) for c in self.classes)

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "candidates": [
                {
                    "class": cls,
                    "evidence": [{"message": k.message_name, "count": n} for k, n in self.evidence[cls]],
                }
                for cls in self.classes
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def detect_aspect_candidates(
    counts: Mapping[RepetitionKey, int], concerns: ConcernMap, threshold: int
) -> AspectCandidateSet:
    """Classes that are non-functional and receive some call at least `threshold` times."""
    if threshold < 1:
        raise ConfigError(f"threshold must be >= 1, got {threshold}")
    per_class: Dict[str, List[Tuple[RepetitionKey, int]]] = {}
    display: Dict[str, str] = {}
    for key, n in counts.items():
        if classify(key.receiver_class, concerns) is not ConcernType.NON_FUNCTIONAL:
            continue
        norm = normalize(key.receiver_class)
        display.setdefault(norm, key.receiver_class)
        per_class.setdefault(norm, []).append((key, n))
    chosen = sorted(
        (norm for norm, ev in per_class.items() if any(n >= threshold for _, n in ev)),
    )
    evidence = {
        display[norm]: tuple(sorted(per_class[norm], key=lambda kv: (-kv[1], normalize(kv[0].message_name))))
        for norm in chosen
    }
    return AspectCandidateSet(threshold=threshold, classes=tuple(display[n] for n in chosen), evidence=evidence)


def repetition_report(counts: Mapping[RepetitionKey, int]) -> List[dict]:
    ordered = sorted(counts.items(), key=lambda kv: (normalize(kv[0].receiver_class), normalize(kv[0].message_name)))
    return [{"message": k.message_name, "class": k.receiver_class, "count": n} for k, n in ordered]
