"""Functional / non-functional classification of classes, loaded from a config file.

Config files are INI (``.cfg``/``.ini``) or JSON (``.json``)::

    [concerns]
    login page = non-functional
    home page = functional

    [actors]
    customer

    [analysis]
    threshold = 4
    advice_kind = before
    coupling = distinct

The JSON form uses the same keys at top level: ``concerns`` (object),
``actors`` (list), ``threshold``, ``advice_kind``, ``coupling``.
"""

from __future__ import annotations

import configparser
import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, Mapping, Sequence, Tuple, Union

from aodcomm.errors import ConfigError

DEFAULT_THRESHOLD = 3
ADVICE_KINDS = ("before", "after", "around")
COUPLING_MODES = ("distinct", "messages")


class ConcernType(str, enum.Enum):
    FUNCTIONAL = "functional"
    NON_FUNCTIONAL = "non_functional"

    @property
    def label(self) -> str:
        return "functional requirement" if self is ConcernType.FUNCTIONAL else "non functional requirement"

    @classmethod
    def parse(cls, text: str) -> "ConcernType":
        key = text.strip().lower().replace("-", "_").replace(" ", "_")
        for member in cls:
            if member.value == key:
                return member
        raise ConfigError(f"unknown concern value {text!r} (expected functional or non-functional)")


def normalize(name: str) -> str:
    return " ".join(name.split()).casefold()


@dataclass(frozen=True)
class ConcernMap:
    entries: Mapping[str, ConcernType] = field(default_factory=dict)
    actors: FrozenSet[str] = frozenset()
    default: ConcernType = ConcernType.FUNCTIONAL

    def is_actor(self, class_name: str) -> bool:
        return normalize(class_name) in self.actors

    def non_functional(self) -> Tuple[str, ...]:
        return tuple(sorted(k for k, v in self.entries.items() if v is ConcernType.NON_FUNCTIONAL))


@dataclass(frozen=True)
class Config:
    concerns: ConcernMap = field(default_factory=ConcernMap)
    threshold: int = DEFAULT_THRESHOLD
    advice_kind: str = "before"
    coupling: str = "distinct"


def classify(class_name: str, cmap: ConcernMap) -> ConcernType:
    return cmap.entries.get(normalize(class_name), cmap.default)


def _pairs(concerns: Union[Mapping[str, Any], Sequence[Tuple[str, Any]], None]) -> Iterable[Tuple[str, Any]]:
    if concerns is None:
        return ()
    if isinstance(concerns, Mapping):
        return concerns.items()
    return concerns


def load_concern_map(doc: Mapping[str, Any]) -> ConcernMap:
    """Build a ConcernMap from a parsed config document.

    ``doc["concerns"]`` may be a mapping or a sequence of (class, value)
    pairs; the pair form lets callers surface duplicates that a dict
    would silently merge.
    """
    entries: Dict[str, ConcernType] = {}
    for raw_name, value in _pairs(doc.get("concerns")):
        key = normalize(str(raw_name))
        if not key:
            raise ConfigError("empty class name in concerns")
        if key in entries:
            raise ConfigError(f"duplicate concern entry for class {raw_name!r}")
        if not isinstance(value, str):
            raise ConfigError(f"concern value for {raw_name!r} must be a string")
        entries[key] = ConcernType.parse(value)
    actors = doc.get("actors") or ()
    if isinstance(actors, str) or not isinstance(actors, Iterable):
        raise ConfigError("actors must be a list of class names")
    default = doc.get("default")
    return ConcernMap(
        entries=entries,
        actors=frozenset(normalize(str(a)) for a in actors),
        default=ConcernType.parse(default) if default else ConcernType.FUNCTIONAL,
    )


def load_config_document(doc: Mapping[str, Any]) -> Config:
    cmap = load_concern_map(doc)
    threshold = doc.get("threshold", DEFAULT_THRESHOLD)
    try:
        threshold = int(threshold)
    except (TypeError, ValueError):
        raise ConfigError(f"threshold must be an integer, got {threshold!r}") from None
    if threshold < 1:
        raise ConfigError(f"threshold must be >= 1, got {threshold}")
    advice_kind = str(doc.get("advice_kind", "before")).strip().lower()
    if advice_kind not in ADVICE_KINDS:
        raise ConfigError(f"advice_kind must be one of {', '.join(ADVICE_KINDS)}, got {advice_kind!r}")
    coupling = str(doc.get("coupling", "distinct")).strip().lower()
    if coupling not in COUPLING_MODES:
        raise ConfigError(f"coupling must be one of {', '.join(COUPLING_MODES)}, got {coupling!r}")
    return Config(concerns=cmap, threshold=threshold, advice_kind=advice_kind, coupling=coupling)


def _reject_duplicate_keys(pairs):
    seen = set()
    for key, _ in pairs:
        if key in seen:
            raise ConfigError(f"duplicate key {key!r} in JSON config")
        seen.add(key)
    return dict(pairs)


def _read_ini(text: str) -> Dict[str, Any]:
    parser = configparser.ConfigParser(allow_no_value=True, strict=True, interpolation=None, delimiters=("=",))
    parser.optionxform = str  # keep display casing; normalization happens in load_concern_map
    try:
        parser.read_string(text)
    except configparser.DuplicateOptionError as exc:
        raise ConfigError(f"duplicate concern entry for class {exc.option!r}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    doc: Dict[str, Any] = {}
    if parser.has_section("concerns"):
        doc["concerns"] = [(k, v if v is not None else "") for k, v in parser.items("concerns")]
    if parser.has_section("actors"):
        doc["actors"] = [k for k, _ in parser.items("actors")]
    if parser.has_section("analysis"):
        doc.update(dict(parser.items("analysis")))
    return doc


def read_config(path: Union[str, Path]) -> Config:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    if path.suffix.lower() == ".json":
        try:
            doc = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON config {path}: {exc}") from None
        if not isinstance(doc, dict):
            raise ConfigError("JSON config must be an object")
    else:
        doc = _read_ini(text)
    return load_config_document(doc)
