"""Exception hierarchy and the structured diagnostic record shared by all stages."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


class AodError(Exception):
    """Base class for user-facing failures (bad input, bad config)."""


class XmiParseError(AodError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")


class UnsupportedFormatError(AodError):
    pass


class LabelParseError(AodError):
    def __init__(self, text: str, reason: str = "does not match the message label grammar"):
        self.text = text
        super().__init__(f"label {text!r} {reason}")


class ConfigError(AodError):
    pass


class TransformError(AodError):
    pass


class CodegenError(AodError):
    pass


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "info" | "warning" | "error"
    message: str
    location: Optional[str] = None

    def __str__(self) -> str:
        loc = f" ({self.location})" if self.location else ""
        return f"{self.severity}: {self.message}{loc}"

    def to_dict(self) -> dict:
        return {"severity": self.severity, "message": self.message, "location": self.location}
