"""Aspect-oriented redesign of UML communication diagrams read from EA XMI 1.1."""

from aodcomm.errors import (
    AodError,
    CodegenError,
    ConfigError,
    Diagnostic,
    LabelParseError,
    TransformError,
    UnsupportedFormatError,
    XmiParseError,
)

__version__ = "0.1.0"

__all__ = [
    "AodError",
    "CodegenError",
    "ConfigError",
    "Diagnostic",
    "LabelParseError",
    "TransformError",
    "UnsupportedFormatError",
    "XmiParseError",
]
