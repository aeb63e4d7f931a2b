"""A small recursive-descent parser for the DOT subset used here.

Covers graph/digraph headers, node, edge and attribute statements, ``ID=ID``
statements and quoted/bare IDs. Subgraphs and ports are rejected. Used to
check emitted renderings, so it shares no code with the emitter.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|//[^\n]*|/\*.*?\*/|\#[^\n]*)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<edgeop>->|--)
  | (?P<punct>[{}\[\];,=])
  | (?P<number>-?(?:\.\d+|\d+(?:\.\d*)?))
  | (?P<ident>[A-Za-z_\u0080-\uffff][A-Za-z0-9_\u0080-\uffff]*)
    """,
    re.VERBOSE | re.DOTALL,
)
_KEYWORDS = {"strict", "graph", "digraph", "node", "edge", "subgraph"}


class DotSyntaxError(ValueError):
    pass


@dataclass
class DotGraph:
    directed: bool
    name: str = ""
    nodes: Dict[str, Dict[str, str]] = field(default_factory=dict)
    edges: List[Tuple[str, str, Dict[str, str]]] = field(default_factory=list)
    defaults: Dict[str, Dict[str, str]] = field(default_factory=dict)


def _tokenize(text: str) -> List[Tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DotSyntaxError(f"unexpected character {text[pos]!r} at offset {pos}")
        pos = m.end()
        kind = m.lastgroup
        if kind == "ws":
            continue
        value = m.group()
        if kind == "string":
            value = re.sub(r"\\(.)", lambda e: "\n" if e.group(1) == "n" else e.group(1), value[1:-1])
            kind = "id"
        elif kind in ("number",):
            kind = "id"
        elif kind == "ident":
            kind = "kw" if value.lower() in _KEYWORDS else "id"
            if kind == "kw":
                value = value.lower()
        tokens.append((kind, value))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self, offset=0):
        j = self.i + offset
        return self.tokens[j] if j < len(self.tokens) else ("eof", "")

    def take(self, kind=None, value=None):
        tok = self.peek()
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value or kind
            raise DotSyntaxError(f"expected {want!r}, found {tok[1] or tok[0]!r} at token {self.i}")
        self.i += 1
        return tok

    def accept(self, kind, value=None):
        tok = self.peek()
        if tok[0] == kind and (value is None or tok[1] == value):
            self.i += 1
            return True
        return False

    def graph(self) -> DotGraph:
        self.accept("kw", "strict")
        kind = self.take("kw")[1]
        if kind not in ("graph", "digraph"):
            raise DotSyntaxError(f"expected graph or digraph, found {kind!r}")
        g = DotGraph(directed=kind == "digraph")
        if self.peek()[0] == "id":
            g.name = self.take("id")[1]
        self.take("punct", "{")
        while not self.accept("punct", "}"):
            self.statement(g)
            self.accept("punct", ";")
        if self.peek()[0] != "eof":
            raise DotSyntaxError("trailing content after closing brace")
        return g

    def attr_list(self) -> Dict[str, str]:
        attrs: Dict[str, str] = {}
        while self.accept("punct", "["):
            while not self.accept("punct", "]"):
                key = self.take("id")[1]
                self.take("punct", "=")
                attrs[key] = self.take("id")[1]
                if not self.accept("punct", ","):
                    self.accept("punct", ";")
        return attrs

    def statement(self, g: DotGraph) -> None:
        kind, value = self.peek()
        if kind == "kw" and value in ("graph", "node", "edge"):
            self.i += 1
            g.defaults.setdefault(value, {}).update(self.attr_list())
            return
        if kind == "kw":
            raise DotSyntaxError(f"unsupported statement starting with {value!r}")
        first = self.take("id")[1]
        if self.accept("punct", "="):
            self.take("id")
            return
        chain = [first]
        while self.peek()[0] == "edgeop":
            op = self.take("edgeop")[1]
            if (op == "->") != g.directed:
                raise DotSyntaxError(f"edge operator {op!r} does not match graph kind")
            chain.append(self.take("id")[1])
        attrs = self.attr_list()
        if len(chain) == 1:
            g.nodes.setdefault(first, {}).update(attrs)
            return
        for node in chain:
            g.nodes.setdefault(node, {})
        for src, dst in zip(chain, chain[1:]):
            g.edges.append((src, dst, dict(attrs)))


def parse_dot(text: str) -> DotGraph:
    """Parse DOT text; raises DotSyntaxError when it is not valid in this subset."""
    return _Parser(_tokenize(text)).graph()
