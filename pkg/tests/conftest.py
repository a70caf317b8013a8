"""Test fixtures for the analysis engine and the FastAPI app."""

import re
from dataclasses import dataclass, field
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from hazardflow.dsl import parse
from hazardflow.main import app
from hazardflow.schemas.model import Model
from hazardflow.services.flowgraph import FlowGraph, build_flow_graph
from hazardflow.utils.ids import DOT_KEYWORDS

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus" / "tianjin.hts"
FIXTURES = Path(__file__).resolve().parent / "fixtures"
GOLDENS = Path(__file__).resolve().parent / "goldens"


def read_fixture(name: str) -> str:
    """Source text of a fixture under tests/fixtures."""
    return (FIXTURES / name).read_text(encoding="utf-8")


def load_model(source: str) -> Model:
    """Parse source that is expected to be free of parse errors."""
    model, diagnostics = parse(source)
    assert model is not None, [item.message for item in diagnostics]
    return model


@pytest.fixture(scope="session")
def corpus_source() -> str:
    """Tianjin case study source."""
    return CORPUS.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def corpus(corpus_source: str) -> Model:
    """Parsed Tianjin case study."""
    return load_model(corpus_source)


@pytest.fixture(scope="session")
def corpus_graph(corpus: Model) -> FlowGraph:
    """Event-flow graph of the case study."""
    return build_flow_graph(corpus)


@pytest.fixture(scope="session")
def slice_source() -> str:
    """Small micro-level slice of the case study used for golden files."""
    return read_fixture("micro_slice.hts")


@pytest.fixture(scope="session")
def micro_slice(slice_source: str) -> Model:
    """Parsed micro slice."""
    return load_model(slice_source)


@pytest.fixture(scope="session")
def slice_graph(micro_slice: Model) -> FlowGraph:
    """Event-flow graph of the micro slice."""
    return build_flow_graph(micro_slice)


@pytest.fixture(scope="module")
def client():
    """Get a FastAPI test client."""
    with TestClient(app) as c:
        yield c


_DOT_TOKEN = re.compile(
    r"""
    \s+
  | (?P<arrow>->)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<id>[A-Za-z_][A-Za-z_0-9]*|-?(?:\.[0-9]+|[0-9]+(?:\.[0-9]*)?))
  | (?P<punct>[{}\[\]=;,])
  | (?P<other>.)
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass
class DotGraph:
    """Node and edge statements of a DOT digraph, ids unquoted."""

    nodes: list[str] = field(default_factory=list)
    edges: list[tuple[str, str]] = field(default_factory=list)


class _DotReader:
    """Reads the DOT grammar subset our emitters use and fails on anything else.

    Keywords (node, edge, graph, digraph, subgraph, strict) are case-insensitive
    and can never name a node without quotes.
    """

    def __init__(self, text: str):
        self.tokens = []
        for match in _DOT_TOKEN.finditer(text):
            if match.lastgroup is None:
                continue
            assert match.lastgroup != "other", f"stray character {match.group()!r}"
            self.tokens.append((match.lastgroup, match.group()))
        self.tokens.append(("eof", ""))
        self.pos = 0
        self.graph = DotGraph()

    def peek(self) -> tuple[str, str]:
        return self.tokens[self.pos]

    def take(self, kind: str, text: str | None = None) -> str:
        token = self.tokens[self.pos]
        assert token[0] == kind and text in (None, token[1]), (
            f"unexpected {token[1]!r} at token {self.pos}, expected {text or kind}"
        )
        self.pos += 1
        return token[1]

    def at_keyword(self, *words: str) -> bool:
        kind, text = self.peek()
        return kind == "id" and text.lower() in words

    def value(self) -> str:
        kind, text = self.peek()
        assert kind in ("id", "string"), f"unexpected {text!r} at token {self.pos}, expected an id"
        self.pos += 1
        return text[1:-1].replace('\\"', '"') if kind == "string" else text

    def node_id(self) -> str:
        assert not self.at_keyword(*DOT_KEYWORDS), f"keyword {self.peek()[1]!r} used as a node id"
        return self.value()

    def read(self) -> DotGraph:
        if self.at_keyword("strict"):
            self.pos += 1
        assert self.at_keyword("digraph"), "expected digraph"
        self.pos += 1
        if self.peek()[0] in ("id", "string"):
            self.node_id()
        self.statements()
        self.take("eof")
        return self.graph

    def statements(self) -> None:
        self.take("punct", "{")
        while self.peek() != ("punct", "}"):
            self.statement()
            if self.peek() == ("punct", ";"):
                self.pos += 1
        self.take("punct", "}")

    def statement(self) -> None:
        if self.at_keyword("graph", "node", "edge"):
            self.pos += 1
            self.attributes()
            return
        if self.at_keyword("subgraph"):
            self.pos += 1
            if self.peek() != ("punct", "{"):
                self.node_id()
            self.statements()
            return
        chain = [self.node_id()]
        if self.peek() == ("punct", "="):
            self.pos += 1
            self.value()
            return
        while self.peek()[0] == "arrow":
            self.pos += 1
            chain.append(self.node_id())
        if self.peek() == ("punct", "["):
            self.attributes()
        if len(chain) == 1:
            self.graph.nodes.append(chain[0])
        else:
            self.graph.edges.extend(zip(chain, chain[1:]))

    def attributes(self) -> None:
        self.take("punct", "[")
        while self.peek() != ("punct", "]"):
            self.value()
            self.take("punct", "=")
            self.value()
            if self.peek() in (("punct", ","), ("punct", ";")):
                self.pos += 1
        self.take("punct", "]")


def read_dot(text: str) -> DotGraph:
    """Check DOT text against the grammar and return its node and edge statements."""
    return _DotReader(text).read()
