"""Tokenizer for the `.hts` modeling language."""

import logging
import re
from dataclasses import dataclass
from enum import Enum

from hazardflow.schemas.diagnostics import SourceSpan

logger = logging.getLogger(__name__)

KEYWORDS = frozenset(
    {
        "system",
        "hazard",
        "target",
        "part_of",
        "outside",
        "interaction",
        "between",
        "risk",
        "kind",
        "on",
        "constraint",
        "level",
        "event",
        "violates",
        "causes",
        "all",
        "any",
        "controller",
        "domain",
        "loop",
        "controls",
        "actuator",
        "sensor",
        "enforces",
        "recommend",
        "for",
        "category",
    }
)


class TokenKind(str, Enum):
    """Kind of a lexical token."""

    KEYWORD = "Keyword"
    IDENT = "Ident"
    STRING = "String"
    PUNCT = "Punct"
    ARROW = "Arrow"
    COMMENT = "Comment"
    ERROR = "Error"
    EOF = "Eof"


class LexProblem(str, Enum):
    """Why a slice of source became an error token."""

    UNKNOWN_CHARACTER = "unknown character"
    UNTERMINATED_STRING = "unterminated string"
    BYTE_ORDER_MARK = "byte-order mark"


@dataclass(frozen=True)
class Token:
    """A slice of source with its kind and span."""

    kind: TokenKind
    text: str
    span: SourceSpan
    problem: LexProblem | None = None

    def is_word(self, *words: str) -> bool:
        """Whether the token is a keyword or identifier spelled as one of ``words``."""
        return self.kind in (TokenKind.KEYWORD, TokenKind.IDENT) and self.text in words

    def is_punct(self, text: str) -> bool:
        """Whether the token is the given punctuation."""
        return self.kind == TokenKind.PUNCT and self.text == text


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow><-)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<unterminated>"(?:[^"\\\n]|\\.)*\\?)
  | (?P<word>[A-Za-z][A-Za-z0-9_]*(?:\.[A-Za-z0-9_]+)*)
  | (?P<punct>[{}(),;])
  | (?P<bom>\ufeff)
  | (?P<other>.)
    """,
    re.VERBOSE,
)

_ESCAPES = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}


def tokenize(source: str) -> list[Token]:
    """Split source into tokens.

    Lexing never fails: characters outside the language become Error tokens.
    Every byte of the source is covered by a token span or by whitespace
    between tokens, and the list always ends with an Eof token.

    Args:
    - source (str): `.hts` text

    Returns:
    - list[Token]: Tokens, comments included
    """
    tokens: list[Token] = []
    offset = 0
    line = 1
    column = 1
    for match in _TOKEN_RE.finditer(source):
        text = match.group()
        size = len(text.encode("utf-8"))
        group = match.lastgroup
        if group != "ws":
            kind, problem = _classify(group, text)
            span = SourceSpan(
                byte_start=offset, byte_end=offset + size, line=line, column=column
            )
            tokens.append(Token(kind, text, span, problem))
        offset += size
        newlines = text.count("\n")
        if newlines:
            line += newlines
            column = len(text) - text.rfind("\n")
        else:
            column += len(text)
    tokens.append(
        Token(
            TokenKind.EOF,
            "",
            SourceSpan(byte_start=offset, byte_end=offset, line=line, column=column),
        )
    )
    logger.debug("Tokenized %d bytes into %d tokens", offset, len(tokens))
    return tokens


def _classify(group: str, text: str) -> tuple[TokenKind, LexProblem | None]:
    if group == "comment":
        return TokenKind.COMMENT, None
    if group == "arrow":
        return TokenKind.ARROW, None
    if group == "string":
        return TokenKind.STRING, None
    if group == "word":
        return (TokenKind.KEYWORD if text in KEYWORDS else TokenKind.IDENT), None
    if group == "punct":
        return TokenKind.PUNCT, None
    if group == "unterminated":
        return TokenKind.ERROR, LexProblem.UNTERMINATED_STRING
    if group == "bom":
        return TokenKind.ERROR, LexProblem.BYTE_ORDER_MARK
    return TokenKind.ERROR, LexProblem.UNKNOWN_CHARACTER


def unquote(text: str) -> str:
    """Value of a string token (quotes removed, escapes decoded)."""
    body = text[1:-1]
    out = []
    chars = iter(body)
    for char in chars:
        if char == "\\":
            escaped = next(chars, "\\")
            out.append(_ESCAPES.get(escaped, escaped))
        else:
            out.append(char)
    return "".join(out)


def quote(value: str) -> str:
    """String literal for a value; inverse of :func:`unquote`."""
    escaped = (
        value.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\t", "\\t")
    )
    return f'"{escaped}"'
