"""Tests for the tokenizer."""

from hazardflow.dsl import TokenKind, tokenize
from hazardflow.dsl.lexer import LexProblem, quote, unquote


def kinds(source: str) -> list[TokenKind]:
    return [token.kind for token in tokenize(source)]


def test_minimal_program():
    """Test tokenizing the smallest program."""
    tokens = tokenize("system s {}")
    assert [token.kind for token in tokens] == [
        TokenKind.KEYWORD,
        TokenKind.IDENT,
        TokenKind.PUNCT,
        TokenKind.PUNCT,
        TokenKind.EOF,
    ]
    assert [token.text for token in tokens[:-1]] == ["system", "s", "{", "}"]


def test_cause_declaration():
    """Test the arrow and dotted identifiers of a cause line."""
    tokens = tokenize("causes R1 <- all(E1.1, E1.4)")
    assert any(token.kind == TokenKind.ARROW and token.text == "<-" for token in tokens)
    assert any(token.kind == TokenKind.IDENT and token.text == "E1.1" for token in tokens)
    assert tokens[3].kind == TokenKind.KEYWORD
    assert tokens[3].text == "all"


def test_comment_only():
    """Test a source holding a comment and nothing else."""
    assert kinds("# comment\n") == [TokenKind.COMMENT, TokenKind.EOF]


def test_enum_values_are_identifiers():
    """Test that enumeration values lex as identifiers, not keywords."""
    tokens = tokenize("near_miss micro social government")
    assert {token.kind for token in tokens[:-1]} == {TokenKind.IDENT}


def test_error_tokens():
    """Test unknown characters, unterminated strings and a byte-order mark."""
    unknown = tokenize("system s { @ }")[3]
    assert unknown.kind == TokenKind.ERROR
    assert unknown.problem == LexProblem.UNKNOWN_CHARACTER

    unterminated = tokenize('hazard H1 "open\n')[2]
    assert unterminated.kind == TokenKind.ERROR
    assert unterminated.problem == LexProblem.UNTERMINATED_STRING
    assert unterminated.text == '"open'

    bom = tokenize("\ufeffsystem s {}")[0]
    assert bom.problem == LexProblem.BYTE_ORDER_MARK
    assert bom.span.byte_end == 3


def test_line_and_column():
    """Test 1-based positions of tokens on later lines."""
    tokens = tokenize("system s {\n  hazard H1\n}")
    hazard, ident = tokens[3], tokens[4]
    assert (hazard.span.line, hazard.span.column) == (2, 3)
    assert (ident.span.line, ident.span.column) == (2, 10)
    assert tokens[-1].span.line == 3


def test_byte_offsets_with_multibyte_text():
    """Test that spans count bytes, not characters."""
    tokens = tokenize('hazard H1 "35°C" H2')
    string = tokens[2]
    assert string.span.byte_end - string.span.byte_start == len('"35°C"'.encode("utf-8"))
    assert tokens[3].span.byte_start == string.span.byte_end + 1
    assert tokens[3].span.column == 18


def test_tokens_cover_source(corpus_source: str):
    """Test that token spans and whitespace between them cover every byte."""
    data = corpus_source.encode("utf-8")
    position = 0
    for token in tokenize(corpus_source):
        assert data[position : token.span.byte_start].strip() == b""
        assert data[token.span.byte_start : token.span.byte_end].decode("utf-8") == token.text
        position = token.span.byte_end
    assert position == len(data)


def test_tokenize_is_deterministic(corpus_source: str):
    """Test that identical source gives identical tokens."""
    assert tokenize(corpus_source) == tokenize(corpus_source)


def test_string_escapes():
    """Test decoding and encoding of string literals."""
    assert unquote(r'"say \"hi\"\n"') == 'say "hi"\n'
    assert quote('a\\b "c"') == r'"a\\b \"c\""'
