""" Lexer, parser and formatter for the `.hts` modeling language. """

from .formatter import format_canonical
from .lexer import Token, TokenKind, tokenize
from .parser import parse
