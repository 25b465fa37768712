"""Tokenizer and polynomial expression grammar shared with the CLI parser.

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ['^' INT]
    atom   := INT ['/' INT] | IDENT | '(' expr ')'
"""

import re
from dataclasses import dataclass
from typing import Iterable, List, Optional

from algebra_core.errors import ParseError

_TOKEN_SPEC = [
    ("WS", r"[ \t\r]+"),
    ("NEWLINE", r"\n"),
    ("COMMENT", r"#[^\n]*"),
    ("DOTS", r"\.\."),
    ("INT", r"\d+"),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("SYMBOL", r"[-+*/^()\[\],;=:{}<>]"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int

    @property
    def label(self) -> str:
        return self.text if self.kind in ("SYMBOL", "DOTS") else self.kind


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = match.lastgroup
        if kind == "NEWLINE":
            line += 1
            line_start = match.end()
        elif kind not in ("WS", "COMMENT"):
            tokens.append(Token(kind, match.group(), line, pos - line_start + 1))
        pos = match.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


class TokenStream:
    """Cursor over tokens; ``expect`` raises ParseError with the expected-token set."""

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0

    @classmethod
    def from_text(cls, text: str) -> "TokenStream":
        return cls(tokenize(text))

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.peek()
        if token.kind != "EOF":
            self.pos += 1
        return token

    def at(self, *labels: str) -> bool:
        token = self.peek()
        return token.label in labels or (token.kind == "IDENT" and token.text in labels)

    def accept(self, *labels: str) -> Optional[Token]:
        if self.at(*labels):
            return self.advance()
        return None

    def fail(self, message: str, expected: Iterable[str]) -> ParseError:
        token = self.peek()
        found = "end of input" if token.kind == "EOF" else repr(token.text)
        return ParseError(f"{message}, found {found}", token.line, token.column, expected)

    def expect(self, *labels: str) -> Token:
        token = self.accept(*labels)
        if token is None:
            raise self.fail("unexpected token", labels)
        return token


_ATOM_START = ("INT", "IDENT", "(")


def parse_expression(stream: TokenStream, ring):
    """Parse one polynomial expression from ``stream`` into ``ring``."""
    sign = -1 if stream.accept("-") else 1
    if sign == 1:
        stream.accept("+")
    result = _parse_term(stream, ring) * sign
    while stream.at("+", "-"):
        op = stream.advance().text
        term = _parse_term(stream, ring)
        result = result + term if op == "+" else result - term
    return result


def _parse_term(stream: TokenStream, ring):
    result = _parse_factor(stream, ring)
    while stream.accept("*"):
        result = result * _parse_factor(stream, ring)
    return result


def _parse_factor(stream: TokenStream, ring):
    base = _parse_atom(stream, ring)
    if stream.accept("^"):
        exponent = int(stream.expect("INT").text)
        return base ** exponent
    return base


def _parse_atom(stream: TokenStream, ring):
    token = stream.peek()
    if token.kind == "INT":
        stream.advance()
        numerator = int(token.text)
        if stream.accept("/"):
            denominator = int(stream.expect("INT").text)
            if denominator == 0:
                raise ParseError("zero denominator", token.line, token.column)
            return ring.constant_fraction(numerator, denominator)
        return ring.constant_fraction(numerator, 1)
    if token.kind == "IDENT":
        if token.text not in ring.index:
            raise ParseError(f"unknown variable '{token.text}'", token.line, token.column, ring.names)
        stream.advance()
        return ring.gen(token.text)
    if stream.accept("("):
        inner = parse_expression(stream, ring)
        stream.expect(")")
        return inner
    raise stream.fail("expected a polynomial", _ATOM_START)


def parse_polynomial(text: str, ring):
    stream = TokenStream.from_text(text)
    result = parse_expression(stream, ring)
    stream.expect("EOF")
    return result
