"""Tokenizer shared by the formula syntax and the model file format."""

import re
from dataclasses import dataclass

from .errors import ParseError

_TOKEN_RE = re.compile(
    r"""
    (?P<nl>\n)
  | (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<op>-->|->|--|:=)
  | (?P<ident>[A-Za-z0-9_]+)
  | (?P<punct>[{}();:,.?!&|])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "sym" or "eof"
    text: str
    line: int
    col: int


def tokenize(text):
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("op", "punct"):
            tokens.append(Token("sym", m.group(), line, pos - line_start + 1))
        elif kind == "ident":
            tokens.append(Token("ident", m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class TokenStream:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    @classmethod
    def from_text(cls, text):
        return cls(tokenize(text))

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at(self, text):
        tok = self.peek()
        return tok.kind == "sym" and tok.text == text

    def accept(self, text):
        if self.at(text):
            return self.next()
        return None

    def expect(self, text):
        tok = self.peek()
        if tok.kind == "sym" and tok.text == text:
            return self.next()
        if tok.kind == "ident" and tok.text == text:
            return self.next()
        raise self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok)

    def ident(self, what="identifier"):
        tok = self.peek()
        if tok.kind != "ident":
            raise self.error(f"expected {what}, found {tok.text or 'end of input'!r}", tok)
        return self.next()

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.col)
