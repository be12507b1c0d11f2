"""Tokenizer and recursive-descent parser shared by scalar and algebra text forms.

The parser is generic over the value type: a small ``Builder`` supplies atom
constructors and the arithmetic.  Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' ['-'] INT)?
    atom   := NUMBER | NAME ['[' INT (',' INT)* ']'] | '(' expr ')'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Callable

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class ParseError(ValueError):
    """Syntax error carrying the character offset where it was detected."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass
class Token:
    kind: str  # 'int', 'name', 'op', 'end'
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1) is not None:
            out.append(Token("int", m.group(1), start))
        elif m.group(2) is not None:
            out.append(Token("name", m.group(2), start))
        elif m.group(3) is not None:
            if m.group(3).isspace():
                pos = m.end()
                continue
            out.append(Token("op", m.group(3), start))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


@dataclass
class Builder:
    """Value-type hooks for :func:`parse_expression`."""

    number: Callable[[int], Any]
    atom: Callable[[str, tuple, int], Any]  # name, indices, position
    add: Callable[[Any, Any], Any] = lambda a, b: a + b
    sub: Callable[[Any, Any], Any] = lambda a, b: a - b
    mul: Callable[[Any, Any], Any] = lambda a, b: a * b
    div: Callable[[Any, Any], Any] = lambda a, b: a / b
    neg: Callable[[Any], Any] = lambda a: -a
    power: Callable[[Any, int], Any] = lambda a, k: a**k


class _Parser:
    def __init__(self, text: str, builder: Builder):
        self.tokens = tokenize(text)
        self.i = 0
        self.b = builder

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def accept(self, op: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == op:
            self.i += 1
            return True
        return False

    def expect(self, op: str) -> None:
        if not self.accept(op):
            raise ParseError(f"expected {op!r}, found {self.tok.text or 'end of input'!r}", self.tok.pos)

    def parse(self):
        if self.tok.kind == "end":
            raise ParseError("empty expression", 0)
        value = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return value

    def expr(self):
        value = self.term()
        while True:
            if self.accept("+"):
                value = self.b.add(value, self.term())
            elif self.accept("-"):
                value = self.b.sub(value, self.term())
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            if self.accept("*"):
                value = self.b.mul(value, self.unary())
            elif self.tok.kind == "op" and self.tok.text == "/":
                pos = self.tok.pos
                self.i += 1
                rhs = self.unary()
                try:
                    value = self.b.div(value, rhs)
                except ZeroDivisionError as exc:
                    raise ParseError(str(exc), pos) from None
            else:
                return value

    def unary(self):
        if self.accept("-"):
            return self.b.neg(self.unary())
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.accept("^"):
            sign = -1 if self.accept("-") else 1
            if self.tok.kind != "int":
                raise ParseError("expected integer exponent", self.tok.pos)
            k = sign * int(self.tok.text)
            pos = self.tok.pos
            self.i += 1
            try:
                base = self.b.power(base, k)
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(str(exc), pos) from None
        return base

    def atom(self):
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            return self.b.number(int(tok.text))
        if tok.kind == "name":
            self.i += 1
            indices: tuple = ()
            if self.accept("["):
                idx = []
                while True:
                    if self.tok.kind != "int":
                        raise ParseError("expected integer index", self.tok.pos)
                    idx.append(int(self.tok.text))
                    self.i += 1
                    if self.accept("]"):
                        break
                    self.expect(",")
                indices = tuple(idx)
            return self.b.atom(tok.text, indices, tok.pos)
        if self.accept("("):
            value = self.expr()
            self.expect(")")
            return value
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.pos)


def parse_expression(text: str, builder: Builder):
    return _Parser(text, builder).parse()
