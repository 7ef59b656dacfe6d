"""Polynomial text syntax: integers, ring variables, + - * ^ and parentheses.

Juxtaposition is not multiplication: ``2x`` and ``x y`` are syntax errors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from brmult.errors import InstanceError, InstanceSyntaxError

if TYPE_CHECKING:
    from brmult.localring.poly import Poly, PolyRing


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op", "end"
    text: str
    column: int  # 0-based offset in the parsed text


def tokenize(text: str, line: int = 0, column: int = 1) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("name", text[i:j], i))
            i = j
        elif ch in "+-*^()":
            tokens.append(Token("op", ch, i))
            i += 1
        else:
            raise InstanceSyntaxError(f"unexpected character {ch!r}", line, column + i)
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, ring: PolyRing, text: str, line: int, column: int) -> None:
        self.ring = ring
        self.line = line
        self.column = column
        self.tokens = tokenize(text, line, column)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, token: Token | None = None) -> InstanceSyntaxError:
        token = token or self.current
        return InstanceSyntaxError(message, self.line, self.column + token.column)

    def accept(self, op: str) -> Token | None:
        token = self.current
        if token.kind == "op" and token.text == op:
            self.pos += 1
            return token
        return None

    def parse(self) -> Poly:
        if self.current.kind == "end":
            raise self.error("expected a polynomial")
        result = self.expr()
        token = self.current
        if token.kind != "end":
            if token.kind in ("int", "name") or token.text == "(":
                raise self.error("expected an operator (juxtaposition is not multiplication)")
            raise self.error(f"unexpected {token.text!r}")
        return result

    def expr(self) -> Poly:
        result = self.term()
        while True:
            if self.accept("+"):
                result = result + self.term()
            elif self.accept("-"):
                result = result - self.term()
            else:
                return result

    def term(self) -> Poly:
        result = self.unary()
        while self.accept("*"):
            result = result * self.unary()
        return result

    def unary(self) -> Poly:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        caret = self.accept("^")
        if caret is None:
            return base
        token = self.current
        if token.kind != "int":
            raise self.error("expected an integer exponent after '^'", caret)
        self.pos += 1
        return base ** int(token.text)

    def atom(self) -> Poly:
        token = self.current
        if token.kind == "int":
            self.pos += 1
            return self.ring.constant(int(token.text))
        if token.kind == "name":
            if token.text not in self.ring.variables:
                raise InstanceError(
                    f"unknown variable {token.text!r}", self.line, self.column + token.column
                )
            self.pos += 1
            return self.ring.gen(token.text)
        if self.accept("("):
            inner = self.expr()
            if self.accept(")") is None:
                raise self.error("expected ')'")
            return inner
        if token.kind == "end":
            raise self.error("unexpected end of polynomial")
        raise self.error(f"unexpected {token.text!r}")


def parse_poly(ring: PolyRing, text: str, line: int = 0, column: int = 1) -> Poly:
    """Parse ``text`` over ``ring``; diagnostics report ``line`` and 1-based columns."""
    return _Parser(ring, text, line, column).parse()
