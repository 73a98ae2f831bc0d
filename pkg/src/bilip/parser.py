"""Recursive-descent parser for polynomial expressions with exact literals.

Grammar (public contract, version 1)::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' INT)?
    base   := IDENT | INT ('/' INT)? | 'i' | '(' expr ')' | '-' factor

Identifiers match ``[a-z][0-9]*``; ``i`` is the imaginary unit. There is no
implicit multiplication and exponents are integer literals at most 64.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence

from .gaussian import GaussianRational
from .poly import MultiPoly

__all__ = ["ExprToken", "ParseError", "tokenize", "parse", "parse_constant", "MAX_EXPONENT", "GRAMMAR"]

MAX_EXPONENT = 64

GRAMMAR = """\
expr   := term (('+'|'-') term)*
term   := factor ('*' factor)*
factor := base ('^' INT)?
base   := IDENT | INT ('/' INT)? | 'i' | '(' expr ')' | '-' factor
IDENT  := [a-z][0-9]*   ('i' is the imaginary unit)
INT    := [0-9]+        (exponents <= 64, no implicit multiplication)"""

_NAME_RE = re.compile(r"[a-z][0-9]*")

_SINGLE = {"/": "SLASH", "+": "PLUS", "-": "MINUS", "*": "STAR", "^": "CARET", "(": "LPAREN", ")": "RPAREN"}


@dataclass(frozen=True)
class ExprToken:
    kind: str
    lexeme: str
    position: int


class ParseError(ValueError):
    """Syntax or semantic error at a byte offset of the input."""

    def __init__(self, position: int, expected: str, found: str):
        self.position = position
        self.expected = expected
        self.found = found
        super().__init__(f"at offset {position}: expected {expected}, found {found}")


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def tokenize(text: str) -> List[ExprToken]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        pos = _byte_offset(text, i)
        if ch in _SINGLE:
            tokens.append(ExprToken(_SINGLE[ch], ch, pos))
            i += 1
        elif "0" <= ch <= "9":
            j = i
            while j < n and "0" <= text[j] <= "9":
                j += 1
            tokens.append(ExprToken("INT", text[i:j], pos))
            i = j
        elif "a" <= ch <= "z":
            j = i + 1
            while j < n and "0" <= text[j] <= "9":
                j += 1
            lexeme = text[i:j]
            tokens.append(ExprToken("IMAG_UNIT" if lexeme == "i" else "IDENT", lexeme, pos))
            i = j
        else:
            raise ParseError(pos, "a token", f"invalid character {ch!r}")
    return tokens


def _describe(tok: ExprToken | None) -> str:
    if tok is None:
        return "end of input"
    return f"{tok.kind} {tok.lexeme!r}"


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.tokens = tokenize(text)
        self.k = 0
        self.nvars = len(variables)
        self.index = {name: j for j, name in enumerate(variables)}
        self.end = len(text.encode("utf-8"))

    def peek(self):
        return self.tokens[self.k] if self.k < len(self.tokens) else None

    def here(self) -> int:
        tok = self.peek()
        return tok.position if tok is not None else self.end

    def take(self, kind: str, what: str) -> ExprToken:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            raise ParseError(self.here(), what, _describe(tok))
        self.k += 1
        return tok

    def const(self, c) -> MultiPoly:
        return MultiPoly.constant(self.nvars, c)

    def run(self) -> MultiPoly:
        if not self.tokens:
            raise ParseError(0, "an expression", "end of input")
        value = self.expr()
        if self.peek() is not None:
            raise ParseError(self.here(), "an operator or end of input", _describe(self.peek()))
        return value

    def expr(self) -> MultiPoly:
        acc = self.term()
        while (tok := self.peek()) is not None and tok.kind in ("PLUS", "MINUS"):
            self.k += 1
            rhs = self.term()
            acc = acc + rhs if tok.kind == "PLUS" else acc - rhs
        return acc

    def term(self) -> MultiPoly:
        acc = self.factor()
        while (tok := self.peek()) is not None and tok.kind == "STAR":
            self.k += 1
            acc = acc * self.factor()
        return acc

    def factor(self) -> MultiPoly:
        base = self.base()
        tok = self.peek()
        if tok is not None and tok.kind == "CARET":
            self.k += 1
            exp_tok = self.take("INT", "an integer exponent")
            e = int(exp_tok.lexeme)
            if e > MAX_EXPONENT:
                raise ParseError(exp_tok.position, f"an exponent <= {MAX_EXPONENT}", exp_tok.lexeme)
            return base**e
        return base

    def base(self) -> MultiPoly:
        tok = self.peek()
        if tok is None:
            raise ParseError(self.end, "an operand", "end of input")
        if tok.kind == "IDENT":
            self.k += 1
            if tok.lexeme not in self.index:
                declared = ", ".join(self.index) or "none"
                raise ParseError(tok.position, f"a declared variable ({declared})", f"identifier {tok.lexeme!r}")
            return MultiPoly.variable(self.nvars, self.index[tok.lexeme])
        if tok.kind == "INT":
            self.k += 1
            num = int(tok.lexeme)
            nxt = self.peek()
            if nxt is not None and nxt.kind == "SLASH":
                self.k += 1
                den_tok = self.take("INT", "an integer denominator")
                den = int(den_tok.lexeme)
                if den == 0:
                    raise ParseError(den_tok.position, "a nonzero denominator", "0")
                return self.const(Fraction(num, den))
            return self.const(num)
        if tok.kind == "IMAG_UNIT":
            self.k += 1
            return self.const(GaussianRational(0, 1))
        if tok.kind == "LPAREN":
            self.k += 1
            inner = self.expr()
            self.take("RPAREN", "')'")
            return inner
        if tok.kind == "MINUS":
            self.k += 1
            return -self.factor()
        raise ParseError(tok.position, "an operand", _describe(tok))


def _check_variables(variables: Sequence[str]) -> None:
    if len(set(variables)) != len(variables):
        raise ValueError("variable names must be distinct")
    for name in variables:
        if not _NAME_RE.fullmatch(name):
            raise ValueError(f"invalid variable name {name!r}; expected [a-z][0-9]*")
        if name == "i":
            raise ValueError("'i' is reserved for the imaginary unit")


def parse(text: str, variables: Sequence[str]) -> MultiPoly:
    """Parse ``text`` into a polynomial over the declared ``variables``."""
    variables = list(variables)
    if not variables:
        raise ValueError("at least one variable must be declared")
    _check_variables(variables)
    return _Parser(text, variables).run()


def parse_constant(text: str) -> GaussianRational:
    """Parse a variable-free expression such as ``1+i`` or ``-3/2``."""
    return _Parser(text, []).run().constant_term()
