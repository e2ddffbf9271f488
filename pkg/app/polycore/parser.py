"""
Polynomial expression parser.

Grammar (ASCII only, whitespace ignored):

    expr   := ['+' | '-'] term (('+' | '-') term)*
    term   := factor (['*'] factor)*          implicit product: "2x^2", "3(x+y)"
    factor := ('+' | '-') factor | atom [('^' | '**') INT]
    atom   := INT ['/' INT] | NAME | '(' expr ')'

Names are matched against the declared variable list. A name that is not
declared but splits into declared names ("yz" with y and z declared) is read
as their product, so forms can be written the way they are printed
("yzdx + xzdy" style coefficients). Errors carry the byte offset.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from app.core.errors import PolySyntaxError, UnknownVariableError
from app.polycore.poly import MultiPoly

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\s*/\s*\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<pow>\*\*|\^)
  | (?P<op>[-+*()])
    """,
    re.VERBOSE,
)


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m:
            raise PolySyntaxError(f"unexpected character {text[i]!r}", text, _byte_offset(text, i))
        kind = m.lastgroup or ""
        if kind != "ws":
            tokens.append((kind, m.group(), _byte_offset(text, i)))
        i = m.end()
    tokens.append(("end", "", _byte_offset(text, len(text))))
    return tokens


def split_name(name: str, variables: Sequence[str]) -> list[str] | None:
    """Greedy longest-prefix split of `name` into declared variable names."""
    if name in variables:
        return [name]
    by_length = sorted(variables, key=len, reverse=True)
    out: list[str] = []
    rest = name
    while rest:
        for v in by_length:
            if rest.startswith(v):
                out.append(v)
                rest = rest[len(v):]
                break
        else:
            return None
    return out


class _Parser:
    def __init__(self, text: str, variables: tuple[str, ...]) -> None:
        self.text = text
        self.variables = variables
        self.tokens = _tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int]:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def error(self, message: str) -> PolySyntaxError:
        return PolySyntaxError(message, self.text, self.tok[2])

    def parse(self) -> MultiPoly:
        if self.tok[0] == "end":
            raise self.error("empty expression")
        result = self.expr()
        if self.tok[0] != "end":
            raise self.error(f"unexpected {self.tok[1]!r}")
        return result

    def expr(self) -> MultiPoly:
        sign = 1
        if self.tok[1] in "+-" and self.tok[0] == "op":
            sign = -1 if self.advance()[1] == "-" else 1
        result = self.term().scale(sign)
        while self.tok[0] == "op" and self.tok[1] in "+-":
            op = self.advance()[1]
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def _starts_factor(self) -> bool:
        kind, value, _ = self.tok
        return kind in ("num", "name") or (kind == "op" and value == "(")

    def term(self) -> MultiPoly:
        result = self.factor()
        while True:
            if self.tok[0] == "op" and self.tok[1] == "*":
                self.advance()
                result = result * self.factor()
            elif self._starts_factor():
                result = result * self.factor()
            else:
                return result

    def factor(self) -> MultiPoly:
        kind, value, _ = self.tok
        if kind == "op" and value in "+-":
            self.advance()
            inner = self.factor()
            return -inner if value == "-" else inner
        base = self.atom()
        if self.tok[0] == "pow":
            self.advance()
            kind, value, _ = self.tok
            if kind != "num" or "/" in value:
                raise self.error("exponent must be a non-negative integer")
            self.advance()
            base = base ** int(value)
        return base

    def atom(self) -> MultiPoly:
        kind, value, offset = self.tok
        if kind == "num":
            self.advance()
            if "/" in value:
                num, den = (int(s) for s in value.split("/"))
                if den == 0:
                    raise PolySyntaxError("zero denominator", self.text, offset)
                return MultiPoly.constant(Fraction(num, den), self.variables)
            return MultiPoly.constant(int(value), self.variables)
        if kind == "name":
            self.advance()
            parts = split_name(value, self.variables)
            if parts is None:
                raise UnknownVariableError(self._first_unknown(value), self.variables, offset)
            result = MultiPoly.one(self.variables)
            for p in parts:
                result = result * MultiPoly.var(p, self.variables)
            return result
        if kind == "op" and value == "(":
            self.advance()
            inner = self.expr()
            if self.tok[1] != ")":
                raise self.error("expected ')'")
            self.advance()
            return inner
        if kind == "end":
            raise self.error("unexpected end of expression")
        raise self.error(f"unexpected {value!r}")

    def _first_unknown(self, name: str) -> str:
        # Report the shortest undeclared piece so "w" in "x + w" names itself.
        rest = name
        by_length = sorted(self.variables, key=len, reverse=True)
        while rest:
            for v in by_length:
                if rest.startswith(v):
                    rest = rest[len(v):]
                    break
            else:
                return rest
        return name


def parse_poly(text: str, variables: Sequence[str]) -> MultiPoly:
    """Parse `text` into a canonical MultiPoly over `variables`."""
    return _Parser(text, tuple(variables)).parse()

