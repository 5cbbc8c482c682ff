"""Expression parser shared by presentation files and the CLI.

Grammar (precedence low to high):

    tensor   := tterm { ("+" | "-") tterm }
    tterm    := term { "(x)" term }
    expr     := term { ("+" | "-") term }
    term     := factor { ("*" | "/") factor }
    factor   := ("-" | "+") factor | power
    power    := atom [ "^" signed_int ]
    atom     := integer | "q" | "s" | generator name | "(" tensor-or-expr ")"

Juxtaposition is not multiplication; "*" is required.  Division is only
defined when the divisor is a pure scalar.  "^" takes an integer
exponent, negative only for scalars.  The tensor separator "(x)" binds
tighter than "+"/"-" and looser than "*", so sums of tensor monomials
parse into a single TensorElement of uniform arity.
"""

from __future__ import annotations

import re

from .algebra import Element
from .scalars import Q, S, Scalar
from .tensors import TensorElement

__all__ = ["ParseError", "parse_element", "parse_tensor", "tokenize"]


class ParseError(Exception):
    """Syntax or name error, with 1-based line/column position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<tensor>\(x\))
      | (?P<num>\d+)
      | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
      | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list:
    """Token stream of (kind, value, line, column) tuples."""
    tokens = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}",
                             line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        if kind == "ws":
            line += value.count("\n")
            if "\n" in value:
                line_start = m.start() + value.rindex("\n") + 1
        else:
            tokens.append((kind, value, line, m.start() - line_start + 1))
        pos = m.end()
    tokens.append(("end", "", line, len(text) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, generators: dict):
        self.tokens = tokenize(text)
        self.generators = generators
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str):
        _, _, line, col = self.peek()
        raise ParseError(message, line, col)

    def expect(self, value: str):
        kind, val, _, _ = self.peek()
        if val != value or kind == "end":
            self.error(f"expected {value!r}")
        return self.next()

    # Every rule returns an Element, except the tensor rules which
    # return TensorElements.

    def tensor(self) -> TensorElement:
        out = self.tensor_term()
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            rhs = self.tensor_term()
            if rhs.arity != out.arity:
                self.error("tensor arity mismatch between terms")
            out = out + rhs if op == "+" else out - rhs
        return out

    def tensor_term(self) -> TensorElement:
        legs = [self.term()]
        while self.peek()[0] == "tensor":
            self.next()
            legs.append(self.term())
        return TensorElement.of(*legs)

    def expr(self) -> Element:
        out = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> Element:
        out = self.factor()
        while self.peek()[1] in ("*", "/"):
            op = self.next()[1]
            rhs = self.factor()
            if op == "*":
                out = out * rhs
            else:
                c = _as_scalar(rhs)
                if c is None:
                    self.error("divisor must be a scalar")
                if not c:
                    self.error("division by zero")
                out = out.scale(Scalar(1) / c)
        return out

    def factor(self) -> Element:
        if self.peek()[1] == "-":
            self.next()
            return -self.factor()
        if self.peek()[1] == "+":
            self.next()
            return self.factor()
        return self.power()

    def power(self) -> Element:
        base = self.atom()
        if self.peek()[1] != "^":
            return base
        self.next()
        sign = 1
        if self.peek()[1] == "-":
            self.next()
            sign = -1
        kind, val, _, _ = self.peek()
        if kind != "num":
            self.error("expected an integer exponent after '^'")
        self.next()
        n = sign * int(val)
        c = _as_scalar(base)
        if c is not None:
            if n < 0 and not c:
                self.error("negative power of zero")
            return Element.unit(c ** n)
        if n < 0:
            self.error("negative powers are only defined for scalars")
        out = Element.unit()
        for _ in range(n):
            out = out * base
        return out

    def atom(self) -> Element:
        kind, val, _, _ = self.peek()
        if kind == "num":
            self.next()
            return Element.unit(Scalar(int(val)))
        if kind == "name":
            self.next()
            if val == "q":
                return Element.unit(Q)
            if val == "s":
                return Element.unit(S)
            idx = self.generators.get(val)
            if idx is None:
                self.error(f"unknown generator {val!r}")
            return Element.generator(idx)
        if val == "(":
            self.next()
            inner = self.expr()
            self.expect(")")
            return inner
        self.error("expected a number, name or '('")


def _as_scalar(e: Element):
    """The Scalar an element equals, or None when it involves generators."""
    if e.is_zero():
        return Scalar(0)
    if len(e.terms) == 1 and () in e.terms:
        return e.terms[()]
    return None


def parse_element(text: str, generators: dict) -> Element:
    """Parse a single algebra expression; generators maps name -> index."""
    p = _Parser(text, generators)
    out = p.expr()
    if p.peek()[0] != "end":
        p.error("unexpected trailing input")
    return out


def parse_tensor(text: str, generators: dict) -> TensorElement:
    """Parse a sum of '(x)'-separated tensor monomials."""
    p = _Parser(text, generators)
    out = p.tensor()
    if p.peek()[0] != "end":
        p.error("unexpected trailing input")
    return out
