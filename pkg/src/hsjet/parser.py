"""Text grammar for polynomial expressions.

Integers, identifiers, jet variables ``d<k><name>``, ``+ - * / ^`` and
parentheses. ``^`` binds tighter than ``*`` and ``/``, which bind tighter
than ``+`` and ``-``. Multiplication is never implicit.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, List, Tuple, Union

from .coeffs import Coeff, CoefficientError, CoefficientRing
from .poly import JetVariable, Polynomial

_TOKEN = re.compile(r"\s*(?:(\d+)|([a-zA-Z][a-zA-Z0-9_]*)|(\S))")
_JET_NAME = re.compile(r"d(\d+)([a-zA-Z][a-zA-Z0-9_]*)$")


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class UndeclaredIdentifier(ParseError):
    pass


def resolve_identifier(ident: str, declared) -> JetVariable | None:
    if ident in declared:
        return JetVariable(ident, 0)
    m = _JET_NAME.match(ident)
    if m and m.group(2) in declared:
        return JetVariable(m.group(2), int(m.group(1)))
    return None


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # pragma: no cover - the pattern always matches non-space
            raise ParseError("unexpected input", pos)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("ident", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", start)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, declared, ring: CoefficientRing):
        self.tokens = _tokenize(text)
        self.i = 0
        self.declared = declared
        self.ring = ring

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {want}, found {got}", tok[2])
        self.i += 1
        return tok

    def expr(self) -> Polynomial:
        acc = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> Polynomial:
        acc = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            rhs = self.unary()
            if op == "*":
                acc = acc * rhs
            else:
                acc = self._divide(acc, rhs, pos)
        return acc

    def _divide(self, num: Polynomial, den: Polynomial, pos: int) -> Polynomial:
        if not den.is_constant():
            raise ParseError("division is only allowed by a constant", pos)
        d = den.constant_term()
        if d == 0:
            raise CoefficientError(f"division by an element that is zero in {self.ring} (position {pos})")
        ring = self.ring
        if ring.kind == "ZZ":
            out = {}
            for m, c in num.items():
                if c % d:
                    raise CoefficientError(f"{c}/{d} is not an integer")
                out[m] = c // d
            return Polynomial(out, ring)
        return num.scale(ring.inv(d))

    def unary(self) -> Polynomial:
        kind = self.peek()[0]
        if kind == "-":
            self.take()
            return -self.unary()
        if kind == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            _, digits, _ = self.take("int")
            base = base ** int(digits)
        return base

    def atom(self) -> Polynomial:
        kind, value, pos = self.peek()
        if kind == "int":
            self.take()
            return Polynomial.constant(int(value), self.ring)
        if kind == "ident":
            self.take()
            var = resolve_identifier(value, self.declared)
            if var is None:
                raise UndeclaredIdentifier(f"undeclared identifier {value!r}", pos)
            return Polynomial.var(var, self.ring)
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        what = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"unexpected {what}", pos)


def parse_poly(text: str, declared: Iterable[str], ring: CoefficientRing) -> Polynomial:
    """Parse ``text`` into a canonical polynomial over ``ring``.

    ``declared`` holds the base names (generators and constants); any
    ``d<k><name>`` with a declared ``name`` is accepted as a jet variable.
    """
    if not isinstance(declared, (set, frozenset, dict)):
        declared = set(declared)
    p = _Parser(text, declared, ring)
    if p.peek()[0] == "end":
        raise ParseError("empty expression", 0)
    result = p.expr()
    p.take("end")
    return result


def format_coeff(c: Coeff, ring: CoefficientRing) -> str:
    return ring.format(c)


def format_poly(f: Polynomial) -> str:
    if f.is_zero():
        return "0"
    ring = f.ring
    parts: List[str] = []
    for mon, c in f.sorted_terms():
        negative = isinstance(c, (int, Fraction)) and c < 0
        mag = -c if negative else c
        if not mon:
            body = ring.format(mag)
        elif mag == 1:
            body = str(mon)
        else:
            body = f"{ring.format(mag)}*{mon}"
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(parts)
