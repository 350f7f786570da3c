"""Recursive-descent parser and printer for rational expressions, 1-forms and derivations.

Grammar (whitespace insignificant, ``#`` starts a comment)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("+" | "-") unary | power
    power   := atom (("^" | "**") ["-"] INT)?
    atom    := INT | NAME | "(" expr ")"
    NAME    := letter (letter | digit | "_")*  |  "∂" NAME

Names resolve, in order, to: a coordinate variable; ``d<var>`` (the form
dx_i); ``∂<var>`` or ``del_<var>`` (the derivation d/dx_i).  With a datum
bound, ``P<j>``, ``dP<j>``, ``Q`` and ``theta_E`` are also available.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, ParseError
from .kernel import LocQ, Poly, format_rational


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Name:
    name: str
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<num>\d+)
  | (?P<name>∂?[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>\*\*|[-+*/^()·−])
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            line, col = _position(text, pos)
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind != "ws":
            val = m.group()
            if kind == "op":
                val = {"·": "*", "−": "-", "**": "^"}.get(val, val)
            out.append((kind, val, pos))
        pos = m.end()
    out.append(("end", "", pos))
    return out


def _position(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def fail(self, message, token=None):
        token = token or self.peek()
        line, col = _position(self.text, token[2])
        raise ParseError(message, line, col)

    def expect(self, value):
        t = self.peek()
        if t[1] != value or t[0] != "op":
            self.fail(f"expected {value!r}, found {t[1] or 'end of input'!r}")
        return self.take()

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            operand = self.unary()
            return operand if t[1] == "+" else Neg(operand)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] == "-":
                self.take()
                sign = -1
            t = self.peek()
            if t[0] != "num":
                self.fail("exponent must be an integer literal")
            self.take()
            return Pow(base, sign * int(t[1]))
        return base

    def atom(self):
        t = self.peek()
        if t[0] == "num":
            self.take()
            return Num(Fraction(int(t[1])))
        if t[0] == "name":
            self.take()
            line, col = _position(self.text, t[2])
            return Name(t[1], line, col)
        if t[0] == "op" and t[1] == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        self.fail(f"unexpected {t[1] or 'end of input'!r}")


def parse(text: str):
    """Parse text into an expression tree; ParseError with line/column on failure."""
    return _Parser(text).parse()


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_text(node, parent: int = 0) -> str:
    """Print an expression tree; ``parse(to_text(t))`` rebuilds an equal tree."""
    if isinstance(node, Num):
        s = format_rational(node.value)
        return f"({s})" if "/" in s and parent >= 2 else s
    if isinstance(node, Name):
        return node.name
    if isinstance(node, Neg):
        s = "-" + to_text(node.operand, 3)
        return f"({s})" if parent >= 1 else s
    if isinstance(node, Pow):
        base = to_text(node.base, 4)
        if isinstance(node.base, Pow):
            base = f"({base})"
        return f"{base}^{node.exponent}"
    p = _PREC[node.op]
    # right operands of - and / need parentheses at equal precedence
    s = f"{to_text(node.left, p)} {node.op} {to_text(node.right, p + 1)}"
    return f"({s})" if p < parent else s


def tree_equal(a, b) -> bool:
    """Structural equality ignoring source positions."""
    if type(a) is not type(b):
        return False
    if isinstance(a, Num):
        return a.value == b.value
    if isinstance(a, Name):
        return a.name == b.name
    if isinstance(a, Neg):
        return tree_equal(a.operand, b.operand)
    if isinstance(a, Pow):
        return a.exponent == b.exponent and tree_equal(a.base, b.base)
    return a.op == b.op and tree_equal(a.left, b.left) and tree_equal(a.right, b.right)


# -- polynomial evaluation (datum files) ----------------------------------------


def to_poly(node, variables) -> Poly:
    """Evaluate a tree to a polynomial; only constant divisors are allowed."""
    variables = list(variables)
    n = len(variables)

    def ev(t) -> Poly:
        if isinstance(t, Num):
            return Poly.const(t.value, n)
        if isinstance(t, Name):
            if t.name in variables:
                return Poly.var(variables.index(t.name), n)
            raise ParseError(f"unknown variable {t.name!r}", t.line, t.column)
        if isinstance(t, Neg):
            return -ev(t.operand)
        if isinstance(t, Pow):
            if t.exponent < 0:
                raise DomainError("negative powers are not polynomial")
            return ev(t.base) ** t.exponent
        a, b = ev(t.left), ev(t.right)
        if t.op == "+":
            return a + b
        if t.op == "-":
            return a - b
        if t.op == "*":
            return a * b
        if not b.is_constant() or b.is_zero():
            raise DomainError("polynomial expressions may only divide by nonzero constants")
        return a.scale(1 / b.constant_value())

    return ev(node)


def parse_poly(text: str, variables) -> Poly:
    return to_poly(parse(text), variables)


# -- datum-bound evaluation ---------------------------------------------------------


def evaluate(node, datum):
    """Evaluate a tree over a datum to a LocQ, LogForm or LogDer."""
    from .forms import LogDer, LogForm

    ring = datum.ring
    names = list(datum.var_names)
    n = datum.rank

    def symbol(t: Name):
        nm = t.name
        if nm in names:
            return ring.var(names.index(nm))
        if nm.startswith("d") and nm[1:] in names:
            i = names.index(nm[1:])
            return LogForm.unit(datum, i)
        for prefix in ("∂", "del_"):
            if nm.startswith(prefix) and nm[len(prefix):] in names:
                return LogDer.unit(datum, names.index(nm[len(prefix):]))
        m = re.fullmatch(r"(d?)P(\d+)", nm)
        if m and 1 <= int(m.group(2)) <= n:
            p = datum.invariants[int(m.group(2)) - 1]
            return LogForm.differential(datum, p) if m.group(1) else ring(p)
        if nm == "Q":
            return ring(ring.Q)
        if nm in ("theta_E", "θE", "θ_E"):
            return LogDer.euler(datum)
        raise ParseError(f"unknown name {nm!r}", t.line, t.column)

    def ev(t):
        if isinstance(t, Num):
            return ring(t.value)
        if isinstance(t, Name):
            return symbol(t)
        if isinstance(t, Neg):
            return -ev(t.operand)
        if isinstance(t, Pow):
            b = ev(t.base)
            if not isinstance(b, LocQ):
                raise DomainError("only scalars can be raised to powers")
            return b**t.exponent
        a, b = ev(t.left), ev(t.right)
        sa, sb = isinstance(a, LocQ), isinstance(b, LocQ)
        if t.op in "+-":
            if sa != sb or (not sa and type(a) is not type(b)):
                raise DomainError(f"cannot add {_kind(a)} and {_kind(b)}")
            return a + b if t.op == "+" else a - b
        if t.op == "*":
            if not sa and not sb:
                raise DomainError(f"cannot multiply {_kind(a)} by {_kind(b)}")
            return a * b if sb else b * a
        if not sb:
            raise DomainError("division by a form or derivation")
        return a * b.inverse()

    return ev(node)


def _kind(v) -> str:
    if isinstance(v, LocQ):
        return "a scalar"
    return "a 1-form" if type(v).__name__ == "LogForm" else "a derivation"


def parse_value(text: str, datum):
    return evaluate(parse(text), datum)


def format_value(value, datum) -> str:
    """Print a LocQ / LogForm / LogDer so that ``parse_value`` recovers it exactly."""
    names = datum.var_names
    if isinstance(value, LocQ):
        return value.to_str(names)
    prefix = "d" if type(value).__name__ == "LogForm" else "∂"
    out = ""
    for c, nm in zip(value.coeffs, names):
        if c.is_zero():
            continue
        text = c.to_str(names)
        negative = text.startswith("-") and _PRODUCT.fullmatch(text[1:]) is not None
        if negative:
            text = text[1:]
        if text == "1":
            term = f"{prefix}{nm}"
        elif _PRODUCT.fullmatch(text):
            term = f"{text}*{prefix}{nm}"
        else:
            term = f"({text})*{prefix}{nm}"
        if not out:
            out = "-" + term if negative else term
        else:
            out += (" - " if negative else " + ") + term
    return out or f"0*{prefix}{names[0]}"


_PRODUCT = re.compile(r"[A-Za-z0-9_^*/]+")
