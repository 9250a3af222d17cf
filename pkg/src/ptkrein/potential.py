"""Parsing and evaluation of potential expressions V(x).

The accepted language is complex polynomials in x:

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' uint)?
    atom   := number | 'i' | 'x' | '(' expr ')' | '-' atom

Whitespace is insignificant.  Exponents are capped (default 16) so that
evaluation stays finite for any reasonable grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import EvalError, ExponentCapError, PotentialSyntaxError

DEFAULT_EXPONENT_CAP = 16


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Number:
    value: float


@dataclass(frozen=True)
class Imag:
    pass


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    child: "Node"


@dataclass(frozen=True)
class Add:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Sub:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Mul:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


Node = Union[Number, Imag, Var, Neg, Add, Sub, Mul, Pow]


@dataclass(frozen=True)
class PotentialExpr:
    """Parsed potential; `src` keeps the original text for reports."""

    ast: Node
    src: str

    def __str__(self):
        return format_potential(self)


# ---------------------------------------------------------------------------
# tokenizer
# ---------------------------------------------------------------------------

class _Token:
    def __init__(self, kind, text, pos):
        self.kind = kind          # 'num', 'i', 'x', 'op', 'end'
        self.text = text
        self.pos = pos

    def __repr__(self):
        return f"_Token({self.kind!r}, {self.text!r}, {self.pos})"


def _tokenize(src):
    tokens = []
    i = 0
    n = len(src)
    while i < n:
        c = src[i]
        if c.isspace():
            i += 1
            continue
        if c in "+-*^()":
            tokens.append(_Token("op", c, i))
            i += 1
            continue
        if c == "i" or c == "I":
            tokens.append(_Token("i", c, i))
            i += 1
            continue
        if c == "x" or c == "X":
            tokens.append(_Token("x", c, i))
            i += 1
            continue
        if c.isdigit() or c == ".":
            start = i
            while i < n and (src[i].isdigit() or src[i] == "."):
                i += 1
            # optional scientific suffix, but only when digits follow
            if i < n and src[i] in "eE":
                j = i + 1
                if j < n and src[j] in "+-":
                    j += 1
                if j < n and src[j].isdigit():
                    i = j
                    while i < n and src[i].isdigit():
                        i += 1
            text = src[start:i]
            try:
                float(text)
            except ValueError:
                raise PotentialSyntaxError(start, "a numeric literal", src) from None
            tokens.append(_Token("num", text, start))
            continue
        raise PotentialSyntaxError(i, "a number, 'i', 'x', '(' or unary '-'", src)
    tokens.append(_Token("end", "", n))
    return tokens


# ---------------------------------------------------------------------------
# recursive-descent parser
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, src, exponent_cap):
        self.src = src
        self.tokens = _tokenize(src)
        self.cursor = 0
        self.cap = exponent_cap

    def peek(self):
        return self.tokens[self.cursor]

    def advance(self):
        tok = self.tokens[self.cursor]
        self.cursor += 1
        return tok

    def fail(self, expected):
        raise PotentialSyntaxError(self.peek().pos, expected, self.src)

    def parse(self):
        node = self.expr()
        if self.peek().kind != "end":
            self.fail("end of input or an operator")
        return node

    def expr(self):
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek().kind == "op" and self.peek().text == "*":
            self.advance()
            node = Mul(node, self.factor())
        return node

    def factor(self):
        node = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.advance()
            tok = self.peek()
            if tok.kind != "num" or not tok.text.isdigit():
                self.fail("a nonnegative integer exponent")
            self.advance()
            k = int(tok.text)
            if k > self.cap:
                raise ExponentCapError(k, self.cap)
            node = Pow(node, k)
        return node

    def atom(self):
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Number(float(tok.text))
        if tok.kind == "i":
            self.advance()
            return Imag()
        if tok.kind == "x":
            self.advance()
            return Var()
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            closing = self.peek()
            if closing.kind != "op" or closing.text != ")":
                self.fail("')'")
            self.advance()
            return node
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return Neg(self.atom())
        self.fail("a number, 'i', 'x', '(' or unary '-'")


def parse_potential(src, exponent_cap=DEFAULT_EXPONENT_CAP):
    """Parse `src` into a :class:`PotentialExpr`.

    Raises :class:`PotentialSyntaxError` (a ``SyntaxError``) with the failing
    offset, or :class:`ExponentCapError` (an ``OverflowError``) when an
    exponent exceeds `exponent_cap`.
    """
    if not isinstance(src, str) or not src.strip():
        raise PotentialSyntaxError(0, "a non-empty expression", src or "")
    return PotentialExpr(_Parser(src, exponent_cap).parse(), src)


# ---------------------------------------------------------------------------
# evaluation and printing
# ---------------------------------------------------------------------------

def _eval_node(node, x):
    if isinstance(node, Number):
        return complex(node.value)
    if isinstance(node, Imag):
        return 1j
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_eval_node(node.child, x)
    if isinstance(node, Add):
        return _eval_node(node.left, x) + _eval_node(node.right, x)
    if isinstance(node, Sub):
        return _eval_node(node.left, x) - _eval_node(node.right, x)
    if isinstance(node, Mul):
        return _eval_node(node.left, x) * _eval_node(node.right, x)
    if isinstance(node, Pow):
        return _eval_node(node.base, x) ** node.exponent
    raise TypeError(f"unknown node {node!r}")


def eval_potential(expr, x):
    """Evaluate the potential at `x` (scalar or array), returning complex.

    Raises :class:`EvalError` when the result is not finite.
    """
    value = _eval_node(expr.ast, np.asarray(x, dtype=complex) if np.ndim(x) else complex(x))
    arr = np.asarray(value, dtype=complex)
    if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
        raise EvalError(f"potential {expr.src!r} is not finite at the requested points")
    if np.ndim(x):
        # constant expressions collapse to a scalar; keep the input shape
        return np.broadcast_to(arr, np.shape(x)).astype(complex)
    return complex(value)


def format_potential(expr):
    """Canonical text form; parse(format(e)) evaluates identically to e."""

    def fmt(node):
        if isinstance(node, Number):
            return repr(node.value)
        if isinstance(node, Imag):
            return "i"
        if isinstance(node, Var):
            return "x"
        if isinstance(node, Neg):
            return f"-{fmt_atom(node.child)}"
        if isinstance(node, Add):
            # right-nested sums keep their parens so the reparsed tree (and
            # therefore every floating-point rounding) is unchanged
            return f"{fmt(node.left)} + {fmt_term(node.right)}"
        if isinstance(node, Sub):
            return f"{fmt(node.left)} - {fmt_term(node.right)}"
        if isinstance(node, Mul):
            return f"{fmt_term(node.left)}*{fmt_factor(node.right)}"
        if isinstance(node, Pow):
            return f"{fmt_atom(node.base)}^{node.exponent}"
        raise TypeError(f"unknown node {node!r}")

    def fmt_term(node):
        # parenthesize additive children under '*' or right of '-'
        if isinstance(node, (Add, Sub)):
            return f"({fmt(node)})"
        return fmt(node)

    def fmt_factor(node):
        if isinstance(node, (Add, Sub, Mul)):
            return f"({fmt(node)})"
        return fmt(node)

    def fmt_atom(node):
        if isinstance(node, (Add, Sub, Mul, Neg, Pow)):
            return f"({fmt(node)})"
        return fmt(node)

    return fmt(expr.ast)


@dataclass(frozen=True)
class PTCheck:
    pt_symmetric: bool
    imag_nonzero: bool
    max_violation: float


def validate_pt(expr, grid, tol=1e-12):
    """Check V*(-x) = V(x) and Im V != 0 on the grid points.

    The test is sampled, not symbolic: `pt_symmetric` holds iff
    max |V*(-x) - V(x)| <= tol * (1 + max|V|) over the grid.
    """
    v = eval_potential(expr, grid.points)
    v = np.asarray(v, dtype=complex)
    violation = float(np.max(np.abs(np.conj(v[::-1]) - v)))
    scale = 1.0 + float(np.max(np.abs(v)))
    return PTCheck(
        pt_symmetric=violation <= tol * scale,
        imag_nonzero=bool(np.max(np.abs(v.imag)) > tol),
        max_violation=violation,
    )
