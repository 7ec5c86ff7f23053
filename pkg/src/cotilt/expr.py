"""Recursive-descent parser for module expressions.

Grammar::

    expr := term ('+' term)*
    term := 'P(' INT ')' | 'I(' INT ')' | 'S(' INT ')' | 'R' | '0'
          | 'rad(' expr [',' INT] ')' | 'soc(' expr [',' INT] ')'
          | 'top(' expr ')' | 'radq(' expr ',' INT ')' | 'socq(' expr ',' INT ')'

``+`` is direct sum.  Parsing produces a small tuple AST, so printing and
re-parsing is an exact round trip.

>>> parse("rad(P(1)) + S(3)")
('sum', [('rad', ('P', 1), 1), ('S', 3)])
>>> to_text(parse("radq( P(1),2 )"))
'radq(P(1),2)'
"""
from __future__ import annotations

import re

from .errors import ExprSemanticError, ExprSyntaxError
from .modules import (LEFT, direct_sum, injective, projective, rad, radq, regular_module,
                      simple, soc, socq, top, zero_module)

_TOKEN = re.compile(r"\s*(?:(?P<int>-?\d+)|(?P<name>[A-Za-z_]+)|(?P<sym>[(),+]))")

_UNARY_VERTEX = ("P", "I", "S")
_OPTIONAL_INT = ("rad", "soc")
_REQUIRED_INT = ("radq", "socq")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                self._fail("unexpected character %r" % text[pos], pos)
            kind = m.lastgroup
            start = m.start(kind)
            self.toks.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    def _where(self, pos):
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def _fail(self, msg, pos=None):
        if pos is None:
            pos = self.toks[self.i][2] if self.i < len(self.toks) else len(self.text)
        line, col = self._where(pos)
        raise ExprSyntaxError(msg, line, col)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None:
            self._fail("unexpected end of expression")
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            self._fail("expected %s, found %r" % (value or kind, tok[1]))
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        if self.peek()[0] is not None:
            self._fail("trailing input %r" % self.peek()[1])
        return node

    def expr(self):
        terms = [self.term()]
        while self.peek()[1] == "+":
            self.take("sym", "+")
            terms.append(self.term())
        return terms[0] if len(terms) == 1 else ("sum", terms)

    def integer(self):
        return int(self.take("int")[1])

    def term(self):
        kind, val, pos = self.peek()
        if kind == "int" and val == "0":
            self.take()
            return ("zero",)
        if kind != "name":
            self._fail("expected a module term, found %r" % val)
        self.take()
        if val == "R":
            return ("R",)
        if val in _UNARY_VERTEX:
            self.take("sym", "(")
            v = self.integer()
            self.take("sym", ")")
            return (val, v)
        if val in _OPTIONAL_INT or val in _REQUIRED_INT or val == "top":
            self.take("sym", "(")
            inner = self.expr()
            k = None
            if val != "top" and (val in _REQUIRED_INT or self.peek()[1] == ","):
                self.take("sym", ",")
                k = self.integer()
            self.take("sym", ")")
            if val == "top":
                return ("top", inner)
            return (val, inner, 1 if k is None else k)
        self._fail("unknown function %r" % val, pos)


def parse(text):
    """Parse a module expression into a tuple AST."""
    return _Parser(text).parse()


def to_text(node):
    tag = node[0]
    if tag == "sum":
        return "+".join(to_text(t) for t in node[1])
    if tag == "zero":
        return "0"
    if tag == "R":
        return "R"
    if tag in _UNARY_VERTEX:
        return "%s(%d)" % (tag, node[1])
    if tag == "top":
        return "top(%s)" % to_text(node[1])
    if tag in _OPTIONAL_INT and node[2] == 1:
        return "%s(%s)" % (tag, to_text(node[1]))
    return "%s(%s,%d)" % (tag, to_text(node[1]), node[2])


def evaluate_summands(node, algebra, side=LEFT):
    """Evaluate to a list of summands; a top-level R expands to the projectives."""
    if node[0] == "sum":
        out = []
        for t in node[1]:
            out.extend(evaluate_summands(t, algebra, side))
        return out
    if node[0] == "R":
        return [projective(algebra, j, side) for j in range(algebra.n_vertices)]
    return [_eval(node, algebra, side)]


def _vertex(algebra, v):
    try:
        return algebra.vertex_index(v)
    except Exception:
        raise ExprSemanticError("vertex %d out of range" % v) from None


def _eval(node, A, side):
    tag = node[0]
    if tag == "sum":
        parts = [_eval(t, A, side) for t in node[1]]
        return direct_sum(parts, A, side)[0]
    if tag == "zero":
        return zero_module(A, side)
    if tag == "R":
        return regular_module(A, side)
    if tag == "P":
        return projective(A, _vertex(A, node[1]), side)
    if tag == "I":
        return injective(A, _vertex(A, node[1]), side)
    if tag == "S":
        return simple(A, _vertex(A, node[1]), side)
    inner = _eval(node[1], A, side)
    if tag == "top":
        return top(inner)
    k = node[2]
    if k < 1:
        raise ExprSemanticError("%s needs an exponent >= 1" % tag)
    return {"rad": rad, "soc": soc, "radq": radq, "socq": socq}[tag](inner, k)


def evaluate(text_or_node, algebra, side=LEFT):
    """Parse (if needed) and evaluate to a single module."""
    node = parse(text_or_node) if isinstance(text_or_node, str) else text_or_node
    return _eval(node, algebra, side)
