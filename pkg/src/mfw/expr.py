"""Recursive-descent parser for polynomial expressions.

Grammar (LL(1), implicit multiplication rejected)::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := '-' unary | power
    power  := atom ('^' INT)?
    atom   := INT | INT '/' INT | NAME | '(' expr ')'

The parser does not build a tree; it evaluates through a *builder* object
that supplies ``const``, ``var``, ``add``, ``sub``, ``mul``, ``neg`` and
``pow``.  The same grammar therefore serves commutative polynomials and
words in a free algebra.
"""

import re
from fractions import Fraction

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\s*/\s*\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*^()/])
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    def __init__(self, message, position, text=""):
        self.message = message
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")

    def caret(self):
        """Two-line rendering of the input with a caret under the error."""
        return f"{self.text}\n{' ' * self.position}^"


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, builder):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.b = builder

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, tok[2], self.text)

    def expect_op(self, op):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != op:
            found = tok[1] or "end of input"
            raise self.error(f"expected {op!r}, found {found!r}")
        return self.advance()

    def parse(self):
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] in ("name", "num") or (tok[0] == "op" and tok[1] == "("):
                raise self.error("implicit multiplication is not allowed; use '*'")
            if tok[0] == "op" and tok[1] == "/":
                raise self.error("division is only allowed inside a rational literal p/q")
            raise self.error(f"unexpected {tok[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.advance()
                rhs = self.term()
                value = self.b.add(value, rhs) if tok[1] == "+" else self.b.sub(value, rhs)
            else:
                return value

    def term(self):
        value = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.advance()
            value = self.b.mul(value, self.unary())
        return value

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.advance()
            return self.b.neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.advance()
            exp_tok = self.peek()
            if exp_tok[0] != "num" or "/" in exp_tok[1]:
                raise self.error("exponent must be a nonnegative integer literal", exp_tok)
            self.advance()
            base = self.b.pow(base, int(exp_tok[1]))
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "^":
                raise self.error("chained exponents are ambiguous; use parentheses")
        return base

    def atom(self):
        tok = self.peek()
        kind, text, pos = tok
        if kind == "num":
            self.advance()
            if "/" in text:
                p, q = (int(s) for s in text.split("/"))
                if q == 0:
                    raise self.error("zero denominator", tok)
                return self.b.const(Fraction(p, q))
            return self.b.const(Fraction(int(text)))
        if kind == "name":
            self.advance()
            return self.b.var(text, pos, self)
        if kind == "op" and text == "(":
            self.advance()
            value = self.expr()
            self.expect_op(")")
            return value
        if kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {text!r}")


def parse_with(text, builder):
    """Parse ``text`` and evaluate it through ``builder``."""
    return _Parser(text, builder).parse()
