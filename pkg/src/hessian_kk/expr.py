"""A small arithmetic-expression language for user-supplied f and g.

Grammar (``^`` is right associative and binds tighter than unary minus)::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := ('+' | '-') unary | power
    power := atom ('^' unary)?
    atom  := NUMBER | NAME | FUNC '(' expr ')' | '(' expr ')'

Names are the variables ``x`` (first coordinate), ``r`` (``|x|``), ``z`` and
the constant ``pi``; functions are ``exp``, ``log`` and ``abs``.  Compiled
expressions evaluate element-wise on numpy arrays.
"""
import re

import numpy as np

from .errors import ConfigError

__all__ = ["ExpressionError", "Expression", "parse"]

VARIABLES = ("x", "r", "z")
CONSTANTS = {"pi": np.pi}
FUNCTIONS = {"exp": np.exp, "log": np.log, "abs": np.abs}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


class ExpressionError(ConfigError):
    """Parse failure; `position` is the 0-based offset of the offending token."""

    def __init__(self, message, source, position):
        pointer = " " * position + "^"
        super().__init__(f"{message} at position {position}\n  {source}\n  {pointer}")
        self.source = source
        self.position = position


def _tokenize(source):
    tokens = []
    pos = 0
    while pos < len(source):
        if source[pos:].strip() == "":
            break
        m = _TOKEN.match(source, pos)
        if m is None or m.end() == pos:
            bad = len(source) - len(source[pos:].lstrip())
            raise ExpressionError(f"unexpected character {source[bad]!r}", source, bad)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0
        self.names = set()

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ExpressionError(message, self.source, tok[2])

    def expect(self, op):
        tok = self.take()
        if tok[1] != op:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            self.fail(f"expected {op!r}, found {what}", tok)

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            node = (lambda a, b: lambda env: a(env) + b(env))(node, rhs) if op == "+" else (
                lambda a, b: lambda env: a(env) - b(env)
            )(node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            node = (lambda a, b: lambda env: a(env) * b(env))(node, rhs) if op == "*" else (
                lambda a, b: lambda env: a(env) / b(env)
            )(node, rhs)
        return node

    def unary(self):
        if self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            operand = self.unary()
            return operand if op == "+" else (lambda a: lambda env: -a(env))(operand)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            exponent = self.unary()
            return (lambda a, b: lambda env: np.power(a(env), b(env)))(base, exponent)
        return base

    def atom(self):
        tok = self.take()
        kind, text, _ = tok
        if kind == "num":
            value = float(text)
            return lambda env: value
        if kind == "name":
            if text in FUNCTIONS:
                fn = FUNCTIONS[text]
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return lambda env: fn(arg(env))
            if text in CONSTANTS:
                value = CONSTANTS[text]
                return lambda env: value
            if text in VARIABLES:
                self.names.add(text)
                return lambda env: env[text]
            self.fail(f"unknown name {text!r}", tok)
        if text == "(":
            node = self.expr()
            self.expect(")")
            return node
        what = "end of input" if kind == "end" else repr(text)
        self.fail(f"unexpected {what}", tok)


class Expression:
    """A compiled expression; call with keyword arrays for its variables."""

    def __init__(self, source):
        parser = _Parser(source)
        self._fn = parser.parse()
        self.source = source
        self.variables = frozenset(parser.names)

    def __call__(self, **env):
        missing = self.variables - env.keys()
        if missing:
            raise ConfigError(f"expression {self.source!r} needs variables {sorted(missing)}")
        with np.errstate(all="ignore"):
            return np.asarray(self._fn(env), dtype=float) + 0.0

    def __repr__(self):
        return f"Expression({self.source!r})"


def parse(source):
    if not isinstance(source, str):
        raise ConfigError(f"expression must be a string, got {type(source).__name__}")
    return Expression(source)
