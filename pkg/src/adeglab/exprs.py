"""Function-expression parsing for the CLI and batch harnesses.

Grammar (whitespace-insensitive):

    expr     := term ( 'o' ( term | '(' expr (',' expr)* ')' ) )*
    term     := unary ( '^' INT | '[' assign (',' assign)* ']' )*
    unary    := '!' unary | atom
    atom     := NAME | 'tt:<arity>:<hex>' | '(' expr ')'
    assign   := 'x' INT '=' BIT

Names are a builtin tag with an arity suffix (MAJ3, AND2, OR4, XOR2,
PARITY5, NOT, CONST0, CONST1).  'o' composes left-associatively; a
parenthesized comma list after 'o' supplies one inner function per outer
input, while a single right operand is replicated across all of them.
Power binds tighter than composition, restriction is postfix, '!' negates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from .boolfn import BooleanFunction, compose, make_builtin, power, restrict
from .errors import ArityError, ParseError

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<tt>tt:\d+:(0x)?[0-9a-fA-F]+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<int>\d+)
  | (?P<sym>[()\[\],^=!])
    """,
    re.VERBOSE,
)

_NAME_RE = re.compile(r"^([A-Za-z_]+?)(\d*)$")


@dataclass(frozen=True)
class BuiltinExpr:
    name: str
    arity: int
    pos: int = 0


@dataclass(frozen=True)
class LiteralExpr:
    fn: BooleanFunction
    pos: int = 0


@dataclass(frozen=True)
class ComposeExpr:
    outer: "FunctionExpr"
    inners: tuple
    pos: int = 0


@dataclass(frozen=True)
class PowerExpr:
    base: "FunctionExpr"
    exponent: int
    pos: int = 0


@dataclass(frozen=True)
class RestrictExpr:
    base: "FunctionExpr"
    assignment: tuple      # sorted ((index, bit), ...)
    pos: int = 0


@dataclass(frozen=True)
class NegateExpr:
    child: "FunctionExpr"
    pos: int = 0


FunctionExpr = Union[BuiltinExpr, LiteralExpr, ComposeExpr, PowerExpr,
                     RestrictExpr, NegateExpr]


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            kind = m.lastgroup
            value = m.group()
            if kind == "name" and value == "o":
                kind = "compose"
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str, value: Optional[str] = None):
        tok = self.tokens[self.i]
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            raise ParseError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> FunctionExpr:
        node = self.expr()
        tok = self.peek()
        if tok[0] != "eof":
            raise ParseError(f"trailing input {tok[1]!r}", tok[2])
        return node

    def expr(self) -> FunctionExpr:
        node = self.term()
        while self.peek()[0] == "compose":
            _, _, pos = self.take("compose")
            if self.peek()[:2] == ("sym", "("):
                self.take("sym", "(")
                inners = [self.expr()]
                while self.peek()[:2] == ("sym", ","):
                    self.take("sym", ",")
                    inners.append(self.expr())
                self.take("sym", ")")
            else:
                inners = [self.term()]
            node = ComposeExpr(outer=node, inners=tuple(inners), pos=pos)
        return node

    def term(self) -> FunctionExpr:
        node = self.unary()
        while True:
            tok = self.peek()
            if tok[:2] == ("sym", "^"):
                self.take("sym", "^")
                d = self.take("int")
                node = PowerExpr(base=node, exponent=int(d[1]), pos=tok[2])
            elif tok[:2] == ("sym", "["):
                self.take("sym", "[")
                assigns = [self.assign()]
                while self.peek()[:2] == ("sym", ","):
                    self.take("sym", ",")
                    assigns.append(self.assign())
                self.take("sym", "]")
                node = RestrictExpr(base=node, assignment=tuple(sorted(assigns)),
                                    pos=tok[2])
            else:
                return node

    def assign(self) -> tuple:
        tok = self.take("name")
        m = re.fullmatch(r"x(\d+)", tok[1])
        if not m:
            raise ParseError(f"expected a variable like x3, found {tok[1]!r}", tok[2])
        self.take("sym", "=")
        bit = self.take("int")
        if bit[1] not in ("0", "1"):
            raise ParseError(f"assignment value must be 0 or 1, found {bit[1]!r}", bit[2])
        return int(m.group(1)), int(bit[1])

    def unary(self) -> FunctionExpr:
        tok = self.peek()
        if tok[:2] == ("sym", "!"):
            self.take("sym", "!")
            return NegateExpr(child=self.unary(), pos=tok[2])
        return self.atom()

    def atom(self) -> FunctionExpr:
        tok = self.peek()
        if tok[0] == "tt":
            self.take("tt")
            try:
                fn = BooleanFunction.from_tt_literal(tok[1])
            except Exception as exc:
                raise ParseError(str(exc), tok[2]) from exc
            return LiteralExpr(fn=fn, pos=tok[2])
        if tok[0] == "name":
            self.take("name")
            return _builtin_from_name(tok[1], tok[2])
        if tok[:2] == ("sym", "("):
            self.take("sym", "(")
            node = self.expr()
            self.take("sym", ")")
            return node
        raise ParseError(f"expected a function, found {tok[1] or 'end of input'!r}", tok[2])


def _builtin_from_name(name: str, pos: int) -> BuiltinExpr:
    upper = name.upper()
    if upper in ("CONST0", "CONST1"):
        return BuiltinExpr(name=upper, arity=0, pos=pos)
    m = _NAME_RE.match(upper)
    tag, digits = m.group(1), m.group(2)
    if tag == "NOT" and not digits:
        return BuiltinExpr(name="NOT", arity=1, pos=pos)
    if not digits:
        raise ParseError(f"builtin {name!r} needs an arity suffix (e.g. {name}2)", pos)
    try:
        make_builtin(tag, int(digits))
    except Exception as exc:
        raise ParseError(str(exc), pos) from exc
    return BuiltinExpr(name=tag, arity=int(digits), pos=pos)


def parse_function_expr(text: str) -> FunctionExpr:
    return _Parser(text).parse()


def to_function(expr: FunctionExpr) -> BooleanFunction:
    """Evaluate the tree to a truth table, checking arities at every node."""
    if isinstance(expr, BuiltinExpr):
        return make_builtin(expr.name, expr.arity)
    if isinstance(expr, LiteralExpr):
        return expr.fn
    if isinstance(expr, NegateExpr):
        return to_function(expr.child).negate()
    if isinstance(expr, PowerExpr):
        return power(to_function(expr.base), expr.exponent)
    if isinstance(expr, RestrictExpr):
        return restrict(to_function(expr.base), dict(expr.assignment))
    if isinstance(expr, ComposeExpr):
        outer = to_function(expr.outer)
        inners = [to_function(e) for e in expr.inners]
        if len(inners) == 1 and outer.arity != 1:
            inners = inners * outer.arity
        if len(inners) != outer.arity:
            raise ArityError(
                f"composition at position {expr.pos} supplies {len(inners)} inner "
                f"functions for an outer function of arity {outer.arity}"
            )
        return compose(outer, inners)
    raise TypeError(f"not a FunctionExpr: {expr!r}")


def parse_to_function(text: str) -> BooleanFunction:
    return to_function(parse_function_expr(text))


def print_expr(expr: FunctionExpr) -> str:
    """Canonical text form; parse(print_expr(parse(s))) == parse(s)."""
    if isinstance(expr, BuiltinExpr):
        return expr.name if expr.arity == 0 or expr.name == "NOT" else f"{expr.name}{expr.arity}"
    if isinstance(expr, LiteralExpr):
        return expr.fn.tt_literal()
    if isinstance(expr, NegateExpr):
        return f"!{_wrap(expr.child, tight=True)}"
    if isinstance(expr, PowerExpr):
        return f"{_wrap(expr.base, tight=True)}^{expr.exponent}"
    if isinstance(expr, RestrictExpr):
        assigns = ",".join(f"x{i}={b}" for i, b in expr.assignment)
        return f"{_wrap(expr.base, tight=True)}[{assigns}]"
    if isinstance(expr, ComposeExpr):
        left = print_expr(expr.outer) if isinstance(expr.outer, ComposeExpr) \
            else _wrap(expr.outer, tight=False)
        if len(expr.inners) == 1:
            return f"{left} o {_wrap(expr.inners[0], tight=False, right=True)}"
        return f"{left} o ({', '.join(print_expr(e) for e in expr.inners)})"
    raise TypeError(f"not a FunctionExpr: {expr!r}")


def _wrap(expr: FunctionExpr, tight: bool, right: bool = False) -> str:
    text = print_expr(expr)
    needs = isinstance(expr, ComposeExpr) or (tight and isinstance(expr, NegateExpr))
    return f"({text})" if needs else text
