"""Recursive-descent parser for holomorphic expressions.

Grammar (EBNF)::

    expr    = term , { ("+" | "-") , term } ;
    term    = unary , { ("*" | "/") , unary } ;
    unary   = ("+" | "-") , unary | power ;
    power   = atom , [ ("^" | "**") , unary ] ;
    atom    = number | name | func , "(" , expr , ")" | "(" , expr , ")" ;
    func    = "exp" | "log" | "sqrt" | "sin" | "cos" | "tan" | "sinh" | "cosh" ;
    name    = variable | "i" | "pi" | "e" ;
    number  = digits , [ "." , [ digits ] ] , [ exponent ] | "." , digits , [ exponent ] ;

`+ - * /` associate to the left, `^` to the right, so `-z^2` is `-(z^2)` and
`2^3^2` is `2^(3^2)`. Implicit multiplication (`4z`) is not accepted.
"""

import cmath
import re
from dataclasses import dataclass, field

from embedlift.errors import ExpressionSyntaxError, UnknownIdentifierError
from embedlift.expr.jet import FUNCTIONS, MULTIVALUED
from embedlift.expr.nodes import (
    BinOp,
    Call,
    Const,
    Neg,
    Node,
    Var,
    constant_value,
    depends_on_variable,
    iter_nodes,
    to_sexpr,
)

CONSTANTS = {"i": 1j, "pi": complex(cmath.pi), "e": complex(cmath.e)}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


@dataclass(frozen=True)
class HoloExpr:
    """A parsed holomorphic expression in one variable.

    Attributes
    ----------
    text : str
        Source text.
    root : Node
        Expression tree.
    variable : str
        Name of the free variable, "z" by default.
    multivalued : bool
        True if a principal-branch primitive (log, sqrt, non-integer power) occurs.
    """

    text: str
    root: Node
    variable: str = "z"
    multivalued: bool = field(default=False)

    @property
    def is_constant(self) -> bool:
        return not depends_on_variable(self.root)

    def sexpr(self) -> str:
        return to_sexpr(self.root)

    def __str__(self) -> str:
        return self.text


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ExpressionSyntaxError(
                f"unexpected character {text[pos]!r}", _byte_offset(text, pos)
            )
        kind = match.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, match.group(), _byte_offset(text, pos)))
        pos = match.end()
    tokens.append(Token("end", "", _byte_offset(text, len(text))))
    return tokens


class _Parser:
    def __init__(self, text: str, variable: str):
        self.tokens = tokenize(text)
        self.variable = variable
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        token = self.current
        self.pos += 1
        return token

    def _accept(self, *ops: str) -> Token | None:
        if self.current.kind == "op" and self.current.text in ops:
            return self._advance()
        return None

    def _expect(self, op: str) -> Token:
        token = self._accept(op)
        if token is None:
            found = self.current.text or "end of input"
            raise ExpressionSyntaxError(f"expected '{op}' but found '{found}'", self.current.offset)
        return token

    def parse(self) -> Node:
        node = self.expr()
        if self.current.kind != "end":
            raise ExpressionSyntaxError(f"unexpected '{self.current.text}'", self.current.offset)
        return node

    def expr(self) -> Node:
        node = self.term()
        while (token := self._accept("+", "-")) is not None:
            node = BinOp(token.text, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while (token := self._accept("*", "/")) is not None:
            node = BinOp(token.text, node, self.unary())
        return node

    def unary(self) -> Node:
        if self._accept("-") is not None:
            return Neg(self.unary())
        if self._accept("+") is not None:
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self._accept("^", "**") is not None:
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Node:
        token = self.current
        if token.kind == "number":
            self._advance()
            return Const(complex(float(token.text)))
        if token.kind == "name":
            self._advance()
            if token.text in FUNCTIONS:
                self._expect("(")
                arg = self.expr()
                self._expect(")")
                return Call(token.text, arg)
            if token.text == self.variable:
                return Var(token.text)
            if token.text in CONSTANTS:
                return Const(CONSTANTS[token.text])
            raise UnknownIdentifierError(token.text, token.offset)
        if self._accept("(") is not None:
            node = self.expr()
            self._expect(")")
            return node
        found = token.text or "end of input"
        raise ExpressionSyntaxError(f"unexpected '{found}'", token.offset)


def _is_multivalued(root: Node) -> bool:
    for node in iter_nodes(root):
        if isinstance(node, Call) and node.func in MULTIVALUED:
            return True
        if isinstance(node, BinOp) and node.op == "^":
            if depends_on_variable(node.right):
                return True
            p = constant_value(node.right)
            if not (p.imag == 0 and float(p.real).is_integer()):
                return True
    return False


def parse(text: str, variable: str = "z") -> HoloExpr:
    """Parse `text` into a HoloExpr.

    Parameters
    ----------
    text : str
        Expression, e.g. "exp(4*z)" or "log((1+z)/(1-z))".
    variable : str, optional
        Name of the free variable, by default "z".

    Returns
    -------
    HoloExpr

    Raises
    ------
    ExpressionSyntaxError
        Malformed input, with the byte offset of the offending token.
    UnknownIdentifierError
        A name that is neither the variable, a constant nor a function.
    """
    if not text or not text.strip():
        raise ExpressionSyntaxError("empty expression", 0)
    if variable in FUNCTIONS or variable in CONSTANTS:
        raise ValueError(f"variable name '{variable}' is reserved")
    root = _Parser(text, variable).parse()
    return HoloExpr(text=text, root=root, variable=variable, multivalued=_is_multivalued(root))
