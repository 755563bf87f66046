"""Expression tree of a holomorphic expression."""

import cmath
from dataclasses import dataclass
from typing import Union

BINARY_NAMES = {"+": "add", "-": "sub", "*": "mul", "/": "div", "^": "pow"}


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: complex


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Var, Const, Neg, BinOp, Call]


def _format_const(value: complex) -> str:
    if value == 1j:
        return "i"
    if value.imag == 0:
        real = value.real
        return str(int(real)) if float(real).is_integer() else repr(real)
    return repr(value)


def to_sexpr(node: Node) -> str:
    """Compact prefix form, e.g. `add(pow(z,2),1)`."""
    match node:
        case Var(name):
            return name
        case Const(value):
            return _format_const(value)
        case Neg(operand):
            return f"neg({to_sexpr(operand)})"
        case BinOp(op, left, right):
            return f"{BINARY_NAMES[op]}({to_sexpr(left)},{to_sexpr(right)})"
        case Call(func, arg):
            return f"{func}({to_sexpr(arg)})"
    raise TypeError(f"not an expression node: {node!r}")


def iter_nodes(node: Node):
    yield node
    match node:
        case Neg(operand):
            yield from iter_nodes(operand)
        case BinOp(_, left, right):
            yield from iter_nodes(left)
            yield from iter_nodes(right)
        case Call(_, arg):
            yield from iter_nodes(arg)


def depends_on_variable(node: Node) -> bool:
    return any(isinstance(n, Var) for n in iter_nodes(node))


def constant_value(node: Node) -> complex:
    """Value of a variable-free subtree (nan when undefined)."""
    try:
        match node:
            case Const(value):
                return value
            case Neg(operand):
                return -constant_value(operand)
            case BinOp(op, left, right):
                a, b = constant_value(left), constant_value(right)
                if op == "+":
                    return a + b
                if op == "-":
                    return a - b
                if op == "*":
                    return a * b
                if op == "/":
                    return a / b
                return a**b
            case Call(func, arg):
                return getattr(cmath, func)(constant_value(arg))
    except (ZeroDivisionError, ValueError, OverflowError):
        return complex("nan")
    raise ValueError(f"subtree depends on the variable: {to_sexpr(node)}")
