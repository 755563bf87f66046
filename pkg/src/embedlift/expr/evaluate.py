"""Evaluation of expression trees as order-3 jets."""

from dataclasses import dataclass, field

import numpy as np

from embedlift.errors import SingularPointError
from embedlift.expr import jet as jets
from embedlift.expr.jet import Jet3
from embedlift.expr.nodes import BinOp, Call, Const, Neg, Node, Var, constant_value, depends_on_variable
from embedlift.expr.parse import HoloExpr


@dataclass
class EvaluationTrace:
    """Arguments fed to principal-branch primitives, in tree order."""

    branch_arguments: list[np.ndarray] = field(default_factory=list)


def _eval(node: Node, z_jet: Jet3, trace: EvaluationTrace | None) -> Jet3:
    match node:
        case Var():
            return z_jet
        case Const(value):
            return Jet3.constant(value)
        case Neg(operand):
            return -_eval(operand, z_jet, trace)
        case BinOp("^", left, right):
            base = _eval(left, z_jet, trace)
            if depends_on_variable(right):
                if trace is not None:
                    trace.branch_arguments.append(np.asarray(base.d0, dtype=complex))
                return jets.power(base, _eval(right, z_jet, trace))
            p = constant_value(right)
            if trace is not None and not (p.imag == 0 and float(p.real).is_integer()):
                trace.branch_arguments.append(np.asarray(base.d0, dtype=complex))
            return jets.power(base, p)
        case BinOp(op, left, right):
            a, b = _eval(left, z_jet, trace), _eval(right, z_jet, trace)
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            return a / b
        case Call(func, arg):
            inner = _eval(arg, z_jet, trace)
            if trace is not None and func in jets.MULTIVALUED:
                trace.branch_arguments.append(np.asarray(inner.d0, dtype=complex))
            return jets.FUNCTIONS[func](inner)
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(
    e: HoloExpr, z, trace: EvaluationTrace | None = None
) -> Jet3:
    """Evaluate `e` at one or many points without raising on singular points.

    Entries at singular points come out non-finite; use `Jet3.is_finite` to
    mask them.
    """
    z_arr = np.asarray(z, dtype=complex)
    with np.errstate(all="ignore"):
        result = _eval(e.root, Jet3.variable(z_arr), trace)
        d = np.broadcast_arrays(z_arr, *[np.asarray(v, dtype=complex) for v in result.derivatives])[1:]
    return Jet3(*[np.array(v) for v in d])


def evaluate_at_jet(e: HoloExpr, x: Jet3) -> Jet3:
    """Jet of e∘x for an inner jet `x`, i.e. the chain rule up to third order."""
    with np.errstate(all="ignore"):
        return _eval(e.root, x, None)


def eval_jet3(e: HoloExpr, z) -> Jet3:
    """Value and first three complex derivatives of `e` at `z`.

    Parameters
    ----------
    e : HoloExpr
        Parsed expression.
    z : complex | np.ndarray
        Evaluation point(s).

    Returns
    -------
    Jet3
        (d0, d1, d2, d3); Python complex numbers for scalar `z`.

    Raises
    ------
    SingularPointError
        If any entry is not finite (division by zero, log or sqrt at 0, overflow).
    """
    result = evaluate(e, z)
    finite = result.is_finite()
    if not np.all(finite):
        z_arr = np.broadcast_to(np.asarray(z, dtype=complex), finite.shape)
        first = complex(z_arr[~finite].ravel()[0])
        raise SingularPointError(f"'{e.text}' is singular", first)
    return result.squeeze()
