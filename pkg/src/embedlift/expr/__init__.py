from embedlift.expr.evaluate import EvaluationTrace, eval_jet3, evaluate, evaluate_at_jet
from embedlift.expr.integrate import guarded_integrand, integrate_path, integrate_segments
from embedlift.expr.jet import Jet3
from embedlift.expr.parse import HoloExpr, parse

__all__ = [
    "EvaluationTrace",
    "HoloExpr",
    "Jet3",
    "eval_jet3",
    "evaluate",
    "evaluate_at_jet",
    "guarded_integrand",
    "integrate_path",
    "integrate_segments",
    "parse",
]
