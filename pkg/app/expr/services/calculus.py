# app/expr/services/calculus.py
from __future__ import annotations

import logging
from typing import Callable, NamedTuple, Optional

from app.config import FD_STEP
from app.errors import DiffError, ExprEvalError
from app.expr.schemas.nodes import ONE, ZERO, BinOp, Call, Const, Expr, Neg, Var
from app.expr.services.evaluator import compile_expr, evaluate

logger = logging.getLogger(__name__)

METHOD_SYMBOLIC = "symbolic"
METHOD_NUMERIC = "numeric"


# -----------------------------
# Constant folding
# -----------------------------
def fold(e: Expr) -> Expr:
    """Replace every variable-free subtree by its value (when finite)."""
    if isinstance(e, (Const, Var)):
        return e
    if isinstance(e, Neg):
        inner = fold(e.operand)
        node = Neg(inner, offset=e.offset)
        children = (inner,)
    elif isinstance(e, BinOp):
        left, right = fold(e.left), fold(e.right)
        node = BinOp(e.op, left, right, offset=e.offset)
        children = (left, right)
    elif isinstance(e, Call):
        arg = fold(e.arg)
        node = Call(e.func, arg, offset=e.offset)
        children = (arg,)
    else:
        raise TypeError(f"unknown node {type(e).__name__}")

    if all(isinstance(c, Const) for c in children):
        try:
            return Const(float(evaluate(node, {})), offset=e.offset)
        except ExprEvalError:
            return node
    return node


# -----------------------------
# Symbolic differentiation
# -----------------------------
def _is_zero(e: Expr) -> bool:
    return isinstance(e, Const) and e.value == 0.0


def _mul(a: Expr, b: Expr) -> Expr:
    if a == ONE:
        return b
    if b == ONE:
        return a
    return BinOp("*", a, b)


def _integer_exponent(e: BinOp) -> int:
    exponent = fold(e.right)
    if not isinstance(exponent, Const):
        raise DiffError(e.offset, "exponent must be a constant for symbolic differentiation")
    n = exponent.value
    if n < 0 or n != int(n):
        raise DiffError(e.offset, f"exponent {n!r} is not a nonnegative integer")
    return int(n)


def _d(e: Expr, var: str) -> Expr:
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.name == var else ZERO
    if isinstance(e, Neg):
        du = _d(e.operand, var)
        return ZERO if _is_zero(du) else Neg(du)

    if isinstance(e, BinOp):
        if e.op == "^":
            du = _d(e.left, var)
            if _is_zero(du) and var not in e.right.free_variables():
                return ZERO
            n = _integer_exponent(e)
            if n == 0 or _is_zero(du):
                return ZERO
            lowered = ONE if n == 1 else BinOp("^", e.left, Const(float(n - 1)))
            return _mul(_mul(Const(float(n)), lowered), du)

        dl, dr = _d(e.left, var), _d(e.right, var)
        if e.op in ("+", "-"):
            if _is_zero(dr):
                return dl
            if _is_zero(dl):
                return dr if e.op == "+" else Neg(dr)
            return BinOp(e.op, dl, dr)
        if e.op == "*":
            terms = []
            if not _is_zero(dl):
                terms.append(_mul(dl, e.right))
            if not _is_zero(dr):
                terms.append(_mul(e.left, dr))
            if not terms:
                return ZERO
            return terms[0] if len(terms) == 1 else BinOp("+", terms[0], terms[1])
        if e.op == "/":
            if _is_zero(dr):
                return ZERO if _is_zero(dl) else BinOp("/", dl, e.right)
            denom = BinOp("*", e.right, e.right)
            numer = Neg(_mul(e.left, dr)) if _is_zero(dl) else BinOp(
                "-", _mul(dl, e.right), _mul(e.left, dr)
            )
            return BinOp("/", numer, denom)

    if isinstance(e, Call):
        if e.func == "abs":
            raise DiffError(e.offset, "abs is not supported by symbolic differentiation")
        du = _d(e.arg, var)
        if _is_zero(du):
            return ZERO
        u = e.arg
        if e.func == "sin":
            outer = Call("cos", u)
        elif e.func == "cos":
            outer = Neg(Call("sin", u))
        elif e.func == "exp":
            outer = Call("exp", u)
        elif e.func == "log":
            return BinOp("/", du, u)
        elif e.func == "sqrt":
            return BinOp("/", du, BinOp("*", Const(2.0), Call("sqrt", u)))
        else:
            raise DiffError(e.offset, f"unsupported function {e.func}")
        return _mul(outer, du)

    raise DiffError(getattr(e, "offset", None), f"unsupported node {type(e).__name__}")


def diff(e: Expr, var: str) -> Expr:
    """Exact partial derivative of `e` with respect to `var`, constant-folded."""
    return fold(_d(e, var))


# -----------------------------
# Mixed partial d^2 f / dt ds
# -----------------------------
class MixedPartial(NamedTuple):
    fn: Callable
    method: str
    expr: Optional[Expr]


def central_mixed_difference(f: Callable, h: float = FD_STEP) -> Callable:
    def fn(t, s):
        return (f(t + h, s + h) - f(t + h, s - h) - f(t - h, s + h) + f(t - h, s - h)) / (4.0 * h * h)

    return fn


def mixed_partial(f: Expr, t: str = "t", s: str = "s", h: float = FD_STEP) -> MixedPartial:
    try:
        d2 = diff(diff(f, t), s)
    except DiffError as e:
        logger.info(f"[Calculus] symbolic mixed partial unavailable ({e.message}); using central differences h={h}")
        return MixedPartial(central_mixed_difference(compile_expr(f, (t, s)), h), METHOD_NUMERIC, None)
    return MixedPartial(compile_expr(d2, (t, s)), METHOD_SYMBOLIC, d2)
