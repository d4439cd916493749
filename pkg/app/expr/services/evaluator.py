# app/expr/services/evaluator.py
from __future__ import annotations

from typing import Callable, Mapping, Sequence

import numpy as np

from app.errors import PreconditionError
from app.expr.schemas.nodes import Expr, Value


def _as_float(v) -> Value:
    arr = np.asarray(v, dtype=np.float64)
    return arr if arr.ndim else np.float64(arr)


def evaluate(expr: Expr, bindings: Mapping[str, object]) -> Value:
    """Evaluate `expr`; bindings may be scalars or broadcastable numpy arrays.

    Division by zero, overflow and invalid operations raise ExprEvalError
    pointing at the offending subexpression.
    """
    missing = expr.free_variables() - set(bindings)
    if missing:
        raise PreconditionError(f"unbound variables: {sorted(missing)}")
    env = {k: _as_float(v) for k, v in bindings.items()}
    with np.errstate(divide="raise", over="raise", invalid="raise", under="ignore"):
        return expr._eval(env)


def compile_expr(expr: Expr, names: Sequence[str]) -> Callable[..., Value]:
    """Positional callable over `names`, e.g. compile_expr(f, ("t", "s"))(t, s)."""
    names = tuple(names)

    def fn(*args):
        out = evaluate(expr, dict(zip(names, args)))
        shape = np.broadcast_shapes(*(np.shape(a) for a in args)) if args else ()
        if np.shape(out) != shape:
            return np.array(np.broadcast_to(out, shape), dtype=np.float64)
        return out

    return fn
