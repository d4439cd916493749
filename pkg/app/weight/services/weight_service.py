# app/weight/services/weight_service.py
from __future__ import annotations

import logging
import math
from functools import lru_cache
from typing import Callable, List, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from app.config import WEIGHT_VALIDATION_POINTS
from app.errors import ExprEvalError, InvalidWeightError, PreconditionError
from app.expr.schemas.nodes import BinOp, Call, Expr, Neg
from app.expr.services.evaluator import compile_expr
from app.expr.services.parser import parse
from app.quad.schemas.quad import Interval, QuadConfig
from app.quad.services.gauss_kronrod import integrate_1d_split, resolve_cfg
from app.utils.catalog import resolve_weight
from app.weight.schemas.weight import MomentSet, WeightMode, WeightSpec

logger = logging.getLogger(__name__)

WEIGHT_VARIABLE = "u"
MEDIAN_WIDTH = 1e-12


# -----------------------------
# Construction / validation
# -----------------------------
def build_weight(selector: str, domain: Interval, mode: WeightMode = "closed-form") -> WeightSpec:
    """Selector: "const" | "linear" | "expr:<text in u>" | "catalog:<name>"."""
    resolved = resolve_weight(selector.strip())
    try:
        if resolved == "const":
            w = WeightSpec(kind="const", domain=domain, mode=mode, source=selector)
        elif resolved == "linear":
            w = WeightSpec(kind="linear", domain=domain, mode=mode, source=selector)
        elif resolved.startswith("expr:"):
            expr = parse(resolved[len("expr:"):], {WEIGHT_VARIABLE})
            w = WeightSpec(kind="expr", domain=domain, mode="numeric", expr=expr, source=selector)
        else:
            raise InvalidWeightError(f"unknown weight selector '{selector}' (const | linear | expr:<text>)")
    except ValidationError as e:
        raise InvalidWeightError(str(e)) from e
    return validate_weight(w)


def _abs_arguments(e: Expr) -> List[Expr]:
    if isinstance(e, Call):
        return ([e.arg] if e.func == "abs" else []) + _abs_arguments(e.arg)
    if isinstance(e, Neg):
        return _abs_arguments(e.operand)
    if isinstance(e, BinOp):
        return _abs_arguments(e.left) + _abs_arguments(e.right)
    return []


def _bisect_root(g: Callable, a: float, b: float) -> float:
    sa = np.sign(float(g(a)))
    while True:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            return mid
        sm = np.sign(float(g(mid)))
        if sm == 0:
            return mid
        if sm == sa:
            a = mid
        else:
            b = mid


def weight_kinks(expr: Expr, domain: Interval, points: int = WEIGHT_VALIDATION_POINTS) -> Tuple[float, ...]:
    """Interior roots of every abs(...) argument: sign changes on the sampling grid, refined by bisection."""
    grid = np.linspace(domain.lo, domain.hi, points)
    kinks = set()
    for arg in _abs_arguments(expr):
        g = compile_expr(arg, (WEIGHT_VARIABLE,))
        values = np.broadcast_to(np.asarray(g(grid), dtype=np.float64), grid.shape)
        kinks.update(float(u) for u in grid[values == 0])
        sign = np.sign(values)
        for i in np.flatnonzero(sign[:-1] * sign[1:] < 0):
            kinks.add(_bisect_root(g, float(grid[i]), float(grid[i + 1])))
    return tuple(sorted(k for k in kinks if domain.lo < k < domain.hi))


def validate_weight(w: WeightSpec, points: int = WEIGHT_VALIDATION_POINTS) -> WeightSpec:
    """Dense-sampling nonnegativity check plus positive, finite mass; records the kinks of w."""
    grid = np.linspace(w.domain.lo, w.domain.hi, points)
    try:
        values = evaluate_weight(w, grid)
        if w.kind == "expr":
            w = w.model_copy(update={"breakpoints": weight_kinks(w.expr, w.domain, points)})
    except ExprEvalError as e:
        raise InvalidWeightError(f"weight is not finite on the domain: {e}") from e
    negative = np.flatnonzero(values < 0)
    if negative.size:
        u = grid[negative[0]]
        raise InvalidWeightError(f"weight is negative at u={u:.17g} (w={values[negative[0]]:.6g})")
    total = mass(w, w.domain)
    logger.debug(
        f"[Weight] validated {w.label} on [{w.domain.lo}, {w.domain.hi}], mass={total:.6g}, "
        f"kinks={list(w.breakpoints)}"
    )
    return w


def evaluate_weight(w: WeightSpec, u) -> np.ndarray:
    u = np.asarray(u, dtype=np.float64)
    if w.kind == "const":
        return np.ones_like(u)
    if w.kind == "linear":
        return u.copy()
    return np.asarray(compile_expr(w.expr, (WEIGHT_VARIABLE,))(u), dtype=np.float64)


def _require_inside(w: WeightSpec, iv: Interval) -> None:
    if not w.domain.covers(iv):
        raise PreconditionError(
            f"interval [{iv.lo}, {iv.hi}] is outside the weight domain [{w.domain.lo}, {w.domain.hi}]"
        )


# -----------------------------
# Mass
# -----------------------------
@lru_cache(maxsize=1 << 16)
def _numeric_mass(w: WeightSpec, lo: float, hi: float, cfg: QuadConfig) -> float:
    if lo == hi:
        return 0.0
    a, b, sign = (lo, hi, 1.0) if lo < hi else (hi, lo, -1.0)
    r = integrate_1d_split(lambda u: evaluate_weight(w, u), Interval(lo=a, hi=b), w.breakpoints, cfg)
    return sign * r.value


def mass(w: WeightSpec, iv: Interval, cfg: Optional[QuadConfig] = None) -> float:
    _require_inside(w, iv)
    if w.closed_form:
        m = iv.width if w.kind == "const" else 0.5 * (iv.hi ** 2 - iv.lo ** 2)
    else:
        m = _numeric_mass(w, iv.lo, iv.hi, resolve_cfg(cfg))
    if not (math.isfinite(m) and m > 0):
        raise InvalidWeightError(f"weight mass on [{iv.lo}, {iv.hi}] is {m!r}; it must be finite and > 0")
    return m


def cumulative_mass(w: WeightSpec, lo: float, t, cfg: Optional[QuadConfig] = None) -> np.ndarray:
    """Vectorized ∫_lo^t w(u) du (negative when t < lo)."""
    t = np.asarray(t, dtype=np.float64)
    if w.closed_form:
        return t - lo if w.kind == "const" else 0.5 * (t * t - lo * lo)
    cfg = resolve_cfg(cfg)
    flat = [_numeric_mass(w, float(lo), float(v), cfg) for v in t.ravel()]
    return np.asarray(flat, dtype=np.float64).reshape(t.shape)


# -----------------------------
# Absolute first moment
# -----------------------------
def abs_moment(w: WeightSpec, iv: Interval, x: float, cfg: Optional[QuadConfig] = None) -> float:
    """∫_lo^x (x-u) w(u) du + ∫_x^hi (u-x) w(u) du."""
    if not iv.contains(x):
        raise PreconditionError(f"x={x!r} is outside [{iv.lo}, {iv.hi}]")
    _require_inside(w, iv)
    lo, hi = iv.lo, iv.hi
    if w.closed_form:
        if w.kind == "const":
            value = 0.5 * ((x - lo) ** 2 + (hi - x) ** 2)
        else:
            left = x * (x * x - lo * lo) / 2.0 - (x ** 3 - lo ** 3) / 3.0
            right = (hi ** 3 - x ** 3) / 3.0 - x * (hi * hi - x * x) / 2.0
            value = left + right
        return max(value, 0.0)

    cfg = resolve_cfg(cfg)
    value = 0.0
    if x > lo:
        value += integrate_1d_split(
            lambda u: (x - u) * evaluate_weight(w, u), Interval(lo=lo, hi=x), w.breakpoints, cfg
        ).value
    if x < hi:
        value += integrate_1d_split(
            lambda u: (u - x) * evaluate_weight(w, u), Interval(lo=x, hi=hi), w.breakpoints, cfg
        ).value
    return max(value, 0.0)


def moments(
    w: WeightSpec, t_iv: Interval, s_iv: Interval, x: float, y: float, cfg: Optional[QuadConfig] = None
) -> MomentSet:
    return MomentSet(
        m_alpha=mass(w, t_iv, cfg),
        m_beta=mass(w, s_iv, cfg),
        A=abs_moment(w, t_iv, x, cfg),
        B=abs_moment(w, s_iv, y, cfg),
    )


# -----------------------------
# Weighted median (minimizer of abs_moment)
# -----------------------------
def _leftmost(reached: Callable[[float], bool], lo: float, hi: float) -> float:
    """Bisection for the leftmost point where a monotone predicate becomes true (reached(hi) holds)."""
    while hi - lo > MEDIAN_WIDTH:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if reached(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def weighted_median(w: WeightSpec, iv: Interval, cfg: Optional[QuadConfig] = None) -> float:
    """Leftmost minimizer of abs_moment(w, iv, .)."""
    total = mass(w, iv, cfg)
    if w.closed_form:
        if w.kind == "const":
            return iv.midpoint
        return math.sqrt(0.5 * (iv.lo ** 2 + iv.hi ** 2))

    cfg = resolve_cfg(cfg)
    tol = max(cfg.abs_tol, cfg.rel_tol * total)

    def excess(x: float) -> float:
        # mass left of x minus mass right of x; the derivative of abs_moment
        return 2.0 * float(cumulative_mass(w, iv.lo, x, cfg)) - total

    # [x_lo, x_hi] holds every point whose excess is zero within quadrature noise
    x_lo = _leftmost(lambda x: excess(x) >= -tol, iv.lo, iv.hi)
    x_hi = _leftmost(lambda x: excess(x) > tol, x_lo, iv.hi)

    # 영 가중치 구간의 왼쪽 끝은 abs 인자의 근
    for b in w.breakpoints:
        if x_lo <= b <= x_hi:
            return b
    return _leftmost(lambda x: excess(x) >= 0.0, x_lo, x_hi)
