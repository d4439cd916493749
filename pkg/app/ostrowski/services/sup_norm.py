# app/ostrowski/services/sup_norm.py
"""Grid-plus-golden-section estimate of sup |d²f/dt ds| over a subrectangle.

The estimate is a lower bound of the true supremum: exact on grid points and on
the refined maximizer, blind between grid lines.
"""
from __future__ import annotations

import math
from typing import Callable, Optional, Tuple

import numpy as np

from app.config import SUP_NORM_GRID
from app.errors import ExprEvalError, PreconditionError
from app.expr.schemas.nodes import Expr
from app.expr.services.calculus import METHOD_SYMBOLIC, MixedPartial, mixed_partial
from app.ostrowski.schemas.ostrowski import SubRect, SupNormEstimate

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
GOLDEN_ITERATIONS = 80
GOLDEN_REL_WIDTH = 1e-10


def golden_section_max(g: Callable[[float], float], lo: float, hi: float) -> Tuple[float, float]:
    """(x, g(x)) for the largest g seen while golden-section searching [lo, hi]."""
    best_x, best_v = lo, g(lo)
    v_hi = g(hi)
    if v_hi > best_v:
        best_x, best_v = hi, v_hi
    a, b = lo, hi
    c, d = b - _INV_PHI * (b - a), a + _INV_PHI * (b - a)
    gc, gd = g(c), g(d)
    for _ in range(GOLDEN_ITERATIONS):
        for x, v in ((c, gc), (d, gd)):
            if v > best_v:
                best_x, best_v = x, v
        if b - a <= GOLDEN_REL_WIDTH * max(1.0, abs(a), abs(b)):
            break
        if gc >= gd:
            b, d, gd = d, c, gc
            c = b - _INV_PHI * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + _INV_PHI * (b - a)
            gd = g(d)
    return best_x, best_v


def _abs_values(mp: MixedPartial, f: Expr, t, s) -> np.ndarray:
    values = np.abs(np.asarray(mp.fn(t, s), dtype=np.float64))
    if not np.all(np.isfinite(values)):
        raise ExprEvalError(-1, "mixed partial is not finite", f.to_source())
    return values


def sup_norm_mixed(
    f: Expr, sub: SubRect, grid: int = SUP_NORM_GRID, mixed: Optional[MixedPartial] = None
) -> SupNormEstimate:
    if grid < 2:
        raise PreconditionError("sup-norm grid needs at least 2 points per axis")
    mp = mixed or mixed_partial(f)
    method = "symbolic-grid" if mp.method == METHOD_SYMBOLIC else "numeric-grid"
    ts = np.linspace(sub.t_sub.lo, sub.t_sub.hi, grid)
    ss = np.linspace(sub.s_sub.lo, sub.s_sub.hi, grid)
    values = np.broadcast_to(_abs_values(mp, f, ts[:, None], ss[None, :]), (grid, grid))
    i, j = np.unravel_index(int(np.argmax(values)), values.shape)
    best = float(values[i, j])
    if best == float(values.min()):
        # constant on the grid
        return SupNormEstimate(value=best, method=method, grid=grid)

    # 격자 최대점 주변에서 축별로 한 번씩 보정
    y0 = float(ss[j])
    x_star, v = golden_section_max(
        lambda t: float(_abs_values(mp, f, t, y0)), float(ts[max(i - 1, 0)]), float(ts[min(i + 1, grid - 1)])
    )
    best = max(best, v)
    _, v = golden_section_max(
        lambda s: float(_abs_values(mp, f, x_star, s)), float(ss[max(j - 1, 0)]), float(ss[min(j + 1, grid - 1)])
    )
    best = max(best, v)
    return SupNormEstimate(value=best, method=method, grid=grid)
