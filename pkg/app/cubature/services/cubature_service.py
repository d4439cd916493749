# app/cubature/services/cubature_service.py
"""Adaptive cubature of ∫∫ w(t) w(s) f(t,s) whose error certificate is the per-cell
inequality bound A(x)·B(y)·M.

Each cell is centered at its weighted medians; the worst cell is bisected at the
geometric midpoint of the side carrying more weight.
"""
from __future__ import annotations

import heapq
import logging
import math
from typing import List, Optional, Tuple

from app.config import CUBATURE_CELL_GRID, CUBATURE_MAX_CELLS, SUP_NORM_GRID
from app.cubature.schemas.cubature import Cell, CubatureResult
from app.errors import PreconditionError
from app.expr.schemas.nodes import Expr
from app.expr.services.calculus import MixedPartial, mixed_partial
from app.expr.services.evaluator import compile_expr
from app.ostrowski.schemas.ostrowski import EvalPoint, Rect, SubRect
from app.ostrowski.services.bound_service import median_point
from app.ostrowski.services.sup_norm import sup_norm_mixed
from app.quad.schemas.quad import QuadConfig, QuadResult
from app.quad.services.gauss_kronrod import integrate_1d_split
from app.weight.schemas.weight import WeightSpec
from app.weight.services.weight_service import evaluate_weight, moments

logger = logging.getLogger(__name__)


def cell_rule(
    f: Expr, w: WeightSpec, sub: SubRect, center: EvalPoint, cfg: Optional[QuadConfig] = None
) -> QuadResult:
    """mβ·∫w(t)f(t,y)dt + mα·∫w(s)f(x,s)ds − mα·mβ·f(x,y)."""
    if not sub.contains(center):
        raise PreconditionError(f"cell center ({center.x}, {center.y}) is outside {sub.bounds}")
    F = compile_expr(f, ("t", "s"))
    x, y = center.x, center.y
    mom = moments(w, sub.t_sub, sub.s_sub, x, y, cfg)
    rt = integrate_1d_split(lambda t: evaluate_weight(w, t) * F(t, y), sub.t_sub, w.breakpoints, cfg)
    rs = integrate_1d_split(lambda s: evaluate_weight(w, s) * F(x, s), sub.s_sub, w.breakpoints, cfg)
    value = mom.m_beta * rt.value + mom.m_alpha * rs.value - mom.m_alpha * mom.m_beta * float(F(x, y))
    return QuadResult(
        value=value,
        error_estimate=mom.m_beta * rt.error_estimate + mom.m_alpha * rs.error_estimate,
        evaluations=rt.evaluations + rs.evaluations,
        converged=rt.converged and rs.converged,
    )


def cell_error_bound(
    f: Expr,
    w: WeightSpec,
    sub: SubRect,
    center: Optional[EvalPoint] = None,
    cfg: Optional[QuadConfig] = None,
    grid: int = CUBATURE_CELL_GRID,
    mixed: Optional[MixedPartial] = None,
) -> float:
    """A(x)·B(y)·M on the cell; center defaults to the weighted medians."""
    center = center or median_point(w, sub, cfg)
    mom = moments(w, sub.t_sub, sub.s_sub, center.x, center.y, cfg)
    return mom.A * mom.B * sup_norm_mixed(f, sub, grid, mixed).value


def build_cell(
    f: Expr,
    w: WeightSpec,
    sub: SubRect,
    cfg: Optional[QuadConfig] = None,
    grid: int = CUBATURE_CELL_GRID,
    mixed: Optional[MixedPartial] = None,
) -> Cell:
    center = median_point(w, sub, cfg)
    mom = moments(w, sub.t_sub, sub.s_sub, center.x, center.y, cfg)
    sn = sup_norm_mixed(f, sub, grid, mixed)
    rule = cell_rule(f, w, sub, center, cfg)
    return Cell(
        subrect=sub,
        center=center,
        moments=mom,
        sup_norm=sn.value,
        local_value=rule.value,
        local_bound=mom.A * mom.B * sn.value,
        rule_error=rule.error_estimate,
        evaluations=rule.evaluations,
        converged=rule.converged,
    )


def bisect(cell: Cell) -> Tuple[SubRect, SubRect]:
    """Split at the geometric midpoint of the side with the larger weighted mass (t on ties)."""
    a1, a2, b1, b2 = cell.subrect.bounds
    if cell.moments.m_alpha >= cell.moments.m_beta:
        mid = 0.5 * (a1 + a2)
        return SubRect.from_bounds(a1, mid, b1, b2), SubRect.from_bounds(mid, a2, b1, b2)
    mid = 0.5 * (b1 + b2)
    return SubRect.from_bounds(a1, a2, b1, mid), SubRect.from_bounds(a1, a2, mid, b2)


def integrate(
    f: Expr,
    w: WeightSpec,
    rect: Rect,
    target_error: float,
    max_cells: int = CUBATURE_MAX_CELLS,
    cfg: Optional[QuadConfig] = None,
    root_grid: int = SUP_NORM_GRID,
    cell_grid: int = CUBATURE_CELL_GRID,
) -> CubatureResult:
    if not (target_error > 0 and math.isfinite(target_error)):
        raise PreconditionError(f"target error must be a positive number, got {target_error!r}")
    if max_cells < 1:
        raise PreconditionError(f"max_cells must be >= 1, got {max_cells}")
    if not (w.domain.covers(rect.t_iv) and w.domain.covers(rect.s_iv)):
        raise PreconditionError("weight domain does not cover the rectangle")

    mixed = mixed_partial(f)
    root = build_cell(f, w, SubRect(t_sub=rect.t_iv, s_sub=rect.s_iv), cfg, root_grid, mixed)

    # (-local_bound, seq): worst first, oldest first on ties
    seq = 0
    heap: List[tuple] = [(-root.local_bound, seq, root)]
    running = root.local_bound
    evaluations = root.evaluations
    while running > target_error and len(heap) + 1 <= max_cells:
        neg_bound, _, worst = heap[0]
        if neg_bound == 0:
            break
        heapq.heappop(heap)
        running -= worst.local_bound
        for part in bisect(worst):
            child = build_cell(f, w, part, cfg, cell_grid, mixed)
            seq += 1
            heapq.heappush(heap, (-child.local_bound, seq, child))
            running += child.local_bound
            evaluations += child.evaluations
        # 누적 오차 방지를 위해 주기적으로 다시 합산
        if seq % 512 == 0:
            running = math.fsum(entry[2].local_bound for entry in heap)

    cells = sorted((entry[2] for entry in heap), key=lambda c: c.subrect.bounds)
    error_bound = math.fsum(c.local_bound for c in cells)
    converged = error_bound <= target_error
    result = CubatureResult(
        value=math.fsum(c.local_value for c in cells),
        error_bound=error_bound,
        rule_error_estimate=math.fsum(c.rule_error for c in cells),
        cells=len(cells),
        evaluations=evaluations,
        converged=converged,
        target_error=target_error,
        root_grid=root_grid,
        cell_grid=cell_grid,
    )
    if converged:
        logger.info(
            f"✅ [Cubature] value={result.value:.12g} error_bound={error_bound:.3e} cells={result.cells}"
        )
    else:
        logger.warning(
            f"⚠️ [Cubature] budget of {max_cells} cells exhausted: error_bound={error_bound:.3e} "
            f"> target {target_error:.3e}"
        )
    return result
