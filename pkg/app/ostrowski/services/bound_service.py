# app/ostrowski/services/bound_service.py
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

import numpy as np

from app.config import SWEEP_WORKERS
from app.errors import OstrowskiError, PreconditionError
from app.expr.schemas.nodes import Expr
from app.expr.services.calculus import MixedPartial, mixed_partial
from app.ostrowski.schemas.ostrowski import (
    BoundReport,
    ConstantCase,
    ConstantReport,
    EvalPoint,
    Rect,
    SubRect,
    SupNormEstimate,
    is_satisfied,
)
from app.ostrowski.services.identity import line_averages
from app.ostrowski.services.sup_norm import sup_norm_mixed
from app.quad.schemas.quad import Interval, QuadConfig
from app.weight.schemas.weight import WeightSpec
from app.weight.services.weight_service import build_weight, moments, weighted_median

logger = logging.getLogger(__name__)

CONSTANT_MATCH_TOL = 1e-12


# -----------------------------
# Right-hand side
# -----------------------------
def bound(w: WeightSpec, sub: SubRect, p: EvalPoint, M: float, cfg: Optional[QuadConfig] = None) -> float:
    """A(x) B(y) M / (mα mβ)."""
    if M < 0 or not math.isfinite(M):
        raise PreconditionError(f"sup norm must be finite and >= 0, got {M!r}")
    if not sub.contains(p):
        raise PreconditionError(f"point ({p.x}, {p.y}) is outside the subrectangle {sub.bounds}")
    mom = moments(w, sub.t_sub, sub.s_sub, p.x, p.y, cfg)
    return mom.A * mom.B * M / (mom.m_alpha * mom.m_beta)


def unweighted_bound(sub: SubRect, p: EvalPoint, M: float) -> float:
    """Unweighted form on the full rectangle: (¼(b-a)² + (x-mid)²)(¼(d-c)² + (y-mid)²) M."""
    t, s = sub.t_sub, sub.s_sub
    first = 0.25 * t.width ** 2 + (p.x - t.midpoint) ** 2
    second = 0.25 * s.width ** 2 + (p.y - s.midpoint) ** 2
    return first * second * M


def domain_hull(rect: Rect) -> Interval:
    """Single weight domain covering both axes of the rectangle."""
    return Interval(lo=min(rect.t_iv.lo, rect.s_iv.lo), hi=max(rect.t_iv.hi, rect.s_iv.hi))


def median_point(w: WeightSpec, sub: SubRect, cfg: Optional[QuadConfig] = None) -> EvalPoint:
    """Point minimizing the bound: weighted medians on both axes."""
    return EvalPoint(x=weighted_median(w, sub.t_sub, cfg), y=weighted_median(w, sub.s_sub, cfg))


def _ratio(defect: float, rhs: float) -> float:
    if rhs > 0:
        return defect / rhs
    # zero bound: ratio 0 whenever the defect passes the acceptance test
    return 0.0 if is_satisfied(defect, rhs) else math.inf


# -----------------------------
# Verify one point
# -----------------------------
def _evaluate_point(
    f: Expr, w: WeightSpec, sub: SubRect, p: EvalPoint, sn: SupNormEstimate, cfg: Optional[QuadConfig]
) -> BoundReport:
    if not sub.contains(p):
        raise PreconditionError(f"point ({p.x}, {p.y}) is outside the subrectangle {sub.bounds}")
    mom = moments(w, sub.t_sub, sub.s_sub, p.x, p.y, cfg)
    la = line_averages(f, w, sub, p, cfg)
    rhs = mom.A * mom.B * sn.value / (mom.m_alpha * mom.m_beta)
    lhs = la.defect
    if not la.converged:
        logger.warning(f"⚠️ [Verify] quadrature did not converge at ({p.x}, {p.y})")
    return BoundReport(
        point=p,
        subrect=sub,
        moments=mom,
        sup_norm=sn.value,
        sup_norm_method=sn.method,
        defect=lhs,
        bound=rhs,
        ratio=_ratio(lhs, rhs),
        satisfied=is_satisfied(lhs, rhs),
        converged=la.converged,
        quad_evaluations=la.evaluations,
    )


def resolve_sup_norm(
    f: Expr, sub: SubRect, sup_norm: Optional[float] = None, mixed: Optional[MixedPartial] = None
) -> SupNormEstimate:
    if sup_norm is not None:
        if sup_norm < 0 or not math.isfinite(sup_norm):
            raise PreconditionError(f"sup norm must be finite and >= 0, got {sup_norm!r}")
        return SupNormEstimate(value=float(sup_norm), method="user", grid=0)
    return sup_norm_mixed(f, sub, mixed=mixed or mixed_partial(f))


def verify(
    f: Expr,
    w: WeightSpec,
    sub: SubRect,
    p: EvalPoint,
    cfg: Optional[QuadConfig] = None,
    sup_norm: Optional[float] = None,
) -> BoundReport:
    sn = resolve_sup_norm(f, sub, sup_norm)
    report = _evaluate_point(f, w, sub, p, sn, cfg)
    logger.info(
        f"✅ [Verify] ({p.x:.6g}, {p.y:.6g}) defect={report.defect:.6e} "
        f"bound={report.bound:.6e} satisfied={report.satisfied}"
    )
    return report


# -----------------------------
# Sweep
# -----------------------------
def sweep_points(sub: SubRect, grid: Tuple[int, int]) -> List[EvalPoint]:
    """Interior grid, row-major with x outer."""
    nx, ny = grid
    if nx < 2 or ny < 2:
        raise PreconditionError(f"sweep grid must be at least 2x2, got {nx}x{ny}")
    xs = np.linspace(sub.t_sub.lo, sub.t_sub.hi, nx + 2)[1:-1]
    ys = np.linspace(sub.s_sub.lo, sub.s_sub.hi, ny + 2)[1:-1]
    return [EvalPoint(x=float(x), y=float(y)) for x in xs for y in ys]


def sweep(
    f: Expr,
    w: WeightSpec,
    sub: SubRect,
    grid: Tuple[int, int],
    cfg: Optional[QuadConfig] = None,
    sup_norm: Optional[float] = None,
    workers: int = SWEEP_WORKERS,
) -> List[BoundReport]:
    points = sweep_points(sub, grid)
    # 상한 M은 모든 점에서 공통이므로 한 번만 계산
    sn = resolve_sup_norm(f, sub, sup_norm)

    def task(p: EvalPoint) -> BoundReport:
        try:
            return _evaluate_point(f, w, sub, p, sn, cfg)
        except OstrowskiError as e:
            logger.warning(f"⚠️ [Sweep] ({p.x:.6g}, {p.y:.6g}) failed: {e}")
            return BoundReport(point=p, subrect=sub, sup_norm=sn.value, sup_norm_method=sn.method, error=str(e))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(task, points))
    else:
        reports = [task(p) for p in points]

    violated = sum(1 for r in reports if r.defect is not None and not r.satisfied)
    failed = sum(1 for r in reports if r.error is not None)
    logger.info(f"✅ [Sweep] {len(reports)} points, violated={violated}, failed={failed}")
    return reports


# -----------------------------
# Closed-form constants
# -----------------------------
def closed_form_constant(
    case: ConstantCase, rect: Rect, sub: Optional[SubRect] = None, cfg: Optional[QuadConfig] = None
) -> ConstantReport:
    """Compare a published constant with A·B/(mα·mβ) evaluated at M = 1."""
    a, b = rect.t_iv.lo, rect.t_iv.hi
    c, d = rect.s_iv.lo, rect.s_iv.hi
    p = rect.midpoint

    if case == "w1-midpoint":
        w = build_weight("const", domain_hull(rect))
        sub = rect.as_subrect()
        stated = (b - a) * (d - c) / 16.0
    elif case == "w1-subrect":
        if sub is None:
            raise PreconditionError("case w1-subrect needs a subrectangle")
        if not sub.contains(p):
            raise PreconditionError(f"rectangle midpoint ({p.x}, {p.y}) must lie in the subrectangle {sub.bounds}")
        w = build_weight("const", domain_hull(rect))
        a1, a2, b1, b2 = sub.bounds
        a3 = (a + b - 2 * a1) ** 2 + (a + b - 2 * a2) ** 2
        b3 = (c + d - 2 * b1) ** 2 + (c + d - 2 * b2) ** 2
        stated = a3 * b3 / (64.0 * (a2 - a1) * (b2 - b1))
    elif case == "wu-midpoint":
        if a < 0 or c < 0:
            raise PreconditionError("case wu-midpoint needs a rectangle in the first quadrant")
        w = build_weight("linear", domain_hull(rect))
        sub = rect.as_subrect()
        stated = (a + b) * (c + d) / 16.0
    else:
        raise PreconditionError(f"unknown constant case '{case}'")

    mom = moments(w, sub.t_sub, sub.s_sub, p.x, p.y, cfg)
    derived = mom.A * mom.B / (mom.m_alpha * mom.m_beta)
    matches = abs(stated - derived) <= CONSTANT_MATCH_TOL * max(1.0, abs(stated))
    if matches:
        logger.info(f"✅ [Constants] {case}: {derived:.17g}")
    else:
        logger.warning(f"⚠️ [Constants] {case}: stated {stated:.17g} differs from derived {derived:.17g}")
    return ConstantReport(
        case=case,
        rect=rect,
        subrect=sub,
        point=p,
        moments=mom,
        stated_value=stated,
        derived_value=derived,
        matches=matches,
    )
