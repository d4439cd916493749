# app/ostrowski/services/identity.py
"""Weighted line averages, the defect, and the kernel representation behind them."""
from __future__ import annotations

import logging
from typing import NamedTuple, Optional

import numpy as np

from app.errors import PreconditionError
from app.expr.schemas.nodes import Expr
from app.expr.services.calculus import MixedPartial, mixed_partial
from app.expr.services.evaluator import compile_expr
from app.kernel.schemas.kernel import KernelSpec
from app.kernel.services.kernel_service import left_branch, right_branch
from app.ostrowski.schemas.ostrowski import EvalPoint, SubRect
from app.quad.schemas.quad import Interval, QuadConfig, QuadResult
from app.quad.services.gauss_kronrod import combine, integrate_1d_split, integrate_2d_split
from app.weight.schemas.weight import WeightSpec
from app.weight.services.weight_service import evaluate_weight, mass

logger = logging.getLogger(__name__)


class LineAverages(NamedTuple):
    f_xy: float
    t_average: float  # (1/mα) ∫ w(t) f(t, y) dt
    s_average: float  # (1/mβ) ∫ w(s) f(x, s) ds
    double_average: float  # (1/(mα mβ)) ∫∫ w(t) w(s) f(t, s)
    m_alpha: float
    m_beta: float
    evaluations: int
    converged: bool

    @property
    def defect(self) -> float:
        return abs(self.f_xy - self.t_average - self.s_average + self.double_average)


def _check_point(sub: SubRect, p: EvalPoint) -> None:
    if not sub.contains(p):
        raise PreconditionError(f"point ({p.x}, {p.y}) is outside the subrectangle {sub.bounds}")


def line_averages(
    f: Expr, w: WeightSpec, sub: SubRect, p: EvalPoint, cfg: Optional[QuadConfig] = None
) -> LineAverages:
    _check_point(sub, p)
    F = compile_expr(f, ("t", "s"))
    m_a = mass(w, sub.t_sub, cfg)
    m_b = mass(w, sub.s_sub, cfg)

    kinks = w.breakpoints
    rt = integrate_1d_split(lambda t: evaluate_weight(w, t) * F(t, p.y), sub.t_sub, kinks, cfg)
    rs = integrate_1d_split(lambda s: evaluate_weight(w, s) * F(p.x, s), sub.s_sub, kinks, cfg)
    rd = integrate_2d_split(
        lambda t, s: evaluate_weight(w, t) * evaluate_weight(w, s) * F(t, s),
        sub.t_sub,
        sub.s_sub,
        kinks,
        kinks,
        cfg,
    )
    total = combine((rt, rs, rd))
    return LineAverages(
        f_xy=float(F(p.x, p.y)),
        t_average=rt.value / m_a,
        s_average=rs.value / m_b,
        double_average=rd.value / (m_a * m_b),
        m_alpha=m_a,
        m_beta=m_b,
        evaluations=total.evaluations,
        converged=total.converged,
    )


def defect(f: Expr, w: WeightSpec, sub: SubRect, p: EvalPoint, cfg: Optional[QuadConfig] = None) -> float:
    """|f(x,y) - T - S + D|, the left-hand side of the inequality."""
    return line_averages(f, w, sub, p, cfg).defect


# -----------------------------
# Kernel double integral
# -----------------------------
def _branch_pieces(k: KernelSpec, cfg: Optional[QuadConfig]):
    """(piece, branch) pairs on both sides of the split; empty pieces are skipped."""
    pieces = []
    if k.split > k.iv.lo:
        pieces.append((Interval(lo=k.iv.lo, hi=k.split), lambda u: left_branch(k, u, cfg)))
    if k.split < k.iv.hi:
        pieces.append((Interval(lo=k.split, hi=k.iv.hi), lambda u: right_branch(k, u, cfg)))
    return pieces


def kernel_integral(
    mixed: MixedPartial, w: WeightSpec, sub: SubRect, p: EvalPoint, cfg: Optional[QuadConfig] = None
) -> QuadResult:
    """∫∫ P(x,t) Q(y,s) f_ts(t,s) ds dt, cut at t = x, s = y and at the kinks of w."""
    _check_point(sub, p)
    kt = KernelSpec(weight=w, iv=sub.t_sub, split=p.x)
    ks = KernelSpec(weight=w, iv=sub.s_sub, split=p.y)
    parts = []
    for t_piece, p_branch in _branch_pieces(kt, cfg):
        for s_piece, q_branch in _branch_pieces(ks, cfg):
            parts.append(
                integrate_2d_split(
                    lambda t, s, pb=p_branch, qb=q_branch: pb(t) * qb(s) * np.asarray(mixed.fn(t, s)),
                    t_piece,
                    s_piece,
                    w.breakpoints,
                    w.breakpoints,
                    cfg,
                )
            )
    if not parts:
        raise PreconditionError("degenerate subrectangle")
    return combine(parts)


def identity_residual(
    f: Expr,
    w: WeightSpec,
    sub: SubRect,
    p: EvalPoint,
    cfg: Optional[QuadConfig] = None,
    mixed: Optional[MixedPartial] = None,
) -> float:
    """|f(x,y) - (T + S - D + K/(mα mβ))|; zero up to quadrature error when f is smooth."""
    la = line_averages(f, w, sub, p, cfg)
    k = kernel_integral(mixed or mixed_partial(f), w, sub, p, cfg)
    if not (la.converged and k.converged):
        logger.warning(f"⚠️ [Identity] quadrature did not converge at ({p.x}, {p.y})")
    rhs = la.t_average + la.s_average - la.double_average + k.value / (la.m_alpha * la.m_beta)
    return abs(la.f_xy - rhs)
