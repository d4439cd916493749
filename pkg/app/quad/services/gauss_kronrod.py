# app/quad/services/gauss_kronrod.py
"""Adaptive Gauss-Kronrod (G7/K15) integration in one and two dimensions.

Every panel is integrated with the 15-point Kronrod rule; the embedded 7-point
Gauss rule gives the panel error estimate |K15 - G7|. The panel with the largest
estimate is bisected first (ties: oldest panel first) until the summed estimate
meets max(abs_tol, rel_tol * |value|).

Integrands are vectorized: g(nodes: ndarray) -> ndarray (scalars broadcast).
"""
from __future__ import annotations

import heapq
import logging
import math
from typing import Callable, Iterable, List, Optional, Sequence

import numpy as np

from app.errors import PreconditionError
from app.quad.schemas.quad import Interval, QuadConfig, QuadResult

logger = logging.getLogger(__name__)

# Kronrod nodes on [0, 1] (positive half) and weights; Gauss weights sit on every other node.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.0,
    0.129484966168869693270611432679082,
    0.0,
    0.279705391489276667901467771423780,
    0.0,
    0.381830050505118944950369775488975,
    0.0,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WK[:-1], _WK[::-1]])
GAUSS_WEIGHTS = np.concatenate([_WG[:-1], _WG[::-1]])
RULE_POINTS = NODES.size  # 15

_EPS = np.finfo(float).eps

Integrand1D = Callable[[np.ndarray], np.ndarray]
Integrand2D = Callable[[float, np.ndarray], np.ndarray]


def resolve_cfg(cfg: Optional[QuadConfig] = None) -> QuadConfig:
    if cfg is not None:
        return cfg
    from app.config import default_quad_config

    return default_quad_config()


def gauss_kronrod_panel(g: Integrand1D, lo: float, hi: float):
    """(K15 value, |K15 - G7| error) on one panel."""
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = center + half * NODES
    fx = np.broadcast_to(np.asarray(g(x), dtype=np.float64), x.shape)
    if not np.all(np.isfinite(fx)):
        raise PreconditionError(f"integrand is not finite on [{lo}, {hi}]")
    kronrod = half * float(np.dot(KRONROD_WEIGHTS, fx))
    gauss = half * float(np.dot(GAUSS_WEIGHTS, fx))
    err = max(abs(kronrod - gauss), 50.0 * _EPS * abs(kronrod))
    return kronrod, err


class _Panel:
    __slots__ = ("lo", "hi", "value", "error", "depth")

    def __init__(self, lo, hi, value, error, depth):
        self.lo, self.hi, self.value, self.error, self.depth = lo, hi, value, error, depth


def integrate_1d(g: Integrand1D, iv: Interval, cfg: Optional[QuadConfig] = None) -> QuadResult:
    cfg = resolve_cfg(cfg)
    value, err = gauss_kronrod_panel(g, iv.lo, iv.hi)
    evaluations = RULE_POINTS

    seq = 0
    heap = [(-err, seq, _Panel(iv.lo, iv.hi, value, err, 0))]
    frozen: List[_Panel] = []
    total_value, total_error = value, err
    converged = False

    while True:
        if total_error <= max(cfg.abs_tol, cfg.rel_tol * abs(total_value)):
            converged = True
            break
        if not heap or len(heap) + len(frozen) >= cfg.max_panels:
            break
        _, _, panel = heapq.heappop(heap)
        mid = 0.5 * (panel.lo + panel.hi)
        if panel.depth >= cfg.max_depth or (mid - panel.lo) < cfg.min_cell_width:
            frozen.append(panel)
            continue

        left_v, left_e = gauss_kronrod_panel(g, panel.lo, mid)
        right_v, right_e = gauss_kronrod_panel(g, mid, panel.hi)
        evaluations += 2 * RULE_POINTS
        total_value += left_v + right_v - panel.value
        total_error += left_e + right_e - panel.error
        for lo, hi, v, e in ((panel.lo, mid, left_v, left_e), (mid, panel.hi, right_v, right_e)):
            seq += 1
            heapq.heappush(heap, (-e, seq, _Panel(lo, hi, v, e, panel.depth + 1)))

    panels = frozen + [entry[2] for entry in heap]
    panels.sort(key=lambda p: p.lo)
    value = math.fsum(p.value for p in panels)
    error = math.fsum(p.error for p in panels)
    if not converged:
        logger.warning(
            f"⚠️ [Quad] not converged on [{iv.lo}, {iv.hi}]: "
            f"error≈{error:.3e}, panels={len(panels)}"
        )
    return QuadResult(value=value, error_estimate=error, evaluations=evaluations, converged=converged)


def combine(results: Iterable[QuadResult]) -> QuadResult:
    results = list(results)
    if not results:
        raise PreconditionError("nothing to combine")
    return QuadResult(
        value=math.fsum(r.value for r in results),
        error_estimate=math.fsum(r.error_estimate for r in results),
        evaluations=sum(r.evaluations for r in results),
        converged=all(r.converged for r in results),
    )


def _pieces(iv: Interval, breakpoints: Sequence[float]) -> List[Interval]:
    cuts = sorted({iv.lo, iv.hi, *(p for p in breakpoints if iv.lo < p < iv.hi)})
    return [Interval(lo=a, hi=b) for a, b in zip(cuts[:-1], cuts[1:])]


def integrate_1d_split(
    g: Integrand1D, iv: Interval, breakpoints: Sequence[float], cfg: Optional[QuadConfig] = None
) -> QuadResult:
    """integrate_1d over the pieces of `iv` cut at the given (kink) points."""
    return combine(integrate_1d(g, piece, cfg) for piece in _pieces(iv, breakpoints))


# -----------------------------
# Two dimensions (tensorized)
# -----------------------------
class _InnerStats:
    def __init__(self):
        self.evaluations = 0
        self.max_error = 0.0
        self.converged = True


def integrate_2d(
    g: Integrand2D, iv_t: Interval, iv_s: Interval, cfg: Optional[QuadConfig] = None
) -> QuadResult:
    """Integrate g(t, s) over iv_t x iv_s; the inner s-integral is the outer integrand."""
    cfg = resolve_cfg(cfg)
    # 안쪽 적분 오차가 바깥 적분에 누적되므로 허용오차를 폭으로 나눈다
    inner_cfg = cfg.model_copy(update={"abs_tol": cfg.abs_tol / (10.0 * max(iv_t.width, 1.0))})
    stats = _InnerStats()

    def outer(t_nodes: np.ndarray) -> np.ndarray:
        out = np.empty(t_nodes.shape, dtype=np.float64)
        for i, t in enumerate(t_nodes):
            r = integrate_1d(lambda s, t=t: g(t, s), iv_s, inner_cfg)
            out[i] = r.value
            stats.evaluations += r.evaluations
            stats.max_error = max(stats.max_error, r.error_estimate)
            stats.converged = stats.converged and r.converged
        return out

    res = integrate_1d(outer, iv_t, cfg)
    return QuadResult(
        value=res.value,
        error_estimate=res.error_estimate + iv_t.width * stats.max_error,
        evaluations=stats.evaluations,
        converged=res.converged and stats.converged,
    )


def integrate_2d_split(
    g: Integrand2D,
    iv_t: Interval,
    iv_s: Interval,
    t_breakpoints: Sequence[float] = (),
    s_breakpoints: Sequence[float] = (),
    cfg: Optional[QuadConfig] = None,
) -> QuadResult:
    """integrate_2d over the tensor pieces cut at the given kink lines."""
    return combine(
        integrate_2d(g, pt, ps, cfg)
        for pt in _pieces(iv_t, t_breakpoints)
        for ps in _pieces(iv_s, s_breakpoints)
    )
