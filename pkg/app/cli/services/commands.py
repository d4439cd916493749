# app/cli/services/commands.py
"""Command dispatch: RunConfig in, rendered report and exit code out."""
import logging
from typing import Callable, Dict, Tuple

from app.cli.schemas.run_config import RunConfig
from app.cubature.services.cubature_service import integrate
from app.expr.schemas.nodes import Expr
from app.expr.services.parser import parse
from app.ostrowski.schemas.ostrowski import EvalPoint, Rect, SubRect
from app.ostrowski.services.bound_service import closed_form_constant, domain_hull, median_point, sweep, verify
from app.quad.schemas.quad import Interval
from app.report.services.report_service import (
    constant_payload,
    cubature_payload,
    median_payload,
    render,
    sweep_rows,
    verify_payload,
)
from app.utils.catalog import resolve_function
from app.weight.schemas.weight import WeightSpec
from app.weight.services.weight_service import abs_moment, build_weight, weighted_median

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

Outcome = Tuple[bytes, str, int]


# -----------------------------
# Shared setup
# -----------------------------
def _function(cfg: RunConfig) -> Expr:
    return parse(resolve_function(cfg.function), {"t", "s"})


def _geometry(cfg: RunConfig) -> Tuple[Rect, SubRect]:
    rect = Rect.from_bounds(*cfg.rect)
    sub = SubRect.from_bounds(*cfg.subrect, parent=rect) if cfg.subrect else rect.as_subrect()
    return rect, sub


def _weight(cfg: RunConfig, rect: Rect) -> WeightSpec:
    return build_weight(cfg.weight, domain_hull(rect), cfg.mode)


def _point(cfg: RunConfig, w: WeightSpec, sub: SubRect) -> EvalPoint:
    if cfg.point is not None:
        return EvalPoint(x=cfg.point[0], y=cfg.point[1])
    if cfg.midpoint:
        return sub.midpoint
    return median_point(w, sub, cfg.tolerances)


# -----------------------------
# Commands
# -----------------------------
def run_verify(cfg: RunConfig) -> Outcome:
    f = _function(cfg)
    rect, sub = _geometry(cfg)
    w = _weight(cfg, rect)
    report = verify(f, w, sub, _point(cfg, w, sub), cfg.tolerances, cfg.sup_norm)
    payload = verify_payload(report, "verify", cfg.function, w.label, rect, cfg.tolerances)
    content, ext = render(payload)
    return content, ext, EXIT_OK if report.satisfied else EXIT_FAILED


def run_sweep(cfg: RunConfig) -> Outcome:
    f = _function(cfg)
    rect, sub = _geometry(cfg)
    w = _weight(cfg, rect)
    reports = sweep(f, w, sub, cfg.grid, cfg.tolerances, cfg.sup_norm, cfg.workers)
    payload = [verify_payload(r, "sweep", cfg.function, w.label, rect, cfg.tolerances) for r in reports]
    content, ext = render(payload, cfg.format, sweep_rows(reports))
    ok = all(r.satisfied for r in reports)
    return content, ext, EXIT_OK if ok else EXIT_FAILED


def run_cubature(cfg: RunConfig) -> Outcome:
    f = _function(cfg)
    rect, _ = _geometry(cfg)
    w = _weight(cfg, rect)
    res = integrate(f, w, rect, cfg.target_error, cfg.max_cells, cfg.tolerances)
    content, ext = render(cubature_payload(res, cfg.function, w.label, rect, cfg.tolerances))
    return content, ext, EXIT_OK if res.converged else EXIT_FAILED


def run_median(cfg: RunConfig) -> Outcome:
    iv = Interval(lo=cfg.interval[0], hi=cfg.interval[1])
    w = build_weight(cfg.weight, iv, cfg.mode)
    med = weighted_median(w, iv, cfg.tolerances)
    a_min = abs_moment(w, iv, med, cfg.tolerances)
    logger.info(f"✅ [CLI] weighted median of {w.label} on [{iv.lo}, {iv.hi}] = {med:.17g}")
    content, ext = render(median_payload(w.label, iv, med, a_min))
    return content, ext, EXIT_OK


def run_constants(cfg: RunConfig) -> Outcome:
    rect = Rect.from_bounds(*cfg.rect)
    sub = SubRect.from_bounds(*cfg.subrect, parent=rect) if cfg.subrect else None
    cr = closed_form_constant(cfg.case, rect, sub, cfg.tolerances)
    weight = "linear" if cfg.case == "wu-midpoint" else "const"
    content, ext = render(constant_payload(cr, weight, cfg.tolerances))
    # a mismatch is a finding, not a failure
    return content, ext, EXIT_OK


COMMANDS: Dict[str, Callable[[RunConfig], Outcome]] = {
    "verify": run_verify,
    "sweep": run_sweep,
    "cubature": run_cubature,
    "median": run_median,
    "constants": run_constants,
}


def execute(cfg: RunConfig) -> Outcome:
    return COMMANDS[cfg.command](cfg)
