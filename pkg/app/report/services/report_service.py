# app/report/services/report_service.py
from typing import List, Optional, Sequence, Tuple, Union

from app.config import REPORT_SCHEMA_VERSION
from app.cubature.schemas.cubature import CubatureResult
from app.errors import PreconditionError
from app.ostrowski.schemas.ostrowski import BoundReport, ConstantReport, Rect
from app.quad.schemas.quad import Interval, QuadConfig
from app.report.renderers.csv_renderer import write_csv
from app.report.renderers.excel_renderer import generate_excel
from app.report.renderers.json_renderer import write_json
from app.report.templates.report_keys import CUBATURE_KEYS, MEDIAN_KEYS, VERIFY_KEYS, build_sweep_sheet

Payload = Union[dict, List[dict]]


def tolerances_payload(cfg: QuadConfig) -> dict:
    return {
        "abs_tol": cfg.abs_tol,
        "rel_tol": cfg.rel_tol,
        "max_depth": cfg.max_depth,
        "min_cell_width": cfg.min_cell_width,
        "max_panels": cfg.max_panels,
    }


def _rect_list(rect: Rect) -> list:
    return [rect.t_iv.lo, rect.t_iv.hi, rect.s_iv.lo, rect.s_iv.hi]


def _ordered(keys: Sequence[str], values: dict) -> dict:
    missing = set(keys) ^ set(values)
    if missing:
        raise PreconditionError(f"report keys out of sync: {sorted(missing)}")
    return {k: values[k] for k in keys}


# -----------------------------
# Payload builders
# -----------------------------
def verify_payload(
    report: BoundReport, command: str, function: str, weight: str, rect: Rect, cfg: QuadConfig
) -> dict:
    mom = report.moments
    return _ordered(VERIFY_KEYS, {
        "schema_version": REPORT_SCHEMA_VERSION,
        "command": command,
        "function": function,
        "weight": weight,
        "rect": _rect_list(rect),
        "subrect": list(report.subrect.bounds),
        "point": [report.point.x, report.point.y],
        "m_alpha": mom.m_alpha if mom else None,
        "m_beta": mom.m_beta if mom else None,
        "A": mom.A if mom else None,
        "B": mom.B if mom else None,
        "sup_norm": report.sup_norm,
        "sup_norm_method": report.sup_norm_method,
        "defect": report.defect,
        "bound": report.bound,
        "ratio": report.ratio,
        "satisfied": report.satisfied,
        "paper_constant": None,
        "derived_constant": None,
        "quad_evaluations": report.quad_evaluations,
        "tolerances": tolerances_payload(cfg),
    })


def constant_payload(cr: ConstantReport, weight: str, cfg: QuadConfig) -> dict:
    """Constants reuse the verify layout: M = 1, bound = derived constant, satisfied = matches."""
    mom = cr.moments
    return _ordered(VERIFY_KEYS, {
        "schema_version": REPORT_SCHEMA_VERSION,
        "command": "constants",
        "function": None,
        "weight": weight,
        "rect": _rect_list(cr.rect),
        "subrect": list(cr.subrect.bounds),
        "point": [cr.point.x, cr.point.y],
        "m_alpha": mom.m_alpha,
        "m_beta": mom.m_beta,
        "A": mom.A,
        "B": mom.B,
        "sup_norm": 1.0,
        "sup_norm_method": "user",
        "defect": None,
        "bound": cr.derived_value,
        "ratio": cr.derived_value / cr.stated_value if cr.stated_value else None,
        "satisfied": cr.matches,
        "paper_constant": cr.stated_value,
        "derived_constant": cr.derived_value,
        "quad_evaluations": 0,
        "tolerances": tolerances_payload(cfg),
    })


def cubature_payload(res: CubatureResult, function: str, weight: str, rect: Rect, cfg: QuadConfig) -> dict:
    return _ordered(CUBATURE_KEYS, {
        "schema_version": REPORT_SCHEMA_VERSION,
        "command": "cubature",
        "function": function,
        "weight": weight,
        "rect": _rect_list(rect),
        "value": res.value,
        "error_bound": res.error_bound,
        "rule_error_estimate": res.rule_error_estimate,
        "cells": res.cells,
        "evaluations": res.evaluations,
        "converged": res.converged,
        "target_error": res.target_error,
        "root_grid": res.root_grid,
        "cell_grid": res.cell_grid,
        "tolerances": tolerances_payload(cfg),
    })


def median_payload(weight: str, interval: Interval, median: float, a_min: float) -> dict:
    return _ordered(MEDIAN_KEYS, {
        "schema_version": REPORT_SCHEMA_VERSION,
        "command": "median",
        "weight": weight,
        "interval": [interval.lo, interval.hi],
        "median": median,
        "A_min": a_min,
    })


def sweep_rows(reports: Sequence[BoundReport]) -> List[dict]:
    return [
        {
            "x": r.point.x,
            "y": r.point.y,
            "defect": r.defect,
            "bound": r.bound,
            "ratio": r.ratio,
            "satisfied": r.satisfied,
        }
        for r in reports
    ]


# -----------------------------
# Rendering
# -----------------------------
def render(payload: Payload, fmt: str = "json", rows: Optional[List[dict]] = None) -> Tuple[bytes, str]:
    """(content, extension). csv and xlsx need the tabular `rows` of a sweep."""
    if fmt == "json":
        return write_json(payload), "json"
    if rows is None:
        raise PreconditionError(f"format '{fmt}' is only available for sweeps")
    if fmt == "csv":
        return write_csv(rows), "csv"
    if fmt == "xlsx":
        content, ext, _ = generate_excel(build_sweep_sheet({"title": "sweep"}, rows))
        return content, ext
    raise PreconditionError(f"unknown output format '{fmt}'")
