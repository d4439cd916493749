# Column and key order of every emitted report. Changing an entry changes the
# output format; bump REPORT_SCHEMA_VERSION in app/config.py alongside.

SWEEP_COLUMNS = [
    "x",
    "y",
    "defect",
    "bound",
    "ratio",
    "satisfied",
]

VERIFY_KEYS = [
    "schema_version",
    "command",
    "function",
    "weight",
    "rect",
    "subrect",
    "point",
    "m_alpha",
    "m_beta",
    "A",
    "B",
    "sup_norm",
    "sup_norm_method",
    "defect",
    "bound",
    "ratio",
    "satisfied",
    "paper_constant",
    "derived_constant",
    "quad_evaluations",
    "tolerances",
]

CUBATURE_KEYS = [
    "schema_version",
    "command",
    "function",
    "weight",
    "rect",
    "value",
    "error_bound",
    "rule_error_estimate",
    "cells",
    "evaluations",
    "converged",
    "target_error",
    "root_grid",
    "cell_grid",
    "tolerances",
]

MEDIAN_KEYS = [
    "schema_version",
    "command",
    "weight",
    "interval",
    "median",
    "A_min",
]


def build_sweep_sheet(base_data: dict, rows: list) -> dict:
    return {
        **base_data,
        "title": base_data.get("title", "sweep"),
        "headers": SWEEP_COLUMNS,
        "items": rows,
    }
