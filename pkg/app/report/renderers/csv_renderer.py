import io
import math
from typing import List

import pandas as pd

from app.errors import PreconditionError
from app.report.renderers.json_renderer import normalize_zero
from app.report.templates.report_keys import SWEEP_COLUMNS


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return normalize_zero(v) if math.isfinite(v) else None
    return v


def write_csv(rows: List[dict]) -> bytes:
    """Header `x,y,defect,bound,ratio,satisfied`, one row per point, LF endings."""
    if not rows:
        raise PreconditionError("refusing to write a CSV report without data rows")
    df = pd.DataFrame([{c: _cell(r.get(c)) for c in SWEEP_COLUMNS} for r in rows], columns=SWEEP_COLUMNS)
    buf = io.StringIO()
    df.to_csv(buf, index=False, float_format="%.17g", na_rep="", lineterminator="\n")
    return buf.getvalue().encode("utf-8")
