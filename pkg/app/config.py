import os
from dotenv import load_dotenv

from app.quad.schemas.quad import QuadConfig

load_dotenv()

LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()

# Quadrature
QUAD_ABS_TOL = float(os.getenv("QUAD_ABS_TOL", "1e-10"))
QUAD_REL_TOL = float(os.getenv("QUAD_REL_TOL", "1e-10"))
QUAD_MAX_DEPTH = int(os.getenv("QUAD_MAX_DEPTH", "40"))
QUAD_MIN_CELL_WIDTH = float(os.getenv("QUAD_MIN_CELL_WIDTH", "1e-12"))
QUAD_MAX_PANELS = int(os.getenv("QUAD_MAX_PANELS", "5000"))

# Sup-norm / finite differences
SUP_NORM_GRID = int(os.getenv("SUP_NORM_GRID", "201"))
FD_STEP = float(os.getenv("FD_STEP", "1e-4"))

# Weights
WEIGHT_VALIDATION_POINTS = int(os.getenv("WEIGHT_VALIDATION_POINTS", "1001"))

# Cubature
CUBATURE_CELL_GRID = int(os.getenv("CUBATURE_CELL_GRID", "101"))
CUBATURE_MAX_CELLS = int(os.getenv("CUBATURE_MAX_CELLS", "100000"))

# Sweep
SWEEP_WORKERS = int(os.getenv("SWEEP_WORKERS", "1"))

# Verification slack: defect <= bound * (1 + BOUND_REL_SLACK) + BOUND_ABS_SLACK
BOUND_REL_SLACK = 1e-8
BOUND_ABS_SLACK = 1e-9

REPORT_SCHEMA_VERSION = 1


def default_quad_config() -> QuadConfig:
    return QuadConfig(
        abs_tol=QUAD_ABS_TOL,
        rel_tol=QUAD_REL_TOL,
        max_depth=QUAD_MAX_DEPTH,
        min_cell_width=QUAD_MIN_CELL_WIDTH,
        max_panels=QUAD_MAX_PANELS,
    )
