from pydantic import BaseModel, ConfigDict, Field

from app.ostrowski.schemas.ostrowski import EvalPoint, SubRect
from app.weight.schemas.weight import MomentSet


class Cell(BaseModel):
    """One leaf of the cubature tree with its rule value and certificate."""

    model_config = ConfigDict(frozen=True)

    subrect: SubRect
    center: EvalPoint = Field(..., description="weighted medians of the cell sides")
    moments: MomentSet
    sup_norm: float = Field(..., ge=0, description="M on this cell")
    local_value: float
    local_bound: float = Field(..., ge=0, description="A·B·M, un-normalized")
    rule_error: float = Field(0.0, ge=0, description="quadrature error of the two line integrals")
    evaluations: int = Field(0, ge=0)
    converged: bool = True


class CubatureResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    error_bound: float = Field(..., ge=0, description="sum of the final local bounds")
    rule_error_estimate: float = Field(0.0, ge=0)
    cells: int = Field(..., ge=1)
    evaluations: int = Field(..., ge=0)
    converged: bool
    target_error: float = Field(..., gt=0)
    root_grid: int = Field(..., ge=2)
    cell_grid: int = Field(..., ge=2)
