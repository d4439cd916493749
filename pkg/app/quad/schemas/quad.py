import math

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Interval(BaseModel):
    model_config = ConfigDict(frozen=True)

    lo: float = Field(..., description="하한 (lower end)")
    hi: float = Field(..., description="상한 (upper end)")

    @model_validator(mode="after")
    def _check_order(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("interval ends must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"interval requires lo < hi, got [{self.lo}, {self.hi}]")
        return self

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def covers(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


class QuadConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    abs_tol: float = Field(1e-10, gt=0)
    rel_tol: float = Field(1e-10, ge=0)
    max_depth: int = Field(40, ge=1)
    min_cell_width: float = Field(1e-12, gt=0)
    max_panels: int = Field(5000, ge=1, description="hard cap on panels per 1D integral")


class QuadResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    error_estimate: float = Field(..., ge=0)
    evaluations: int = Field(..., gt=0)
    converged: bool
