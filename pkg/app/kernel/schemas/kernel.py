from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.quad.schemas.quad import Interval
from app.weight.schemas.weight import WeightSpec


class KernelSpec(BaseModel):
    """Peano kernel P(split, t) of a weight on the subinterval `iv`."""

    model_config = ConfigDict(frozen=True)

    weight: WeightSpec
    iv: Interval = Field(..., description="kernel subinterval [α₁, α₂]")
    split: float = Field(..., description="evaluation point x (or y)")

    @model_validator(mode="after")
    def _check_split(self):
        if not self.weight.domain.covers(self.iv):
            raise ValueError("kernel interval must lie inside the weight domain")
        if not self.iv.contains(self.split):
            raise ValueError(f"split {self.split!r} outside [{self.iv.lo}, {self.iv.hi}]")
        return self
