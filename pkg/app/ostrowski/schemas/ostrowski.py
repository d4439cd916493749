from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.config import BOUND_ABS_SLACK, BOUND_REL_SLACK
from app.quad.schemas.quad import Interval
from app.weight.schemas.weight import MomentSet

SupNormMethod = Literal["symbolic-grid", "numeric-grid", "user"]
ConstantCase = Literal["w1-midpoint", "w1-subrect", "wu-midpoint"]


class Rect(BaseModel):
    model_config = ConfigDict(frozen=True)

    t_iv: Interval = Field(..., description="[a, b]")
    s_iv: Interval = Field(..., description="[c, d]")

    @classmethod
    def from_bounds(cls, a: float, b: float, c: float, d: float) -> "Rect":
        return cls(t_iv=Interval(lo=a, hi=b), s_iv=Interval(lo=c, hi=d))

    def as_subrect(self) -> "SubRect":
        return SubRect(t_sub=self.t_iv, s_sub=self.s_iv, parent=self)

    @property
    def midpoint(self) -> "EvalPoint":
        return EvalPoint(x=self.t_iv.midpoint, y=self.s_iv.midpoint)


class SubRect(BaseModel):
    model_config = ConfigDict(frozen=True)

    t_sub: Interval = Field(..., description="[α₁, α₂]")
    s_sub: Interval = Field(..., description="[β₁, β₂]")
    parent: Optional[Rect] = None

    @model_validator(mode="after")
    def _inside_parent(self):
        if self.parent is not None:
            if not (self.parent.t_iv.covers(self.t_sub) and self.parent.s_iv.covers(self.s_sub)):
                raise ValueError("subrectangle must lie inside its parent rectangle")
        return self

    @classmethod
    def from_bounds(cls, a1: float, a2: float, b1: float, b2: float, parent: Optional[Rect] = None) -> "SubRect":
        return cls(t_sub=Interval(lo=a1, hi=a2), s_sub=Interval(lo=b1, hi=b2), parent=parent)

    def contains(self, p: "EvalPoint") -> bool:
        return self.t_sub.contains(p.x) and self.s_sub.contains(p.y)

    @property
    def midpoint(self) -> "EvalPoint":
        return EvalPoint(x=self.t_sub.midpoint, y=self.s_sub.midpoint)

    @property
    def bounds(self) -> tuple:
        return (self.t_sub.lo, self.t_sub.hi, self.s_sub.lo, self.s_sub.hi)


class EvalPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    x: float
    y: float


class SupNormEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float = Field(..., ge=0)
    method: SupNormMethod
    grid: int = Field(0, ge=0, description="grid points per axis (0 for user-supplied values)")


def is_satisfied(defect: float, bound: float) -> bool:
    return defect <= bound * (1.0 + BOUND_REL_SLACK) + BOUND_ABS_SLACK


class BoundReport(BaseModel):
    """Both sides of the weighted Ostrowski inequality at one point."""

    model_config = ConfigDict(frozen=True)

    point: EvalPoint
    subrect: SubRect
    moments: Optional[MomentSet] = None
    sup_norm: Optional[float] = Field(None, ge=0)
    sup_norm_method: Optional[SupNormMethod] = None
    defect: Optional[float] = Field(None, ge=0)
    bound: Optional[float] = Field(None, ge=0)
    ratio: Optional[float] = None
    satisfied: bool = False
    converged: bool = True
    quad_evaluations: int = Field(0, ge=0)
    error: Optional[str] = Field(None, description="failure message when the point could not be evaluated")

    @model_validator(mode="after")
    def _check_flag(self):
        if self.defect is not None and self.bound is not None:
            if self.satisfied != is_satisfied(self.defect, self.bound):
                raise ValueError("satisfied flag disagrees with defect/bound")
        elif self.satisfied:
            raise ValueError("a failed evaluation cannot be satisfied")
        return self


class ConstantReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    case: ConstantCase
    rect: Rect
    subrect: SubRect
    point: EvalPoint
    moments: MomentSet
    stated_value: float = Field(..., description="value of the published closed-form constant")
    derived_value: float
    matches: bool
