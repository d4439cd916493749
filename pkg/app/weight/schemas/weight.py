from typing import Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.expr.schemas.nodes import Expr
from app.quad.schemas.quad import Interval

WeightKind = Literal["const", "linear", "expr"]
WeightMode = Literal["closed-form", "numeric"]


class WeightSpec(BaseModel):
    """Nonnegative weight w(u) on `domain`. Built and validated by build_weight()."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: WeightKind = Field(..., description="builtin-constant | builtin-linear | expression in u")
    domain: Interval
    mode: WeightMode = Field("closed-form", description="mass/moment evaluation strategy")
    expr: Optional[Expr] = None
    source: str = Field("", description="selector text the weight was built from")
    breakpoints: Tuple[float, ...] = Field((), description="interior roots of abs(...) arguments, where w has kinks")

    @model_validator(mode="after")
    def _check_kind(self):
        if self.kind == "expr":
            if self.expr is None:
                raise ValueError("expression weight requires an expression")
            if self.mode != "numeric":
                raise ValueError("expression weights are always evaluated numerically")
        elif self.expr is not None:
            raise ValueError(f"builtin weight '{self.kind}' takes no expression")
        if self.kind == "linear" and self.domain.lo < 0:
            raise ValueError("w(u)=u is negative below 0; linear weight needs domain.lo >= 0")
        return self

    @property
    def closed_form(self) -> bool:
        return self.mode == "closed-form" and self.kind != "expr"

    @property
    def label(self) -> str:
        return self.source or self.kind


class MomentSet(BaseModel):
    model_config = ConfigDict(frozen=True)

    m_alpha: float = Field(..., gt=0, description="mass over the t-subinterval")
    m_beta: float = Field(..., gt=0, description="mass over the s-subinterval")
    A: float = Field(..., ge=0, description="absolute first moment in t at x")
    B: float = Field(..., ge=0, description="absolute first moment in s at y")
