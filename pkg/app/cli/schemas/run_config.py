from typing import Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.config import CUBATURE_MAX_CELLS, QUAD_ABS_TOL, QUAD_REL_TOL, SWEEP_WORKERS, default_quad_config
from app.ostrowski.schemas.ostrowski import ConstantCase
from app.quad.schemas.quad import QuadConfig
from app.weight.schemas.weight import WeightMode

Command = Literal["verify", "sweep", "cubature", "median", "constants"]
OutputFormat = Literal["json", "csv", "xlsx"]


def _split(value, count: int, name: str):
    if isinstance(value, str):
        value = [part.strip() for part in value.split(",")]
    if value is not None and len(value) != count:
        raise ValueError(f"--{name} expects {count} comma-separated numbers")
    return value


class RunConfig(BaseModel):
    """One CLI invocation after flags and the optional --config file are merged."""

    model_config = ConfigDict(frozen=True)

    command: Command
    function: Optional[str] = Field(None, description="expression in t, s or catalog:<name>")
    weight: str = Field("const", description="const | linear | expr:<text in u> | catalog:<name>")
    mode: WeightMode = "closed-form"
    rect: Optional[Tuple[float, float, float, float]] = Field(None, description="a,b,c,d")
    subrect: Optional[Tuple[float, float, float, float]] = Field(None, description="α₁,α₂,β₁,β₂")
    point: Optional[Tuple[float, float]] = None
    midpoint: bool = False
    median_point: bool = False
    grid: Optional[Tuple[int, int]] = None
    target_error: Optional[float] = Field(None, gt=0)
    max_cells: int = Field(CUBATURE_MAX_CELLS, ge=1)
    interval: Optional[Tuple[float, float]] = None
    case: Optional[ConstantCase] = None
    sup_norm: Optional[float] = Field(None, ge=0)
    abs_tol: float = Field(QUAD_ABS_TOL, gt=0)
    rel_tol: float = Field(QUAD_REL_TOL, ge=0)
    format: OutputFormat = "json"
    out: Optional[str] = None
    workers: int = Field(SWEEP_WORKERS, ge=1)

    @field_validator("rect", "subrect", mode="before")
    @classmethod
    def _four(cls, v, info):
        return _split(v, 4, info.field_name)

    @field_validator("point", "grid", "interval", mode="before")
    @classmethod
    def _two(cls, v, info):
        return _split(v, 2, info.field_name)

    @model_validator(mode="after")
    def _required_per_command(self):
        cmd = self.command
        if cmd in ("verify", "sweep", "cubature") and not self.function:
            raise ValueError(f"{cmd} needs --function")
        if cmd in ("verify", "sweep", "cubature", "constants") and self.rect is None:
            raise ValueError(f"{cmd} needs --rect")
        if cmd == "verify":
            chosen = sum([self.point is not None, self.midpoint, self.median_point])
            if chosen != 1:
                raise ValueError("verify needs exactly one of --point, --midpoint, --median-point")
        if cmd == "sweep" and self.grid is None:
            raise ValueError("sweep needs --grid")
        if cmd == "cubature" and self.target_error is None:
            raise ValueError("cubature needs --target-error")
        if cmd == "median" and self.interval is None:
            raise ValueError("median needs --interval")
        if cmd == "constants":
            if self.case is None:
                raise ValueError("constants needs --case")
            if self.case == "w1-subrect" and self.subrect is None:
                raise ValueError("case w1-subrect needs --subrect")
        if self.format != "json" and cmd != "sweep":
            raise ValueError(f"--format {self.format} is only available for sweep")
        if self.format == "xlsx" and not self.out:
            raise ValueError("--format xlsx needs --out")
        return self

    @property
    def tolerances(self) -> QuadConfig:
        return default_quad_config().model_copy(update={"abs_tol": self.abs_tol, "rel_tol": self.rel_tol})
