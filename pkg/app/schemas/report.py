"""
Output schema for reports written by the CLI.

Exact rationals are strings ("16/3", "-1/2", "0"); floats appear only in
numeric cross-checks and error bounds.
"""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, Field

Status = Literal["PASS", "FAIL"]


class PointReport(BaseModel):
    point: list[str] = Field(..., description="Coordinates in the disc variables")
    multiplicity: int
    nondegenerate: bool
    phi_value: str = Field(..., description="phi(JX(p))")
    det_value: str = Field(..., description="det JX(p)")
    residue: str
    method: str


class CrossCheck(BaseModel):
    value_real: float
    value_imag: float
    error_estimate: float
    radius: float
    evaluations: int
    agrees: bool


class ComponentReport(BaseModel):
    name: str
    chart: str
    degree: Optional[int] = None
    verification: Status
    verification_method: str
    witnesses: list[str] = Field(default_factory=list)
    degree_consistent: Optional[bool] = None
    genericity: Optional[dict[str, bool]] = None
    point: Optional[list[str]] = Field(None, description="Disc centre in the disc variables")
    field: Optional[list[str]] = Field(None, description="Restricted dual vector field")
    residue: Optional[str] = None
    method: Optional[str] = None
    rationalized: bool = False
    error_bound: Optional[float] = None
    uses_top_class: bool = False
    expected: Optional[str] = None
    points: list[PointReport] = Field(default_factory=list)
    crosscheck: Optional[CrossCheck] = None
    status: Status


class GlobalReport(BaseModel):
    phi: str
    m: int
    lhs: str
    rhs: str
    discrepancy: str
    status: Status


class Provenance(BaseModel):
    input_hash: str
    tool_version: str
    budgets: dict[str, Any]


class Report(BaseModel):
    schema_version: Literal["1"] = "1"
    subcommand: str
    problem: Optional[str] = None
    components: list[ComponentReport] = Field(default_factory=list)
    global_check: Optional[GlobalReport] = Field(None, alias="global")
    data: Optional[dict[str, Any]] = Field(None, description="Subcommand-specific payload")
    provenance: Optional[Provenance] = None
    status: Status

    model_config = {"populate_by_name": True}


class ErrorReport(BaseModel):
    schema_version: Literal["1"] = "1"
    status: Literal["ERROR"] = "ERROR"
    stage: str
    error: str
    message: str
    details: list[dict[str, str]] = Field(default_factory=list)
