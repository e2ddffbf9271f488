"""
Input schema for problem files.

A problem file describes one foliation on P^n, the declared components of
its singular set with one transversal disc each, and the Chern monomial to
integrate. Polynomials are strings in the parser grammar; exact rationals
are strings "p/q" or "p".
"""

from __future__ import annotations

import re
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

RATIONAL_PATTERN = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")


def _check_rational(v: str) -> str:
    if not RATIONAL_PATTERN.match(v) or re.search(r"/\s*0+\s*$", v):
        raise ValueError(f"{v!r} is not a rational literal p or p/q")
    return v.replace(" ", "")


class AffineFormSpec(BaseModel):
    """An affine presentation in the chart where `chart` equals 1."""

    model_config = ConfigDict(extra="forbid")

    chart: str = Field(..., description="Homogeneous variable set to 1, e.g. 'T'")
    variables: Optional[list[str]] = Field(
        None, description="Affine names in homogeneous order minus the chart variable; default lowercase"
    )
    coefficients: list[str] = Field(..., description="Coefficients of dx_1, ..., dx_n")


class FormSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    variables: list[str] = Field(..., min_length=2, description="Homogeneous coordinates X_0..X_n")
    homogeneous: Optional[list[str]] = Field(None, description="Coefficients of dX_0, ..., dX_n")
    affine: Optional[AffineFormSpec] = None

    @model_validator(mode="after")
    def has_one_presentation(self):
        if (self.homogeneous is None) == (self.affine is None):
            raise ValueError("give exactly one of 'homogeneous' or 'affine'")
        if self.homogeneous is not None and len(self.homogeneous) != len(self.variables):
            raise ValueError("one homogeneous coefficient per variable")
        if self.affine is not None:
            if self.affine.chart not in self.variables:
                raise ValueError(f"chart {self.affine.chart!r} is not a homogeneous variable")
            if len(self.affine.coefficients) != len(self.variables) - 1:
                raise ValueError("one affine coefficient per chart variable")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("homogeneous variables must be distinct")
        return self


class DiscSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    chart: Optional[str] = Field(None, description="Defaults to the component's chart")
    fixed: dict[str, str] = Field(..., description="Affine variable -> rational value")
    free: list[str] = Field(..., min_length=1)
    center_parameter: str = "1"

    @field_validator("fixed")
    @classmethod
    def rational_values(cls, v: dict[str, str]) -> dict[str, str]:
        return {k: _check_rational(x) for k, x in v.items()}

    @field_validator("center_parameter")
    @classmethod
    def rational_center(cls, v: str) -> str:
        return _check_rational(v)


class ComponentSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    chart: str = Field(..., description="Homogeneous variable set to 1 for this component")
    variables: Optional[list[str]] = None
    parametrization: Optional[list[str]] = Field(
        None, description="Affine coordinates as polynomials in the parameter"
    )
    homogeneous_parametrization: Optional[list[str]] = Field(
        None, description="n+1 homogeneous coordinates; the chart entry must be a nonzero constant"
    )
    equations: Optional[list[str]] = Field(None, description="Homogeneous defining equations")
    parameter: str = "s"
    degree: Optional[int] = Field(None, ge=1)
    disc: DiscSpec
    expected_residue: Optional[str] = None

    @field_validator("expected_residue")
    @classmethod
    def rational_expected(cls, v: Optional[str]) -> Optional[str]:
        return None if v is None else _check_rational(v)

    @model_validator(mode="after")
    def has_one_description(self):
        given = [x is not None for x in (self.parametrization, self.homogeneous_parametrization, self.equations)]
        if sum(given) != 1:
            raise ValueError("give exactly one of parametrization, homogeneous_parametrization, equations")
        return self


class ProblemOptions(BaseModel):
    model_config = ConfigDict(extra="forbid")

    martinelli_tol: Optional[float] = Field(None, gt=0)
    groebner_budget: Optional[int] = Field(None, ge=1)
    crosscheck: Optional[bool] = None
    radii: Optional[list[float]] = None
    workers: Optional[int] = Field(None, ge=1)


class ProblemFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: Literal["1"] = "1"
    name: Optional[str] = None
    ambient_dim: int = Field(..., ge=2)
    codim: int = Field(1, ge=1)
    form: FormSpec
    components: list[ComponentSpec] = Field(default_factory=list)
    phi: Union[list[int], str] = Field("c1^2", description="Chern exponents [a1, a2, ...] or 'c1^2'")
    options: ProblemOptions = Field(default_factory=ProblemOptions)

    @model_validator(mode="after")
    def dimensions_agree(self):
        if len(self.form.variables) != self.ambient_dim + 1:
            raise ValueError(f"P^{self.ambient_dim} needs {self.ambient_dim + 1} homogeneous variables")
        if self.codim >= self.ambient_dim:
            raise ValueError("codimension must be below the ambient dimension")
        names = [c.name for c in self.components]
        if len(set(names)) != len(names):
            raise ValueError("component names must be unique")
        for c in self.components:
            if c.chart not in self.form.variables:
                raise ValueError(f"component {c.name!r}: chart {c.chart!r} is not a homogeneous variable")
            if len(c.disc.free) != self.codim + 1:
                raise ValueError(f"component {c.name!r}: disc needs {self.codim + 1} free variables")
        return self
