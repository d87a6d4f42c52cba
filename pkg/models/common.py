"""
Shared schema pieces: the strict base model and exact scalar types.
"""

from typing import Annotated, Any, List, Union

from pydantic import BaseModel, ConfigDict, Field, StringConstraints

Rational = Annotated[str, StringConstraints(pattern=r"^-?\d+(/\d+)?$")]
"""A rational written "p" or "p/q"; floats are not accepted anywhere."""

Simplex = Annotated[List[int], Field(min_length=1)]

CoefficientValue = Union[int, Rational, Annotated[List[Rational], Field(min_length=2, max_length=2)]]
"""Z and Z/m values are ints, Q and Q/Z values rationals, RCx values [t, u]."""


class StrictModel(BaseModel):
    """Unknown fields are schema errors."""
    model_config = ConfigDict(extra="forbid", frozen=True)


class SimplexEntry(StrictModel):
    """A value attached to one simplex."""
    simplex: Simplex = Field(..., description="Strictly increasing vertex list")
    value: Any = Field(..., description="Value on the simplex; its format depends on the owning document")


class VertexEntry(StrictModel):
    vertex: int = Field(..., ge=0, description="Vertex index")
    value: Any = Field(..., description="Value on the vertex")
