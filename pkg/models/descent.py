"""
Schemas for algebroid descent bundles and their companions.
"""

from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import Field, model_validator

from models.common import SimplexEntry, StrictModel, VertexEntry
from models.topology import NerveSchema


class ChartAlgebraSchema(StrictModel):
    """Microdifferential operators on an n-dimensional chart."""
    kind: Literal["chart"] = Field(..., description="Algebra discriminator")
    nvars: int = Field(2, ge=1, description="Chart dimension")
    window: int = Field(4, ge=1, description="Levels kept in every product")


class TableAlgebraSchema(StrictModel):
    """A finite algebra by structure constants."""
    kind: Literal["table"] = Field(..., description="Algebra discriminator")
    dim: int = Field(..., ge=1, description="Dimension")
    structure: List[List[List[Any]]] = Field(..., description="structure[i][j] = coefficients of e_i·e_j")
    unit: List[Any] = Field(..., description="Coefficients of 1")
    modulus: Optional[int] = Field(None, ge=2, description="Coefficients in Z/m; rationals when omitted")
    name: str = Field("", description="Display name")


AlgebraSchema = Annotated[Union[ChartAlgebraSchema, TableAlgebraSchema], Field(discriminator="kind")]


class MorphismEntry(StrictModel):
    simplex: List[int] = Field(..., min_length=2, max_length=2, description="Edge [i, j], i < j")
    morphism: Dict[str, Any] = Field(
        ..., description='{"kind": "identity" | "shift" | "ad" | "table" | "composite", ...}'
    )


class FunctorSchema(StrictModel):
    functors: List["FunctorEntry"] = Field(..., description="g_i for every vertex")
    corrections: List[SimplexEntry] = Field(..., description="b_ij in A'_i for every edge")


class FunctorEntry(StrictModel):
    vertex: int = Field(..., ge=0, description="Vertex index")
    morphism: Dict[str, Any] = Field(..., description="Morphism descriptor A_i → A'_i")


class TransformationSchema(StrictModel):
    """d: (g, b) ⇒ (g', b'), with (g', b') the second functor."""
    functor: FunctorSchema = Field(..., description="The second functor (g', b')")
    units: List[VertexEntry] = Field(..., description="d_i in A'_i for every vertex")


class DescentSchema(StrictModel):
    """Algebroid descent data (A_i, f_ij, a_ijk) with optional companions."""
    kind: Literal["descent"] = Field("descent", description="Document discriminator")
    nerve: NerveSchema = Field(..., description="The nerve")
    algebras: List[AlgebraSchema] = Field(
        ..., min_length=1, description="One algebra per vertex, or a single algebra used everywhere"
    )
    morphisms: List[MorphismEntry] = Field([], description="f_ij on every edge")
    units: List[SimplexEntry] = Field([], description="a_ijk in A_i on every triangle")
    module: Optional[List[SimplexEntry]] = Field(None, description="Twisted-module units p_ij in A_i")
    target: Optional["DescentSchema"] = Field(None, description="Second descent data for functor checks")
    functor: Optional[FunctorSchema] = Field(None, description="Functor data into 'target'")
    transformation: Optional[TransformationSchema] = Field(None, description="Transformation between two functors")

    @model_validator(mode="after")
    def _companions(self):
        if self.functor is not None and self.target is None:
            raise ValueError("'functor' needs 'target'")
        if self.transformation is not None and self.functor is None:
            raise ValueError("'transformation' needs 'functor'")
        return self


FunctorSchema.model_rebuild()
DescentSchema.model_rebuild()
