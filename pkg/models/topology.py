"""
Schemas for nerves, cochains, circle-bundle models, Pic data and twists.
"""

from typing import List, Literal, Optional

from pydantic import Field, model_validator

from models.common import CoefficientValue, Rational, Simplex, StrictModel


class NerveSchema(StrictModel):
    """A nerve by its maximal simplices (closed downward on load), or a named model."""
    kind: Literal["nerve"] = Field("nerve", description="Document discriminator")
    vertices: Optional[int] = Field(None, ge=1, description="Number of opens")
    simplices: List[Simplex] = Field([], description="Simplices whose faces make up the nerve")
    name: str = Field("", description="Display name")
    model: Optional[Literal["point", "S1", "S2", "T2", "RP2"]] = Field(None, description="A built-in model nerve")

    @model_validator(mode="after")
    def _one_source(self):
        if (self.vertices is None) == (self.model is None):
            raise ValueError("give exactly one of 'vertices' or 'model'")
        return self


class CochainEntry(StrictModel):
    simplex: Simplex = Field(..., description="Strictly increasing vertex list")
    value: CoefficientValue = Field(..., description="Value in the coefficient group")


class CochainSchema(StrictModel):
    """A cochain listed by simplex; simplices not listed carry zero."""
    kind: Literal["cochain"] = Field("cochain", description="Document discriminator")
    degree: int = Field(..., ge=0, description="Cochain degree")
    coeff: str = Field(..., description='Coefficient group: "Z", "Z/m", "Q", "Q/Z" or "RCx"')
    values: List[CochainEntry] = Field([], description="Nonzero values")
    nerve: Optional[NerveSchema] = Field(None, description="The nerve, when the cochain is read on its own")


class BundleModelSchema(StrictModel):
    """A circle bundle: base nerve and integer Euler 2-cocycle."""
    kind: Literal["bundle_model"] = Field("bundle_model", description="Document discriminator")
    base: NerveSchema = Field(..., description="Base nerve X")
    euler: List[CochainEntry] = Field([], description="Nonzero integer values of e on triangles")
    generator: Optional[int] = Field(None, description="Use sign·(first free generator of H²(X; Z)) instead of 'euler'")

    @model_validator(mode="after")
    def _one_euler(self):
        if self.generator is not None and self.euler:
            raise ValueError("give 'euler' or 'generator', not both")
        if self.generator is not None and self.generator not in (-1, 1):
            raise ValueError("generator sign must be 1 or -1")
        return self


class LocalSystemSchema(StrictModel):
    """An RCx 1-cochain on the total space, split into components."""
    base: List[CochainEntry] = Field([], description="[t, u] values on edges of X")
    fiber: List[CochainEntry] = Field([], description="[t, u] monodromy around the fiber over each vertex of X")


class PicDatumSchema(StrictModel):
    """A rank-one local system on Y together with a shift [λ]."""
    kind: Literal["pic"] = Field("pic", description="Document discriminator")
    ell: LocalSystemSchema = Field(..., description="The local system L")
    shift: Optional[Rational] = Field(None, description="[λ] in Q/Z; derived from the monodromy when omitted")


class TwistSchema(StrictModel):
    """The pair (λ, c) of a sector-shift twist."""
    kind: Literal["twist"] = Field("twist", description="Document discriminator")
    nerve: NerveSchema = Field(..., description="The nerve both cochains live on")
    lam: List[CochainEntry] = Field([], description="Q/Z values of λ on edges")
    c: List[CochainEntry] = Field([], description="RCx values [t, u] of c on triangles")
