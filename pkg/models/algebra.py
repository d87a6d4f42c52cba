"""
Schemas for operators, finite groups and crossed modules.
"""

from typing import List, Literal, Optional

from pydantic import Field, model_validator

from models.common import Rational, StrictModel


class MonomialSchema(StrictModel):
    """c · x^a · ξ₁^e · ξ₂^b₂ ⋯ ξ_n^b_n."""
    coeff: List[Rational] = Field(["1", "0"], min_length=2, max_length=2, description="Gaussian rational [re, im]")
    x: List[int] = Field(..., description="Exponents of x_1..x_n, all >= 0")
    xi1: Rational = Field(..., description="Rational exponent of ξ₁")
    xi: List[int] = Field([], description="Exponents of ξ_2..ξ_n, all >= 0")


class OperatorSchema(StrictModel):
    """A microdifferential operator known on `window` levels below `order`."""
    kind: Literal["operator"] = Field("operator", description="Document discriminator")
    nvars: int = Field(..., ge=1, description="Chart dimension n")
    order: Rational = Field(..., description="Top degree of the stored window")
    window: int = Field(..., ge=1, description="Number of known homogeneous levels")
    terms: List[MonomialSchema] = Field([], description="Monomials, each of degree order - j for 0 <= j < window")
    display: Optional[str] = Field(None, description="Pretty form, ignored on input")


class GroupSchema(StrictModel):
    """A finite group by multiplication table, or the cyclic group of the given order."""
    kind: Literal["group"] = Field("group", description="Document discriminator")
    name: str = Field("", description="Display name")
    labels: List[str] = Field([], description="Element labels, default 0..n-1")
    table: Optional[List[List[int]]] = Field(None, description="table[a][b] = index of a·b")
    cyclic: Optional[int] = Field(None, ge=1, description="Shorthand for Z/n")

    @model_validator(mode="after")
    def _one_source(self):
        if (self.table is None) == (self.cyclic is None):
            raise ValueError("give exactly one of 'table' or 'cyclic'")
        return self


class CrossedModuleSchema(StrictModel):
    """(G⁻¹ →d G⁰, δ) with action[f][a] = δ(f)(a)."""
    kind: Literal["crossed_module"] = Field("crossed_module", description="Document discriminator")
    name: str = Field("", description="Display name")
    lower: GroupSchema = Field(..., description="G⁻¹")
    upper: GroupSchema = Field(..., description="G⁰")
    d: List[int] = Field(..., description="d(a) for every a in G⁻¹")
    action: List[List[int]] = Field(..., description="δ(f)(a) for every f in G⁰ and a in G⁻¹")


class TwoGroupCocycleSchema(StrictModel):
    """(f_ij, α_ijk) by element label."""
    kind: Literal["two_group_cocycle"] = Field("two_group_cocycle", description="Document discriminator")
    f: List["LabelEntry"] = Field(..., description="f on every edge, as labels of G⁰")
    alpha: List["LabelEntry"] = Field(..., description="α on every triangle, as labels of G⁻¹")


class LabelEntry(StrictModel):
    simplex: List[int] = Field(..., min_length=1, description="Strictly increasing vertex list")
    value: str = Field(..., description="Element label")


TwoGroupCocycleSchema.model_rebuild()
