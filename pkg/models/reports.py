"""
Schemas for reports that are assembled outside the domain modules.
"""

from typing import List, Literal, Optional

from pydantic import Field

from models.common import StrictModel


class SelftestRow(StrictModel):
    """One acceptance criterion."""
    name: str = Field(..., description="Criterion name")
    passed: bool = Field(..., description="Whether every case held")
    cases: int = Field(..., ge=0, description="Cases run")
    failures: int = Field(..., ge=0, description="Cases that failed")
    seconds: float = Field(..., ge=0, description="Wall time")
    detail: Optional[str] = Field(None, description="First failure, if any")


class SelftestReport(StrictModel):
    kind: Literal["selftest"] = Field("selftest", description="Document discriminator")
    quick: bool = Field(..., description="Reduced sample counts")
    seed: int = Field(..., description="Seed of every sampler")
    rows: List[SelftestRow] = Field(..., description="One row per criterion")
    passed: bool = Field(..., description="All rows passed")


class ErrorReport(StrictModel):
    kind: Literal["error"] = Field("error", description="Document discriminator")
    error: str = Field(..., description="Exception class")
    message: str = Field(..., description="Human-readable message")
    path: Optional[str] = Field(None, description="JSON pointer of the offending field, for schema errors")
