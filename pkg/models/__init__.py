"""
JSON Schemas.

Every input document is validated here before any domain object is
built. Validation failures become SchemaError carrying the JSON pointer
of the first offending field.
"""

from typing import Any, Dict, Iterable, Optional, Type

from pydantic import BaseModel, ValidationError

from exceptions import SchemaError
from models.algebra import CrossedModuleSchema, GroupSchema, MonomialSchema, OperatorSchema, TwoGroupCocycleSchema
from models.common import StrictModel
from models.descent import ChartAlgebraSchema, DescentSchema, FunctorSchema, TableAlgebraSchema
from models.reports import ErrorReport, SelftestReport, SelftestRow
from models.topology import (
    BundleModelSchema, CochainSchema, LocalSystemSchema, NerveSchema, PicDatumSchema, TwistSchema,
)

DOCUMENTS: Dict[str, Type[BaseModel]] = {
    "operator": OperatorSchema,
    "group": GroupSchema,
    "crossed_module": CrossedModuleSchema,
    "two_group_cocycle": TwoGroupCocycleSchema,
    "nerve": NerveSchema,
    "cochain": CochainSchema,
    "bundle_model": BundleModelSchema,
    "pic": PicDatumSchema,
    "twist": TwistSchema,
    "descent": DescentSchema,
}


def json_pointer(loc: Iterable[Any]) -> str:
    return "/" + "/".join(str(part).replace("~", "~0").replace("/", "~1") for part in loc)


def validate(schema: Type[BaseModel], raw: Any, prefix: str = "") -> BaseModel:
    """
    Raises:
        SchemaError: raw does not match schema
    """
    try:
        return schema.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise SchemaError(first["msg"], prefix + json_pointer(first["loc"])) from None


def parse_document(raw: Any, expected: Optional[Iterable[str]] = None) -> BaseModel:
    """
    Validate a document by its "kind" field.

    A document without "kind" is read as the first expected kind.

    Raises:
        SchemaError: unknown or unexpected kind, or a schema mismatch
    """
    if not isinstance(raw, dict):
        raise SchemaError("document must be a JSON object")
    allowed = tuple(expected) if expected is not None else tuple(DOCUMENTS)
    kind = raw.get("kind", allowed[0] if allowed else None)
    if kind not in DOCUMENTS:
        raise SchemaError(f"unknown document kind {kind!r}", "/kind")
    if kind not in allowed:
        raise SchemaError(f"expected a document of kind {' or '.join(allowed)}, got {kind!r}", "/kind")
    return validate(DOCUMENTS[kind], raw)


__all__ = [
    "BundleModelSchema",
    "ChartAlgebraSchema",
    "CochainSchema",
    "CrossedModuleSchema",
    "DOCUMENTS",
    "DescentSchema",
    "ErrorReport",
    "FunctorSchema",
    "GroupSchema",
    "LocalSystemSchema",
    "MonomialSchema",
    "NerveSchema",
    "OperatorSchema",
    "PicDatumSchema",
    "SelftestReport",
    "SelftestRow",
    "StrictModel",
    "TableAlgebraSchema",
    "TwistSchema",
    "TwoGroupCocycleSchema",
    "json_pointer",
    "parse_document",
    "validate",
]
