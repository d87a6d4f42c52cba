"""
Descent Engine Package.

Local algebras, gluing morphisms and the verification of algebroid
descent data together with its functor, transformation and module data.
"""

from descent_engine.base import AlgebraEngine
from descent_engine.builders import (
    NormalForm,
    central_transformation,
    conjugate_descent,
    integer_shift_descent,
    is_trivial_descent,
    normal_form_parts,
    normalize_lifts,
    solve_functor_corrections,
    solve_module_units,
    trivial_descent,
    twist_by_lambda,
    twist_descent,
)
from descent_engine.chart_engine import ChartAlgebraEngine, ScaledOperator
from descent_engine.data import AlgebroidDescentData, FunctorData, ModuleData, TransformationData
from descent_engine.morphisms import (
    IDENTITY,
    Morphism,
    MorphismKind,
    ad,
    apply_morphism,
    compose,
    morphism_from_json,
    morphism_to_json,
    morphisms_agree,
    sector_shift,
    table_map,
)
from descent_engine.table_engine import FiniteTable, TableAlgebraEngine
from descent_engine.verifier import (
    verify_descent,
    verify_functor_data,
    verify_module_data,
    verify_transformation,
)

__all__ = [
    "AlgebraEngine",
    "AlgebroidDescentData",
    "ChartAlgebraEngine",
    "FiniteTable",
    "FunctorData",
    "IDENTITY",
    "ModuleData",
    "Morphism",
    "MorphismKind",
    "NormalForm",
    "ScaledOperator",
    "TableAlgebraEngine",
    "TransformationData",
    "ad",
    "apply_morphism",
    "central_transformation",
    "compose",
    "conjugate_descent",
    "integer_shift_descent",
    "is_trivial_descent",
    "morphism_from_json",
    "morphism_to_json",
    "morphisms_agree",
    "normal_form_parts",
    "normalize_lifts",
    "sector_shift",
    "solve_functor_corrections",
    "solve_module_units",
    "table_map",
    "trivial_descent",
    "twist_by_lambda",
    "twist_descent",
    "verify_descent",
    "verify_functor_data",
    "verify_module_data",
    "verify_transformation",
]
