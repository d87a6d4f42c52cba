"""
Finite covers, cochain complexes and abelian Čech cohomology.
"""

from homology.coefficients import QMODZ, RCX, CoefficientGroup, CoefficientKind, Q, RCxValue, Z
from homology.cohomology import (
    AbelianGroupPresentation,
    bockstein,
    coboundary_preimage,
    cohomology,
    coordinates_to_json,
    induced_map_matrix,
    subgroup_order,
)
from homology.complexes import Cochain, CochainComplex, coboundary, is_cocycle, nerve_complex
from homology.nerve import MODEL_NERVES, CoverNerve
from homology.products import cup_product, point_complex, pullback, tensor_total_complex
from homology.smith import check_smith_form, smith_decomposition, smith_normal_form, solve_integer

__all__ = [
    "AbelianGroupPresentation",
    "Cochain",
    "CochainComplex",
    "CoefficientGroup",
    "CoefficientKind",
    "CoverNerve",
    "MODEL_NERVES",
    "Q",
    "QMODZ",
    "RCX",
    "RCxValue",
    "Z",
    "bockstein",
    "check_smith_form",
    "coboundary",
    "coboundary_preimage",
    "cohomology",
    "coordinates_to_json",
    "cup_product",
    "induced_map_matrix",
    "is_cocycle",
    "nerve_complex",
    "point_complex",
    "pullback",
    "smith_decomposition",
    "smith_normal_form",
    "solve_integer",
    "subgroup_order",
    "tensor_total_complex",
]
