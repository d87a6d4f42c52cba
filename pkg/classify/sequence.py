"""
Five-Term Exact Sequence.

    H¹(Y) →μ₁ H⁰(X) →δ H²(X) →γ# H²(Y) →μ₂ H¹(X)

═══════════════════════════════════════════════════════════════════════════
CORE CONTRACT:
═══════════════════════════════════════════════════════════════════════════

- Finite coefficients ℤ/m: exactness at H⁰(X), H²(X), H²(Y) is decided
  exactly by g∘f = 0 and |im f|·|im g| = |B|
- ℚ/ℤ and RCx: the same test runs over ℤ/N for every sampled N, plus a
  ℚ-rank test (rank f + rank g = dim B); circle summands have no finite
  generating set, so no single finite check covers them
- μ₂∘γ# vanishes and δ∘μ₁ has the explicit primitive −a on cochains, not
  only in cohomology
═══════════════════════════════════════════════════════════════════════════
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Tuple

import sympy

from classify.bundle_model import CircleBundleModel
from data_models import VerificationStatus
from exceptions import CocycleError
from homology.coefficients import Q, CoefficientGroup, CoefficientKind
from homology.cohomology import (
    AbelianGroupPresentation, cohomology, coordinates_to_json, induced_map_matrix, subgroup_order,
)
from homology.complexes import Cochain
from services.parallel import ordered_map

logger = logging.getLogger(__name__)

NODES = ("H1(Y)", "H0(X)", "H2(X)", "H2(Y)", "H1(X)")
MAPS = ("mu1", "delta", "gamma", "mu2")
MIDDLE = ("H0(X)", "H2(X)", "H2(Y)")
DEFAULT_SAMPLES = (2, 3, 4)


@dataclass(frozen=True)
class SequenceCheck:
    """The sequence over one finite or rational coefficient group."""
    coefficient: CoefficientGroup
    groups: Dict[str, AbelianGroupPresentation]
    maps: Dict[str, List[List]]
    exact_at: Dict[str, bool]
    injective: Dict[str, bool]
    surjective: Dict[str, bool]
    cochain_level: bool

    @property
    def exact(self) -> bool:
        return all(self.exact_at.values()) and self.cochain_level

    def to_dict(self) -> Dict:
        return {
            "coeff": self.coefficient.label,
            "groups": {name: self.groups[name].describe() for name in NODES},
            "maps": {name: [coordinates_to_json(row) for row in self.maps[name]] for name in MAPS},
            "exact_at": dict(self.exact_at),
            "injective": dict(self.injective),
            "surjective": dict(self.surjective),
            "cochain_level": self.cochain_level,
        }


@dataclass(frozen=True)
class FiveTermSequence:
    model: CircleBundleModel
    coefficient: CoefficientGroup
    groups: Dict[str, AbelianGroupPresentation]
    checks: Tuple[SequenceCheck, ...] = field(default=())

    @property
    def exact(self) -> bool:
        return all(c.exact for c in self.checks)

    @property
    def status(self) -> VerificationStatus:
        return VerificationStatus.TRUE if self.exact else VerificationStatus.FALSE

    def check(self, coefficient: CoefficientGroup) -> SequenceCheck:
        for c in self.checks:
            if c.coefficient == coefficient:
                return c
        raise KeyError(f"no check over {coefficient}")

    def to_dict(self) -> Dict:
        return {
            "kind": "sequence",
            "coeff": self.coefficient.label,
            "euler_trivial": self.model.is_trivial,
            "groups": {name: self.groups[name].to_json() for name in NODES},
            "checks": [c.to_dict() for c in self.checks],
            "exact": self.exact,
        }


def _groups(model: CircleBundleModel, coefficient: CoefficientGroup) -> Dict[str, AbelianGroupPresentation]:
    total = model.total_complex()
    base = model.base_complex()
    return {
        "H1(Y)": cohomology(total, coefficient, 1),
        "H0(X)": cohomology(base, coefficient, 0),
        "H2(X)": cohomology(base, coefficient, 2),
        "H2(Y)": cohomology(total, coefficient, 2),
        "H1(X)": cohomology(base, coefficient, 1),
    }


def _maps(model: CircleBundleModel) -> Dict[str, Tuple[str, str, Callable[[Cochain], Cochain]]]:
    return {
        "mu1": ("H1(Y)", "H0(X)", model.mu1),
        "delta": ("H0(X)", "H2(X)", model.delta),
        "gamma": ("H2(X)", "H2(Y)", model.gamma),
        "mu2": ("H2(Y)", "H1(X)", model.mu2),
    }


def _columns(matrix: List[List]) -> List[List]:
    if not matrix:
        return []
    return [list(col) for col in zip(*matrix)]


def _rank(matrix: List[List]) -> int:
    if not matrix or not matrix[0]:
        return 0
    return sympy.Matrix(matrix).rank()


def _composites_vanish(groups, f, g) -> bool:
    """g(f(x)) has zero coordinates for every generator x of the source of f."""
    src, _, fn = f
    _, dst, gn = g
    zero = groups[dst].zero_coordinates()
    return all(groups[dst].coordinates(gn(fn(x))) == zero for x in groups[src].generators)


def _cochain_level(model: CircleBundleModel, groups) -> bool:
    for a in groups["H2(X)"].generators:
        if not model.mu2(model.gamma(a)).is_zero():
            logger.info("mu2 after gamma is nonzero on a cochain")
            return False
    for y in groups["H1(Y)"].generators:
        try:
            model.primitive_of_delta_mu1(y)
        except CocycleError as exc:
            logger.info(f"delta after mu1 has no primitive: {exc.message}")
            return False
    return True


def _finite_check(model: CircleBundleModel, coefficient: CoefficientGroup) -> SequenceCheck:
    groups = _groups(model, coefficient)
    maps = _maps(model)
    matrices, image = {}, {}
    for name, (src, dst, fn) in maps.items():
        matrices[name] = induced_map_matrix(groups[src], groups[dst], fn)
        image[name] = subgroup_order(_columns(matrices[name]), groups[dst].torsion)
    exact_at = {}
    for f_name, g_name in zip(MAPS, MAPS[1:]):
        middle = maps[f_name][1]
        vanish = _composites_vanish(groups, maps[f_name], maps[g_name])
        exact_at[middle] = vanish and image[f_name] * image[g_name] == groups[middle].order()
    injective = {name: image[name] == groups[maps[name][0]].order() for name in MAPS}
    surjective = {name: image[name] == groups[maps[name][1]].order() for name in MAPS}
    return SequenceCheck(
        coefficient, groups, matrices, exact_at, injective, surjective, _cochain_level(model, groups)
    )


def _rational_check(model: CircleBundleModel) -> SequenceCheck:
    groups = _groups(model, Q)
    maps = _maps(model)
    matrices, rank = {}, {}
    for name, (src, dst, fn) in maps.items():
        matrices[name] = induced_map_matrix(groups[src], groups[dst], fn)
        rank[name] = _rank(matrices[name])
    dims = {name: groups[name].rational_rank for name in NODES}
    exact_at = {}
    for f_name, g_name in zip(MAPS, MAPS[1:]):
        middle = maps[f_name][1]
        vanish = _composites_vanish(groups, maps[f_name], maps[g_name])
        exact_at[middle] = vanish and rank[f_name] + rank[g_name] == dims[middle]
    injective = {name: rank[name] == dims[maps[name][0]] for name in MAPS}
    surjective = {name: rank[name] == dims[maps[name][1]] for name in MAPS}
    return SequenceCheck(Q, groups, matrices, exact_at, injective, surjective, _cochain_level(model, groups))


def five_term_sequence(
    model: CircleBundleModel,
    coefficient: CoefficientGroup,
    samples: Sequence[int] = DEFAULT_SAMPLES,
) -> FiveTermSequence:
    """
    Groups, maps and exactness verdicts of the five-term sequence.

    Args:
        model: the circle-bundle model
        coefficient: Z/m, Q, Q/Z or RCx
        samples: the N of the ℤ/N checks run for Q/Z and RCx

    Raises:
        ValueError: integer coefficients (use Z/m, Q/Z or RCx)
    """
    kind = coefficient.kind
    if kind is CoefficientKind.Z:
        raise ValueError("five-term sequence needs Z/m, Q, Q/Z or RCx coefficients")
    groups = _groups(model, coefficient)
    if kind is CoefficientKind.ZMOD:
        checks = (_finite_check(model, coefficient),)
    elif kind is CoefficientKind.Q:
        checks = (_rational_check(model),)
    else:
        finite = ordered_map(lambda n: _finite_check(model, CoefficientGroup.zmod(n)), sorted(set(samples)))
        checks = tuple(finite) + (_rational_check(model),)
    result = FiveTermSequence(model, coefficient, groups, checks)
    logger.info(
        f"five-term sequence over {coefficient} on {model.base.name or 'X'}: "
        f"{'exact' if result.exact else 'NOT exact'} ({len(checks)} checks)"
    )
    return result
