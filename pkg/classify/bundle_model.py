"""
Combinatorial circle-bundle models.

A bundle γ: Y → X is given by its base nerve X and an integer Euler
2-cocycle e. Cochains on Y are modelled by the mapping cone

    C^n(Y) = C^n(X) ⊕ C^{n-1}(X),    D(a, b) = (da + e⌣b, −db)

whose first summand is the base component and second the fiber component.
The short exact sequence C(X) → C(Y) → C(X)[−1] has connecting map e⌣(·);
for e = 0 the cone computes the same groups as C(X) ⊗ C(S¹).
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from exceptions import CocycleError
from homology.coefficients import CoefficientGroup, CoefficientKind, Z
from homology.cohomology import AbelianGroupPresentation, cohomology
from homology.complexes import Cochain, CochainComplex, coboundary, nerve_complex
from homology.nerve import CoverNerve, circle
from homology.products import cup_product, tensor_total_complex

logger = logging.getLogger(__name__)

BASE = "base"
FIBER = "fiber"


@dataclass(frozen=True)
class CircleBundleModel:
    """Base nerve plus Euler cocycle; the cone complex is built once."""
    base: CoverNerve
    euler: Cochain
    _total: CochainComplex = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        e = self.euler
        if e.coefficient.kind is not CoefficientKind.Z or e.degree != 2:
            raise ValueError(f"Euler class must be an integer 2-cochain, got degree {e.degree} over {e.coefficient}")
        if e.complex.bases != self.base_complex().bases:
            raise ValueError("Euler cochain does not live on the base nerve")
        d = coboundary(e)
        for label, value in zip(e.complex.basis(3), d.values):
            if value != 0:
                raise CocycleError("Euler cochain is not a cocycle", label)
        object.__setattr__(self, "_total", self._cone())

    # ----- constructors ------------------------------------------------

    @classmethod
    def trivial(cls, base: CoverNerve) -> "CircleBundleModel":
        """The product bundle X × S¹."""
        return cls(base, Cochain.zero(nerve_complex(base), 2, Z))

    @classmethod
    def with_generator(cls, base: CoverNerve, sign: int = 1) -> "CircleBundleModel":
        """
        e = sign·(first free generator of H²(X; ℤ)).

        Raises:
            ValueError: H²(X; ℤ) has no free summand
        """
        pres = cohomology(base, Z, 2)
        if not pres.free_rank:
            raise ValueError(f"H2({base.name or 'X'}; Z) has no free generator")
        generator = pres.generators[len(pres.torsion)]
        euler = Cochain(nerve_complex(base), 2, generator.values, Z).times(sign)
        return cls(base, euler)

    # ----- complexes -----------------------------------------------------

    def base_complex(self, coefficient: Optional[CoefficientGroup] = None) -> CochainComplex:
        return nerve_complex(self.base, coefficient)

    def total_complex(self, coefficient: Optional[CoefficientGroup] = None) -> CochainComplex:
        if coefficient is None:
            return self._total
        return self._total.with_coefficient(coefficient)

    @property
    def is_trivial(self) -> bool:
        return self.euler.is_zero()

    def _cone(self) -> CochainComplex:
        X = self.base
        top = X.dimension + 1
        bases = tuple(
            tuple((BASE, s) for s in X.simplices(n)) + tuple((FIBER, s) for s in X.simplices(n - 1))
            for n in range(top + 1)
        )
        differentials = []
        for n in range(top):
            offset = X.count(n)  # fiber columns of C^n(Y) start here
            rows = []
            for sigma in X.simplices(n + 1):
                row = [(X.index(sigma[:i] + sigma[i + 1:]), -1 if i % 2 else 1) for i in range(len(sigma))]
                if len(sigma) >= 3:
                    weight = self.euler.value(sigma[:3])
                    if weight:
                        row.append((offset + X.index(sigma[2:]), weight))
                rows.append(tuple(row))
            for tau in X.simplices(n):
                if n == 0:
                    rows.append(())
                    continue
                rows.append(tuple(
                    (offset + X.index(tau[:i] + tau[i + 1:]), 1 if i % 2 else -1) for i in range(len(tau))
                ))
            differentials.append(tuple(rows))
        name = f"cone({X.name or 'X'})"
        logger.debug(f"{name}: ranks {[len(b) for b in bases]}, euler support {sum(1 for v in self.euler.values if v)}")
        return CochainComplex(bases, tuple(differentials), Z, name)

    # ----- components ----------------------------------------------------

    def join(self, base_part: Cochain, fiber_part: Cochain) -> Cochain:
        """The cochain (a, b) on Y from a ∈ C^n(X) and b ∈ C^{n-1}(X)."""
        if base_part.coefficient != fiber_part.coefficient:
            raise ValueError(f"components over {base_part.coefficient} and {fiber_part.coefficient}")
        if fiber_part.degree != base_part.degree - 1:
            raise ValueError(f"fiber component has degree {fiber_part.degree}, expected {base_part.degree - 1}")
        group = base_part.coefficient
        return Cochain(self.total_complex(group), base_part.degree, base_part.values + fiber_part.values, group)

    def split(self, y: Cochain) -> Tuple[Cochain, Cochain]:
        """(base component, fiber component) of a cochain on Y."""
        n, group = y.degree, y.coefficient
        cut = self.base.count(n)
        complex = self.base_complex(group)
        base_values = y.values[:cut]
        fiber_values = y.values[cut:]
        fiber_degree = n - 1
        if fiber_degree < 0:
            return Cochain(complex, n, base_values, group), _empty(complex, group)
        return Cochain(complex, n, base_values, group), Cochain(complex, fiber_degree, fiber_values, group)

    def zero(self, degree: int, coefficient: CoefficientGroup) -> Cochain:
        return Cochain.zero(self.total_complex(coefficient), degree, coefficient)

    # ----- the four maps of the five-term sequence ------------------------

    def mu1(self, y: Cochain) -> Cochain:
        """H¹(Y) → H⁰(X): the fiber component (the monodromy along the fiber)."""
        return self.split(y)[1]

    def delta(self, b: Cochain) -> Cochain:
        """H⁰(X) → H²(X): e⌣b."""
        return cup_product(self.euler, b)

    def gamma(self, a: Cochain) -> Cochain:
        """H²(X) → H²(Y): inclusion as the base component."""
        return self.join(a, Cochain.zero(self.base_complex(a.coefficient), a.degree - 1, a.coefficient))

    def mu2(self, y: Cochain) -> Cochain:
        """H²(Y) → H¹(X): the fiber component."""
        return self.split(y)[1]

    def primitive_of_delta_mu1(self, y: Cochain) -> Cochain:
        """
        For a 1-cocycle y = (a, b) on Y, the cochain −a with d(−a) = e⌣b.

        Raises:
            CocycleError: y is not a cocycle or −a fails to bound e⌣b
        """
        d = coboundary(y)
        if not d.is_zero():
            raise CocycleError("class representative is not a cocycle")
        a, b = self.split(y)
        primitive = -a
        if coboundary(primitive).values != self.delta(b).values:
            raise CocycleError("d(-a) differs from e⌣b")
        return primitive

    # ----- comparison model ------------------------------------------------

    def kunneth_complex(self) -> CochainComplex:
        """C(X) ⊗ C(S¹), the product model."""
        return tensor_total_complex(self.base_complex(), nerve_complex(circle()))

    def compare_with_kunneth(self, coefficient: CoefficientGroup, top: int = 2) -> Dict[int, bool]:
        """
        Whether the cone and the product model have isomorphic H^k for k ≤ top.

        Only meaningful for the product bundle.
        """
        if not self.is_trivial:
            raise ValueError("the product model describes the trivial bundle only")
        product = self.kunneth_complex()
        out = {}
        for k in range(top + 1):
            cone_k = _shape(cohomology(self.total_complex(), coefficient, k))
            product_k = _shape(cohomology(product, coefficient, k))
            out[k] = cone_k == product_k
        return out

    def to_json(self) -> Dict:
        return {
            "kind": "bundle_model",
            "base": self.base.to_json(),
            "euler": [
                {"simplex": list(s), "value": int(v)}
                for s, v in zip(self.base.simplices(2), self.euler.values) if v
            ],
        }


def _empty(complex: CochainComplex, group: CoefficientGroup) -> Cochain:
    return Cochain(complex, -1, (), group)


def _shape(pres: AbelianGroupPresentation) -> Tuple:
    return (pres.free_rank, pres.torsion, pres.circle_rank, pres.rational_rank)
