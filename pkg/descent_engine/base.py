"""
Base Algebra Engine Abstract Class.

This defines the interface every local algebra A_i must implement. An
engine owns element arithmetic and equality; it knows nothing about
covers, cocycles or classification.

RESPONSIBILITIES:
- Multiply, invert and compare elements
- Supply the generators on which morphism equality is decided
- Recognise central scalars and ratios of elements by them

NOT RESPONSIBLE FOR:
- Descent identities (see descent_engine.verifier)
- Building descent data (see descent_engine.builders)
"""

from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from data_models import VerificationStatus


class AlgebraEngine(ABC):
    """
    Abstract base class for local algebras.

    Elements are opaque to callers; only the engine that produced them may
    combine them.
    """

    def __init__(self, name: str):
        self.name = name

    # ----- arithmetic ------------------------------------------------------

    @abstractmethod
    def one(self) -> Any:
        pass

    @abstractmethod
    def mul(self, a: Any, b: Any) -> Any:
        pass

    @abstractmethod
    def inverse(self, a: Any) -> Any:
        """Two-sided inverse; raises NotInvertibleError."""
        pass

    @abstractmethod
    def is_unit(self, a: Any) -> bool:
        pass

    @abstractmethod
    def equal(self, a: Any, b: Any, window: Optional[int] = None) -> VerificationStatus:
        """
        Three-valued equality.

        Exact engines answer TRUE or FALSE; truncated engines answer
        INDETERMINATE when fewer than `window` levels are known.
        """
        pass

    @abstractmethod
    def generators(self) -> List[Any]:
        """Elements on which two morphisms out of this algebra are compared."""
        pass

    @abstractmethod
    def scalar(self, value: Any) -> Any:
        """The central element for a scalar (rational, ExactScalar or RCxValue)."""
        pass

    @abstractmethod
    def scalar_ratio(self, a: Any, b: Any) -> Optional[Any]:
        """A central scalar ρ with a = ρ·b, or None."""
        pass

    @abstractmethod
    def element_to_json(self, a: Any) -> Any:
        pass

    @abstractmethod
    def element_from_json(self, raw: Any) -> Any:
        pass

    @abstractmethod
    def descriptor(self) -> Dict:
        """JSON description; equal descriptors mean interchangeable engines."""
        pass

    # ----- morphism hooks --------------------------------------------------

    def sector_shift(self, lam: Fraction, a: Any) -> Any:
        """ad(∂₁^λ)(a); only chart algebras carry a ∂₁."""
        raise ValueError(f"{self.name} has no sector shifts")

    def shift_unit(self, n: int) -> Any:
        """∂₁^n as an element."""
        raise ValueError(f"{self.name} has no ∂₁")

    def shift_exponent(self, a: Any) -> Optional[Fraction]:
        """μ when ad(a) = ad(∂₁^μ), else None."""
        return None

    def linear_map(self, images: Sequence[Any], a: Any) -> Any:
        """Apply the linear map sending basis vector j to images[j]."""
        raise ValueError(f"{self.name} has no basis for table maps")

    # ----- derived ---------------------------------------------------------

    def product(self, *items: Any) -> Any:
        result = self.one()
        for x in items:
            result = self.mul(result, x)
        return result

    def conjugate(self, u: Any, a: Any) -> Any:
        """ad(u)(a) = u·a·u⁻¹."""
        return self.mul(self.mul(u, a), self.inverse(u))

    def compatible(self, other: "AlgebraEngine") -> bool:
        return self.descriptor() == other.descriptor()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name})"
