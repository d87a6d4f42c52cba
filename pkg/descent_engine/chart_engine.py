"""
Microdifferential chart algebras.

An element is a ScaledOperator: a central ℂ^× factor written as an RCx
value (t, u) ↦ e^{2πit}·e^{u} times a microdifferential operator with
Gaussian-rational symbol coefficients. Fourth roots of unity are exact in
both components, so the canonical form moves them into the operator and
keeps t in [0, 1/4).
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from data_models import VerificationStatus
from descent_engine.base import AlgebraEngine
from exceptions import NotInvertibleError, ZeroOperatorError
from homology.coefficients import RCxValue
from microdiff import (
    DEFAULT_WINDOW, MicrodiffOperator, compare_on_window, constant, coordinate,
    derivation, formal_inverse, identity, is_invertible, leibniz_product,
    principal_symbol, sector_shift_generator,
)
from symcore import ExactScalar, I_UNIT, ONE, parse_rational

logger = logging.getLogger(__name__)

_QUARTER_TURNS = (ONE, I_UNIT, ExactScalar(-1), ExactScalar(0, -1))


@dataclass(frozen=True)
class ScaledOperator:
    """e^{2πit + u} · op, kept in canonical form."""
    scalar: RCxValue
    op: MicrodiffOperator

    def __post_init__(self):
        scalar = self.scalar if isinstance(self.scalar, RCxValue) else RCxValue(*self.scalar)
        turns = math.floor(scalar.t * 4)
        op = self.op
        if turns:
            scalar = RCxValue(scalar.t - Fraction(turns, 4), scalar.u)
            op = op.scaled(_QUARTER_TURNS[turns])
        object.__setattr__(self, "scalar", scalar)
        object.__setattr__(self, "op", op)

    @property
    def sector(self) -> Fraction:
        return self.op.sector

    def to_json(self) -> Dict:
        return {"scalar": self.scalar.to_json(), "op": self.op.to_json()}

    def pretty(self) -> str:
        if self.scalar.is_zero():
            return self.op.pretty()
        return f"exp(2πi·{self.scalar.t} + {self.scalar.u})·({self.op.pretty()})"


class ChartAlgebraEngine(AlgebraEngine):
    """
    Operators on one chart of dimension `nvars`, known to `window` levels.

    Morphism equality is decided on x_1..x_n, ∂_1..∂_n and ∂₁⁻¹; a product
    of truncated operators is known only to the smaller window, so equality
    can come back INDETERMINATE.
    """

    def __init__(self, nvars: int = 2, window: int = DEFAULT_WINDOW, name: Optional[str] = None):
        if nvars < 1:
            raise ValueError(f"chart needs nvars >= 1, got {nvars}")
        if window < 1:
            raise ValueError(f"window must be >= 1, got {window}")
        super().__init__(name or f"E on a {nvars}-dimensional chart")
        self.nvars = nvars
        self.window = window

    def wrap(self, op: MicrodiffOperator, scalar: Optional[RCxValue] = None) -> ScaledOperator:
        return ScaledOperator(scalar or RCxValue(), op)

    def one(self) -> ScaledOperator:
        return self.wrap(identity(self.nvars, self.window))

    def mul(self, a: ScaledOperator, b: ScaledOperator) -> ScaledOperator:
        return ScaledOperator(a.scalar + b.scalar, leibniz_product(a.op, b.op))

    def inverse(self, a: ScaledOperator) -> ScaledOperator:
        if a.op.is_zero():
            raise NotInvertibleError("the zero operator is not invertible")
        return ScaledOperator(-a.scalar, formal_inverse(a.op))

    def is_unit(self, a: ScaledOperator) -> bool:
        """Invertible with integer order, i.e. a unit of the chart algebra itself."""
        try:
            return is_invertible(a.op) and a.op.sector == 0
        except ZeroOperatorError:
            return False

    def equal(self, a: ScaledOperator, b: ScaledOperator, window: Optional[int] = None) -> VerificationStatus:
        if a.scalar != b.scalar:
            # Roots of unity beyond ±1, ±i and e^u with u ≠ 0 lie outside ℚ(i).
            if a.op.is_zero() and b.op.is_zero():
                return VerificationStatus.TRUE
            return VerificationStatus.FALSE
        return compare_on_window(a.op, b.op, self.window if window is None else window)

    def generators(self) -> List[ScaledOperator]:
        n, w = self.nvars, self.window
        gens = [coordinate(i, n, w) for i in range(1, n + 1)]
        gens += [derivation(i, n, w) for i in range(1, n + 1)]
        gens.append(sector_shift_generator(-1, n, w))
        return [self.wrap(g) for g in gens]

    def scalar(self, value: Any) -> ScaledOperator:
        if isinstance(value, RCxValue):
            return self.wrap(identity(self.nvars, self.window), value)
        return self.wrap(constant(value, self.nvars, self.window))

    def scalar_ratio(self, a: ScaledOperator, b: ScaledOperator) -> Optional[ScaledOperator]:
        if a.op.is_zero() or b.op.is_zero():
            return None
        deg_a, sigma_a = principal_symbol(a.op)
        deg_b, sigma_b = principal_symbol(b.op)
        if deg_a != deg_b:
            return None
        lead = sigma_b.terms[0]
        match = next((t for t in sigma_a.terms if t.key == lead.key), None)
        if match is None:
            return None
        ratio = ScaledOperator(a.scalar - b.scalar, constant(match.coeff / lead.coeff, self.nvars, self.window))
        if self.equal(a, self.mul(ratio, b)) is VerificationStatus.FALSE:
            return None
        return ratio

    # ----- sector shifts -------------------------------------------------

    def sector_shift(self, lam: Fraction, a: ScaledOperator) -> ScaledOperator:
        """∂₁^λ·a·∂₁^{−λ}, both factors exact monomials."""
        lam = parse_rational(lam)
        if lam == 0:
            return a
        left = sector_shift_generator(lam, self.nvars, self.window)
        right = sector_shift_generator(-lam, self.nvars, self.window)
        return ScaledOperator(a.scalar, leibniz_product(leibniz_product(left, a.op), right))

    def shift_unit(self, n: Any) -> ScaledOperator:
        return self.wrap(sector_shift_generator(n, self.nvars, self.window))

    def shift_exponent(self, a: ScaledOperator) -> Optional[Fraction]:
        terms = a.op.symbol.terms
        if len(terms) != 1:
            return None
        term = terms[0]
        if any(term.xexp) or any(term.xiexp):
            return None
        return term.xi1exp

    def pure_shift(self, a: ScaledOperator) -> Optional[Tuple[Fraction, RCxValue]]:
        """(μ, s) when a = e^{2πit+u}·∂₁^μ exactly, with the full ℂ^× factor s; else None."""
        mu = self.shift_exponent(a)
        if mu is None:
            return None
        coeff = a.op.symbol.terms[0].coeff
        if coeff not in _QUARTER_TURNS:
            return None
        return mu, a.scalar + RCxValue(Fraction(_QUARTER_TURNS.index(coeff), 4))

    # ----- JSON ------------------------------------------------------------

    def element_to_json(self, a: ScaledOperator) -> Dict:
        return a.to_json()

    def element_from_json(self, raw: Any) -> ScaledOperator:
        """Accepts {"scalar": [t, u], "op": operator} or a bare operator."""
        if not isinstance(raw, dict):
            raise ValueError("chart elements are JSON objects")
        if "op" in raw:
            scalar = raw.get("scalar", ["0", "0"])
            op = MicrodiffOperator.from_json(raw["op"])
            value = RCxValue(parse_rational(scalar[0]), parse_rational(scalar[1]))
        else:
            op = MicrodiffOperator.from_json(raw)
            value = RCxValue()
        if op.nvars != self.nvars:
            raise ValueError(f"operator on {op.nvars} variables in a {self.nvars}-variable chart")
        return ScaledOperator(value, op)

    def descriptor(self) -> Dict:
        return {"kind": "chart", "nvars": self.nvars, "window": self.window}
