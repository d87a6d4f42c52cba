"""
Coefficient groups for Čech cochains.

Supported: ℤ, ℤ/m, ℚ, ℚ/ℤ and RCx = ℚ/ℤ ⊕ ℚ. An RCx value (t, u) stands
for e^{2πit}·e^{u} ∈ ℂ^×; the group law of ℂ^× becomes componentwise
addition. Cochain arithmetic is written additively for every group.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Optional

from symcore import format_rational, frac_part, parse_rational


class CoefficientKind(Enum):
    Z = "Z"
    ZMOD = "Z/m"
    Q = "Q"
    QMODZ = "Q/Z"
    RCX = "RCx"


@dataclass(frozen=True)
class RCxValue:
    """(t, u) ↦ e^{2πit}·e^{u}; t is kept in [0, 1)."""
    t: Fraction = Fraction(0)
    u: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "t", frac_part(parse_rational(self.t)))
        object.__setattr__(self, "u", parse_rational(self.u))

    def __add__(self, other: "RCxValue") -> "RCxValue":
        return RCxValue(self.t + other.t, self.u + other.u)

    def __neg__(self) -> "RCxValue":
        return RCxValue(-self.t, -self.u)

    def __sub__(self, other: "RCxValue") -> "RCxValue":
        return self + (-other)

    def times(self, n: int) -> "RCxValue":
        return RCxValue(self.t * n, self.u * n)

    def is_zero(self) -> bool:
        return self.t == 0 and self.u == 0

    def to_json(self):
        return [format_rational(self.t), format_rational(self.u)]


@dataclass(frozen=True)
class CoefficientGroup:
    """Tagged abelian coefficient group."""
    kind: CoefficientKind
    modulus: Optional[int] = None

    def __post_init__(self):
        if self.kind is CoefficientKind.ZMOD:
            if self.modulus is None or self.modulus < 2:
                raise ValueError(f"Z/m needs m >= 2, got {self.modulus}")
        elif self.modulus is not None:
            raise ValueError(f"{self.kind.value} takes no modulus")

    # ----- constructors ------------------------------------------------

    @classmethod
    def integers(cls) -> "CoefficientGroup":
        return cls(CoefficientKind.Z)

    @classmethod
    def zmod(cls, m: int) -> "CoefficientGroup":
        return cls(CoefficientKind.ZMOD, int(m))

    @classmethod
    def rationals(cls) -> "CoefficientGroup":
        return cls(CoefficientKind.Q)

    @classmethod
    def qmodz(cls) -> "CoefficientGroup":
        return cls(CoefficientKind.QMODZ)

    @classmethod
    def rcx(cls) -> "CoefficientGroup":
        return cls(CoefficientKind.RCX)

    @classmethod
    def parse(cls, text: str) -> "CoefficientGroup":
        """Parse "Z", "Z/m", "Q", "Q/Z" or "RCx"."""
        key = text.strip()
        lowered = key.lower()
        if lowered == "z":
            return cls.integers()
        if lowered == "q":
            return cls.rationals()
        if lowered in ("q/z", "qmodz"):
            return cls.qmodz()
        if lowered in ("rcx", "c*", "cx"):
            return cls.rcx()
        if lowered.startswith("z/"):
            try:
                return cls.zmod(int(key[2:]))
            except ValueError:
                pass
        raise ValueError(f"Unknown coefficient group: {text}")

    @property
    def label(self) -> str:
        if self.kind is CoefficientKind.ZMOD:
            return f"Z/{self.modulus}"
        return self.kind.value

    def __str__(self) -> str:
        return self.label

    # ----- value arithmetic ----------------------------------------------

    @property
    def is_integral(self) -> bool:
        return self.kind in (CoefficientKind.Z, CoefficientKind.ZMOD)

    def zero(self) -> Any:
        if self.kind is CoefficientKind.RCX:
            return RCxValue()
        if self.kind in (CoefficientKind.Q, CoefficientKind.QMODZ):
            return Fraction(0)
        return 0

    def normalize(self, value: Any) -> Any:
        """Canonical representative of a value in this group."""
        kind = self.kind
        if kind is CoefficientKind.Z:
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise ValueError(f"{value} is not an integer")
                return value.numerator
            return int(value)
        if kind is CoefficientKind.ZMOD:
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise ValueError(f"{value} is not an integer")
                value = value.numerator
            return int(value) % self.modulus
        if kind is CoefficientKind.Q:
            return parse_rational(value)
        if kind is CoefficientKind.QMODZ:
            return frac_part(parse_rational(value))
        if isinstance(value, RCxValue):
            return value
        t, u = value
        return RCxValue(parse_rational(t), parse_rational(u))

    def add(self, a: Any, b: Any) -> Any:
        return self.normalize(a + b)

    def neg(self, a: Any) -> Any:
        return self.normalize(-a)

    def times(self, a: Any, n: int) -> Any:
        """Integer multiple n·a."""
        if self.kind is CoefficientKind.RCX:
            return a.times(n)
        return self.normalize(a * n)

    def is_zero(self, a: Any) -> bool:
        if self.kind is CoefficientKind.RCX:
            return a.is_zero()
        return self.normalize(a) == 0

    # ----- JSON ------------------------------------------------------------

    def to_json(self, value: Any) -> Any:
        if self.kind is CoefficientKind.RCX:
            return value.to_json()
        if self.kind in (CoefficientKind.Q, CoefficientKind.QMODZ):
            return format_rational(value)
        return int(value)

    def from_json(self, raw: Any) -> Any:
        if self.kind is CoefficientKind.RCX:
            if not isinstance(raw, (list, tuple)) or len(raw) != 2:
                raise ValueError("RCx values are written [t, u]")
            return RCxValue(parse_rational(raw[0]), parse_rational(raw[1]))
        if self.kind in (CoefficientKind.Q, CoefficientKind.QMODZ):
            return self.normalize(parse_rational(raw))
        if isinstance(raw, str):
            raw = parse_rational(raw)
        return self.normalize(raw)


Z = CoefficientGroup.integers()
Q = CoefficientGroup.rationals()
QMODZ = CoefficientGroup.qmodz()
RCX = CoefficientGroup.rcx()
