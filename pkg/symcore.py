"""
Exact Scalars and Graded Symbols.

Representation layer for total symbols of microdifferential operators on a
chart where ∂₁ is invertible:

    tot(P) = p_λ + p_{λ-1} + ... + p_{λ-W+1}

Each component p_{λ-j} is a finite sum of monomials

    c · x^a · ξ₁^s · ξ₂^{b₂} ··· ξ_n^{b_n}

with c a Gaussian rational, a and b non-negative integers and s rational
(Laurent, possibly fractional). The ξ-degree of a monomial is s + Σ b.

CRITICAL PRINCIPLES:
═══════════════════
1. No floating point anywhere. Coefficients are pairs of Fractions.
2. A symbol is canonical on construction: like terms merged, zeros
   dropped, monomials sorted, terms below the window truncated.
3. One ξ₁-sector per symbol: every ξ₁ exponent is ≡ order (mod 1).
4. Values are immutable and may be shared freely between threads.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from exceptions import NvarsMismatchError, SectorMismatchError, WindowError

logger = logging.getLogger(__name__)

RationalLike = Union[int, Fraction, str]


# =============================================================================
# RATIONALS
# =============================================================================

def parse_rational(value: RationalLike) -> Fraction:
    """
    Parse an exact rational.

    Accepts ints, Fractions and decimal-free strings "p/q" or "p".
    Floats are rejected so exactness survives every boundary.
    """
    if isinstance(value, bool):
        raise ValueError(f"Not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or "." in text or "e" in text.lower():
            raise ValueError(f"Rational must be written as p/q: {value!r}")
        return Fraction(text)
    raise ValueError(f"Not a rational: {value!r}")


def format_rational(value: Fraction) -> str:
    """Serialize a rational as the string "p/q" (denominator always present)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def frac_part(value: Fraction) -> Fraction:
    """Canonical representative of value mod 1 in [0, 1)."""
    value = Fraction(value)
    return value - math.floor(value)


def _pretty_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# =============================================================================
# EXACT SCALARS
# =============================================================================

@dataclass(frozen=True)
class ExactScalar:
    """Gaussian rational re + im·i."""
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", parse_rational(self.re))
        object.__setattr__(self, "im", parse_rational(self.im))

    @classmethod
    def of(cls, value: Union["ExactScalar", RationalLike]) -> "ExactScalar":
        if isinstance(value, ExactScalar):
            return value
        return cls(parse_rational(value), Fraction(0))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other) -> "ExactScalar":
        other = ExactScalar.of(other)
        return ExactScalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(-self.re, -self.im)

    def __sub__(self, other) -> "ExactScalar":
        return self + (-ExactScalar.of(other))

    def __rsub__(self, other) -> "ExactScalar":
        return ExactScalar.of(other) - self

    def __mul__(self, other) -> "ExactScalar":
        other = ExactScalar.of(other)
        return ExactScalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "ExactScalar":
        return ExactScalar(self.re, -self.im)

    def inverse(self) -> "ExactScalar":
        norm = self.re * self.re + self.im * self.im
        if norm == 0:
            raise ZeroDivisionError("ExactScalar division by zero")
        return ExactScalar(self.re / norm, -self.im / norm)

    def __truediv__(self, other) -> "ExactScalar":
        return self * ExactScalar.of(other).inverse()

    def to_json(self) -> List[str]:
        return [format_rational(self.re), format_rational(self.im)]

    @classmethod
    def from_json(cls, pair: Sequence[RationalLike]) -> "ExactScalar":
        if len(pair) != 2:
            raise ValueError("ExactScalar JSON must be [re, im]")
        return cls(parse_rational(pair[0]), parse_rational(pair[1]))

    def __str__(self) -> str:
        if self.im == 0:
            return _pretty_rational(self.re)
        imag = "i" if self.im == 1 else "-i" if self.im == -1 else f"{_pretty_rational(self.im)}i"
        if self.re == 0:
            return imag
        sign = "" if imag.startswith("-") else "+"
        return f"({_pretty_rational(self.re)}{sign}{imag})"


ZERO = ExactScalar(0, 0)
ONE = ExactScalar(1, 0)
I_UNIT = ExactScalar(0, 1)


# =============================================================================
# MONOMIALS
# =============================================================================

ExponentKey = Tuple[Tuple[int, ...], Fraction, Tuple[int, ...]]


@dataclass(frozen=True)
class Monomial:
    """c · x^xexp · ξ₁^xi1exp · ξ₂..ξ_n^xiexp."""
    coeff: ExactScalar
    xexp: Tuple[int, ...]
    xi1exp: Fraction
    xiexp: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeff", ExactScalar.of(self.coeff))
        object.__setattr__(self, "xexp", tuple(int(a) for a in self.xexp))
        object.__setattr__(self, "xi1exp", parse_rational(self.xi1exp))
        object.__setattr__(self, "xiexp", tuple(int(b) for b in self.xiexp))
        if len(self.xiexp) != len(self.xexp) - 1:
            raise ValueError(
                f"Monomial needs n x-exponents and n-1 ξ-exponents, got "
                f"{len(self.xexp)} and {len(self.xiexp)}"
            )
        if any(a < 0 for a in self.xexp) or any(b < 0 for b in self.xiexp):
            raise ValueError("x and ξ₂..ξ_n exponents must be non-negative")

    @property
    def nvars(self) -> int:
        return len(self.xexp)

    @property
    def degree(self) -> Fraction:
        """Homogeneity degree in ξ."""
        return self.xi1exp + sum(self.xiexp)

    @property
    def key(self) -> ExponentKey:
        return (self.xexp, self.xi1exp, self.xiexp)

    def with_coeff(self, coeff: ExactScalar) -> "Monomial":
        return Monomial(coeff, self.xexp, self.xi1exp, self.xiexp)

    def times(self, other: "Monomial") -> "Monomial":
        """Commutative product of symbols (not of operators)."""
        return Monomial(
            self.coeff * other.coeff,
            tuple(a + b for a, b in zip(self.xexp, other.xexp)),
            self.xi1exp + other.xi1exp,
            tuple(a + b for a, b in zip(self.xiexp, other.xiexp)),
        )

    def to_json(self) -> Dict:
        return {
            "coeff": self.coeff.to_json(),
            "x": list(self.xexp),
            "xi1": format_rational(self.xi1exp),
            "xi": list(self.xiexp),
        }

    @classmethod
    def from_json(cls, data: Dict) -> "Monomial":
        return cls(
            ExactScalar.from_json(data["coeff"]),
            tuple(data["x"]),
            parse_rational(data["xi1"]),
            tuple(data.get("xi", ())),
        )

    def pretty(self) -> str:
        factors = []
        for idx, a in enumerate(self.xexp, start=1):
            if a:
                factors.append(f"x{idx}" if a == 1 else f"x{idx}^{a}")
        if self.xi1exp != 0:
            s = self.xi1exp
            if s == 1:
                factors.append("xi1")
            elif s.denominator == 1:
                factors.append(f"xi1^{s.numerator}")
            else:
                factors.append(f"xi1^({s.numerator}/{s.denominator})")
        for idx, b in enumerate(self.xiexp, start=2):
            if b:
                factors.append(f"xi{idx}" if b == 1 else f"xi{idx}^{b}")
        coeff = str(self.coeff)
        if not factors:
            return coeff
        if self.coeff == ONE:
            return "*".join(factors)
        if self.coeff == -ONE:
            return "-" + "*".join(factors)
        return coeff + "*" + "*".join(factors)


def _monomial_sort_key(m: Monomial):
    return (-m.degree, m.xexp, m.xi1exp, m.xiexp)


# =============================================================================
# GRADED SYMBOLS
# =============================================================================

@dataclass(frozen=True)
class GradedSymbol:
    """
    Truncated total symbol.

    Known on the degrees order, order-1, ..., order-window+1; everything
    above `order` is zero, everything at or below `order - window` is
    unknown (truncated).
    """
    nvars: int
    order: Fraction
    window: int
    terms: Tuple[Monomial, ...] = ()

    def __post_init__(self):
        if self.nvars < 1:
            raise ValueError("nvars must be at least 1")
        if int(self.window) < 1:
            raise WindowError("window must be a positive integer", requested=self.window)
        object.__setattr__(self, "order", parse_rational(self.order))
        object.__setattr__(self, "window", int(self.window))
        object.__setattr__(self, "terms", _canonical_terms(self.nvars, self.order, self.window, self.terms))

    # ----- basic queries -------------------------------------------------

    @property
    def sector(self) -> Fraction:
        """The ξ₁-sector, order mod 1 in [0, 1)."""
        return frac_part(self.order)

    @property
    def floor(self) -> Fraction:
        """Largest degree that is NOT known (exclusive lower end of the window)."""
        return self.order - self.window

    def degrees(self) -> List[Fraction]:
        return [self.order - j for j in range(self.window)]

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def components(self) -> Dict[Fraction, Tuple[Monomial, ...]]:
        """Nonzero homogeneous components keyed by degree, top degree first."""
        grouped: Dict[Fraction, List[Monomial]] = {}
        for term in self.terms:
            grouped.setdefault(term.degree, []).append(term)
        return {degree: tuple(monos) for degree, monos in grouped.items()}

    def top_degree(self) -> Optional[Fraction]:
        """Degree of the highest nonzero component, None for the zero symbol."""
        return self.terms[0].degree if self.terms else None

    def component(self, degree: RationalLike) -> "GradedSymbol":
        """The degree-`degree` homogeneous part as a one-level symbol."""
        degree = parse_rational(degree)
        offset = self.order - degree
        if offset.denominator != 1 or not (0 <= offset < self.window):
            raise WindowError(
                f"degree {degree} is outside the known window "
                f"({self.floor}, {self.order}]",
                requested=degree,
                available=(self.floor, self.order),
            )
        return GradedSymbol(
            self.nvars, degree, 1, tuple(t for t in self.terms if t.degree == degree)
        )

    def canonicalize(self) -> "GradedSymbol":
        return GradedSymbol(self.nvars, self.order, self.window, self.terms)

    # ----- arithmetic (delegates to module functions) ----------------------

    def __add__(self, other: "GradedSymbol") -> "GradedSymbol":
        return add(self, other)

    def __sub__(self, other: "GradedSymbol") -> "GradedSymbol":
        return add(self, neg(other))

    def __neg__(self) -> "GradedSymbol":
        return neg(self)

    # ----- serialization -----------------------------------------------

    def to_json(self) -> Dict:
        return {
            "nvars": self.nvars,
            "order": format_rational(self.order),
            "window": self.window,
            "terms": [t.to_json() for t in self.terms],
        }

    @classmethod
    def from_json(cls, data: Dict) -> "GradedSymbol":
        return cls(
            int(data["nvars"]),
            parse_rational(data["order"]),
            int(data["window"]),
            tuple(Monomial.from_json(t) for t in data.get("terms", ())),
        )

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        text = " + ".join(t.pretty() for t in self.terms)
        return text.replace("+ -", "- ")


def _canonical_terms(
    nvars: int,
    order: Fraction,
    window: int,
    terms: Iterable[Monomial],
) -> Tuple[Monomial, ...]:
    merged: Dict[ExponentKey, ExactScalar] = {}
    for term in terms:
        if term.nvars != nvars:
            raise NvarsMismatchError(nvars, term.nvars)
        offset = order - term.degree
        if offset.denominator != 1:
            raise SectorMismatchError(frac_part(order), frac_part(term.degree))
        if offset < 0:
            raise WindowError(
                f"monomial of degree {term.degree} exceeds order {order}",
                requested=term.degree,
                available=order,
            )
        if offset >= window:
            continue  # truncated
        merged[term.key] = merged.get(term.key, ZERO) + term.coeff
    monomials = [
        Monomial(coeff, key[0], key[1], key[2])
        for key, coeff in merged.items()
        if not coeff.is_zero()
    ]
    monomials.sort(key=_monomial_sort_key)
    return tuple(monomials)


# =============================================================================
# CONSTRUCTORS
# =============================================================================

def zero(nvars: int, order: RationalLike = 0, window: int = 1) -> GradedSymbol:
    return GradedSymbol(nvars, parse_rational(order), window, ())


def zero_like(s: GradedSymbol) -> GradedSymbol:
    return GradedSymbol(s.nvars, s.order, s.window, ())


def monomial(
    nvars: int,
    coeff: Union[ExactScalar, RationalLike] = 1,
    x: Sequence[int] = (),
    xi1: RationalLike = 0,
    xi: Sequence[int] = (),
) -> Monomial:
    """Monomial with missing exponents padded by zeros."""
    xexp = tuple(x) + (0,) * (nvars - len(x))
    xiexp = tuple(xi) + (0,) * (nvars - 1 - len(xi))
    return Monomial(ExactScalar.of(coeff), xexp, parse_rational(xi1), xiexp)


def symbol_from_terms(
    nvars: int,
    terms: Sequence[Monomial],
    window: int,
    order: Optional[RationalLike] = None,
) -> GradedSymbol:
    """Build a symbol; order defaults to the highest degree present."""
    if order is None:
        if not terms:
            order = Fraction(0)
        else:
            order = max(t.degree for t in terms)
    return GradedSymbol(nvars, parse_rational(order), window, tuple(terms))


# =============================================================================
# OPERATIONS
# =============================================================================

def _check_compatible(p: GradedSymbol, q: GradedSymbol) -> None:
    if p.nvars != q.nvars:
        raise NvarsMismatchError(p.nvars, q.nvars)
    if p.sector != q.sector:
        raise SectorMismatchError(p.sector, q.sector)


def add(p: GradedSymbol, q: GradedSymbol) -> GradedSymbol:
    """
    Sum of two symbols of the same sector.

    The result is anchored at the larger order and known down to the larger
    of the two floors, i.e. on the degrees both operands determine.

    Raises:
        SectorMismatchError: different ξ₁-sectors
        WindowError: the stored windows do not overlap
    """
    _check_compatible(p, q)
    if p.floor >= q.order or q.floor >= p.order:
        raise WindowError(
            f"disjoint windows ({p.floor}, {p.order}] and ({q.floor}, {q.order}]",
            requested=(q.floor, q.order),
            available=(p.floor, p.order),
        )
    order = max(p.order, q.order)
    floor = max(p.floor, q.floor)
    return GradedSymbol(p.nvars, order, int(order - floor), p.terms + q.terms)


def neg(s: GradedSymbol) -> GradedSymbol:
    return GradedSymbol(s.nvars, s.order, s.window, tuple(t.with_coeff(-t.coeff) for t in s.terms))


def sub(p: GradedSymbol, q: GradedSymbol) -> GradedSymbol:
    return add(p, neg(q))


def scale(s: GradedSymbol, c: Union[ExactScalar, RationalLike]) -> GradedSymbol:
    c = ExactScalar.of(c)
    return GradedSymbol(s.nvars, s.order, s.window, tuple(t.with_coeff(t.coeff * c) for t in s.terms))


def symbol_product(p: GradedSymbol, q: GradedSymbol) -> GradedSymbol:
    """Pointwise (commutative) product of symbols: orders add, window = min."""
    if p.nvars != q.nvars:
        raise NvarsMismatchError(p.nvars, q.nvars)
    window = min(p.window, q.window)
    terms = [a.times(b) for a in p.terms for b in q.terms]
    return GradedSymbol(p.nvars, p.order + q.order, window, tuple(terms))


def truncate(s: GradedSymbol, window: int) -> GradedSymbol:
    """Forget everything below `window` levels (window may only shrink)."""
    if window > s.window:
        raise WindowError(f"cannot widen window {s.window} to {window}", requested=window, available=s.window)
    return GradedSymbol(s.nvars, s.order, window, s.terms)


def rebase(s: GradedSymbol, order: RationalLike) -> GradedSymbol:
    """
    Re-anchor the symbol at `order` keeping the same known floor.

    Lowering is allowed only down to the top nonzero degree.
    """
    order = parse_rational(order)
    top = s.top_degree()
    if top is not None and order < top:
        raise WindowError(f"order {order} below top degree {top}", requested=order, available=top)
    window = order - s.floor
    if window.denominator != 1 or window < 1:
        raise WindowError(f"cannot rebase order {s.order} to {order}", requested=order, available=s.order)
    return GradedSymbol(s.nvars, order, int(window), s.terms)


def _check_index(s: GradedSymbol, i: int) -> None:
    if not (1 <= i <= s.nvars):
        raise IndexError(f"variable index {i} outside 1..{s.nvars}")


def partial_x(s: GradedSymbol, i: int) -> GradedSymbol:
    """∂/∂x_i (1-based); ξ-degrees are unchanged."""
    _check_index(s, i)
    k = i - 1
    terms = []
    for t in s.terms:
        a = t.xexp[k]
        if a == 0:
            continue
        xexp = t.xexp[:k] + (a - 1,) + t.xexp[k + 1:]
        terms.append(Monomial(t.coeff * a, xexp, t.xi1exp, t.xiexp))
    return GradedSymbol(s.nvars, s.order, s.window, tuple(terms))


def partial_xi(s: GradedSymbol, i: int) -> GradedSymbol:
    """∂/∂ξ_i (1-based); every ξ-degree drops by exactly one."""
    _check_index(s, i)
    terms = []
    for t in s.terms:
        if i == 1:
            if t.xi1exp == 0:
                continue
            terms.append(Monomial(t.coeff * t.xi1exp, t.xexp, t.xi1exp - 1, t.xiexp))
        else:
            k = i - 2
            b = t.xiexp[k]
            if b == 0:
                continue
            xiexp = t.xiexp[:k] + (b - 1,) + t.xiexp[k + 1:]
            terms.append(Monomial(t.coeff * b, t.xexp, t.xi1exp, xiexp))
    return GradedSymbol(s.nvars, s.order - 1, s.window, tuple(terms))


def reflect_xi(s: GradedSymbol) -> GradedSymbol:
    """
    Substitute ξ ↦ -ξ.

    Only defined for integer ξ₁ exponents (sector 0).
    """
    if s.sector != 0:
        raise SectorMismatchError(Fraction(0), s.sector)
    terms = []
    for t in s.terms:
        sign = -1 if int(t.degree) % 2 else 1
        terms.append(t.with_coeff(t.coeff * sign))
    return GradedSymbol(s.nvars, s.order, s.window, tuple(terms))


def agree_on_common_window(p: GradedSymbol, q: GradedSymbol) -> Tuple[bool, int]:
    """
    Compare two symbols on the degrees both of them determine.

    Returns:
        (equal_there, number_of_common_levels). Different sectors compare
        unequal unless both symbols are zero.
    """
    if p.nvars != q.nvars:
        raise NvarsMismatchError(p.nvars, q.nvars)
    if p.sector != q.sector:
        return (p.is_zero() and q.is_zero()), 0
    order = max(p.order, q.order)
    floor = max(p.floor, q.floor)
    levels = int(order - floor) if order > floor else 0
    left = [t for t in p.terms if t.degree > floor]
    right = [t for t in q.terms if t.degree > floor]
    return left == right, levels
