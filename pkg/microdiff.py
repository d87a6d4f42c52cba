"""
Microdifferential Operator Calculus.

Operators on a chart are identified with their truncated total symbols.
The product is the Leibniz formula

    tot(PQ) = Σ_α (1/α!) ∂_ξ^α tot(P) · ∂_x^α tot(Q)

truncated to min(W_P, W_Q) levels. On top of it this module provides the
order filtration (σ_μ, principal symbol), the invertibility criterion and
formal inverse, the formal adjoint, inner automorphisms ad(P) and the
sector-shift generators ∂₁^λ realizing the bimodules E^[λ].

Every operation records the window it guarantees; windows shrink under
products instead of raising on precision loss.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import sympy

from data_models import VerificationStatus
from exceptions import (
    FractionalSectorError, NotInvertibleError, NvarsMismatchError,
    WindowError, ZeroOperatorError,
)
from symcore import (
    ExactScalar, GradedSymbol, Monomial, RationalLike, ONE,
    add, agree_on_common_window, frac_part, monomial, neg,
    parse_rational, partial_x, partial_xi, rebase, reflect_xi, scale,
)

logger = logging.getLogger(__name__)

DEFAULT_WINDOW = 6


@dataclass(frozen=True)
class MicrodiffOperator:
    """A microdifferential operator given by its total symbol tot(P)."""
    symbol: GradedSymbol

    @property
    def nvars(self) -> int:
        return self.symbol.nvars

    @property
    def order(self) -> Fraction:
        return self.symbol.order

    @property
    def window(self) -> int:
        return self.symbol.window

    @property
    def sector(self) -> Fraction:
        return self.symbol.sector

    def is_zero(self) -> bool:
        return self.symbol.is_zero()

    def __mul__(self, other: "MicrodiffOperator") -> "MicrodiffOperator":
        return leibniz_product(self, other)

    def __add__(self, other: "MicrodiffOperator") -> "MicrodiffOperator":
        return MicrodiffOperator(add(self.symbol, other.symbol))

    def __sub__(self, other: "MicrodiffOperator") -> "MicrodiffOperator":
        return MicrodiffOperator(add(self.symbol, neg(other.symbol)))

    def __neg__(self) -> "MicrodiffOperator":
        return MicrodiffOperator(neg(self.symbol))

    def scaled(self, c: Union[ExactScalar, RationalLike]) -> "MicrodiffOperator":
        return MicrodiffOperator(scale(self.symbol, c))

    def to_json(self) -> Dict:
        return self.symbol.to_json()

    @classmethod
    def from_json(cls, data: Dict) -> "MicrodiffOperator":
        return cls(GradedSymbol.from_json(data))

    def pretty(self) -> str:
        return self.symbol.pretty()


@dataclass(frozen=True)
class ShiftSector:
    """A class [λ] ∈ ℚ/ℤ, stored by its representative in [0, 1)."""
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", frac_part(parse_rational(self.value)))

    def __add__(self, other: "ShiftSector") -> "ShiftSector":
        return ShiftSector(self.value + other.value)

    def __neg__(self) -> "ShiftSector":
        return ShiftSector(-self.value)


# =============================================================================
# CONSTRUCTORS
# =============================================================================

def from_terms(
    nvars: int,
    terms: Sequence[Monomial],
    window: int = DEFAULT_WINDOW,
    order: Optional[RationalLike] = None,
) -> MicrodiffOperator:
    if order is None:
        order = max((t.degree for t in terms), default=Fraction(0))
    return MicrodiffOperator(GradedSymbol(nvars, parse_rational(order), window, tuple(terms)))


def constant(c: Union[ExactScalar, RationalLike], nvars: int, window: int = DEFAULT_WINDOW) -> MicrodiffOperator:
    return from_terms(nvars, [monomial(nvars, c)], window, order=0)


def identity(nvars: int, window: int = DEFAULT_WINDOW) -> MicrodiffOperator:
    return constant(ONE, nvars, window)


def coordinate(i: int, nvars: int, window: int = DEFAULT_WINDOW) -> MicrodiffOperator:
    """The multiplication operator x_i (1-based)."""
    x = [0] * nvars
    x[i - 1] = 1
    return from_terms(nvars, [monomial(nvars, 1, x=x)], window, order=0)


def derivation(i: int, nvars: int, window: int = DEFAULT_WINDOW) -> MicrodiffOperator:
    """∂_i, whose symbol is ξ_i (1-based)."""
    if i == 1:
        return from_terms(nvars, [monomial(nvars, 1, xi1=1)], window, order=1)
    xi = [0] * (nvars - 1)
    xi[i - 2] = 1
    return from_terms(nvars, [monomial(nvars, 1, xi=xi)], window, order=1)


def sector_shift_generator(
    lam: RationalLike,
    nvars: int = 2,
    window: int = DEFAULT_WINDOW,
) -> MicrodiffOperator:
    """∂₁^λ: the single monomial ξ₁^λ. Its sector is λ mod 1."""
    lam = parse_rational(lam)
    return from_terms(nvars, [monomial(nvars, 1, xi1=lam)], window, order=lam)


# =============================================================================
# LEIBNIZ PRODUCT
# =============================================================================

def _multi_indices(nvars: int, max_total: int) -> Iterator[Tuple[int, ...]]:
    """All α ∈ ℕ^n with |α| ≤ max_total, in graded lexicographic order."""
    for total in range(max_total + 1):
        yield from _compositions(nvars, total)


def _compositions(parts: int, total: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for tail in _compositions(parts - 1, total - head):
            yield (head,) + tail


def _alpha_factorial(alpha: Tuple[int, ...]) -> int:
    result = 1
    for a in alpha:
        result *= math.factorial(a)
    return result


class _DerivativeCache:
    """Memoized ∂^α of one symbol, built from α - e_i."""

    def __init__(self, symbol: GradedSymbol, derive):
        self._derive = derive
        self._cache: Dict[Tuple[int, ...], GradedSymbol] = {(0,) * symbol.nvars: symbol}

    def get(self, alpha: Tuple[int, ...]) -> GradedSymbol:
        if alpha in self._cache:
            return self._cache[alpha]
        i = next(k for k, a in enumerate(alpha) if a > 0)
        parent = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
        result = self._derive(self.get(parent), i + 1)
        self._cache[alpha] = result
        return result


def leibniz_product(p: MicrodiffOperator, q: MicrodiffOperator) -> MicrodiffOperator:
    """
    Operator product PQ via the Leibniz formula.

    Args:
        p, q: operators on the same chart

    Returns:
        PQ with order(P)+order(Q) and window min(W_P, W_Q).

    Raises:
        NvarsMismatchError: operators live on charts of different dimension
    """
    if p.nvars != q.nvars:
        raise NvarsMismatchError(p.nvars, q.nvars)
    nvars = p.nvars
    window = min(p.window, q.window)
    dp = _DerivativeCache(p.symbol, partial_xi)
    dq = _DerivativeCache(q.symbol, partial_x)

    terms: List[Monomial] = []
    dead = set()  # α whose ∂_ξ^α P or ∂_x^α Q vanishes; every β ≥ α vanishes too
    for alpha in _multi_indices(nvars, window - 1):
        if any(_dominates(alpha, d) for d in dead):
            continue
        left = dp.get(alpha)
        right = dq.get(alpha)
        if left.is_zero() or right.is_zero():
            dead.add(alpha)
            continue
        weight = Fraction(1, _alpha_factorial(alpha))
        for a in left.terms:
            for b in right.terms:
                prod = a.times(b)
                terms.append(prod.with_coeff(prod.coeff * weight))
    return MicrodiffOperator(GradedSymbol(nvars, p.order + q.order, window, tuple(terms)))


def _dominates(alpha: Tuple[int, ...], beta: Tuple[int, ...]) -> bool:
    return all(a >= b for a, b in zip(alpha, beta))


def commutator(p: MicrodiffOperator, q: MicrodiffOperator) -> MicrodiffOperator:
    """[P, Q] = PQ - QP."""
    return leibniz_product(p, q) - leibniz_product(q, p)


# =============================================================================
# SYMBOL MAPS AND INVERTIBILITY
# =============================================================================

def symbol_of_order(p: MicrodiffOperator, mu: RationalLike) -> GradedSymbol:
    """
    σ_μ(P): the degree-μ homogeneous component (possibly zero).

    Raises:
        WindowError: μ is not one of the stored degrees
    """
    return p.symbol.component(mu)


def principal_symbol(p: MicrodiffOperator) -> Tuple[Fraction, GradedSymbol]:
    """Top nonzero component σ(P) together with its degree."""
    top = p.symbol.top_degree()
    if top is None:
        raise ZeroOperatorError("principal symbol of the zero operator")
    return top, p.symbol.component(top)


def is_invertible(p: MicrodiffOperator) -> bool:
    """True iff σ(P) = c·ξ₁^s with c ≠ 0 constant."""
    _, sigma = principal_symbol(p)
    if len(sigma.terms) != 1:
        return False
    lead = sigma.terms[0]
    return not any(lead.xexp) and not any(lead.xiexp)


def formal_inverse(p: MicrodiffOperator) -> MicrodiffOperator:
    """
    Two-sided inverse solved degree by degree from PQ = 1.

    q_0 = σ(P)^{-1} and q_m = -σ(P)^{-1} · [PQ_{<m}]_{-m}.

    Raises:
        NotInvertibleError: leading term is not c·ξ₁^s
    """
    if not is_invertible(p):
        raise NotInvertibleError(f"operator {p.pretty()} has non-unit principal symbol")
    degree, sigma = principal_symbol(p)
    base = MicrodiffOperator(rebase(p.symbol, degree))
    window = base.window
    lead = sigma.terms[0]
    inv_lead = Monomial(lead.coeff.inverse(), lead.xexp, -lead.xi1exp, lead.xiexp)

    q_terms: List[Monomial] = [inv_lead]
    for m in range(1, window):
        partial = MicrodiffOperator(GradedSymbol(p.nvars, -degree, m + 1, tuple(q_terms)))
        residue = leibniz_product(base, partial)
        r_m = [t for t in residue.symbol.terms if t.degree == -m]
        for t in r_m:
            prod = inv_lead.times(t)
            q_terms.append(prod.with_coeff(-prod.coeff))
    result = MicrodiffOperator(GradedSymbol(p.nvars, -degree, window, tuple(q_terms)))
    logger.debug(f"formal_inverse: order {-degree}, window {window}, {len(result.symbol.terms)} terms")
    return result


# =============================================================================
# ADJOINT AND CONJUGATION
# =============================================================================

def adjoint(p: MicrodiffOperator) -> MicrodiffOperator:
    """
    Formal adjoint, tot(P*) = Σ_α (1/α!) ∂_ξ^α ∂_x^α [tot(P)(x, -ξ)].

    Raises:
        FractionalSectorError: P has fractional order
    """
    if p.sector != 0:
        raise FractionalSectorError(p.sector)
    reflected = reflect_xi(p.symbol)
    dx = _DerivativeCache(reflected, partial_x)
    terms: List[Monomial] = []
    for alpha in _multi_indices(p.nvars, p.window - 1):
        mixed = dx.get(alpha)
        for i, a in enumerate(alpha, start=1):
            for _ in range(a):
                mixed = partial_xi(mixed, i)
        if mixed.is_zero():
            continue
        weight = Fraction(1, _alpha_factorial(alpha))
        terms.extend(t.with_coeff(t.coeff * weight) for t in mixed.terms)
    return MicrodiffOperator(GradedSymbol(p.nvars, p.order, p.window, tuple(terms)))


def ad_conjugation(p: MicrodiffOperator, q: MicrodiffOperator) -> MicrodiffOperator:
    """ad(P)(Q) = P·Q·P⁻¹."""
    inverse = formal_inverse(p)
    return leibniz_product(leibniz_product(p, q), inverse)


# =============================================================================
# COMPARISON
# =============================================================================

def compare_on_window(
    p: MicrodiffOperator,
    q: MicrodiffOperator,
    window: int,
) -> VerificationStatus:
    """
    Three-valued equality up to `window` levels.

    FALSE when the operators differ where both are known, INDETERMINATE when
    they agree but fewer than `window` levels are known, TRUE otherwise.
    """
    equal, levels = agree_on_common_window(p.symbol, q.symbol)
    if not equal:
        return VerificationStatus.FALSE
    if levels < window:
        return VerificationStatus.INDETERMINATE
    return VerificationStatus.TRUE


# =============================================================================
# E^[λ] BIMODULE HOMS
# =============================================================================

def _ansatz(nvars: int, window: int) -> List[Monomial]:
    """ξ₁^e · m with |e| < window and m ∈ {1, x_i, ξ_i (i ≥ 2)}."""
    factors: List[Tuple[List[int], List[int]]] = [([0] * nvars, [0] * (nvars - 1))]
    for i in range(nvars):
        x = [0] * nvars
        x[i] = 1
        factors.append((x, [0] * (nvars - 1)))
    for i in range(nvars - 1):
        xi = [0] * (nvars - 1)
        xi[i] = 1
        factors.append(([0] * nvars, xi))
    basis = []
    for e in range(-(window - 1), window):
        for x, xi in factors:
            basis.append(monomial(nvars, 1, x=x, xi1=e, xi=xi))
    return basis


def _hom_constraints(
    p: MicrodiffOperator,
    shift: Fraction,
    wide: int,
) -> List[GradedSymbol]:
    nvars = p.nvars
    d1 = derivation(1, nvars, wide)
    inv_d1 = sector_shift_generator(-1, nvars, wide)
    x1 = coordinate(1, nvars, wide)
    out = [commutator(p, d1).symbol]
    for i in range(2, nvars + 1):
        out.append(commutator(p, coordinate(i, nvars, wide)).symbol)
        out.append(commutator(p, derivation(i, nvars, wide)).symbol)
    twisted = leibniz_product(p, inv_d1).scaled(shift)
    out.append((commutator(p, x1) - twisted).symbol)
    return out


def bimodule_hom_basis(
    lam: RationalLike,
    mu: RationalLike,
    window: int,
    nvars: int = 2,
) -> List[MicrodiffOperator]:
    """
    Basis of bimodule maps E^[λ] → E^[μ] on a chart.

    Solves [P, ∂₁] = [P, x_i] = [P, ∂_i] = 0 (i ≥ 2) and
    [P, x₁] = (μ-λ)·P·∂₁^{-1} over the monomial ansatz, exactly. The
    solution space is spanned by ∂₁^{μ-λ} when μ-λ is an integer with
    |μ-λ| < window and is zero otherwise.

    Returns:
        Operators normalised to leading coefficient 1.
    """
    lam = parse_rational(lam)
    mu = parse_rational(mu)
    if window < 1:
        raise WindowError("window must be at least 1", requested=window)
    shift = mu - lam
    wide = 4 * window + 8
    anchor = window  # top degree any ansatz monomial can reach
    ansatz = _ansatz(nvars, window)

    columns: List[Dict[Tuple, ExactScalar]] = []
    for mono in ansatz:
        p = MicrodiffOperator(GradedSymbol(nvars, anchor, wide, (mono,)))
        column: Dict[Tuple, ExactScalar] = {}
        for idx, constraint in enumerate(_hom_constraints(p, shift, wide)):
            for t in constraint.terms:
                column[(idx,) + t.key] = t.coeff
        columns.append(column)

    rows = sorted({key for column in columns for key in column}, key=repr)
    matrix = sympy.zeros(2 * len(rows), len(ansatz))
    for j, column in enumerate(columns):
        for r, key in enumerate(rows):
            c = column.get(key)
            if c is None:
                continue
            matrix[2 * r, j] = sympy.Rational(c.re.numerator, c.re.denominator)
            matrix[2 * r + 1, j] = sympy.Rational(c.im.numerator, c.im.denominator)

    basis: List[MicrodiffOperator] = []
    null_vectors = matrix.nullspace() if rows else [sympy.eye(len(ansatz)).col(j) for j in range(len(ansatz))]
    for vector in null_vectors:
        terms = []
        for j, value in enumerate(vector):
            if value != 0:
                q = sympy.Rational(value)
                terms.append(ansatz[j].with_coeff(ExactScalar(Fraction(int(q.p), int(q.q)))))
        op = from_terms(nvars, terms, window)
        lead = op.symbol.terms[0].coeff
        basis.append(op.scaled(lead.inverse()))
    logger.debug(f"bimodule_hom_basis(λ={lam}, μ={mu}, window={window}): dimension {len(basis)}")
    return basis
