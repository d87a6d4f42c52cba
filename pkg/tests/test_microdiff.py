"""
Operator Calculus Suite.

Tests the Leibniz product and everything built on it:
- canonical commutation relations, including fractional powers of ∂₁
- associativity, unit and symbol multiplicativity on random operators
- inverse, adjoint and inner automorphisms
- the bimodule Hom solver for E^[λ] → E^[μ]
"""

import random
from fractions import Fraction

import pytest

from data_models import VerificationStatus
from exceptions import (
    FractionalSectorError, NotInvertibleError, NvarsMismatchError,
    WindowError, ZeroOperatorError,
)
from microdiff import (
    MicrodiffOperator, ShiftSector, ad_conjugation, adjoint, bimodule_hom_basis,
    commutator, compare_on_window, constant, coordinate, derivation,
    formal_inverse, from_terms, identity, is_invertible, leibniz_product,
    principal_symbol, sector_shift_generator, symbol_of_order,
)
from services.sampling import random_operator, random_rational
from symcore import GradedSymbol, monomial, symbol_product


def op(nvars, terms, window=3, order=None):
    return from_terms(nvars, [monomial(nvars, *t) for t in terms], window, order)


class TestLeibnizProduct:
    """Canonical examples of the Leibniz formula."""

    def setup_method(self):
        self.d1 = derivation(1, 1, window=3)
        self.x1 = coordinate(1, 1, window=3)

    def test_d1_x1(self):
        assert self.d1 * self.x1 == op(1, [(1, (1,), 1), (1, (), 0)], order=1)

    def test_x1_d1(self):
        assert self.x1 * self.d1 == op(1, [(1, (1,), 1)], order=1)

    def test_fractional_power_commutator(self):
        """[∂₁^λ, x₁] = λ∂₁^{λ-1} for rational λ."""
        rng = random.Random(2)
        for _ in range(20):
            lam = random_rational(rng)
            p = sector_shift_generator(lam, nvars=1, window=4)
            x1 = coordinate(1, 1, window=4)
            assert commutator(p, x1) == op(1, [(lam, (), lam - 1)], window=4, order=lam)

    def test_order_and_window(self):
        p = op(2, [(1, (), 2)], window=5)
        q = op(2, [(1, (1, 0), Fraction(-1, 2))], window=3)
        pq = p * q
        assert pq.order == Fraction(3, 2)
        assert pq.window == 3
        assert pq.sector == Fraction(1, 2)

    def test_nvars_mismatch(self):
        with pytest.raises(NvarsMismatchError):
            leibniz_product(identity(1), identity(2))


class TestAlgebraLaws:
    """Exact algebra laws on seeded random operators."""

    def test_associativity(self):
        """ASSERTION: (PQ)R = P(QR) exactly on the common window."""
        rng = random.Random(17)
        for _ in range(25):
            nvars = rng.randint(1, 3)
            p, q, r = (random_operator(rng, nvars, 4, order=random_rational(rng, 1)) for _ in range(3))
            assert (p * q) * r == p * (q * r)

    def test_unit(self):
        rng = random.Random(4)
        for _ in range(15):
            p = random_operator(rng, 2, 4)
            one = identity(2, 4)
            assert one * p == p
            assert p * one == p

    def test_symbol_multiplicativity(self):
        """σ_{λ+μ}(PQ) = σ_λ(P)·σ_μ(Q)."""
        rng = random.Random(23)
        for _ in range(25):
            p = random_operator(rng, 2, 4, order=random_rational(rng, 1))
            q = random_operator(rng, 2, 4, order=random_rational(rng, 1))
            lhs = symbol_of_order(p * q, p.order + q.order)
            rhs = symbol_product(symbol_of_order(p, p.order), symbol_of_order(q, q.order))
            assert lhs == rhs


class TestSymbolMaps:

    def setup_method(self):
        self.p = op(1, [(1, (), 1), (1, (1,), 0)], order=1)  # ∂₁ + x₁

    def test_symbol_of_order(self):
        assert symbol_of_order(self.p, 1) == GradedSymbol(1, Fraction(1), 1, (monomial(1, 1, xi1=1),))
        assert symbol_of_order(self.p, 0) == GradedSymbol(1, Fraction(0), 1, (monomial(1, 1, x=(1,)),))

    def test_symbol_outside_window_is_an_error(self):
        """REGRESSION GUARD: truncated degrees are never reported as zero."""
        with pytest.raises(WindowError):
            symbol_of_order(self.p, -2)
        with pytest.raises(WindowError):
            symbol_of_order(self.p, 2)

    def test_principal_symbol(self):
        degree, sigma = principal_symbol(self.p)
        assert degree == 1 and sigma.terms == (monomial(1, 1, xi1=1),)
        q = op(2, [(1, (0, 1), -1)])
        degree, sigma = principal_symbol(q)
        assert degree == -1 and sigma.terms == (monomial(2, 1, x=(0, 1), xi1=-1),)

    def test_principal_symbol_multiplicative(self):
        rng = random.Random(31)
        for _ in range(15):
            p = random_operator(rng, 2, 4, unit_leading=True)
            q = random_operator(rng, 2, 4, unit_leading=True)
            dp, sp = principal_symbol(p)
            dq, sq = principal_symbol(q)
            d, s = principal_symbol(p * q)
            assert d == dp + dq
            assert s == symbol_product(sp, sq)

    def test_zero_operator(self):
        with pytest.raises(ZeroOperatorError):
            principal_symbol(op(1, [], order=0))

    def test_invertibility(self):
        assert is_invertible(self.p)
        assert not is_invertible(op(1, [(1, (1,), 1)]))
        assert is_invertible(op(1, [(3, (), Fraction(1, 2))]))


class TestInverse:

    def test_inverse_of_d1(self):
        assert formal_inverse(derivation(1, 1, 3)) == sector_shift_generator(-1, nvars=1, window=3)

    def test_inverse_of_one(self):
        assert formal_inverse(identity(2, 4)) == identity(2, 4)

    def test_inverse_of_d1_plus_x1(self):
        p = op(1, [(1, (), 1), (1, (1,), 0)], order=1)
        expected = op(1, [(1, (), -1), (-1, (1,), -2), (1, (2,), -3), (1, (), -3)], order=-1)
        q = formal_inverse(p)
        assert q == expected
        assert p * q == identity(1, 3)
        assert q * p == identity(1, 3)

    def test_random_two_sided_inverse(self):
        """ASSERTION: P·P⁻¹ = P⁻¹·P = 1 on the window."""
        rng = random.Random(41)
        for _ in range(20):
            nvars = rng.randint(1, 3)
            p = random_operator(rng, nvars, 4, order=random_rational(rng, 2), unit_leading=True)
            q = formal_inverse(p)
            assert q.order == -p.order
            assert p * q == identity(nvars, 4)
            assert q * p == identity(nvars, 4)

    def test_not_invertible(self):
        with pytest.raises(NotInvertibleError):
            formal_inverse(op(1, [(1, (1,), 1)]))


class TestAdjoint:

    def test_examples(self):
        x1 = coordinate(1, 1, 3)
        d1 = derivation(1, 1, 3)
        assert adjoint(x1) == x1
        assert adjoint(d1) == -d1
        x1d1 = op(1, [(1, (1,), 1)])
        assert adjoint(x1d1) == op(1, [(-1, (1,), 1), (-1, (), 0)], order=1)

    def test_anti_automorphism_and_involution(self):
        """ASSERTION: (PQ)* = Q*P* and P** = P."""
        rng = random.Random(53)
        for _ in range(20):
            nvars = rng.randint(1, 2)
            p = random_operator(rng, nvars, 4)
            q = random_operator(rng, nvars, 4)
            assert adjoint(p * q) == adjoint(q) * adjoint(p)
            assert adjoint(adjoint(p)) == p

    def test_principal_symbol_sign(self):
        rng = random.Random(59)
        for _ in range(10):
            p = random_operator(rng, 2, 3)
            degree, sigma = principal_symbol(p)
            _, sigma_star = principal_symbol(adjoint(p))
            sign = -1 if int(degree) % 2 else 1
            assert sigma_star == GradedSymbol(2, degree, 1, tuple(t.with_coeff(t.coeff * sign) for t in sigma.terms))

    def test_fractional_sector_rejected(self):
        with pytest.raises(FractionalSectorError):
            adjoint(sector_shift_generator(Fraction(1, 3), nvars=1))


class TestConjugation:

    def test_ad_identity(self):
        q = op(2, [(1, (1, 0), 1), (2, (), 0)])
        assert ad_conjugation(identity(2, 3), q) == q

    def test_ad_d1_on_x1(self):
        result = ad_conjugation(derivation(1, 1, 4), coordinate(1, 1, 4))
        assert result == op(1, [(1, (1,), 0), (1, (), -1)], window=4, order=0)

    def test_ad_fractional_power_on_x1(self):
        lam = Fraction(2, 3)
        result = ad_conjugation(sector_shift_generator(lam, nvars=1, window=4), coordinate(1, 1, 4))
        assert result == op(1, [(1, (1,), 0), (lam, (), -1)], window=4, order=0)

    def test_ad_multiplicative_and_symbol_preserving(self):
        rng = random.Random(61)
        for _ in range(10):
            p = random_operator(rng, 2, 4, order=random_rational(rng, 1), unit_leading=True)
            q = random_operator(rng, 2, 4)
            r = random_operator(rng, 2, 4)
            assert ad_conjugation(p, q * r) == ad_conjugation(p, q) * ad_conjugation(p, r)
            assert principal_symbol(ad_conjugation(p, q)) == principal_symbol(q)

    def test_non_invertible_conjugator(self):
        with pytest.raises(NotInvertibleError):
            ad_conjugation(coordinate(1, 1), identity(1))


class TestSectorShift:

    def test_generators(self):
        assert sector_shift_generator(0, nvars=2, window=4) == identity(2, 4)
        assert sector_shift_generator(1, nvars=2, window=4) == derivation(1, 2, 4)

    def test_half_powers_compose(self):
        half = sector_shift_generator(Fraction(1, 2), nvars=2, window=4)
        assert half * half == derivation(1, 2, 4)
        assert half.sector == Fraction(1, 2)

    def test_shift_sector_class(self):
        assert ShiftSector(Fraction(-1, 3)).value == Fraction(2, 3)
        assert (ShiftSector(Fraction(2, 3)) + ShiftSector(Fraction(2, 3))).value == Fraction(1, 3)


class TestCompareOnWindow:

    def test_three_values(self):
        a = op(1, [(1, (), 1)], window=4)
        assert compare_on_window(a, a, 4) is VerificationStatus.TRUE
        assert compare_on_window(a, a, 6) is VerificationStatus.INDETERMINATE
        b = op(1, [(2, (), 1)], window=4)
        assert compare_on_window(a, b, 2) is VerificationStatus.FALSE


class TestBimoduleHoms:
    """Hom(E^[λ], E^[μ]) is one-dimensional iff μ-λ ∈ ℤ."""

    def test_equal_sectors(self):
        assert bimodule_hom_basis(0, 0, 4) == [identity(2, 4)]

    def test_different_sectors(self):
        assert bimodule_hom_basis(0, Fraction(1, 2), 4) == []

    def test_integer_shift(self):
        basis = bimodule_hom_basis(Fraction(1, 3), Fraction(7, 3), 4)
        assert basis == [sector_shift_generator(2, nvars=2, window=4)]

    def test_small_grid(self):
        values = [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(4, 3)]
        for lam in values:
            for mu in values:
                expected = 1 if (mu - lam).denominator == 1 else 0
                assert len(bimodule_hom_basis(lam, mu, 3)) == expected


class TestSerialization:

    def test_round_trip(self):
        p = op(2, [(Fraction(1, 2), (1, 0), Fraction(1, 3)), (-1, (), Fraction(-2, 3))], window=4)
        assert MicrodiffOperator.from_json(p.to_json()) == p

    def test_constant(self):
        assert constant(3, 1).pretty() == "3"


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
