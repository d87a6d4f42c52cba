"""
Graded Symbol Suite.

Guards the representation layer:
- exact rationals in and out, no floats
- canonical form of symbols (merge, sort, truncate)
- add windows and sectors
- formal partial derivatives and their degree bookkeeping
"""

import random
from fractions import Fraction

import pytest

from exceptions import SectorMismatchError, WindowError
from services.sampling import random_operator
from symcore import (
    ExactScalar, GradedSymbol, I_UNIT, ONE, add, format_rational, frac_part,
    monomial, parse_rational, partial_x, partial_xi, rebase, scale,
    symbol_from_terms, truncate, zero,
)


def sym(nvars, terms, window=3, order=None):
    return symbol_from_terms(nvars, [monomial(nvars, *t) for t in terms], window, order)


class TestRationals:
    """Exact rational parsing and formatting."""

    def test_parse_accepts_exact_forms(self):
        assert parse_rational("3/6") == Fraction(1, 2)
        assert parse_rational("-2") == Fraction(-2)
        assert parse_rational(5) == Fraction(5)

    def test_parse_rejects_floats(self):
        """REGRESSION GUARD: floats never enter the exact layer."""
        with pytest.raises(ValueError):
            parse_rational(0.5)
        with pytest.raises(ValueError):
            parse_rational("0.5")
        with pytest.raises(ValueError):
            parse_rational(True)

    def test_format_always_has_denominator(self):
        assert format_rational(Fraction(2)) == "2/1"
        assert format_rational(Fraction(-3, 4)) == "-3/4"

    def test_frac_part_in_unit_interval(self):
        assert frac_part(Fraction(-1, 3)) == Fraction(2, 3)
        assert frac_part(Fraction(7, 3)) == Fraction(1, 3)


class TestExactScalar:
    """Gaussian rational arithmetic."""

    def test_i_squared(self):
        assert I_UNIT * I_UNIT == -ONE

    def test_inverse(self):
        z = ExactScalar(Fraction(1, 2), Fraction(-3))
        assert z * z.inverse() == ONE

    def test_zero_has_no_inverse(self):
        with pytest.raises(ZeroDivisionError):
            ExactScalar(0, 0).inverse()


class TestCanonicalForm:
    """Symbols are canonical on construction."""

    def test_like_terms_merge_and_zeros_drop(self):
        s = sym(1, [(1, (), 1), (2, (), 1), (-3, (), 1)], order=1)
        assert s.is_zero()

    def test_recanonicalization_idempotent(self):
        rng = random.Random(7)
        for _ in range(20):
            s = random_operator(rng, 2, 4).symbol
            assert s.canonicalize() == s
            assert s.canonicalize().canonicalize() == s

    def test_truncation_below_window(self):
        s = sym(1, [(1, (), 2), (1, (), -5)], window=3, order=2)
        assert [t.degree for t in s.terms] == [2]

    def test_monomial_above_order_rejected(self):
        with pytest.raises(WindowError):
            sym(1, [(1, (), 3)], order=2)

    def test_mixed_sectors_rejected(self):
        with pytest.raises(SectorMismatchError):
            sym(1, [(1, (), Fraction(1, 2)), (1, (), 0)], order=Fraction(1, 2))

    def test_components_respect_degree(self):
        """ASSERTION: every stored component holds monomials of its own degree only."""
        rng = random.Random(3)
        for _ in range(20):
            s = random_operator(rng, 3, 5, order=Fraction(rng.randint(-2, 2), 3)).symbol
            for degree, monos in s.components.items():
                assert all(m.degree == degree for m in monos)
                assert 0 <= s.order - degree < s.window


class TestAdd:
    """Componentwise sums on the common window."""

    def test_doubling(self):
        xi1 = sym(1, [(1, (), 1)])
        assert add(xi1, xi1) == sym(1, [(2, (), 1)])

    def test_zero_is_identity(self):
        p = sym(2, [(1, (1, 0), 1), (3, (), 0)])
        assert add(p, zero(2, p.order, p.window)) == p

    def test_term_merge(self):
        left = sym(1, [(1, (), 1), (1, (1,), 0)], order=1)
        right = sym(1, [(-1, (1,), 0)], order=0)
        assert add(left, right) == sym(1, [(1, (), 1)], window=3, order=1)

    def test_window_anchored_at_larger_order(self):
        left = sym(1, [(1, (), 2)], window=4, order=2)   # known on 2..-1
        right = sym(1, [(1, (), 0)], window=2, order=0)  # known on 0..-1
        total = add(left, right)
        assert total.order == 2
        assert total.floor == -2
        assert total.window == 4

    def test_sector_mismatch(self):
        with pytest.raises(SectorMismatchError):
            add(sym(1, [(1, (), Fraction(1, 2))]), sym(1, [(1, (), 1)]))

    def test_disjoint_windows(self):
        with pytest.raises(WindowError):
            add(sym(1, [(1, (), 5)], window=1), sym(1, [(1, (), 0)], window=1))


class TestPartials:
    """Formal partial derivatives."""

    def test_xi1_power_rule_fractional(self):
        lam = Fraction(2, 5)
        s = sym(2, [(1, (), lam)], order=lam)
        assert partial_xi(s, 1) == sym(2, [(lam, (), lam - 1)], order=lam - 1)

    def test_x_derivative_of_xi2_is_zero(self):
        s = sym(2, [(1, (), 0, (1,))])
        assert partial_x(s, 1).is_zero()

    def test_x_power_rule(self):
        s = sym(1, [(1, (2,), -3)])
        assert partial_x(s, 1) == sym(1, [(2, (1,), -3)], order=-3)

    def test_xi_derivative_drops_degree(self):
        """ASSERTION: ∂_ξ lowers every ξ-degree by one, ∂_x keeps it."""
        rng = random.Random(11)
        for _ in range(20):
            s = random_operator(rng, 3, 4).symbol
            for i in (1, 2, 3):
                d = partial_xi(s, i)
                assert d.order == s.order - 1
                assert all(s.order - 1 - t.degree < d.window for t in d.terms)
                assert partial_x(s, i).order == s.order

    def test_partials_commute(self):
        rng = random.Random(5)
        for _ in range(25):
            s = random_operator(rng, 2, 4).symbol
            for i in (1, 2):
                for j in (1, 2):
                    assert partial_x(partial_xi(s, j), i) == partial_xi(partial_x(s, i), j)
                    assert partial_x(partial_x(s, j), i) == partial_x(partial_x(s, i), j)

    def test_partials_are_additive(self):
        rng = random.Random(9)
        for _ in range(15):
            a = random_operator(rng, 2, 3, order=Fraction(1)).symbol
            b = random_operator(rng, 2, 3, order=Fraction(1)).symbol
            assert partial_xi(add(a, b), 1) == add(partial_xi(a, 1), partial_xi(b, 1))
            assert partial_x(add(a, b), 2) == add(partial_x(a, 2), partial_x(b, 2))

    def test_bad_index(self):
        with pytest.raises(IndexError):
            partial_x(sym(1, [(1, (), 0)]), 2)


class TestWindowPlumbing:

    def test_truncate_and_rebase(self):
        s = sym(1, [(1, (), 1), (1, (), 0)], window=4, order=3)
        assert truncate(s, 3).window == 3
        rebased = rebase(s, 1)
        assert rebased.order == 1 and rebased.floor == s.floor
        with pytest.raises(WindowError):
            truncate(s, 5)

    def test_scale_by_gaussian(self):
        s = sym(1, [(2, (), 1)])
        assert scale(s, I_UNIT).terms[0].coeff == ExactScalar(0, 2)


class TestSerialization:

    def test_json_round_trip(self):
        """REGRESSION GUARD: symbol JSON is bit-exact and float free."""
        s = sym(2, [(ExactScalar(Fraction(1, 3), Fraction(-2, 7)), (1, 2), Fraction(-1, 2), (1,))],
                window=4, order=Fraction(1, 2))
        data = s.to_json()
        assert data["order"] == "1/2"
        assert data["terms"][0]["coeff"] == ["1/3", "-2/7"]
        assert GradedSymbol.from_json(data) == s

    def test_pretty(self):
        s = sym(1, [(1, (1,), 1), (1, (), 0)], order=1)
        assert s.pretty() == "x1*xi1 + 1"


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
