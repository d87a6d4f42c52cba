"""
Circle-Bundle Classification Suite.

Guards the classification layer:
- the cone model is a complex and matches the product model for e = 0
- the five-term sequence is exact on the reference bundles
- Pic data: monodromy compatibility and additivity of classes
- algebroid classes of twists, and class equality against explicit witnesses
"""

from fractions import Fraction

import pytest

from classify.bundle_model import CircleBundleModel
from classify.classifier import (
    PicDatum, classify_algebroid, classify_pic, equivalence_classes_agree,
    pic_dual, pic_from_local_system, pic_tensor, twist_class,
)
from classify.sequence import five_term_sequence
from descent_engine.builders import trivial_descent, twist_by_lambda
from descent_engine.chart_engine import ChartAlgebraEngine
from exceptions import CocycleError, MonodromyMismatchError, NormalFormError
from homology import QMODZ, RCX, Cochain, CoefficientGroup, Q, RCxValue, Z, cohomology, coboundary, nerve_complex
from homology.nerve import circle, point, solid_simplex, sphere


def Zmod(m):
    return CoefficientGroup.zmod(m)


def cochain(nerve, degree, mapping, coeff):
    return Cochain.from_mapping(nerve_complex(nerve), degree, mapping, coeff)


def sphere_generator(scale_t, scale_u=0):
    """scale·(generator of H²(S²; ℤ)) as an RCx cochain."""
    g = cohomology(sphere(), Z, 2).generators[0]
    values = tuple(RCxValue(Fraction(v) * scale_t, Fraction(v) * scale_u) for v in g.values)
    return Cochain(nerve_complex(sphere()), 2, values, RCX)


def fiber_system(model, t, edges=None):
    """Local system on Y: constant fiber monodromy t, base part on edges."""
    base = model.base_complex(RCX)
    a = Cochain.from_mapping(base, 1, {e: RCxValue(v) for e, v in (edges or {}).items()}, RCX)
    b = Cochain(base, 0, tuple(RCxValue(t) for _ in range(model.base.vertices)), RCX)
    return model.join(a, b)


class TestBundleModel:

    def test_cone_is_a_complex(self):
        for model in (
            CircleBundleModel.trivial(circle()),
            CircleBundleModel.trivial(sphere()),
            CircleBundleModel.with_generator(sphere()),
            CircleBundleModel.with_generator(sphere(), -1),
        ):
            assert model.total_complex().is_complex()

    def test_product_bundle_over_circle_is_a_torus(self):
        model = CircleBundleModel.trivial(circle())
        assert [cohomology(model.total_complex(), Z, k).free_rank for k in range(3)] == [1, 2, 1]

    def test_hopf_bundle_is_a_three_sphere(self):
        """ASSERTION: e = generator kills H¹ and H² of the total space."""
        model = CircleBundleModel.with_generator(sphere())
        assert cohomology(model.total_complex(), Z, 1).is_trivial()
        assert cohomology(model.total_complex(), Z, 2).is_trivial()
        assert cohomology(model.total_complex(), Z, 3).free_rank == 1

    def test_kunneth_agreement(self):
        for nerve in (circle(), sphere()):
            model = CircleBundleModel.trivial(nerve)
            for coeff in (Z, Zmod(4), Q):
                assert all(model.compare_with_kunneth(coeff).values())

    def test_kunneth_needs_trivial_bundle(self):
        with pytest.raises(ValueError):
            CircleBundleModel.with_generator(sphere()).compare_with_kunneth(Z)

    def test_no_free_generator(self):
        with pytest.raises(ValueError):
            CircleBundleModel.with_generator(circle())

    def test_euler_must_be_a_cocycle(self):
        nerve = solid_simplex(3)
        with pytest.raises(CocycleError):
            CircleBundleModel(nerve, cochain(nerve, 2, {(0, 1, 2): 1}, Z))

    def test_euler_must_be_integral(self):
        with pytest.raises(ValueError):
            CircleBundleModel(sphere(), sphere_generator(Fraction(1, 2)))

    def test_split_recovers_components(self):
        model = CircleBundleModel.trivial(circle())
        y = fiber_system(model, Fraction(1, 3), {(0, 1): Fraction(1, 2)})
        a, b = model.split(y)
        assert a[(0, 1)] == RCxValue(Fraction(1, 2))
        assert b.values == (RCxValue(Fraction(1, 3)),) * 3

    def test_primitive_of_delta_mu1(self):
        """REGRESSION GUARD: δ∘μ₁ vanishes on cochains up to the explicit primitive −a."""
        model = CircleBundleModel.trivial(circle())
        for y in cohomology(model.total_complex(), Zmod(5), 1).generators:
            primitive = model.primitive_of_delta_mu1(y)
            assert primitive.values == (-model.split(y)[0]).values

    def test_json(self):
        payload = CircleBundleModel.with_generator(sphere()).to_json()
        assert payload["kind"] == "bundle_model"
        assert payload["euler"]


class TestFiveTermSequence:

    def test_circle_mod_four(self):
        """ASSERTION: S¹ × S¹ over ℤ/4 gives (ℤ/4)² → ℤ/4 → 0 → ℤ/4 → ℤ/4."""
        seq = five_term_sequence(CircleBundleModel.trivial(circle()), Zmod(4))
        check = seq.check(Zmod(4))
        assert check.groups["H1(Y)"].torsion == (4, 4)
        assert check.groups["H0(X)"].torsion == (4,)
        assert check.groups["H2(X)"].is_trivial()
        assert check.groups["H2(Y)"].torsion == (4,)
        assert check.groups["H1(X)"].torsion == (4,)
        assert seq.exact
        assert check.surjective["mu1"]
        assert check.surjective["mu2"]

    def test_hopf_delta_is_iso(self):
        seq = five_term_sequence(CircleBundleModel.with_generator(sphere()), Zmod(4))
        check = seq.check(Zmod(4))
        assert check.injective["delta"] and check.surjective["delta"]
        assert check.groups["H1(Y)"].is_trivial()
        assert check.groups["H2(Y)"].is_trivial()
        assert seq.exact

    def test_point_base(self):
        """ASSERTION: over a point μ₁ is an isomorphism H¹(S¹) ≅ M."""
        seq = five_term_sequence(CircleBundleModel.trivial(point()), Zmod(3))
        check = seq.check(Zmod(3))
        assert check.groups["H1(Y)"].torsion == (3,)
        assert check.injective["mu1"] and check.surjective["mu1"]
        assert seq.exact

    def test_rational(self):
        seq = five_term_sequence(CircleBundleModel.with_generator(sphere()), Q)
        assert seq.exact
        assert seq.check(Q).injective["delta"]

    def test_circle_coefficients_sample_finite_groups(self):
        seq = five_term_sequence(CircleBundleModel.trivial(circle()), QMODZ, samples=(2, 3))
        assert [c.coefficient for c in seq.checks] == [Zmod(2), Zmod(3), Q]
        assert seq.exact

    def test_rcx_on_hopf(self):
        seq = five_term_sequence(CircleBundleModel.with_generator(sphere()), RCX)
        assert seq.exact
        assert seq.groups["H2(X)"].describe() == "Q/Z + Q"

    def test_integer_coefficients_rejected(self):
        with pytest.raises(ValueError):
            five_term_sequence(CircleBundleModel.trivial(circle()), Z)

    def test_to_dict(self):
        payload = five_term_sequence(CircleBundleModel.trivial(circle()), Zmod(2)).to_dict()
        assert payload["kind"] == "sequence"
        assert payload["exact"] is True
        assert payload["euler_trivial"] is True


class TestPic:

    def setup_method(self):
        self.model = CircleBundleModel.trivial(circle())
        self.h1 = cohomology(self.model.total_complex(), RCX, 1)

    def test_compatible_datum(self):
        ell = fiber_system(self.model, Fraction(1, 3))
        result = classify_pic(self.model, PicDatum(ell, Fraction(2, 3)))
        assert result.coordinates != self.h1.zero_coordinates()
        assert result.group == "(Q/Z)^2 + Q^2"

    def test_monodromy_mismatch(self):
        ell = fiber_system(self.model, Fraction(1, 3))
        with pytest.raises(MonodromyMismatchError) as info:
            classify_pic(self.model, PicDatum(ell, Fraction(1, 3)))
        assert info.value.vertex == 0

    def test_only_angle_is_compared(self):
        """ASSERTION: the modulus e^u of the fiber monodromy is unconstrained."""
        base = self.model.base_complex(RCX)
        b = Cochain(base, 0, (RCxValue(Fraction(1, 4), 2),) * 3, RCX)
        ell = self.model.join(Cochain.zero(base, 1, RCX), b)
        classify_pic(self.model, PicDatum(ell, Fraction(3, 4)))

    def test_from_local_system(self):
        datum = pic_from_local_system(self.model, fiber_system(self.model, Fraction(1, 3)))
        assert datum.shift == Fraction(2, 3)

    def test_from_local_system_needs_constant_monodromy(self):
        base = self.model.base_complex(RCX)
        b = Cochain(base, 0, (RCxValue(Fraction(1, 3)), RCxValue(0), RCxValue(0)), RCX)
        with pytest.raises(MonodromyMismatchError) as info:
            pic_from_local_system(self.model, self.model.join(Cochain.zero(base, 1, RCX), b))
        assert info.value.vertex == 1

    def test_tensor_is_additive(self):
        first = PicDatum(fiber_system(self.model, Fraction(1, 3), {(0, 1): Fraction(1, 5)}), Fraction(2, 3))
        second = PicDatum(fiber_system(self.model, Fraction(1, 2), {(1, 2): Fraction(1, 7)}), Fraction(1, 2))
        product = pic_tensor(first, second)
        assert product.shift == Fraction(1, 6)
        expected = self.h1.add_coordinates(
            classify_pic(self.model, first).coordinates, classify_pic(self.model, second).coordinates
        )
        assert classify_pic(self.model, product).coordinates == expected

    def test_dual_inverts(self):
        datum = PicDatum(fiber_system(self.model, Fraction(1, 3), {(0, 2): Fraction(2, 5)}), Fraction(2, 3))
        assert classify_pic(self.model, pic_tensor(datum, pic_dual(datum))).coordinates == self.h1.zero_coordinates()

    def test_wrong_degree(self):
        with pytest.raises(ValueError):
            PicDatum(self.model.zero(2, RCX), Fraction(0))

    def test_to_dict(self):
        datum = PicDatum(fiber_system(self.model, Fraction(1, 3)), Fraction(2, 3))
        assert datum.to_dict()["shift"] == "2/3"
        assert classify_pic(self.model, datum).to_dict()["kind"] == "pic_class"


class TestAlgebroidClass:

    def test_circle_two_thirds(self):
        nerve = circle()
        model = CircleBundleModel.trivial(nerve)
        lam = cochain(nerve, 1, {(0, 1): Fraction(2, 3)}, QMODZ)
        c = Cochain.zero(nerve_complex(nerve), 2, RCX)
        result = twist_class(model, lam, c)
        assert result.base2 == ()
        assert result.fiber1[0] in (Fraction(1, 3), Fraction(2, 3))
        assert result.fiber1[1] == 0
        assert result.total != cohomology(model.total_complex(), RCX, 2).zero_coordinates()
        assert classify_algebroid(model, twist_by_lambda(nerve, lam, c)) == result

    def test_sphere_quarter(self):
        model = CircleBundleModel.trivial(sphere())
        lam = Cochain.zero(nerve_complex(sphere()), 1, QMODZ)
        result = twist_class(model, lam, sphere_generator(Fraction(1, 4)))
        assert result.base2 == (Fraction(1, 4), Fraction(0))
        assert result.fiber1 == ()

    def test_hopf_kills_euler_multiples(self):
        """ASSERTION: γ#(e/4) vanishes in H²(S³)."""
        model = CircleBundleModel.with_generator(sphere())
        lam = Cochain.zero(nerve_complex(sphere()), 1, QMODZ)
        result = twist_class(model, lam, sphere_generator(Fraction(1, 4)))
        assert result.base2 == (Fraction(1, 4), Fraction(0))
        assert result.total == ()

    def test_classes_add(self):
        nerve = circle()
        model = CircleBundleModel.trivial(nerve)
        h2 = cohomology(model.total_complex(), RCX, 2)
        c = Cochain.zero(nerve_complex(nerve), 2, RCX)
        first = cochain(nerve, 1, {(0, 1): Fraction(1, 3)}, QMODZ)
        second = cochain(nerve, 1, {(1, 2): Fraction(1, 2)}, QMODZ)
        total = twist_class(model, first + second, c).total
        assert total == h2.add_coordinates(twist_class(model, first, c).total, twist_class(model, second, c).total)

    def test_trivial_data_is_base_point(self):
        model = CircleBundleModel.trivial(circle())
        result = classify_algebroid(model, trivial_descent(circle(), ChartAlgebraEngine()))
        assert result.total == cohomology(model.total_complex(), RCX, 2).zero_coordinates()

    def test_euler_pairing_with_shift(self):
        """REGRESSION GUARD: e⌣λ ≠ 0 leaves (c, λ) without a class."""
        nerve = solid_simplex(3)
        euler = coboundary(cochain(nerve, 1, {(0, 1): 1}, Z))
        model = CircleBundleModel(nerve, euler)
        lam = coboundary(cochain(nerve, 0, {(3,): Fraction(1, 2)}, QMODZ))
        with pytest.raises(NormalFormError) as info:
            twist_class(model, lam, Cochain.zero(nerve_complex(nerve), 2, RCX))
        assert info.value.simplex == (0, 1, 2, 3)

    def test_nerve_mismatch(self):
        model = CircleBundleModel.trivial(sphere())
        with pytest.raises(ValueError):
            classify_algebroid(model, trivial_descent(circle(), ChartAlgebraEngine()))

    def test_to_dict(self):
        model = CircleBundleModel.trivial(sphere())
        lam = Cochain.zero(nerve_complex(sphere()), 1, QMODZ)
        payload = twist_class(model, lam, sphere_generator(Fraction(1, 4))).to_dict()
        assert payload["kind"] == "class"
        assert payload["base2"][0] == "1/4"


class TestEquivalence:

    def setup_method(self):
        self.zero_lam = Cochain.zero(nerve_complex(sphere()), 1, QMODZ)
        self.zero_c = Cochain.zero(nerve_complex(sphere()), 2, RCX)

    def test_data_equivalent_to_itself(self):
        nerve = circle()
        data = twist_by_lambda(
            nerve, cochain(nerve, 1, {(0, 1): Fraction(1, 3)}, QMODZ), Cochain.zero(nerve_complex(nerve), 2, RCX)
        )
        report = equivalence_classes_agree(CircleBundleModel.trivial(nerve), data, data)
        assert report.same_class and report.witness is not None
        assert report.agree
        assert report.functor_check.holds

    def test_coboundary_twist(self):
        model = CircleBundleModel.trivial(sphere())
        c = sphere_generator(Fraction(1, 4))
        sigma = cochain(sphere(), 0, {(3,): Fraction(1, 2)}, QMODZ)
        first = twist_by_lambda(sphere(), self.zero_lam, c)
        second = twist_by_lambda(sphere(), coboundary(sigma), c)
        report = equivalence_classes_agree(model, first, second)
        assert report.same_class
        assert report.witness is not None
        assert report.functor is not None
        assert report.agree

    def test_different_classes(self):
        model = CircleBundleModel.trivial(sphere())
        first = twist_by_lambda(sphere(), self.zero_lam, self.zero_c)
        second = twist_by_lambda(sphere(), self.zero_lam, sphere_generator(Fraction(1, 4)))
        report = equivalence_classes_agree(model, first, second)
        assert not report.same_class
        assert report.witness is None
        assert report.agree

    def test_hopf_witness_has_no_functor_form(self):
        """ASSERTION: the witness of γ#(e/4) = 0 needs σ = 1/4 with e⌣σ ≠ 0."""
        model = CircleBundleModel.with_generator(sphere())
        first = twist_by_lambda(sphere(), self.zero_lam, self.zero_c)
        second = twist_by_lambda(sphere(), self.zero_lam, sphere_generator(Fraction(1, 4)))
        report = equivalence_classes_agree(model, first, second)
        assert report.same_class and report.agree
        assert report.witness.sigma.values == (RCxValue(Fraction(1, 4)),) * 4
        assert report.functor is None

    def test_rational_part_solved_on_the_cone(self):
        model = CircleBundleModel.with_generator(sphere())
        first = twist_by_lambda(sphere(), self.zero_lam, self.zero_c)
        second = twist_by_lambda(sphere(), self.zero_lam, sphere_generator(0, Fraction(3, 2)))
        report = equivalence_classes_agree(model, first, second)
        assert report.same_class and report.witness is not None

    def test_to_dict(self):
        model = CircleBundleModel.trivial(sphere())
        first = twist_by_lambda(sphere(), self.zero_lam, self.zero_c)
        payload = equivalence_classes_agree(model, first, first).to_dict()
        assert payload["kind"] == "equivalence"
        assert payload["agree"] is True


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
