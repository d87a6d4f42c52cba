"""
2-Group Cohomology Suite.

Guards the nonabelian layer:
- group and crossed-module axioms are enforced on construction
- cocycle verification with a located first violation
- the coboundary action preserves cocycles and is detected by the witness search
- H¹ class counts on model nerves, including non-abelian coefficients
- agreement of H¹(X; G[i]) with abelian H^{1+i}(X; G)
"""

import random

import pytest

from exceptions import BudgetExceededError, GroupAxiomError, IncompleteDataError
from homology.nerve import CoverNerve, circle, projective_plane, solid_simplex, sphere, torus
from twogroup.cocycles import (
    CoboundaryPair, TwoGroupCocycle, act, are_cohomologous, class_group,
    compare_with_abelian, h0_pointed_set, h1_pointed_set, h_minus1,
    verify_cocycle,
)
from twogroup.crossed_module import CrossedModule
from twogroup.groups import FiniteGroup, cyclic_counts, invariant_factors

Z2 = FiniteGroup.cyclic(2)
Z3 = FiniteGroup.cyclic(3)
S3 = FiniteGroup.symmetric(3)


def alternating_in_s3() -> CrossedModule:
    """ℤ/3 ≅ A₃ ⊂ S₃ with the conjugation action."""
    d = (0, 3, 4)  # 1 ↦ (1,2,0), 2 ↦ (2,0,1)
    back = {v: n for n, v in enumerate(d)}
    action = tuple(tuple(back[S3.conjugate(f, d[a])] for a in Z3.elements) for f in S3.elements)
    return CrossedModule(Z3, S3, d, action, "A3->S3")


def random_pair(rng, nerve, xmod) -> CoboundaryPair:
    return CoboundaryPair(
        tuple(rng.randrange(xmod.upper.order) for _ in range(nerve.vertices)),
        tuple(rng.randrange(xmod.lower.order) for _ in nerve.simplices(1)),
    )


class TestFiniteGroup:

    def test_cyclic(self):
        z6 = FiniteGroup.cyclic(6)
        assert z6.order == 6
        assert z6.element_order(2) == 3
        assert z6.abelian_invariants() == (6,)

    def test_symmetric_group(self):
        assert S3.order == 6
        assert not S3.is_abelian()
        assert cyclic_counts(S3) == {1: 1, 2: 3, 3: 2}

    def test_abelian_invariants(self):
        assert FiniteGroup.direct_product(Z2, Z2).abelian_invariants() == (2, 2)
        assert FiniteGroup.direct_product(Z2, Z3).abelian_invariants() == (6,)
        assert FiniteGroup.direct_product(Z2, FiniteGroup.cyclic(4)).abelian_invariants() == (2, 4)
        assert FiniteGroup.trivial().abelian_invariants() == ()

    def test_invariant_factors(self):
        assert invariant_factors([2, 4, 3]) == (2, 12)
        assert invariant_factors([1, 1]) == ()

    def test_non_associative_table_rejected(self):
        """REGRESSION GUARD: tables are checked, never trusted."""
        with pytest.raises(GroupAxiomError):
            FiniteGroup.from_table([[0, 1, 2], [1, 0, 0], [2, 0, 0]])

    def test_missing_identity_rejected(self):
        with pytest.raises(GroupAxiomError):
            FiniteGroup.from_table([[1, 0], [1, 0]])

    def test_non_abelian_invariants_rejected(self):
        with pytest.raises(GroupAxiomError):
            S3.abelian_invariants()


class TestCrossedModule:

    def test_identity_complex(self):
        xmod = CrossedModule.identity_complex(S3)
        assert xmod.pi1() == (S3.identity,)
        assert len(xmod.pi0()) == 1

    def test_shifted_groups(self):
        low = CrossedModule.from_abelian(Z3, 1)
        assert low.pi1() == (0, 1, 2)
        high = CrossedModule.from_abelian(S3, 0)
        assert len(high.pi0()) == 6

    def test_normal_subgroup(self):
        xmod = alternating_in_s3()
        assert len(xmod.pi0()) == 2
        assert xmod.pi1() == (0,)

    def test_shift_of_non_abelian_rejected(self):
        with pytest.raises(GroupAxiomError):
            CrossedModule.from_abelian(S3, 1)

    def test_non_homomorphism_rejected(self):
        with pytest.raises(GroupAxiomError):
            CrossedModule(Z2, Z3, (0, 1), tuple((0, 1) for _ in range(3)))

    def test_equivariance_enforced(self):
        """ASSERTION: d(δ(f)(a)) must equal f·d(a)·f⁻¹."""
        trivial_action = tuple(tuple(S3.elements) for _ in S3.elements)
        with pytest.raises(GroupAxiomError):
            CrossedModule(S3, S3, tuple(S3.elements), trivial_action)


class TestVerifyCocycle:

    def test_trivial_cocycle(self):
        xmod = CrossedModule.identity_complex(S3)
        assert verify_cocycle(sphere(), xmod, TwoGroupCocycle.trivial(sphere(), xmod)).holds

    def test_vacuous_on_circle(self):
        xmod = CrossedModule.from_abelian(S3, 0)
        c = TwoGroupCocycle((1, 3, 5), ())
        assert verify_cocycle(circle(), xmod, c).holds

    def test_tetrahedron_identity(self):
        """Solid tetrahedron with (ℤ/2 → 1): α must be a cocycle on the one 3-simplex."""
        xmod = CrossedModule.from_abelian(Z2, 1)
        nerve = solid_simplex(3)
        f = (0,) * 6
        assert verify_cocycle(nerve, xmod, TwoGroupCocycle(f, (1, 1, 0, 0))).holds
        result = verify_cocycle(nerve, xmod, TwoGroupCocycle(f, (1, 1, 0, 1)))
        assert not result.holds
        assert result.first_violation.simplex == (0, 1, 2, 3)
        assert result.first_violation.identity == "tetrahedron"

    def test_sphere_generator_is_a_cocycle(self):
        xmod = CrossedModule.from_abelian(Z2, 1)
        assert verify_cocycle(sphere(), xmod, TwoGroupCocycle((0,) * 6, (1, 0, 0, 0))).holds

    def test_triangle_violation(self):
        xmod = CrossedModule.from_abelian(Z2, 0)
        result = verify_cocycle(solid_simplex(2), xmod, TwoGroupCocycle((1, 0, 0), (0,)))
        assert not result.holds
        assert result.first_violation.simplex == (0, 1, 2)
        assert result.first_violation.identity == "triangle"

    def test_incomplete_assignment(self):
        xmod = CrossedModule.from_abelian(Z2, 0)
        with pytest.raises(IncompleteDataError):
            verify_cocycle(circle(), xmod, TwoGroupCocycle((0,), ()))
        with pytest.raises(IncompleteDataError):
            TwoGroupCocycle.from_mapping(circle(), {(0, 1): 0}, {})


class TestCoboundaryAction:
    """The action of coboundary pairs on cocycles."""

    @pytest.mark.parametrize("xmod", [
        CrossedModule.identity_complex(S3),
        alternating_in_s3(),
        CrossedModule.from_abelian(S3, 0),
    ], ids=["S3->S3", "A3->S3", "S3[0]"])
    def test_action_preserves_cocycles(self, xmod):
        """ASSERTION: any (g, β) applied to a valid cocycle yields a valid cocycle."""
        rng = random.Random(13)
        for nerve in (solid_simplex(3), sphere()):
            c = TwoGroupCocycle.trivial(nerve, xmod)
            for _ in range(6):
                c = act(nerve, xmod, c, random_pair(rng, nerve, xmod))
                assert verify_cocycle(nerve, xmod, c).holds

    def test_identity_pair(self):
        xmod = alternating_in_s3()
        c = act(sphere(), xmod, TwoGroupCocycle.trivial(sphere(), xmod),
                random_pair(random.Random(2), sphere(), xmod))
        assert act(sphere(), xmod, c, CoboundaryPair.identity(sphere(), xmod)) == c

    def test_witness_found_for_related_cocycles(self):
        rng = random.Random(29)
        xmod = alternating_in_s3()
        nerve = sphere()
        c1 = act(nerve, xmod, TwoGroupCocycle.trivial(nerve, xmod), random_pair(rng, nerve, xmod))
        c2 = act(nerve, xmod, c1, random_pair(rng, nerve, xmod))
        witness = are_cohomologous(nerve, xmod, c1, c2)
        assert witness is not None
        assert act(nerve, xmod, c1, witness) == c2

    def test_self_witness(self):
        xmod = CrossedModule.from_abelian(Z2, 1)
        c = TwoGroupCocycle((0,) * 6, (1, 0, 0, 0))
        witness = are_cohomologous(sphere(), xmod, c, c)
        assert witness is not None

    def test_sphere_generator_not_trivial(self):
        """ASSERTION: the H²(S²; ℤ/2) generator admits no witness to the trivial cocycle."""
        xmod = CrossedModule.from_abelian(Z2, 1)
        generator = TwoGroupCocycle((0,) * 6, (1, 0, 0, 0))
        assert are_cohomologous(sphere(), xmod, TwoGroupCocycle.trivial(sphere(), xmod), generator) is None

    def test_sphere_cocycles_differing_by_coboundary(self):
        xmod = CrossedModule.from_abelian(Z2, 1)
        nerve = sphere()
        c1 = TwoGroupCocycle((0,) * 6, (1, 0, 0, 0))
        beta = (1, 0, 1, 1, 0, 0)
        c2 = act(nerve, xmod, c1, CoboundaryPair((0,) * 4, beta))
        assert c2 != c1
        assert are_cohomologous(nerve, xmod, c1, c2) is not None


class TestH1PointedSet:

    def test_h1_circle_z2(self):
        assert len(h1_pointed_set(circle(), CrossedModule.from_abelian(Z2, 0))) == 2

    def test_h2_circle_vanishes(self):
        assert len(h1_pointed_set(circle(), CrossedModule.from_abelian(Z2, 1))) == 1

    def test_trivial_coefficients(self):
        trivial = FiniteGroup.trivial()
        assert len(h1_pointed_set(torus(), CrossedModule.from_abelian(trivial, 0))) == 1

    def test_h2_sphere(self):
        classes = h1_pointed_set(sphere(), CrossedModule.from_abelian(Z2, 1))
        assert len(classes) == 2
        assert classes.base == 0
        assert classes.representatives[0] == TwoGroupCocycle.trivial(sphere(), classes.xmod)

    def test_acyclic_complex(self):
        assert len(h1_pointed_set(sphere(), CrossedModule.identity_complex(Z2))) == 1

    def test_non_abelian_on_circle(self):
        """H¹(S¹; S₃) counts conjugacy classes of S₃."""
        assert len(h1_pointed_set(circle(), CrossedModule.from_abelian(S3, 0))) == 3

    def test_normal_subgroup_quotient(self):
        """A₃ → S₃ is equivalent to the discrete group S₃/A₃ = ℤ/2."""
        assert len(h1_pointed_set(circle(), alternating_in_s3())) == 2

    def test_vertex_reordering(self):
        """ASSERTION: class counts do not depend on the vertex order."""
        xmod = CrossedModule.from_abelian(Z2, 0)
        nerve = projective_plane()
        relabeled = nerve.relabel([3, 5, 0, 4, 1, 2])
        assert len(h1_pointed_set(nerve, xmod)) == len(h1_pointed_set(relabeled, xmod)) == 2

    def test_class_of(self):
        xmod = CrossedModule.from_abelian(Z2, 1)
        classes = h1_pointed_set(sphere(), xmod)
        moved = act(sphere(), xmod, TwoGroupCocycle((0,) * 6, (0, 1, 0, 0)),
                    CoboundaryPair((0,) * 4, (1, 1, 0, 0, 1, 0)))
        assert classes.class_of(moved) == 1
        assert classes.class_of(TwoGroupCocycle.trivial(sphere(), xmod)) == 0

    def test_class_group(self):
        classes = h1_pointed_set(torus(), CrossedModule.from_abelian(Z2, 0))
        assert class_group(classes).abelian_invariants() == (2, 2)

    def test_budget_exceeded(self):
        """REGRESSION GUARD: a search out of budget fails loudly."""
        with pytest.raises(BudgetExceededError):
            h1_pointed_set(sphere(), CrossedModule.from_abelian(Z2, 1), budget=1)

    def test_budget_covers_class_deduplication(self):
        """REGRESSION GUARD: slice enumeration and witness searches share one budget.

        A run that returns has explored at most `budget` nodes in total; the
        exact total succeeds and one node less fails.
        """
        xmod = CrossedModule.from_abelian(S3, 0)
        needed = h1_pointed_set(torus(), xmod).explored
        for budget in sorted({50, needed // 3, needed // 2, max(1, needed - 200), needed - 1, needed, needed + 25}):
            try:
                classes = h1_pointed_set(torus(), xmod, budget=budget)
            except BudgetExceededError as exc:
                assert budget < needed
                assert exc.budget == budget
                continue
            assert classes.explored <= budget
            assert classes.explored == needed
        with pytest.raises(BudgetExceededError):
            h1_pointed_set(torus(), xmod, budget=needed - 1)

    def test_json(self):
        data = h1_pointed_set(circle(), CrossedModule.from_abelian(Z2, 0)).to_json()
        assert data["kind"] == "h1_classes"
        assert data["count"] == 2


class TestCompareWithAbelian:

    def test_z3_on_circle(self):
        assert compare_with_abelian(circle(), Z3, 0)

    def test_z2_shifted_on_sphere(self):
        assert compare_with_abelian(sphere(), Z2, 1)

    def test_klein_group_on_projective_plane(self):
        assert compare_with_abelian(projective_plane(), FiniteGroup.direct_product(Z2, Z2), 0)

    def test_z4_shifted_on_projective_plane(self):
        assert compare_with_abelian(projective_plane(), FiniteGroup.cyclic(4), 1)

    def test_z2_on_torus(self):
        assert compare_with_abelian(torus(), Z2, 0)

    def test_non_abelian_degree_one(self):
        assert compare_with_abelian(circle(), S3, 0)

    def test_acyclic_complex(self):
        assert compare_with_abelian(sphere(), CrossedModule.identity_complex(Z2))

    def test_non_abelian_shift_rejected(self):
        with pytest.raises(GroupAxiomError):
            compare_with_abelian(circle(), S3, 1)


class TestLowDegrees:

    def test_h_minus1(self):
        xmod = CrossedModule.from_abelian(Z2, 1)
        assert h_minus1(circle(), xmod)["order"] == 2
        two_points = CoverNerve.from_simplices(2, [])
        assert h_minus1(two_points, xmod)["order"] == 4

    def test_h_minus1_of_acyclic(self):
        assert h_minus1(sphere(), CrossedModule.identity_complex(S3))["order"] == 1

    def test_h0_constant_sections(self):
        assert len(h0_pointed_set(circle(), CrossedModule.from_abelian(Z3, 0))) == 3

    def test_h0_of_shifted_group(self):
        """H⁰(S¹; G[1]) = H¹(S¹; G)."""
        assert len(h0_pointed_set(circle(), CrossedModule.from_abelian(Z2, 1))) == 2


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
