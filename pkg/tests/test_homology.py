"""
Čech Cohomology Suite.

Tests nerves, cochain complexes, Smith normal form and cohomology:
- textbook groups of S¹, S², T² and ℝP² in every coefficient group
- coordinates vanish on coboundaries
- cup products, tensor complexes and pullbacks
- brute-force agreement for ℤ/m and ℤ/m-restricted ℚ/ℤ classes
"""

import itertools
import random
from fractions import Fraction
from math import gcd, prod

import pytest

import config
import homology.smith as smith_module
from exceptions import CocycleError, PairingError
from homology import (
    QMODZ, RCX, Cochain, CoefficientGroup, Q, RCxValue, Z, bockstein, check_smith_form,
    coboundary, coboundary_preimage, cohomology, cup_product, induced_map_matrix,
    nerve_complex, point_complex, pullback, smith_decomposition, smith_normal_form,
    subgroup_order, tensor_total_complex,
)
from homology.nerve import CoverNerve, circle, point, projective_plane, solid_simplex, sphere, torus
from services.sampling import random_cochain, random_permutation


def Zmod(m):
    return CoefficientGroup.zmod(m)


class TestNerve:

    def test_closure(self):
        nerve = CoverNerve.from_simplices(3, [(0, 1, 2)])
        assert nerve.simplices(1) == ((0, 1), (0, 2), (1, 2))
        assert nerve.dimension == 2

    def test_models(self):
        assert (circle().count(0), circle().count(1), circle().count(2)) == (3, 3, 0)
        assert (torus().count(0), torus().count(1), torus().count(2)) == (7, 21, 14)
        assert (projective_plane().count(1), projective_plane().count(2)) == (15, 10)

    def test_bad_vertex(self):
        with pytest.raises(ValueError):
            CoverNerve.from_simplices(2, [(0, 3)])

    def test_spanning_forest_and_components(self):
        nerve = CoverNerve.from_simplices(5, [(0, 1), (1, 2), (3, 4)])
        roots, tree = nerve.spanning_forest()
        assert roots == [0, 3]
        assert len(tree) == 3
        assert nerve.components() == [[0, 1, 2], [3, 4]]

    def test_json_lists_maximal_simplices(self):
        assert sphere().to_json()["simplices"] == [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]


class TestCoboundary:

    def test_constant_zero_cochain(self):
        complex = nerve_complex(sphere())
        assert coboundary(Cochain.unit(complex)).is_zero()

    def test_d_squared(self):
        """ASSERTION: d∘d = 0 for random cochains in every coefficient group."""
        rng = random.Random(1)
        for nerve in (sphere(), torus(), projective_plane()):
            complex = nerve_complex(nerve)
            assert complex.is_complex()
            for coeff in (Z, Zmod(4), Q, QMODZ, RCX):
                for k in (0, 1):
                    c = random_cochain(rng, complex, k, coeff)
                    assert coboundary(coboundary(c)).is_zero()

    def test_vacuous_on_circle(self):
        complex = nerve_complex(circle())
        c = Cochain(complex, 1, (1, 2, 3))
        dc = coboundary(c)
        assert dc.values == () and dc.is_zero()

    def test_sign_convention(self):
        complex = nerve_complex(solid_simplex(2))
        c = Cochain.from_mapping(complex, 1, {(0, 1): 1})
        assert coboundary(c).value((0, 1, 2)) == 1
        c = Cochain.from_mapping(complex, 1, {(0, 2): 1})
        assert coboundary(c).value((0, 1, 2)) == -1


class TestSmithNormalForm:

    def test_identity(self):
        eye = [[1, 0], [0, 1]]
        U, D, V = smith_normal_form(eye)
        assert (U, D, V) == (eye, eye, eye)

    def test_one_by_one(self):
        assert smith_normal_form([[1]])[1] == [[1]]

    def test_two_by_two(self):
        A = [[2, 4], [6, 8]]
        U, D, V = smith_normal_form(A)
        assert D == [[2, 0], [0, 4]]
        assert check_smith_form(A, U, D, V)

    def test_random_postcondition_and_determinism(self):
        rng = random.Random(8)
        for _ in range(30):
            rows, cols = rng.randint(1, 5), rng.randint(1, 5)
            A = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
            result = smith_decomposition(A)
            assert check_smith_form(A, result.U, result.D, result.V)
            assert smith_decomposition(A) == result

    def test_inverses_tracked(self):
        A = [[3, 5, 7], [2, 4, 6]]
        r = smith_decomposition(A)
        for M, M_inv in ((r.U, r.U_inv), (r.V, r.V_inv)):
            n = len(M)
            product = [[sum(M[i][k] * M_inv[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
            assert product == [[int(i == j) for j in range(n)] for i in range(n)]

    def test_postcondition_runs_after_unchecked_cache(self, monkeypatch):
        """REGRESSION GUARD: a result cached with the check off is re-derived and checked once it is on."""
        monkeypatch.delenv("MICROCECH_CHECK_SNF")
        config.reload_settings()
        unchecked = cohomology(torus(), Z, 1)

        calls = []
        original = smith_module.check_smith_form

        def counting(*args, **kwargs):
            calls.append(1)
            return original(*args, **kwargs)

        monkeypatch.setattr(smith_module, "check_smith_form", counting)
        monkeypatch.setenv("MICROCECH_CHECK_SNF", "1")
        config.reload_settings()
        checked = cohomology(torus(), Z, 1)
        assert calls
        assert checked == unchecked
        assert checked.free_rank == 2


class TestSettingsCache:

    def test_environment_read_once(self, monkeypatch):
        first = config.get_settings()
        monkeypatch.setenv("MICROCECH_THREADS", "3")
        assert config.get_settings() is first
        assert config.reload_settings().threads == 3

    def test_overrides_rebuild_settings(self):
        assert config.configure(budget=17).budget == 17
        assert config.get_settings().budget == 17
        assert config.configure().budget == config.load_settings().budget


class TestTextbookCohomology:
    """REGRESSION GUARD: model nerves give the textbook groups."""

    @pytest.mark.parametrize("nerve, expected", [
        (circle(), [(1, ()), (1, ())]),
        (sphere(), [(1, ()), (0, ()), (1, ())]),
        (torus(), [(1, ()), (2, ()), (1, ())]),
        (projective_plane(), [(1, ()), (0, ()), (0, (2,))]),
    ])
    def test_integral(self, nerve, expected):
        for k, (free, torsion) in enumerate(expected):
            h = cohomology(nerve, Z, k)
            assert (h.free_rank, h.torsion) == (free, torsion)

    def test_rp2_mod_two(self):
        assert [cohomology(projective_plane(), Zmod(2), k).torsion for k in range(3)] == [(2,), (2,), (2,)]

    def test_rp2_mod_three(self):
        assert [cohomology(projective_plane(), Zmod(3), k).order() for k in range(3)] == [3, 1, 1]

    def test_rational(self):
        assert [cohomology(torus(), Q, k).rational_rank for k in range(3)] == [1, 2, 1]
        assert [cohomology(projective_plane(), Q, k).rational_rank for k in range(3)] == [1, 0, 0]

    def test_qmodz(self):
        h = [cohomology(projective_plane(), QMODZ, k) for k in range(3)]
        assert (h[0].circle_rank, h[0].torsion) == (1, ())
        assert (h[1].circle_rank, h[1].torsion) == (0, (2,))
        assert h[2].is_trivial()

    def test_sphere_rcx(self):
        h = cohomology(sphere(), RCX, 2)
        assert (h.torsion, h.circle_rank, h.rational_rank) == ((), 1, 1)
        assert h.describe() == "Q/Z + Q"

    def test_beyond_top_degree(self):
        assert cohomology(circle(), Z, 5).is_trivial()

    def test_negative_degree(self):
        with pytest.raises(ValueError):
            cohomology(circle(), Z, -1)


class TestCoordinates:

    def test_coboundaries_have_zero_coordinates(self):
        """ASSERTION: coordinates of a coboundary are zero in every group."""
        rng = random.Random(12)
        for nerve in (torus(), projective_plane()):
            complex = nerve_complex(nerve)
            for coeff in (Z, Zmod(4), Q, QMODZ, RCX):
                for k in (1, 2):
                    h = cohomology(nerve, coeff, k)
                    c = random_cochain(rng, complex, k - 1, coeff)
                    assert h.coordinates(coboundary(c)) == h.zero_coordinates()

    def test_generators_are_unit_vectors(self):
        for nerve in (torus(), projective_plane()):
            for coeff in (Z, Zmod(2), Zmod(4), Q):
                h = cohomology(nerve, coeff, 1)
                for j, g in enumerate(h.generators):
                    coords = h.coordinates(g)
                    assert coords == tuple(int(i == j) for i in range(len(coords)))

    def test_coordinates_are_additive(self):
        rng = random.Random(14)
        nerve = torus()
        complex = nerve_complex(nerve)
        h = cohomology(nerve, Zmod(6), 1)
        gens = h.generators
        for _ in range(10):
            a = [rng.randrange(6) for _ in gens]
            c = Cochain.zero(complex, 1, Zmod(6))
            for n, g in zip(a, gens):
                c = c + g.times(n)
            c = c + coboundary(random_cochain(rng, complex, 0, Zmod(6)))
            assert h.coordinates(c) == tuple(n % d for n, d in zip(a, h.torsion))

    def test_circle_direction(self):
        nerve = circle()
        h = cohomology(nerve, QMODZ, 1)
        g = h.directions[0]
        c = g.map_values(lambda v: Fraction(v, 3), QMODZ)
        assert h.coordinates(c) == (Fraction(1, 3),)
        assert h.coordinates(c.times(3)) == (Fraction(0),)

    def test_torsion_from_bockstein(self):
        nerve = projective_plane()
        h1 = cohomology(nerve, QMODZ, 1)
        w = h1.generators[0]
        assert h1.coordinates(w) == (1,)
        assert h1.coordinates(w.times(2)) == (0,)
        h2 = cohomology(nerve, Z, 2)
        assert h2.coordinates(bockstein(w)) == (1,)

    def test_rcx_splits(self):
        nerve = sphere()
        complex = nerve_complex(nerve)
        h = cohomology(nerve, RCX, 2)
        g = cohomology(nerve, Z, 2).generators[0]
        c = Cochain(complex, 2, tuple(RCxValue(Fraction(v, 4), Fraction(v, 2)) for v in g.values), RCX)
        assert h.coordinates(c) == (Fraction(1, 4), Fraction(1, 2))

    def test_non_cocycle_rejected(self):
        complex = nerve_complex(sphere())
        c = Cochain.from_mapping(complex, 1, {(0, 1): 1})
        with pytest.raises(CocycleError):
            cohomology(sphere(), Z, 1).coordinates(c)


class TestBruteForce:
    """Agreement with exhaustive enumeration on small nerves."""

    def _cocycles(self, nerve, k, m):
        complex = nerve_complex(nerve, Zmod(m))
        for values in itertools.product(range(m), repeat=complex.dim(k)):
            c = Cochain(complex, k, values, Zmod(m))
            if coboundary(c).is_zero():
                yield c

    def test_zmod_order_matches_enumeration(self):
        for nerve, k, m in ((circle(), 1, 4), (sphere(), 1, 2), (projective_plane(), 1, 2)):
            complex = nerve_complex(nerve, Zmod(m))
            cocycles = sum(1 for _ in self._cocycles(nerve, k, m))
            boundaries = {
                coboundary(Cochain(complex, k - 1, values, Zmod(m))).values
                for values in itertools.product(range(m), repeat=complex.dim(k - 1))
            }
            assert cohomology(nerve, Zmod(m), k).order() == cocycles // len(boundaries)

    def test_qmodz_restricted_classes(self):
        """ASSERTION: classes of (1/m)ℤ/ℤ-valued cocycles fill the m-torsion of H^k(ℚ/ℤ)."""
        for nerve, k, m in ((circle(), 1, 4), (projective_plane(), 1, 2), (projective_plane(), 0, 2)):
            h = cohomology(nerve, QMODZ, k)
            seen = set()
            for c in self._cocycles(nerve, k, m):
                lifted = c.map_values(lambda v: Fraction(v, m), QMODZ)
                seen.add(h.coordinates(lifted))
            expected = m ** h.circle_rank * prod(gcd(d, m) for d in h.torsion)
            assert len(seen) == expected


class TestCupProduct:

    def test_unit_and_zero(self):
        rng = random.Random(3)
        complex = nerve_complex(torus())
        a = random_cochain(rng, complex, 1, Zmod(4))
        assert cup_product(a, Cochain.unit(complex)) == a
        zero = Cochain.zero(complex, 1, Z)
        assert cup_product(zero, a).is_zero()

    def test_torus_generators_pair_to_generator(self):
        nerve = torus()
        a, b = cohomology(nerve, Z, 1).generators
        h2 = cohomology(nerve, Z, 2)
        assert h2.coordinates(cup_product(a, b)) in ((1,), (-1,))

    def test_leibniz_rule(self):
        rng = random.Random(5)
        complex = nerve_complex(torus())
        for _ in range(5):
            a = random_cochain(rng, complex, 1, Z)
            b = random_cochain(rng, complex, 0, Z)
            lhs = coboundary(cup_product(a, b))
            rhs = cup_product(coboundary(a), b) - cup_product(a, coboundary(b))
            assert lhs == rhs

    def test_pairing_undefined(self):
        complex = nerve_complex(circle())
        with pytest.raises(PairingError):
            cup_product(Cochain.zero(complex, 0, QMODZ), Cochain.zero(complex, 0, Zmod(2)))


class TestTensorComplex:

    def test_torus_betti_numbers(self):
        s1 = nerve_complex(circle(), Q)
        total = tensor_total_complex(s1, s1)
        assert total.is_complex()
        assert [cohomology(total, Q, k).rational_rank for k in range(3)] == [1, 2, 1]

    def test_mod_four(self):
        s1 = nerve_complex(circle(), Zmod(4))
        total = tensor_total_complex(s1, s1)
        assert cohomology(total, Zmod(4), 1).torsion == (4, 4)

    def test_point_factor(self):
        rp2 = nerve_complex(projective_plane())
        total = tensor_total_complex(rp2, point_complex())
        for k in range(3):
            assert cohomology(total, Z, k) == cohomology(rp2, Z, k)

    def test_coefficient_mismatch(self):
        with pytest.raises(PairingError):
            tensor_total_complex(nerve_complex(circle(), Q), nerve_complex(circle(), Z))


class TestFunctoriality:

    def test_pullback_commutes_with_d(self):
        rng = random.Random(21)
        for _ in range(5):
            perm = random_permutation(rng, 7)
            source = torus()
            target = source.relabel(perm)
            complex = nerve_complex(target)
            for k in (0, 1):
                c = random_cochain(rng, complex, k, Z)
                assert pullback(perm, source, coboundary(c)) == coboundary(pullback(perm, source, c))

    def test_collapse_and_inclusion(self):
        rng = random.Random(22)
        c = random_cochain(rng, nerve_complex(point()), 0, Z)
        pulled = pullback([0, 0, 0], circle(), c)
        assert coboundary(pulled).is_zero()
        solid = nerve_complex(solid_simplex(3))
        d = random_cochain(rng, solid, 1, Z)
        assert pullback([0, 1, 2, 3], sphere(), coboundary(d)) == coboundary(pullback([0, 1, 2, 3], sphere(), d))

    def test_not_simplicial(self):
        discrete = CoverNerve.from_simplices(3, [])
        c = Cochain.zero(nerve_complex(discrete), 1)
        with pytest.raises(ValueError):
            pullback([0, 1, 2], circle(), c)

    def test_relabel_invariance(self):
        rng = random.Random(2)
        perm = random_permutation(rng, 6)
        for k in range(3):
            assert cohomology(projective_plane().relabel(perm), Z, k) == cohomology(projective_plane(), Z, k)


class TestHelpers:

    def test_coboundary_preimage(self):
        rng = random.Random(30)
        nerve = projective_plane()
        complex = nerve_complex(nerve)
        for coeff in (Z, Zmod(4), Q, QMODZ, RCX):
            x = random_cochain(rng, complex, 1, coeff)
            y = coboundary(x)
            pre = coboundary_preimage(y)
            assert pre is not None and coboundary(pre) == y

    def test_no_preimage(self):
        g = cohomology(circle(), Z, 1).generators[0]
        assert coboundary_preimage(g) is None

    def test_induced_map(self):
        h = cohomology(circle(), Zmod(4), 1)
        assert induced_map_matrix(h, h, lambda c: c.times(2)) == [[2]]

    def test_subgroup_order(self):
        assert subgroup_order([[2]], [4]) == 2
        assert subgroup_order([[1, 0], [0, 2]], [2, 4]) == 4
        assert subgroup_order([], [3]) == 1


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
