import random

import pytest

from conftest import group_elements

from symnorm.actions import (
    GroupHom,
    block_action,
    coset_action,
    direct_product,
    hom_product,
    image_group,
    image_of_subgroup,
    induced_wreath_hom,
    kernel,
    orbit_action,
    preimage_of_subgroup,
    wreath_product,
)
from symnorm.errors import DegreeCapError, DegreeMismatchError
from symnorm.group import Group, symmetric_group, trivial_group
from symnorm.perm import Permutation


def G(degree, *cycle_texts, order=None):
    return Group(degree, [Permutation.from_cycles(t, degree) for t in cycle_texts],
                 order=order)


S4 = G(4, "(1,2)", "(1,2,3,4)")
C4 = G(4, "(1,2,3,4)")
KLEIN_REG = G(4, "(1,2)(3,4)", "(1,3)(2,4)")


def check_hom(f, samples=20, seed=1):
    rng = random.Random(seed)
    assert f.eval(Permutation.identity(f.domain.degree)).is_identity()
    for _ in range(samples):
        a = f.domain.random_element(rng)
        b = f.domain.random_element(rng)
        assert f.eval(a * b) == f.eval(a) * f.eval(b)
    assert f.domain.order() == f.kernel().order() * f.image_group().order()


class TestGroupHom:
    def test_eval_on_generators(self):
        f = GroupHom(C4, 2, [Permutation.from_cycles("(1,2)", 2)])
        assert f.eval(Permutation.from_cycles("(1,2,3,4)", 4)) == Permutation.from_cycles("(1,2)", 2)
        assert f.eval(Permutation.from_cycles("(1,3)(2,4)", 4)).is_identity()
        check_hom(f)

    def test_eval_rejects_non_members(self):
        f = GroupHom(C4, 2, [Permutation.from_cycles("(1,2)", 2)])
        with pytest.raises(ValueError):
            f.eval(Permutation.from_cycles("(1,2)", 4))

    def test_rejects_non_homomorphism(self):
        f = GroupHom(G(3, "(1,2,3)"), 2, [Permutation.from_cycles("(1,2)", 2)])
        with pytest.raises(ValueError):
            f.eval(Permutation.from_cycles("(1,2,3)", 3))

    def test_image_count_mismatch(self):
        with pytest.raises(ValueError):
            GroupHom(S4, 2, [Permutation.identity(2)])

    def test_kernel_and_image_orders(self):
        f = block_action(C4, [(1, 3), (2, 4)])
        k = kernel(f)
        assert k.order() == 2
        assert k.contains(Permutation.from_cycles("(1,3)(2,4)", 4))
        assert image_group(f).order() == 2

    def test_lift_round_trip(self):
        f = coset_action(S4, C4)
        rng = random.Random(2)
        for _ in range(10):
            v = f.image_group().random_element(rng)
            g = f.lift(v)
            assert f.eval(g) == v
        with pytest.raises(ValueError):
            GroupHom(C4, 2, [Permutation.from_cycles("(1,2)", 2)]).lift(
                Permutation.identity(3))

    def test_lift_outside_image(self):
        f = block_action(KLEIN_REG, [(1, 2), (3, 4)])
        img = image_group(f)
        assert img.order() == 2
        f2 = GroupHom(G(4, "(1,2)(3,4)"), 2, [Permutation.identity(2)])
        with pytest.raises(ValueError):
            f2.lift(Permutation.from_cycles("(1,2)", 2))

    def test_image_of_subgroup_preserves_order_when_injective(self):
        f = coset_action(S4, C4)
        sub = G(4, "(1,2,3)")
        assert image_of_subgroup(f, sub).order() == 3

    def test_preimage_of_full_image_is_domain(self):
        f = block_action(C4, [(1, 3), (2, 4)])
        pre = preimage_of_subgroup(f, symmetric_group(2))
        assert pre.equals(C4)

    def test_image_of_preimage(self):
        f = coset_action(S4, C4)
        v = G(6, "(1,2)")
        pre = preimage_of_subgroup(f, v)
        img = image_of_subgroup(f, pre)
        want = len(group_elements(v) & group_elements(image_group(f)))
        assert img.order() == want


class TestOrbitAction:
    def test_projection(self):
        g = G(5, "(1,2)", "(3,4,5)")
        f = orbit_action(g, {3, 4, 5})
        assert f.codomain_degree == 3
        assert image_group(f).equals(G(3, "(1,2,3)"))
        check_hom(f)

    def test_full_domain_is_identity_relabelling(self):
        g = G(4, "(1,2,3,4)")
        f = orbit_action(g, {1, 2, 3, 4})
        assert image_group(f).equals(g)

    def test_faithful_on_orbit(self):
        g = G(4, "(1,2)(3,4)")
        f = orbit_action(g, {1, 2})
        assert image_group(f).order() == 2
        assert kernel(f).is_trivial()

    def test_rejects_non_invariant(self):
        with pytest.raises(ValueError):
            orbit_action(G(4, "(1,2,3)"), {1, 2})


class TestBlockAction:
    def test_c4_halves(self):
        f = block_action(C4, [(1, 3), (2, 4)])
        assert f.codomain_degree == 2
        assert image_group(f).order() == 2
        check_hom(f)

    def test_klein_pairs(self):
        f = block_action(KLEIN_REG, [(1, 2), (3, 4)])
        assert image_group(f).order() == 2

    def test_singleton_blocks_are_isomorphic_copy(self):
        f = block_action(S4, [(1,), (2,), (3,), (4,)])
        assert image_group(f).equals(S4)
        assert kernel(f).is_trivial()

    def test_rejects_non_invariant_system(self):
        with pytest.raises(ValueError):
            block_action(C4, [(1, 2), (3, 4)])

    def test_rejects_non_partition(self):
        with pytest.raises(ValueError):
            block_action(C4, [(1, 3), (2, 3)])


class TestCosetAction:
    def test_s4_mod_c4(self):
        f = coset_action(S4, C4)
        assert f.codomain_degree == 6
        img = image_group(f)
        assert img.order() == 24
        assert img.is_transitive()
        check_hom(f)

    def test_klein_image_has_three_two_orbits(self):
        f = coset_action(S4, C4)
        img = image_of_subgroup(f, KLEIN_REG)
        lengths = sorted(len(o) for o in img.orbit_partition())
        assert lengths == [2, 2, 2]

    def test_whole_group_gives_degree_one(self):
        f = coset_action(S4, S4)
        assert f.codomain_degree == 1
        assert image_group(f).is_trivial()

    def test_kernel_is_core(self):
        f = coset_action(S4, G(4, "(1,2)(3,4)", "(1,3)(2,4)", "(1,2)"))
        assert kernel(f).order() == 4

    def test_point_one_is_the_subgroup(self):
        f = coset_action(S4, C4)
        stab = image_group(f).point_stabilizer(1)
        pulled = preimage_of_subgroup(f, stab)
        assert pulled.equals(C4)

    def test_subgroup_required(self):
        with pytest.raises(ValueError):
            coset_action(G(4, "(1,2,3)"), G(4, "(1,2)"))

    def test_index_cap(self):
        with pytest.raises(DegreeCapError):
            coset_action(symmetric_group(8), trivial_group(8), cap=1000)


class TestProducts:
    def test_direct_product(self):
        g, offsets = direct_product([G(3, "(1,2,3)"), G(3, "(1,2,3)")])
        assert g.degree == 6
        assert g.order() == 9
        assert offsets == [0, 3]
        assert g.contains(Permutation.from_cycles("(4,5,6)", 6))

    def test_direct_product_mixed(self):
        g, _ = direct_product([G(3, "(1,2)", "(1,2,3)"), G(2, "(1,2)")])
        assert g.degree == 5
        assert g.order() == 12

    def test_single_factor(self):
        g, offsets = direct_product([S4])
        assert g.equals(S4)
        assert offsets == [0]

    def test_empty_product_rejected(self):
        with pytest.raises(ValueError):
            direct_product([])

    def test_wreath_s2_s3(self):
        w = wreath_product(symmetric_group(2), symmetric_group(3))
        assert w.degree == 6
        assert w.order() == 48

    def test_wreath_s3_s2(self):
        w = wreath_product(symmetric_group(3), symmetric_group(2))
        assert w.degree == 6
        assert w.order() == 72

    def test_wreath_with_point_top(self):
        w = wreath_product(S4, trivial_group(1))
        assert w.equals(S4)

    def test_wreath_intransitive_top_keeps_order_formula(self):
        w = wreath_product(symmetric_group(2), trivial_group(2))
        assert w.degree == 4
        assert w.order() == 4

    def test_wreath_contains_direct_power(self):
        w = wreath_product(symmetric_group(2), symmetric_group(3))
        power, _ = direct_product([symmetric_group(2)] * 3)
        assert w.contains_group(power)


class TestInducedWreath:
    def test_one_copy_is_f(self):
        f = coset_action(S4, C4)
        F = induced_wreath_hom(f, 1)
        assert F.codomain_degree == 6
        assert image_group(F).equals(image_group(f))

    def test_s4_wr_s2_induced(self):
        f = coset_action(S4, C4)
        F = induced_wreath_hom(f, 2)
        assert F.domain.degree == 8
        assert F.domain.order() == 24 * 24 * 2
        assert F.codomain_degree == 12
        check_hom(F, samples=10)

    def test_klein_squared_image_orbits(self):
        f = coset_action(S4, C4)
        F = induced_wreath_hom(f, 2)
        kk, _ = direct_product([KLEIN_REG, KLEIN_REG])
        img = image_of_subgroup(F, kk)
        lengths = sorted(len(o) for o in img.orbit_partition())
        assert lengths == [2, 2, 2, 2, 2, 2]

    def test_base_restriction_is_product_of_f(self):
        f = block_action(C4, [(1, 3), (2, 4)])
        F = induced_wreath_hom(f, 2)
        base, _ = direct_product([C4, C4])
        img = image_of_subgroup(F, base)
        want, _ = direct_product([image_group(f), image_group(f)])
        assert img.equals(want)


class TestHomProduct:
    def test_single(self):
        f = block_action(C4, [(1, 3), (2, 4)])
        F = hom_product([f])
        assert F.codomain_degree == f.codomain_degree
        assert image_group(F).equals(image_group(f))

    def test_orbit_actions_cover_domain_faithfully(self):
        g = G(5, "(1,2)", "(3,4,5)")
        fs = [orbit_action(g, o) for o in g.orbit_partition()]
        F = hom_product(fs)
        assert kernel(F).is_trivial()
        assert image_group(F).order() == g.order()

    def test_two_block_actions_of_klein(self):
        f1 = block_action(KLEIN_REG, [(1, 2), (3, 4)])
        f2 = block_action(KLEIN_REG, [(1, 3), (2, 4)])
        F = hom_product([f1, f2])
        assert kernel(F).order() == 1
        check_hom(F)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            hom_product([])

    def test_mismatched_domains_rejected(self):
        f1 = block_action(C4, [(1, 3), (2, 4)])
        f2 = block_action(KLEIN_REG, [(1, 2), (3, 4)])
        with pytest.raises(ValueError):
            hom_product([f1, f2])
