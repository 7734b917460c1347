import random

import pytest

from symnorm.actions import direct_product, orbit_action
from symnorm.group import Group, conjugate_group, symmetric_group
from symnorm.intransitive import (
    SubdirectDecomposition,
    dpwp_overgroup,
    dpwp_structure,
    orbit_sort,
    permutation_isomorphic,
)
from symnorm.perm import Permutation
from symnorm.search import normaliser_in, oracle_normaliser


def G(degree, *cycle_texts):
    return Group(degree, [Permutation.from_cycles(t, degree) for t in cycle_texts])


C4 = G(4, "(1,2,3,4)")
KLEIN_REG = G(4, "(1,2)(3,4)", "(1,3)(2,4)")


class TestPermutationIsomorphic:
    def test_equal_groups_give_identity(self):
        s = permutation_isomorphic(C4, C4)
        assert s is not None and s.is_identity()

    def test_relabelled_copy_is_found_and_verified(self):
        other = G(4, "(1,3,2,4)")
        s = permutation_isomorphic(C4, other)
        assert s is not None
        assert conjugate_group(C4, s).equals(other)

    def test_c4_vs_klein_none(self):
        assert permutation_isomorphic(C4, KLEIN_REG) is None

    def test_degree_mismatch_none(self):
        assert permutation_isomorphic(G(3, "(1,2,3)"), G(4, "(1,2,3)")) is None

    def test_order_mismatch_none(self):
        assert permutation_isomorphic(G(4, "(1,2)"), C4) is None

    def test_rank_prefilter_rejects(self):
        # same degree and order, different point stabilizer orbit counts
        d8 = G(8, "(1,2,3,4,5,6,7,8)", "(2,8)(3,7)(4,6)")
        w = G(8, "(1,2)(3,4)(5,6)(7,8)", "(1,3)(2,4)(5,7)(6,8)",
              "(1,5)(2,6)(3,7)(4,8)", "(3,4)(7,8)")
        assert d8.order() == w.order() == 16

        def rank(g):
            return len(g.point_stabilizer(1).orbits0())

        assert rank(d8) != rank(w)
        assert permutation_isomorphic(d8, w) is None


class TestOrbitSort:
    def test_interleaved_orbits_are_made_consecutive(self):
        g = G(6, "(1,3,5)", "(2,4,6)")
        dec = orbit_sort(g)
        assert len(dec.factors) == 1
        fac, mult = dec.factors[0]
        assert (fac.degree, fac.order(), mult) == (3, 3, 2)
        rel = dec.apply(g)
        assert rel.orbit_partition() == [(1, 2, 3), (4, 5, 6)]

    def test_same_class_orbits_have_equal_images(self):
        g = G(6, "(1,3,5)", "(2,6,4)")
        rel = orbit_sort(g).apply(g)
        i1 = orbit_action(rel, (1, 2, 3)).image_group()
        i2 = orbit_action(rel, (4, 5, 6)).image_group()
        assert i1.equals(i2)

    def test_transitive_group_is_left_alone(self):
        dec = orbit_sort(C4)
        assert dec.relabelling.is_identity()
        assert dec.factors == ((C4, 1),) or dec.factors[0][0].equals(C4)

    def test_factor_ordering_degree_then_order(self):
        g = G(5, "(4,5)", "(1,2,3)")
        dec = orbit_sort(g)
        assert [(f.degree, e) for f, e in dec.factors] == [(2, 1), (3, 1)]
        rel = dec.apply(g)
        assert rel.orbit_partition() == [(1, 2), (3, 4, 5)]

    def test_fixed_points_collect_in_front(self):
        g = G(4, "(2,3)")
        dec = orbit_sort(g)
        assert [(f.degree, e) for f, e in dec.factors] == [(1, 2), (2, 1)]
        rel = dec.apply(g)
        assert rel.generators[0].support() == (3, 4)

    def test_equal_order_classes_split_by_type(self):
        # one C4 orbit and one Klein orbit: same degree and order, two classes
        g = Group(8, [Permutation.from_cycles("(1,2,3,4)", 8),
                      Permutation.from_cycles("(5,6)(7,8)", 8),
                      Permutation.from_cycles("(5,7)(6,8)", 8)])
        dec = orbit_sort(g)
        assert sorted(f.order() for f, _ in dec.factors) == [4, 4]
        assert all(e == 1 for _, e in dec.factors)

    def test_idempotent_on_sorted_groups(self):
        samples = [
            G(6, "(1,3,5)", "(2,4,6)"),
            G(6, "(1,2,3)(4,5,6)"),
            G(5, "(4,5)", "(1,2,3)"),
            G(7, "(2,3)", "(4,5,6,7)"),
            G(8, "(1,5)(2,6)", "(3,4)", "(7,8)"),
        ]
        for g in samples:
            rel = orbit_sort(g).apply(g)
            again = orbit_sort(rel)
            assert again.relabelling.is_identity()

    def test_relabelling_round_trip(self):
        g = G(6, "(2,6)", "(3,5)")
        dec = orbit_sort(g)
        assert dec.undo(dec.apply(g)).equals(g)

    def test_offsets(self):
        g = G(5, "(4,5)", "(1,2,3)")
        assert orbit_sort(g).factor_offsets() == (0, 2)


class TestDpwpOvergroup:
    def test_c3_times_c3(self):
        w, rho = dpwp_overgroup(G(6, "(1,2,3)", "(4,5,6)"))
        assert w.order() == 72

    def test_diagonal_c3_same_overgroup(self):
        w, rho = dpwp_overgroup(G(6, "(1,2,3)(4,5,6)"))
        assert w.order() == 72
        assert rho.is_identity()

    def test_s2_times_c3(self):
        w, _ = dpwp_overgroup(G(5, "(1,2)", "(3,4,5)"))
        assert w.order() == 12

    def test_overgroup_contains_relabelled_input(self):
        for g in [G(6, "(1,3,5)", "(2,4,6)"), G(6, "(2,6)", "(3,5)"),
                  G(7, "(1,2)", "(3,4,5,6,7)")]:
            w, rho = dpwp_overgroup(g)
            assert w.contains_group(conjugate_group(g, rho.inverse()))

    def test_overgroup_contains_oracle_normaliser(self):
        samples = [
            G(6, "(1,2,3)(4,5,6)"),
            G(6, "(1,2)(3,4)", "(5,6)"),
            G(8, "(1,2)(3,4)(5,6)(7,8)"),
            G(7, "(2,3)", "(4,5,6,7)"),
            G(8, "(1,2,3,4)", "(5,6,7,8)"),
        ]
        for g in samples:
            w, rho = dpwp_overgroup(g)
            rel = conjugate_group(g, rho.inverse())
            assert w.contains_group(oracle_normaliser(rel))

    def test_exact_for_full_direct_products_small(self):
        # a full product of transitive factors needs no refinement at all
        cases = [
            G(6, "(1,2,3)", "(4,5,6)"),
            G(5, "(1,2)", "(3,4,5)"),
            G(6, "(1,2)", "(3,4)", "(5,6)"),
            G(8, "(1,2,3,4)", "(1,2)", "(5,6,7,8)", "(5,6)"),
        ]
        for g in cases:
            w, rho = dpwp_overgroup(g)
            rel = conjugate_group(g, rho.inverse())
            assert w.equals(oracle_normaliser(rel))

    def test_exact_for_full_direct_products_degree_12(self):
        base = G(6, "(1,2,3,4,5,6)")
        prod, _ = direct_product([base, base])
        w, rho = dpwp_overgroup(prod)
        rel = conjugate_group(prod, rho.inverse())
        assert w.equals(normaliser_in(symmetric_group(12), rel))

    def test_structure_exposes_normalisers(self):
        dec = orbit_sort(G(6, "(1,2,3)(4,5,6)"))
        st = dpwp_structure(
            dec, lambda f: normaliser_in(symmetric_group(f.degree), f))
        assert [n.order() for n in st.factor_normalisers] == [6]
        assert st.offsets == (0,)
        assert st.group.order() == 72

    def test_custom_normaliser_fn_is_used(self):
        calls = []

        def nf(fac):
            calls.append(fac.degree)
            return symmetric_group(fac.degree)

        w, _ = dpwp_overgroup(G(5, "(1,2)", "(3,4,5)"), normaliser_fn=nf)
        assert calls == [2, 3]
        assert w.order() == 12

    def test_bad_normaliser_fn_rejected(self):
        dec = orbit_sort(G(5, "(1,2)", "(3,4,5)"))
        with pytest.raises(ValueError):
            dpwp_structure(dec, lambda f: Group(f.degree, []))

    def test_random_groups_relabelled_containment(self):
        rng = random.Random(61512)
        for _ in range(25):
            n = rng.randrange(4, 9)
            gens = []
            for _ in range(rng.randrange(1, 3)):
                img = list(range(n))
                rng.shuffle(img)
                gens.append(Permutation._from_raw(tuple(img)))
            g = Group(n, gens)
            if g.is_transitive():
                continue
            w, rho = dpwp_overgroup(g)
            rel = conjugate_group(g, rho.inverse())
            assert w.contains_group(rel)
            assert w.contains_group(oracle_normaliser(rel))
