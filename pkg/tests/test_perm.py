import pytest
from hypothesis import given, strategies as st

from symnorm.errors import DegreeMismatchError, GroupParseError
from symnorm.perm import (
    Permutation,
    compose,
    compose_raw,
    conjugate,
    cycle_str_raw,
    identity_raw,
    inverse,
    inverse_raw,
    order_raw,
    parse_cycles_raw,
    perm_from_cycles,
)


def perm(text, degree):
    return Permutation.from_cycles(text, degree)


class TestConstruction:
    def test_identity(self):
        e = Permutation.identity(4)
        assert e.is_identity()
        assert e.images == (1, 2, 3, 4)
        assert e.degree == 4

    def test_from_images(self):
        p = Permutation([2, 3, 1])
        assert p.apply(1) == 2
        assert p.apply(3) == 1

    def test_rejects_non_bijection(self):
        with pytest.raises(GroupParseError):
            Permutation([1, 1, 3])
        with pytest.raises(GroupParseError):
            Permutation([0, 1, 2])
        with pytest.raises(GroupParseError):
            Permutation([2, 3, 4])

    def test_from_cycles(self):
        p = perm("(1,2,3)", 5)
        assert p.images == (2, 3, 1, 4, 5)
        q = perm("(1,2)(4,5)", 5)
        assert q.images == (2, 1, 3, 5, 4)

    def test_identity_cycle_text(self):
        assert perm("()", 3).is_identity()

    def test_singleton_cycle_is_noop(self):
        assert perm("(2)", 3).is_identity()

    def test_cycle_parse_errors(self):
        for bad in ["(1,2", "1,2)", "(1,2)(2,3)", "(0,1)", "(1,9)", "(1,x)", "(1,,2)", "abc"]:
            with pytest.raises(GroupParseError):
                parse_cycles_raw(bad, 4)


class TestComposition:
    def test_left_to_right(self):
        a = perm("(1,2)", 3)
        b = perm("(2,3)", 3)
        ab = a * b
        # apply a first: 1 -> 2 -> 3
        assert ab.apply(1) == 3
        assert ab == perm("(1,3,2)", 3)
        ba = b * a
        assert ba == perm("(1,2,3)", 3)

    def test_compose_raw_matches(self):
        a = perm("(1,4,2)", 4)
        b = perm("(2,3)", 4)
        assert compose_raw(a._img, b._img) == (a * b)._img
        assert compose(a, b) == a * b

    def test_degree_mismatch(self):
        with pytest.raises(DegreeMismatchError):
            perm("(1,2)", 3) * perm("(1,2)", 4)

    def test_inverse(self):
        p = perm("(1,2,3,4)", 5)
        assert (p * p.inverse()).is_identity()
        assert p.inverse() == perm("(1,4,3,2)", 5)
        assert inverse(p) == p.inverse()
        assert inverse_raw(p._img) == p.inverse()._img

    def test_pow(self):
        p = perm("(1,2,3,4,5)", 5)
        assert p ** 5 == Permutation.identity(5)
        assert p ** -1 == p.inverse()
        assert p ** 7 == p * p * p * p * p * p * p
        assert (p ** 0).is_identity()

    def test_conjugate_relabels(self):
        g = perm("(1,2)", 3)
        s = perm("(2,3)", 3)
        assert conjugate(g, s) == s * g * s.inverse()
        assert conjugate(g, s) == perm("(1,3)", 3)


class TestQueries:
    def test_support(self):
        assert perm("(2,5)(3,4)", 6).support() == (2, 3, 4, 5)
        assert Permutation.identity(3).support() == ()

    def test_order(self):
        assert perm("(1,2,3)(4,5)", 5).order() == 6
        assert perm("(1,2)", 2).order() == 2
        assert Permutation.identity(4).order() == 1
        assert order_raw(perm("(1,2,3,4)", 6)._img) == 4

    def test_cycle_string(self):
        p = perm("(4,5)(1,2,3)", 6)
        assert p.cycle_string() == "(1,2,3)(4,5)"
        assert Permutation.identity(2).cycle_string() == "()"
        assert cycle_str_raw(identity_raw(3)) == "()"

    def test_cycle_roundtrip(self):
        p = perm("(1,6)(2,4,5)", 7)
        assert Permutation.from_cycles(p.cycle_string(), 7) == p

    def test_hash_eq(self):
        a = perm("(1,2)", 3)
        b = Permutation([2, 1, 3])
        assert a == b and hash(a) == hash(b)
        assert a != perm("(1,3)", 3)
        assert len({a, b}) == 1

    def test_perm_from_cycles_helper(self):
        assert perm_from_cycles("(1,2)", 4) == perm("(1,2)", 4)


@st.composite
def raw_perm(draw, n):
    return tuple(draw(st.permutations(range(n))))


class TestProperties:
    @given(st.integers(2, 7).flatmap(lambda n: st.tuples(raw_perm(n), raw_perm(n), raw_perm(n))))
    def test_associative(self, triple):
        a, b, c = triple
        assert compose_raw(compose_raw(a, b), c) == compose_raw(a, compose_raw(b, c))

    @given(st.integers(2, 7).flatmap(lambda n: raw_perm(n)))
    def test_inverse_cancels(self, a):
        n = len(a)
        assert compose_raw(a, inverse_raw(a)) == identity_raw(n)
        assert compose_raw(inverse_raw(a), a) == identity_raw(n)

    @given(st.integers(2, 7).flatmap(lambda n: raw_perm(n)))
    def test_cycle_string_roundtrip(self, a):
        n = len(a)
        assert parse_cycles_raw(cycle_str_raw(a), n) == a

    @given(st.integers(2, 7).flatmap(lambda n: raw_perm(n)))
    def test_order_annihilates(self, a):
        p = Permutation._from_raw(a)
        k = p.order()
        assert (p ** k).is_identity()
        for d in range(1, k):
            if k % d == 0:
                assert not (p ** d).is_identity() or d == k
