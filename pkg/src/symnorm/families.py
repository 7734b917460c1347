"""Built-in group constructors and the labelled corpus used for self-tests.

There is no external database of transitive groups here; these families,
their direct products, binary-code subdirect products and seeded random
subgroups stand in for it.
"""

import random

from .actions import direct_product, wreath_product
from .codes import _is_prime
from .group import Group, symmetric_group
from .perm import Permutation


def cyclic_group(degree):
    if degree < 1:
        raise ValueError("degree must be positive")
    if degree == 1:
        return Group(1, [])
    rot = tuple((x + 1) % degree for x in range(degree))
    return Group(degree, [Permutation._from_raw(rot)], order=degree)


def dihedral_group(degree):
    """Symmetries of the regular polygon on `degree` vertices, degree >= 3."""
    if degree < 3:
        raise ValueError("dihedral groups need degree at least 3")
    rot = tuple((x + 1) % degree for x in range(degree))
    ref = tuple((degree - x) % degree for x in range(degree))
    return Group(degree, [Permutation._from_raw(rot),
                          Permutation._from_raw(ref)], order=2 * degree)


def alternating_group(degree):
    if degree < 1:
        raise ValueError("degree must be positive")
    if degree <= 2:
        return Group(degree, [])
    three = list(range(degree))
    three[0], three[1], three[2] = 1, 2, 0
    if degree % 2:
        big = tuple((x + 1) % degree for x in range(degree))
    else:
        big = (0,) + tuple(x % (degree - 1) + 1 for x in range(1, degree))
    half = 1
    for i in range(3, degree + 1):
        half *= i
    return Group(degree, [Permutation._from_raw(tuple(three)),
                          Permutation._from_raw(big)], order=half)


def klein_regular():
    return Group(4, [Permutation._from_raw((1, 0, 3, 2)),
                     Permutation._from_raw((2, 3, 0, 1))], order=4)


def agl1(p):
    """One-dimensional affine maps x -> ax + b over the field of p elements."""
    if not _is_prime(p):
        raise ValueError("agl1 needs a prime, got %d" % p)
    shift = tuple((x + 1) % p for x in range(p))
    gens = [Permutation._from_raw(shift)]
    for r in range(2, p):
        acc, steps = r, 1
        while acc != 1:
            acc = acc * r % p
            steps += 1
        if steps == p - 1:
            gens.append(Permutation._from_raw(
                tuple(x * r % p for x in range(p))))
            break
    return Group(p, gens, order=p * (p - 1))


def wreath_symmetric(inner_degree, top_degree):
    return wreath_product(symmetric_group(inner_degree),
                          symmetric_group(top_degree))


def family_group(spec):
    """Group named by a spec string like 'cyclic:6' or 'wreath:2,3'."""
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    try:
        if name == "klein-regular" or name == "klein":
            return klein_regular()
        if name == "wreath":
            a, b = (int(v) for v in arg.split(","))
            return wreath_symmetric(a, b)
        one = {"cyclic": cyclic_group, "dihedral": dihedral_group,
               "symmetric": symmetric_group, "alternating": alternating_group,
               "agl1": agl1}
        if name in one:
            return one[name](int(arg))
    except (TypeError, ValueError) as exc:
        raise ValueError("bad family spec %r: %s" % (spec, exc)) from None
    raise ValueError("unknown family %r" % name)


def binary_code_subdirect(bits_rows, copies):
    """Subdirect product of `copies` transposition pairs cut out by bit rows.

    Row r gives the generator swapping pair i exactly where r[i] is 1;
    the group is elementary abelian of order 2^rank on 2*copies points.
    """
    gens = []
    for row in bits_rows:
        raw = list(range(2 * copies))
        for i, bit in enumerate(row):
            if bit:
                raw[2 * i], raw[2 * i + 1] = raw[2 * i + 1], raw[2 * i]
        gens.append(Permutation._from_raw(tuple(raw)))
    return Group(2 * copies, gens)


def oracle_corpus(seed=0, size=208):
    """Labelled groups of degree 2..8, every one small enough to oracle.

    Deterministic for a given seed; named families first, then direct
    products, then binary-code subdirect products, then random subgroups
    padding the list up to `size`.
    """
    out = []
    for d in range(2, 9):
        out.append(("cyclic:%d" % d, cyclic_group(d)))
    for d in range(3, 9):
        out.append(("dihedral:%d" % d, dihedral_group(d)))
    for d in range(3, 9):
        out.append(("alternating:%d" % d, alternating_group(d)))
    for d in range(2, 9):
        out.append(("symmetric:%d" % d, symmetric_group(d)))
    out.append(("klein-regular", klein_regular()))
    for p in (2, 3, 5, 7):
        out.append(("agl1:%d" % p, agl1(p)))
    for a, b in ((2, 2), (2, 3), (3, 2), (2, 4), (4, 2)):
        out.append(("wreath:%d,%d" % (a, b), wreath_symmetric(a, b)))

    pool = [("cyclic:%d" % d, cyclic_group(d)) for d in range(2, 7)]
    pool += [("dihedral:%d" % d, dihedral_group(d)) for d in range(3, 6)]
    pool += [("klein-regular", klein_regular()), ("agl1:5", agl1(5))]
    for i, (la, ga) in enumerate(pool):
        for lb, gb in pool[i:]:
            if ga.degree + gb.degree <= 8:
                prod, _ = direct_product([ga, gb])
                out.append(("product(%s,%s)" % (la, lb), prod))

    rng = random.Random(seed)
    for trial in range(24):
        copies = rng.randrange(2, 5)
        dim = rng.randrange(1, copies + 1)
        rows = [[rng.randrange(2) for _ in range(copies)]
                for _ in range(dim)]
        if not any(any(r) for r in rows):
            rows[0][0] = 1
        out.append(("code2(%d):%d" % (copies, trial),
                    binary_code_subdirect(rows, copies)))

    while len(out) < size:
        d = rng.randrange(2, 9)
        sym = symmetric_group(d)
        gens = [sym.random_element(rng) for _ in range(rng.randrange(1, 4))]
        out.append(("random:%d" % len(out), Group(d, gens)))
    return out
