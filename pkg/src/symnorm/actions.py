"""Homomorphisms between permutation groups, and the standard constructions.

A hom is stored as generator images.  Arbitrary elements are evaluated by
sifting through the chain of the paired group on the disjoint union of
domain and codomain: transversal representatives there carry their images
with them, so no word in the generators is ever needed.
"""

from __future__ import annotations

import threading
from math import factorial, prod

from .errors import DegreeCapError, DegreeMismatchError
from .group import Group, StabilizerChain, symmetric_group
from .perm import Permutation, compose_raw, identity_raw, inverse_raw
from .search import intersection

COSET_INDEX_CAP = 100000


class GroupHom:
    """A homomorphism from a permutation group, given by generator images."""

    __slots__ = ("domain", "codomain_degree", "images", "_lock",
                 "_eval_chain", "_kernel_chain", "_image_order")

    def __init__(self, domain: Group, codomain_degree: int, images):
        images = tuple(images)
        if len(images) != len(domain.generators):
            raise ValueError("need exactly one image per domain generator")
        for im in images:
            if im.degree != codomain_degree:
                raise DegreeMismatchError(
                    "image degree %d, codomain degree %d" % (im.degree, codomain_degree))
        self.domain = domain
        self.codomain_degree = codomain_degree
        self.images = images
        self._lock = threading.Lock()
        self._eval_chain = None
        self._kernel_chain = None
        self._image_order = None

    # -- internal chains --------------------------------------------------

    def _paired_gens(self):
        n = self.domain.degree
        out = []
        for g, im in zip(self.domain.generators, self.images):
            out.append(g._img + tuple(x + n for x in im._img))
        return out

    def _get_eval_chain(self):
        if self._eval_chain is None:
            with self._lock:
                if self._eval_chain is None:
                    n = self.domain.degree
                    chain = StabilizerChain.build(
                        n + self.codomain_degree, self._paired_gens(),
                        base_hint=range(n))
                    for lvl in chain.levels:
                        if lvl.point >= n:
                            raise ValueError(
                                "generator images do not define a homomorphism")
                    self._eval_chain = chain
        return self._eval_chain

    def _get_kernel_chain(self):
        if self._kernel_chain is None:
            with self._lock:
                if self._kernel_chain is None:
                    n = self.domain.degree
                    m = self.codomain_degree
                    self._kernel_chain = StabilizerChain.build(
                        n + m, self._paired_gens(),
                        forced_base=range(n, n + m), base_hint=range(n))
        return self._kernel_chain

    # -- evaluation --------------------------------------------------------

    def eval_raw(self, raw):
        n = self.domain.degree
        m = self.codomain_degree
        w = tuple(raw) + tuple(range(n, n + m))
        r, _ = self._get_eval_chain().sift_raw(w)
        if any(r[x] != x for x in range(n)):
            raise ValueError("element is not in the domain group")
        return inverse_raw(tuple(r[x] - n for x in range(n, n + m)))

    def eval(self, p: Permutation) -> Permutation:
        if p.degree != self.domain.degree:
            raise DegreeMismatchError("element degree %d, domain degree %d"
                                      % (p.degree, self.domain.degree))
        return Permutation._from_raw(self.eval_raw(p._img))

    def lift_raw(self, raw):
        n = self.domain.degree
        m = self.codomain_degree
        chain = self._get_kernel_chain()
        w = tuple(range(n)) + tuple(x + n for x in raw)
        for lvl in chain.levels[:m]:
            x = w[lvl.point]
            if x == lvl.point:
                continue
            tinv = lvl.inv.get(x)
            if tinv is None:
                raise ValueError("element is not in the image of the homomorphism")
            w = compose_raw(w, tinv)
        return inverse_raw(tuple(w[:n]))

    def lift(self, v: Permutation) -> Permutation:
        """Some domain element mapping to v; raises if v is not in the image."""
        if v.degree != self.codomain_degree:
            raise DegreeMismatchError("element degree %d, codomain degree %d"
                                      % (v.degree, self.codomain_degree))
        return Permutation._from_raw(self.lift_raw(v._img))

    # -- kernel and image --------------------------------------------------

    def kernel(self) -> Group:
        n = self.domain.degree
        m = self.codomain_degree
        chain = self._get_kernel_chain()
        gens = [Permutation._from_raw(g[:n]) for g in chain.gens_fixing_prefix(m)]
        order = prod(len(lvl.orbit) for lvl in chain.levels[m:]) if chain.levels[m:] else 1
        return Group(n, gens, order=order)

    def image_group(self) -> Group:
        m = self.codomain_degree
        if self._image_order is None:
            chain = self._get_kernel_chain()
            self._image_order = prod(len(lvl.orbit) for lvl in chain.levels[:m])
        return Group(m, self.images, order=self._image_order)

    def image_of_subgroup(self, sub: Group) -> Group:
        if not self.domain.contains_group(sub):
            raise ValueError("subgroup is not inside the domain")
        return Group(self.codomain_degree,
                     [Permutation._from_raw(self.eval_raw(g._img)) for g in sub.generators])

    def preimage_of_subgroup(self, v: Group, budget=None) -> Group:
        """Full preimage of v's intersection with the image group."""
        if v.degree != self.codomain_degree:
            raise DegreeMismatchError("subgroup degree %d, codomain degree %d"
                                      % (v.degree, self.codomain_degree))
        ker = self.kernel()
        img = self.image_group()
        w = v if img.contains_group(v) else intersection(v, img, budget=budget)
        gens = list(ker.generators)
        gens.extend(Permutation._from_raw(self.lift_raw(g._img)) for g in w.generators)
        return Group(self.domain.degree, gens, order=ker.order() * w.order())

    def __repr__(self):
        return "GroupHom(degree %d -> %d, %d gens)" % (
            self.domain.degree, self.codomain_degree, len(self.images))


def kernel(f: GroupHom) -> Group:
    return f.kernel()


def image_group(f: GroupHom) -> Group:
    return f.image_group()


def image_of_subgroup(f: GroupHom, sub: Group) -> Group:
    return f.image_of_subgroup(sub)


def preimage_of_subgroup(f: GroupHom, v: Group, budget=None) -> Group:
    return f.preimage_of_subgroup(v, budget=budget)


# -- orbit, block and coset actions ------------------------------------------


def orbit_action(group: Group, delta) -> GroupHom:
    """Projection of the group onto its action on an invariant point set.

    Points of delta (1-based) are relabelled to 1..|delta| in ascending order.
    """
    pts = sorted(set(delta))
    ptset = set(pts)
    for orb in group.orbit_partition():
        inside = ptset.intersection(orb)
        if inside and len(inside) != len(orb):
            raise ValueError("point set is not a union of orbits")
    if not pts or pts[0] < 1 or pts[-1] > group.degree:
        raise ValueError("points out of range")
    pos = {p - 1: i for i, p in enumerate(pts)}
    images = []
    for g in group.generators:
        images.append(Permutation._from_raw(tuple(pos[g._img[p - 1]] for p in pts)))
    return GroupHom(group, len(pts), images)


def block_action(group: Group, system) -> GroupHom:
    """Action on the blocks of a system, blocks ordered by least element."""
    blocks = getattr(system, "blocks", system)
    blocks = sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0])
    n = group.degree
    point_block = [-1] * n
    for i, b in enumerate(blocks):
        for p in b:
            if not 1 <= p <= n or point_block[p - 1] >= 0:
                raise ValueError("blocks do not partition the domain")
            point_block[p - 1] = i
    if any(i < 0 for i in point_block):
        raise ValueError("blocks do not partition the domain")
    blocksets = [frozenset(b) for b in blocks]
    images = []
    for g in group.generators:
        raw = []
        for i, b in enumerate(blocks):
            j = point_block[g._img[b[0] - 1]]
            if frozenset(g.apply(p) for p in b) != blocksets[j]:
                raise ValueError("system is not invariant under the group")
            raw.append(j)
        images.append(Permutation._from_raw(tuple(raw)))
    return GroupHom(group, len(blocks), images)


def coset_action(group: Group, sub: Group, cap=COSET_INDEX_CAP) -> GroupHom:
    """Action on right cosets of sub; the coset sub itself is point 1."""
    if sub.degree != group.degree or not group.contains_group(sub):
        raise ValueError("coset action needs a subgroup of the group")
    index = group.order() // sub.order()
    if index > cap:
        raise DegreeCapError("coset index %d exceeds cap %d" % (index, cap))
    n = group.degree
    hchain = sub.chain
    idn = identity_raw(n)

    def canon(raw):
        # unique coset representative: minimise the base images level by level
        cur = raw
        for lvl in hchain.levels:
            best = min(lvl.orbit, key=lambda x: cur[x])
            if best != lvl.point:
                cur = compose_raw(lvl.transversal[best], cur)
        return cur

    gens = [g._img for g in group.generators]
    reps = [idn]
    labels = {canon(idn): 0}
    tables = [[] for _ in gens]
    i = 0
    while i < len(reps):
        rep = reps[i]
        for gi, graw in enumerate(gens):
            nxt = compose_raw(rep, graw)
            key = canon(nxt)
            label = labels.get(key)
            if label is None:
                label = len(reps)
                labels[key] = label
                reps.append(nxt)
            tables[gi].append(label)
        i += 1
    if len(reps) != index:
        raise RuntimeError("coset enumeration found %d cosets, expected %d"
                           % (len(reps), index))
    images = [Permutation._from_raw(tuple(tbl)) for tbl in tables]
    return GroupHom(group, index, images)


# -- products -----------------------------------------------------------------


def direct_product(groups):
    """Product acting on the disjoint union of the domains.

    Returns (group, offsets) where offsets[i] is the shift of factor i.
    """
    groups = list(groups)
    if not groups:
        raise ValueError("empty product")
    offsets = []
    total = 0
    for g in groups:
        offsets.append(total)
        total += g.degree
    gens = []
    for off, g in zip(offsets, groups):
        for p in g.generators:
            raw = list(range(total))
            for x in range(g.degree):
                raw[off + x] = off + p._img[x]
            gens.append(Permutation._from_raw(tuple(raw)))
    orders = [g.known_order() for g in groups]
    hint = prod(orders) if all(o is not None for o in orders) else None
    return Group(total, gens, order=hint), offsets


def wreath_product(inner: Group, top: Group) -> Group:
    """Imprimitive wreath product on inner.degree * top.degree points.

    Blocks are the consecutive runs of inner.degree points.  Generators for
    the inner group are placed on every block, not just the first, so the
    order is |inner|^top.degree * |top| even when the top group is
    intransitive.
    """
    k = inner.degree
    ell = top.degree
    total = k * ell
    gens = []
    for b in range(ell):
        for p in inner.generators:
            raw = list(range(total))
            for x in range(k):
                raw[b * k + x] = b * k + p._img[x]
            gens.append(Permutation._from_raw(tuple(raw)))
    for t in top.generators:
        raw = [0] * total
        for b in range(ell):
            tb = t._img[b]
            for x in range(k):
                raw[b * k + x] = tb * k + x
        gens.append(Permutation._from_raw(tuple(raw)))
    io, to = inner.known_order(), top.known_order()
    hint = io ** ell * to if io is not None and to is not None else None
    return Group(total, gens, order=hint)


def induced_wreath_hom(f: GroupHom, copies: int) -> GroupHom:
    """Extension of f to the wreath product with the symmetric top group.

    The domain is wreath_product(f.domain, S_copies); an element acting as
    n_i on block i and as sigma on blocks maps to the element acting as
    f(n_i) on image block i and as sigma on image blocks.
    """
    k = f.domain.degree
    m = f.codomain_degree
    w = wreath_product(f.domain, symmetric_group(copies))
    images = []
    for g in w.generators:
        raw = g._img
        img = [0] * (m * copies)
        for i in range(copies):
            sigma_i = raw[i * k] // k
            comp = [0] * k
            for x in range(k):
                y = raw[i * k + x]
                if y // k != sigma_i:
                    raise RuntimeError("element does not respect the blocks")
                comp[x] = y - sigma_i * k
            fim = f.eval_raw(tuple(comp))
            for x in range(m):
                img[i * m + x] = sigma_i * m + fim[x]
        images.append(Permutation._from_raw(tuple(img)))
    return GroupHom(w, m * copies, images)


def hom_product(fs) -> GroupHom:
    """Direct product of homomorphisms sharing one domain."""
    fs = list(fs)
    if not fs:
        raise ValueError("empty hom product")
    dom = fs[0].domain
    for f in fs[1:]:
        if f.domain is not dom and f.domain.generators != dom.generators:
            raise ValueError("homs do not share a domain")
    offsets = []
    total = 0
    for f in fs:
        offsets.append(total)
        total += f.codomain_degree
    images = []
    for j in range(len(dom.generators)):
        raw = []
        for off, f in zip(offsets, fs):
            raw.extend(x + off for x in f.images[j]._img)
        images.append(Permutation._from_raw(tuple(raw)))
    return GroupHom(dom, total, images)
