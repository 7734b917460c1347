"""Permutation groups backed by deterministic stabilizer chains.

A chain is built by the classic Schreier-Sims procedure: strong generators
are stored at the deepest level whose base prefix they fix, transversal
elements map the level's base point onto the orbit point, and membership is
decided by sifting.  When the caller already knows the group order the
construction stops as soon as the transversal product reaches it, which is
sound because the product can never exceed the true order.
"""

from __future__ import annotations

import threading
from math import factorial, prod

from .errors import DegreeMismatchError, GroupParseError
from .perm import (
    Permutation,
    compose_raw,
    identity_raw,
    inverse_raw,
    parse_cycles_raw,
)


class _Level:
    __slots__ = ("point", "gens", "orbit", "transversal", "inv", "done", "scanned")

    def __init__(self, point: int, degree: int):
        self.point = point
        self.gens = []
        idn = identity_raw(degree)
        self.orbit = [point]
        self.transversal = {point: idn}
        self.inv = {point: idn}
        self.done = {}
        self.scanned = {}


class StabilizerChain:
    """Base, strong generators and transversals for one permutation group."""

    __slots__ = ("degree", "levels", "_hint", "_base_set", "_order_hint", "_idn")

    def __init__(self, degree: int, base_hint=(), forced_base=(), order_hint=None):
        self.degree = degree
        self.levels = []
        self._hint = [p for p in dict.fromkeys(base_hint)]
        self._base_set = set()
        self._order_hint = order_hint
        self._idn = identity_raw(degree)
        for p in forced_base:
            self._append_level(p)

    @classmethod
    def build(cls, degree, gens_raw, base_hint=(), order_hint=None, forced_base=()):
        chain = cls(degree, base_hint, forced_base, order_hint)
        idn = chain._idn
        gens_raw = list(gens_raw)
        if base_hint:
            # create a level for every hint point some generator moves, in hint
            # order, so the base follows the hint regardless of generator order
            moved = set()
            for g in gens_raw:
                moved.update(x for x in range(degree) if g[x] != x)
            for p in chain._hint:
                if p in moved and p not in chain._base_set:
                    chain._append_level(p)
        for g in gens_raw:
            if g == idn:
                continue
            r, j = chain.sift_raw(g)
            if r != idn:
                chain._add_strong_gen(r, j)
        chain._complete()
        return chain

    # -- queries --------------------------------------------------------

    @property
    def base(self) -> tuple:
        """Base points, 1-based."""
        return tuple(lvl.point + 1 for lvl in self.levels)

    def order(self) -> int:
        return prod(len(lvl.orbit) for lvl in self.levels) if self.levels else 1

    def strong_generators_raw(self):
        out = []
        for lvl in self.levels:
            out.extend(lvl.gens)
        return out

    def strong_generators(self):
        return [Permutation._from_raw(g) for g in self.strong_generators_raw()]

    def transversal(self, level: int):
        """Orbit point (1-based) -> coset representative at the given level."""
        lvl = self.levels[level]
        return {x + 1: Permutation._from_raw(t) for x, t in lvl.transversal.items()}

    def sift_raw(self, g, start: int = 0):
        """Strip g through the chain; return (residue, failing level index)."""
        for i in range(start, len(self.levels)):
            lvl = self.levels[i]
            x = g[lvl.point]
            if x == lvl.point:
                continue
            tinv = lvl.inv.get(x)
            if tinv is None:
                return g, i
            g = compose_raw(g, tinv)
        return g, len(self.levels)

    def contains_raw(self, g) -> bool:
        r, _ = self.sift_raw(g)
        return r == self._idn

    def random_raw(self, rng):
        acc = self._idn
        for lvl in self.levels:
            x = lvl.orbit[rng.randrange(len(lvl.orbit))]
            acc = compose_raw(lvl.transversal[x], acc)
        return acc

    def elements_raw(self):
        """Every group element, as a product of transversal representatives."""
        def rec(i):
            if i == len(self.levels):
                yield self._idn
                return
            lvl = self.levels[i]
            for rest in rec(i + 1):
                for x in lvl.orbit:
                    yield compose_raw(rest, lvl.transversal[x])
        return rec(0)

    def gens_fixing_prefix(self, level: int):
        """Strong generators fixing the first `level` base points."""
        out = []
        for lvl in self.levels[level:]:
            out.extend(lvl.gens)
        return out

    # -- construction ---------------------------------------------------

    def add_generator(self, g) -> bool:
        """Sift in one new generator; return True if the group grew."""
        r, j = self.sift_raw(g)
        if r == self._idn:
            return False
        self._add_strong_gen(r, j)
        self._complete()
        return True

    def _append_level(self, point: int):
        if point in self._base_set:
            raise ValueError("duplicate base point %d" % point)
        self.levels.append(_Level(point, self.degree))
        self._base_set.add(point)

    def _add_strong_gen(self, r, j: int):
        if j == len(self.levels):
            pt = None
            for p in self._hint:
                if p not in self._base_set and r[p] != p:
                    pt = p
                    break
            if pt is None:
                pt = min(x for x in range(self.degree) if r[x] != x)
            self._append_level(pt)
        self.levels[j].gens.append(r)

    def _gens_at(self, i: int):
        return self.gens_fixing_prefix(i)

    def _extend_orbit(self, i: int):
        lvl = self.levels[i]
        gens = self._gens_at(i)
        progress = True
        while progress:
            progress = False
            for g in gens:
                start = lvl.scanned.get(g, 0)
                end = len(lvl.orbit)
                if start >= end:
                    continue
                progress = True
                for idx in range(start, end):
                    x = lvl.orbit[idx]
                    y = g[x]
                    if y not in lvl.transversal:
                        t = compose_raw(lvl.transversal[x], g)
                        lvl.transversal[y] = t
                        lvl.inv[y] = inverse_raw(t)
                        lvl.orbit.append(y)
                lvl.scanned[g] = end

    def _process_level(self, i: int):
        """Sift Schreier generators of level i; return the level index where a
        new strong generator landed, or None when the level is clean."""
        self._extend_orbit(i)
        lvl = self.levels[i]
        idn = self._idn
        for g in self._gens_at(i):
            start = lvl.done.get(g, 0)
            end = len(lvl.orbit)
            for idx in range(start, end):
                x = lvl.orbit[idx]
                y = g[x]
                s = compose_raw(compose_raw(lvl.transversal[x], g), lvl.inv[y])
                if s != idn:
                    r, j = self.sift_raw(s, i + 1)
                    if r != idn:
                        lvl.done[g] = idx
                        self._add_strong_gen(r, j)
                        return j
            lvl.done[g] = end
        return None

    def _complete(self):
        i = len(self.levels) - 1
        while i >= 0:
            if self._order_hint is not None and self.order() == self._order_hint:
                return
            j = self._process_level(i)
            i = i - 1 if j is None else j


class Group:
    """A finite permutation group on {1..degree}, given by generators.

    Immutable once constructed; the stabilizer chain is built lazily and at
    most once even under concurrent first queries.
    """

    __slots__ = ("degree", "generators", "_order_hint", "_chain", "_lock",
                 "_pair_cache", "_orbit_cache")

    def __init__(self, degree: int, generators, order=None, _chain=None):
        if degree < 1:
            raise ValueError("degree must be at least 1")
        gens = []
        seen = set()
        for g in generators:
            if not isinstance(g, Permutation):
                g = Permutation(g)
            if g.degree != degree:
                raise DegreeMismatchError(
                    "generator of degree %d in a group of degree %d" % (g.degree, degree))
            if g.is_identity() or g._img in seen:
                continue
            seen.add(g._img)
            gens.append(g)
        self.degree = degree
        self.generators = tuple(gens)
        self._order_hint = order
        self._chain = _chain
        self._lock = threading.Lock()
        self._pair_cache = None
        self._orbit_cache = None

    # -- chain ----------------------------------------------------------

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            with self._lock:
                if self._chain is None:
                    self._chain = StabilizerChain.build(
                        self.degree, [g._img for g in self.generators],
                        order_hint=self._order_hint)
        return self._chain

    def chain_with_base(self, base_hint_raw) -> StabilizerChain:
        """A fresh chain whose base follows the given 0-based point order."""
        return StabilizerChain.build(
            self.degree, [g._img for g in self.generators],
            base_hint=base_hint_raw, order_hint=self.known_order())

    def known_order(self):
        if self._chain is not None:
            return self._chain.order()
        return self._order_hint

    # -- basic queries --------------------------------------------------

    def order(self) -> int:
        return self.chain.order()

    def is_trivial(self) -> bool:
        return not self.generators

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise DegreeMismatchError("element degree %d, group degree %d"
                                      % (p.degree, self.degree))
        return self.chain.contains_raw(p._img)

    def contains_raw(self, raw) -> bool:
        return self.chain.contains_raw(raw)

    def contains_group(self, other: "Group") -> bool:
        return (other.degree == self.degree
                and all(self.chain.contains_raw(g._img) for g in other.generators))

    def equals(self, other: "Group") -> bool:
        if self is other:
            return True
        return (self.degree == other.degree
                and self.order() == other.order()
                and self.contains_group(other)
                and other.contains_group(self))

    def orbits0(self):
        """Orbits as sorted tuples of 0-based points, ordered by least point."""
        if self._orbit_cache is None:
            n = self.degree
            parent = list(range(n))

            def find(a):
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                return a

            for g in self.generators:
                img = g._img
                for x in range(n):
                    ra, rb = find(x), find(img[x])
                    if ra != rb:
                        parent[ra] = rb
            buckets = {}
            for x in range(n):
                buckets.setdefault(find(x), []).append(x)
            self._orbit_cache = tuple(
                tuple(sorted(b)) for b in sorted(buckets.values(), key=min))
        return self._orbit_cache

    def orbit_partition(self):
        """Orbits as sorted 1-based tuples, ordered by least point."""
        return [tuple(x + 1 for x in orb) for orb in self.orbits0()]

    def is_transitive(self) -> bool:
        return len(self.orbits0()) == 1

    def point_stabilizer(self, point: int) -> "Group":
        if not 1 <= point <= self.degree:
            raise ValueError("point %d out of range" % point)
        p0 = point - 1
        if all(g._img[p0] == p0 for g in self.generators):
            return self
        chain = self.chain_with_base([p0])
        assert chain.levels[0].point == p0
        gens = chain.gens_fixing_prefix(1)
        order = chain.order() // len(chain.levels[0].orbit)
        return Group(self.degree, [Permutation._from_raw(g) for g in gens], order=order)

    def random_element(self, rng) -> Permutation:
        return Permutation._from_raw(self.chain.random_raw(rng))

    def elements(self):
        for raw in self.chain.elements_raw():
            yield Permutation._from_raw(raw)

    def is_normal_in(self, big: "Group") -> bool:
        """Whether conjugation by the generators of `big` preserves this group."""
        if big.degree != self.degree:
            raise DegreeMismatchError("degrees differ")
        for g in big.generators:
            graw, ginv = g._img, inverse_raw(g._img)
            for u in self.generators:
                conj = compose_raw(compose_raw(graw, u._img), ginv)
                if not self.chain.contains_raw(conj):
                    return False
        return True

    def conjugated_by(self, s: Permutation) -> "Group":
        """The group s * self * s^-1."""
        if s.degree != self.degree:
            raise DegreeMismatchError("degrees differ")
        sraw, sinv = s._img, inverse_raw(s._img)
        gens = [Permutation._from_raw(compose_raw(compose_raw(sraw, g._img), sinv))
                for g in self.generators]
        return Group(self.degree, gens, order=self.known_order())

    def pair_orbits(self):
        """Orbit ids of the action on ordered pairs.

        Returns (pid, sizes): pid is a flat list indexed by x * n + y, and
        sizes[k] is the size of pair orbit k.  Ids are assigned in order of
        least flat index, so they are deterministic.
        """
        if self._pair_cache is None:
            n = self.degree
            gens = [g._img for g in self.generators]
            pid = [-1] * (n * n)
            sizes = []
            for start in range(n * n):
                if pid[start] >= 0:
                    continue
                oid = len(sizes)
                pid[start] = oid
                queue = [start]
                count = 0
                while queue:
                    fx = queue.pop()
                    count += 1
                    x, y = divmod(fx, n)
                    for g in gens:
                        fy = g[x] * n + g[y]
                        if pid[fy] < 0:
                            pid[fy] = oid
                            queue.append(fy)
                sizes.append(count)
            self._pair_cache = (pid, sizes)
        return self._pair_cache

    def __repr__(self) -> str:
        return "Group(degree=%d, gens=%d)" % (self.degree, len(self.generators))


# -- constructors and module-level operations --------------------------------

_SYM_CACHE: dict = {}


def symmetric_group(n: int) -> Group:
    if n not in _SYM_CACHE:
        if n <= 1:
            _SYM_CACHE[n] = Group(max(n, 1), [])
        elif n == 2:
            _SYM_CACHE[n] = Group(2, [Permutation.from_cycles("(1,2)", 2)], order=2)
        else:
            gens = [Permutation.from_cycles("(1,2)", n),
                    Permutation.from_cycles("(%s)" % ",".join(str(i) for i in range(1, n + 1)), n)]
            _SYM_CACHE[n] = Group(n, gens, order=factorial(n))
    return _SYM_CACHE[n]


def trivial_group(n: int) -> Group:
    return Group(n, [])


def group_order(g: Group) -> int:
    return g.order()


def conjugate_group(g: Group, s: Permutation) -> Group:
    return g.conjugated_by(s)


def is_normal_in(small: Group, big: Group) -> bool:
    return small.is_normal_in(big)


def derived_subgroup(g: Group) -> Group:
    """Commutator subgroup, as the normal closure of generator commutators."""
    n = g.degree
    gens_raw = [x._img for x in g.generators]
    idn = identity_raw(n)
    chain = StabilizerChain.build(n, [])
    found = []
    worklist = []

    def feed(c):
        if c != idn and chain.add_generator(c):
            found.append(c)
            worklist.append(c)

    for a in gens_raw:
        ainv = inverse_raw(a)
        for b in gens_raw:
            binv = inverse_raw(b)
            comm = compose_raw(compose_raw(ainv, binv), compose_raw(a, b))
            feed(comm)
    while worklist:
        s = worklist.pop()
        for graw in gens_raw:
            conj = compose_raw(compose_raw(graw, s), inverse_raw(graw))
            feed(conj)
    return Group(n, [Permutation._from_raw(c) for c in found],
                 order=chain.order(), _chain=chain)


def second_derived_subgroup(g: Group) -> Group:
    return derived_subgroup(derived_subgroup(g))


def parse_group_file(text: str) -> Group:
    """Parse the plain text group format.

    First meaningful line is ``degree <n>``; every further non-empty line is
    one permutation in cycle notation.  ``#`` starts a comment.
    """
    lines = []
    for rawline in text.splitlines():
        line = rawline.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise GroupParseError("empty group file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "degree":
        raise GroupParseError("first line must be 'degree <n>', got %r" % lines[0])
    try:
        degree = int(head[1])
    except ValueError:
        raise GroupParseError("bad degree %r" % head[1]) from None
    if degree < 1:
        raise GroupParseError("degree must be positive")
    gens = []
    for line in lines[1:]:
        gens.append(Permutation._from_raw(parse_cycles_raw(line, degree)))
    return Group(degree, gens)


def format_group_file(g: Group) -> str:
    out = ["degree %d" % g.degree]
    out.extend(p.cycle_string() for p in g.generators)
    return "\n".join(out) + "\n"
