"""Backtrack searches over stabilizer chains.

The two subgroup searches (normaliser, intersection) walk the chain of an
ambient group depth first, exploring the identity branch of each node first
so that the subgroup found so far is always complete below the current
level.  That invariant makes two classic prunes sound: a deviated subtree
can be abandoned after its first solution, and on the identity prefix a
candidate image can be skipped unless it is minimal in its orbit under the
part of the found subgroup fixing the base prefix.
"""

from __future__ import annotations

import itertools
import time
from math import factorial

from .errors import BudgetExceededError, DegreeCapError, DegreeMismatchError
from .group import Group, StabilizerChain
from .perm import Permutation, compose_raw, identity_raw, inverse_raw

ORACLE_DEGREE_CAP = 10
SUBGROUP_ORDER_CAP = 2000


class SearchBudget:
    """Node and wall-clock limits shared by every search in one computation."""

    def __init__(self, node_limit=None, time_limit=None):
        self.node_limit = node_limit
        self.time_limit = time_limit
        self.nodes = 0
        self._t0 = time.monotonic()

    def tick(self):
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise BudgetExceededError(
                "search exceeded node limit of %d" % self.node_limit)
        if self.time_limit is not None and (self.nodes & 1023) == 0:
            if time.monotonic() - self._t0 > self.time_limit:
                raise BudgetExceededError(
                    "search exceeded time limit of %.1fs" % self.time_limit)

    def elapsed(self):
        return time.monotonic() - self._t0


def _sub_base_hint(sub):
    """Points of sub's orbits, largest orbit first, singletons last.

    With this hint the support of sub occupies the leading base positions,
    so conjugation by a partial image map becomes fully decidable as early
    as possible.
    """
    orbs = sorted(sub.orbits0(), key=lambda o: (-len(o), o[0]))
    hint = [x for o in orbs for x in o]
    threshold = sum(len(o) for o in orbs if len(o) > 1)
    return hint, threshold


def _min_in_orbit(y, gens):
    """Whether y is the least point of its orbit under the given generators."""
    if not gens:
        return True
    seen = {y}
    stack = [y]
    while stack:
        x = stack.pop()
        for g in gens:
            z = g[x]
            if z < y:
                return False
            if z not in seen:
                seen.add(z)
                stack.append(z)
    return True


def normaliser_in(big, sub, budget=None):
    """The normaliser of `sub` inside `big`; requires sub <= big."""
    if big.degree != sub.degree:
        raise DegreeMismatchError("groups act on different domains")
    if not big.contains_group(sub):
        raise ValueError("normaliser_in needs sub to be a subgroup of big")
    if budget is None:
        budget = SearchBudget()
    n = big.degree
    hint, threshold = _sub_base_hint(sub)
    A = big.chain_with_base(hint)
    k = len(A.levels)
    base = [lvl.point for lvl in A.levels]
    nf = StabilizerChain.build(n, [g._img for g in sub.generators], forced_base=base)

    pid, psizes = sub.pair_orbits()
    osize = [psizes[pid[x * n + x]] for x in range(n)]
    ugens = [g._img for g in sub.generators]
    uchain = sub.chain
    posidx = {base[j]: j for j in range(threshold)}
    podmap = {}
    podinv = {}
    ylist = []
    extra = []

    def link(p, q, added):
        a, c = pid[p], pid[q]
        if psizes[a] != psizes[c]:
            return False
        cur = podmap.get(a)
        if cur is not None:
            return cur == c
        if c in podinv:
            return False
        podmap[a] = c
        podinv[c] = a
        added.append((a, c))
        return True

    def push_pairs(y):
        """Extend the pair-orbit map by base[i] -> y, or report a clash."""
        i = len(ylist)
        b = base[i]
        added = []
        ok = link(b * n + b, y * n + y, added)
        if ok:
            for j in range(i):
                bj, yj = base[j], ylist[j]
                if not (link(bj * n + b, yj * n + y, added)
                        and link(b * n + bj, y * n + yj, added)):
                    ok = False
                    break
        if not ok:
            for a, c in added:
                del podmap[a]
                del podinv[c]
            return None
        return added

    def pop_pairs(added):
        for a, c in added:
            del podmap[a]
            del podinv[c]

    def conj_test():
        # every support point has an image now, so the conjugate of each
        # generator of sub is fully determined even though the search is
        # only part way down the chain
        for u in ugens:
            c = list(range(n))
            for j in range(threshold):
                c[ylist[j]] = ylist[posidx[u[base[j]]]]
            if not uchain.contains_raw(tuple(c)):
                return False
        return True

    def explore(i, u, on_identity):
        budget.tick()
        if i == threshold:
            if not conj_test():
                return None
            if on_identity:
                for g in A.gens_fixing_prefix(i):
                    if nf.add_generator(g):
                        extra.append(g)
                return None
            return u
        lvl = A.levels[i]
        b = lvl.point
        if on_identity:
            added = push_pairs(b)
            ylist.append(b)
            explore(i + 1, u, True)
            ylist.pop()
            pop_pairs(added)
        for y, x in sorted((u[x], x) for x in lvl.orbit):
            if on_identity and y == b:
                continue
            if osize[y] != osize[b]:
                continue
            if on_identity and not _min_in_orbit(y, nf.gens_fixing_prefix(i)):
                continue
            added = push_pairs(y)
            if added is None:
                continue
            ylist.append(y)
            got = explore(i + 1, compose_raw(lvl.transversal[x], u), False)
            ylist.pop()
            pop_pairs(added)
            if got is not None:
                if on_identity:
                    if nf.add_generator(got):
                        extra.append(got)
                else:
                    return got
        return None

    explore(0, identity_raw(n), True)
    gens = list(sub.generators) + [Permutation._from_raw(g) for g in extra]
    return Group(n, gens, order=nf.order(), _chain=nf)


def intersection(g1, g2, budget=None):
    """The intersection of two groups on the same domain."""
    if g1.degree != g2.degree:
        raise DegreeMismatchError("groups act on different domains")
    if budget is None:
        budget = SearchBudget()
    n = g1.degree
    a, b = (g1, g2) if g1.order() <= g2.order() else (g2, g1)
    A = a.chain
    k = len(A.levels)
    base = [lvl.point for lvl in A.levels]
    bchain = StabilizerChain.build(n, [g._img for g in b.generators],
                                   forced_base=base, order_hint=b.known_order())
    nf = StabilizerChain.build(n, [], forced_base=base)
    idn = identity_raw(n)
    extra = []

    def explore(i, u, w, winv, on_identity):
        # u runs through a's chain; w is an element of b with the same
        # images on the base prefix, which is exactly the feasibility
        # condition for extending the branch
        budget.tick()
        if i == k:
            if on_identity:
                return None
            return u if bchain.contains_raw(u) else None
        lvl = A.levels[i]
        bl = bchain.levels[i]
        b_pt = lvl.point
        if on_identity:
            explore(i + 1, u, w, winv, True)
        for y, x in sorted((u[x], x) for x in lvl.orbit):
            if on_identity and y == b_pt:
                continue
            z = winv[y]
            t = bl.transversal.get(z)
            if t is None:
                continue
            if on_identity and not _min_in_orbit(y, nf.gens_fixing_prefix(i)):
                continue
            got = explore(i + 1, compose_raw(lvl.transversal[x], u),
                          compose_raw(t, w), compose_raw(winv, bl.inv[z]), False)
            if got is not None:
                if on_identity:
                    if nf.add_generator(got):
                        extra.append(got)
                else:
                    return got
        return None

    explore(0, idn, idn, idn, True)
    return Group(n, [Permutation._from_raw(g) for g in extra],
                 order=nf.order(), _chain=nf)


def _element_order_stats(group):
    counts = {}
    for raw in group.chain.elements_raw():
        k = 1
        acc = raw
        idn = identity_raw(len(raw))
        while acc != idn:
            acc = compose_raw(acc, raw)
            k += 1
        counts[k] = counts.get(k, 0) + 1
    return tuple(sorted(counts.items()))


def conjugating_element(a, b, budget=None):
    """A permutation s with conjugate_group(a, s) == b, or None.

    Searches for a relabelling m of the domain carrying a's generators into
    b; the answer is then the inverse of m.
    """
    if a.degree != b.degree:
        return None
    if a.order() != b.order():
        return None
    orbs_a = sorted(a.orbits0(), key=lambda o: (-len(o), o[0]))
    orbs_b = b.orbits0()
    if sorted(len(o) for o in orbs_a) != sorted(len(o) for o in orbs_b):
        return None
    if a.order() <= 2000 and _element_order_stats(a) != _element_order_stats(b):
        return None
    if budget is None:
        budget = SearchBudget()
    n = a.degree
    points = [x for o in orbs_a for x in o]
    threshold = sum(len(o) for o in orbs_a if len(o) > 1)
    pid_a, sizes_a = a.pair_orbits()
    pid_b, sizes_b = b.pair_orbits()
    osize_a = [sizes_a[pid_a[x * n + x]] for x in range(n)]
    osize_b = [sizes_b[pid_b[x * n + x]] for x in range(n)]
    agens = [g._img for g in a.generators]
    bchain = b.chain
    posidx = {points[j]: j for j in range(threshold)}
    podmap = {}
    podinv = {}
    mlist = []
    used = set()

    def link(p, q, added):
        s, t = pid_a[p], pid_b[q]
        if sizes_a[s] != sizes_b[t]:
            return False
        cur = podmap.get(s)
        if cur is not None:
            return cur == t
        if t in podinv:
            return False
        podmap[s] = t
        podinv[t] = s
        added.append((s, t))
        return True

    def push_pairs(q):
        i = len(mlist)
        p = points[i]
        added = []
        ok = link(p * n + p, q * n + q, added)
        if ok:
            for j in range(i):
                pj, qj = points[j], mlist[j]
                if not (link(pj * n + p, qj * n + q, added)
                        and link(p * n + pj, q * n + qj, added)):
                    ok = False
                    break
        if not ok:
            for s, t in added:
                del podmap[s]
                del podinv[t]
            return None
        return added

    def pop_pairs(added):
        for s, t in added:
            del podmap[s]
            del podinv[t]

    def relabel_test():
        for u in agens:
            c = list(range(n))
            for j in range(threshold):
                c[mlist[j]] = mlist[posidx[u[points[j]]]]
            if not bchain.contains_raw(tuple(c)):
                return False
        return True

    def explore(i):
        budget.tick()
        if i == threshold:
            return relabel_test()
        p = points[i]
        for q in range(n):
            if q in used or osize_b[q] != osize_a[p]:
                continue
            added = push_pairs(q)
            if added is None:
                continue
            mlist.append(q)
            used.add(q)
            if explore(i + 1):
                return True
            used.discard(q)
            mlist.pop()
            pop_pairs(added)
        return False

    if not explore(0):
        return None
    # fill the unassigned (fixed) points in order; any completion works
    # because the conjugates of a's generators are already pinned down
    m = list(range(n))
    for j in range(threshold):
        m[points[j]] = mlist[j]
    rest_src = sorted(x for x in range(n) if x not in set(points[:threshold]))
    rest_dst = sorted(x for x in range(n) if x not in used)
    for src, dst in zip(rest_src, rest_dst):
        m[src] = dst
    return Permutation._from_raw(inverse_raw(tuple(m)))


def _reduce_generators(degree, elems):
    """A short generator list for a known element collection."""
    chain = StabilizerChain.build(degree, [])
    gens = []
    for raw in elems:
        if chain.add_generator(raw):
            gens.append(raw)
    return gens, chain


def oracle_normaliser(sub):
    """Normaliser in the full symmetric group by exhaustive enumeration.

    Only the support of sub is enumerated: points in singleton orbits can be
    permuted freely, so the answer is a direct product of the support part
    with the symmetric group on the fixed points.
    """
    n = sub.degree
    if n > ORACLE_DEGREE_CAP:
        raise DegreeCapError(
            "oracle supports degree at most %d, got %d" % (ORACLE_DEGREE_CAP, n))
    support = [x for o in sub.orbits0() if len(o) > 1 for x in o]
    support.sort()
    fixed = sorted(set(range(n)) - set(support))
    ugens = [g._img for g in sub.generators]
    elems_u = frozenset(sub.chain.elements_raw())
    pid, psizes = sub.pair_orbits()
    osize = [psizes[pid[x * n + x]] for x in range(n)]

    found = []
    for images in itertools.permutations(support):
        g = list(range(n))
        for src, dst in zip(support, images):
            g[src] = dst
        if any(osize[g[x]] != osize[x] for x in support):
            continue
        ok = True
        for u in ugens:
            c = list(range(n))
            for x in support:
                c[g[x]] = g[u[x]]
            if tuple(c) not in elems_u:
                ok = False
                break
        if ok:
            found.append(tuple(g))

    gens, chain = _reduce_generators(n, found)
    for i in range(1, len(fixed)):
        t = list(range(n))
        t[fixed[0]], t[fixed[i]] = t[fixed[i]], t[fixed[0]]
        if chain.add_generator(tuple(t)):
            gens.append(tuple(t))
    expected = len(found) * factorial(len(fixed))
    if chain.order() != expected:
        raise RuntimeError("oracle generator reduction lost elements")
    return Group(n, [Permutation._from_raw(g) for g in gens],
                 order=expected, _chain=chain)


def all_subgroups(group, cap=SUBGROUP_ORDER_CAP):
    """Every subgroup, as the closure of cyclic subgroups under joins.

    Complete but exponential; meant for small quotients, hence the cap.
    """
    if group.order() > cap:
        raise DegreeCapError(
            "subgroup enumeration is capped at order %d, group has order %d"
            % (cap, group.order()))
    n = group.degree
    idn = identity_raw(n)
    elems = sorted(group.chain.elements_raw())

    cyclics = {}
    for raw in elems:
        if raw == idn:
            continue
        powers = {idn}
        acc = raw
        while acc != idn:
            powers.add(acc)
            acc = compose_raw(acc, raw)
        key = frozenset(powers)
        if key not in cyclics:
            cyclics[key] = raw

    found = {frozenset([idn]): []}
    queue = [frozenset([idn])]
    while queue:
        cur = queue.pop()
        cur_gens = found[cur]
        for cyc, cgen in cyclics.items():
            if cyc <= cur:
                continue
            gens = cur_gens + [cgen]
            closed = _close(n, gens)
            key = frozenset(closed)
            if key not in found:
                found[key] = gens
                queue.append(key)

    out = []
    for key in sorted(found, key=lambda s: (len(s), sorted(s))):
        gens, chain = _reduce_generators(n, sorted(key))
        sub = Group(n, [Permutation._from_raw(g) for g in gens],
                    order=len(key), _chain=chain)
        out.append(sub)
    return out


def _close(n, gens):
    idn = identity_raw(n)
    seen = {idn}
    frontier = [idn]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                c = compose_raw(e, g)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return seen
