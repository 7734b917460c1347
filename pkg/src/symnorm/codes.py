"""Linear codes over GF(p) and the normalisers they encode.

An elementary abelian group whose orbits all have prime length p is the
row space of a linear code: pick an orientation generator on each orbit
and read off exponent vectors.  Its normaliser in the symmetric group is
then the translation part extended by the monomial automorphisms of that
code, which is what makes codes useful far beyond the elementary case.
For a general group U the same trick applies to suitable elementary
sections, and code_refine() uses that to cut down an overgroup of the
normaliser without ever searching at full degree.
"""

import math
from collections import Counter
from dataclasses import dataclass

from .actions import (GroupHom, coset_action, hom_product, orbit_action)
from .errors import BudgetExceededError, DegreeCapError
from .group import Group, second_derived_subgroup, symmetric_group
from .perm import Permutation, inverse_raw
from .search import (SUBGROUP_ORDER_CAP, SearchBudget, _min_in_orbit,
                     all_subgroups, intersection, normaliser_in)

WORD_CAP = 10 ** 6

# Conjugacy classes of candidate subgroups are merged by comparing element
# sets, which is only affordable for smallish subgroups and orbits.
CLASS_KEY_CAP = 2000
CLASS_ORBIT_CAP = 512


def _is_prime(m):
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class LinearCode:
    """A linear code over GF(prime), stored as a reduced row echelon basis."""

    prime: int
    length: int
    rows: tuple

    @property
    def dimension(self):
        return len(self.rows)

    @property
    def word_count(self):
        return self.prime ** self.dimension


def make_code(prime, length, vectors):
    """Build the code spanned by vectors (sequences of ints) in GF(prime)^length."""
    if not _is_prime(prime):
        raise ValueError("prime must be prime, got %d" % prime)
    if length < 1:
        raise ValueError("length must be positive")
    rows = []
    for vec in vectors:
        if len(vec) != length:
            raise ValueError("vector length %d != %d" % (len(vec), length))
        cur = [x % prime for x in vec]
        for row in rows:
            lead = next(i for i, x in enumerate(row) if x)
            if cur[lead]:
                c = cur[lead]
                for i in range(length):
                    cur[i] = (cur[i] - c * row[i]) % prime
        if any(cur):
            lead = next(i for i, x in enumerate(cur) if x)
            inv = pow(cur[lead], prime - 2, prime)
            cur = [(x * inv) % prime for x in cur]
            for row in rows:
                c = row[lead]
                if c:
                    for i in range(length):
                        row[i] = (row[i] - c * cur[i]) % prime
            rows.append(cur)
    rows.sort(key=lambda r: next(i for i, x in enumerate(r) if x))
    return LinearCode(prime, length, tuple(tuple(r) for r in rows))


def code_words(code):
    """All words of the code as a list of tuples (prime ** dimension of them)."""
    p = code.prime
    words = [(0,) * code.length]
    for row in code.rows:
        words = [tuple((w[i] + c * row[i]) % p for i in range(code.length))
                 for w in words for c in range(p)]
    return words


@dataclass(frozen=True)
class MonomialMap:
    """A coordinate permutation combined with nonzero scalings.

    Coordinate i (1-based in perm, 0-based in scalars) is sent to
    coordinate perm(i), and the value it carries is multiplied by
    scalars[i - 1].
    """

    prime: int
    perm: Permutation
    scalars: tuple

    def apply(self, word):
        p = self.prime
        out = [0] * len(word)
        for i, v in enumerate(word):
            out[self.perm.apply(i + 1) - 1] = (self.scalars[i] * v) % p
        return tuple(out)

    def compose(self, other):
        """self followed by other."""
        p = self.prime
        perm = self.perm * other.perm
        scal = tuple((self.scalars[i]
                      * other.scalars[self.perm.apply(i + 1) - 1]) % p
                     for i in range(len(self.scalars)))
        return MonomialMap(p, perm, scal)


def _mon_point(i, v, p):
    """0-based point for coordinate i (0-based) carrying value v in 1..p-1."""
    return i * (p - 1) + (v - 1)


def monomial_to_raw(mon, length):
    """Encode a monomial map as a 0-based raw permutation of length*(p-1) points."""
    p = mon.prime
    raw = [0] * (length * (p - 1))
    for i in range(length):
        j = mon.perm.apply(i + 1) - 1
        s = mon.scalars[i]
        for v in range(1, p):
            raw[_mon_point(i, v, p)] = _mon_point(j, (s * v) % p, p)
    return tuple(raw)


def raw_to_monomial(raw, prime, length):
    p = prime
    perm_raw = [0] * length
    scal = [1] * length
    for i in range(length):
        q = raw[_mon_point(i, 1, p)]
        j, s = q // (p - 1), q % (p - 1) + 1
        perm_raw[i] = j
        scal[i] = s
        for v in range(2, p):
            if raw[_mon_point(i, v, p)] != _mon_point(j, (s * v) % p, p):
                raise ValueError("permutation is not monomial")
    return MonomialMap(p, Permutation._from_raw(tuple(perm_raw)), tuple(scal))


@dataclass(frozen=True)
class MonomialGroup:
    """A group of monomial maps, also carried as a permutation group.

    The permutation form acts on length*(prime-1) points, one per
    (coordinate, nonzero value) pair; for prime 2 this is just the
    coordinate action.
    """

    prime: int
    length: int
    generators: tuple
    group: Group

    def order(self):
        return self.group.order()


def code_automorphisms(code, budget=None, word_cap=WORD_CAP):
    """The monomial maps preserving the word set of the code.

    Backtracks over images of one coordinate at a time.  A partial
    assignment survives only if the multiset of scaled source columns
    matches the multiset of target columns, which at full depth is
    exactly the automorphism condition.  Generators found below the
    identity branch are used to prune sibling candidates, so the result
    comes back with a short generator list.
    """
    if code.word_count > word_cap:
        raise DegreeCapError(
            "code has %d words, cap is %d" % (code.word_count, word_cap))
    if budget is None:
        budget = SearchBudget()
    p, k = code.prime, code.length
    words = code_words(code)
    coldist = [Counter(w[i] for w in words) for i in range(k)]

    def col_ok(i, j, s):
        di, dj = coldist[i], coldist[j]
        return all(dj[(s * v) % p] == cnt for v, cnt in di.items())

    found = []
    tgts = []
    scal = []
    used = [False] * k
    nw = len(words)
    # Words are kept partitioned by their prefix so far, once for the
    # scaled source coordinates and once for the chosen targets.  Class
    # ids are assigned from a shared table, so equal ids mean equal
    # prefixes and the two partitions can be compared by counts alone.
    src_stack = [[0] * nw]
    tgt_stack = [[0] * nw]

    def descend(i, j, s, on_ref):
        src_old, tgt_old = src_stack[-1], tgt_stack[-1]
        ids = {}
        src_new = [0] * nw
        tgt_new = [0] * nw
        cnt_src = Counter()
        cnt_tgt = Counter()
        for t in range(nw):
            w = words[t]
            key = (src_old[t], (s * w[i]) % p)
            cid = ids.get(key)
            if cid is None:
                cid = len(ids)
                ids[key] = cid
            src_new[t] = cid
            cnt_src[cid] += 1
            key = (tgt_old[t], w[j])
            cid = ids.get(key)
            if cid is None:
                cid = len(ids)
                ids[key] = cid
            tgt_new[t] = cid
            cnt_tgt[cid] += 1
        if cnt_src != cnt_tgt:
            return None
        used[j] = True
        tgts.append(j)
        scal.append(s)
        src_stack.append(src_new)
        tgt_stack.append(tgt_new)
        got = explore(i + 1, on_ref)
        src_stack.pop()
        tgt_stack.pop()
        used[j] = False
        tgts.pop()
        scal.pop()
        return got

    def _proj_norm(col):
        piv = next((v for v in col if v), 0)
        if piv == 0:
            return col
        inv = pow(piv, p - 2, p)
        return tuple((v * inv) % p for v in col)

    def forced_cands(i, src_cls, tgt_cls):
        """Candidates once every word sits in its own class.

        The class alignment then fixes which target word each source
        word must become, so a target coordinate either matches the
        scaled source column exactly or is impossible.  A candidate is
        kept only if the leftover columns still pair up projectively,
        which makes the remaining levels free of dead ends.
        """
        by_tgt = {}
        for t in range(nw):
            by_tgt[tgt_cls[t]] = t
        um = [by_tgt[c] for c in src_cls]
        pool = Counter()
        for q in range(i + 1, k):
            pool[_proj_norm(tuple(w[q] for w in words))] += 1
        tgt_cols = {j: tuple(words[um[t]][j] for t in range(nw))
                    for j in range(k) if not used[j]}
        tgt_pool = Counter(_proj_norm(col) for col in tgt_cols.values())
        mismatch = {c for c in set(pool) | set(tgt_pool)
                    if pool[c] != tgt_pool[c]}
        src_col = tuple(w[i] for w in words)
        out = []
        for s in range(1, p):
            req = tuple((s * v) % p for v in src_col)
            for j, col in tgt_cols.items():
                if col != req:
                    continue
                key = _proj_norm(col)
                if mismatch == {key} and tgt_pool[key] == pool[key] + 1:
                    out.append((_mon_point(j, s, p), j, s))
        out.sort()
        return out

    def explore(i, on_ref):
        budget.tick()
        if i == k:
            if on_ref:
                return None
            return (tuple(tgts), tuple(scal))
        src_cls = src_stack[-1]
        if p ** i >= nw and len(set(src_cls)) == nw:
            cands = forced_cands(i, src_cls, tgt_stack[-1])
        else:
            cands = []
            for j in range(k):
                if used[j]:
                    continue
                for s in range(1, p):
                    if (j != i or s != 1) and not col_ok(i, j, s):
                        continue
                    cands.append((_mon_point(j, s, p), j, s))
            cands.sort()
        if not on_ref:
            for _, j, s in cands:
                got = descend(i, j, s, False)
                if got is not None:
                    return got
            return None
        descend(i, i, 1, True)
        for ep, j, s in cands:
            if j == i and s == 1:
                continue
            gens = [g for g in found
                    if all(g[_mon_point(t, 1, p)] == _mon_point(t, 1, p)
                           for t in range(i))]
            if not _min_in_orbit(ep, gens):
                continue
            got = descend(i, j, s, False)
            if got is not None:
                mon = MonomialMap(p, Permutation._from_raw(got[0]), got[1])
                found.append(monomial_to_raw(mon, k))
        return None

    explore(0, True)
    gens = tuple(raw_to_monomial(raw, p, k) for raw in found)
    group = Group(k * (p - 1),
                  [Permutation._from_raw(raw) for raw in found])
    return MonomialGroup(p, k, gens, group)


def code_of_elementary_subdirect(group):
    """Read an elementary abelian group with prime-length orbits as a code.

    Every orbit gets an orientation generator: the power of the orbit's
    cyclic image that sends the least orbit point to the next-least one.
    Each group generator then restricts on each orbit to a power of that
    orientation, and the exponent vectors span the code.  Returns the
    code and a legend of (orbit, orientation generator) pairs, with the
    orientation generators given at full degree.
    """
    orbits = group.orbit_partition()
    lengths = {len(o) for o in orbits}
    if len(lengths) != 1:
        raise ValueError("orbits have mixed lengths %s" % sorted(lengths))
    p = lengths.pop()
    if not _is_prime(p):
        raise ValueError("orbit length %d is not prime" % p)
    n = group.degree
    k = len(orbits)
    legend = []
    pow_tables = []
    for orbit in orbits:
        oi = orbit_action(group, orbit).image_group()
        if oi.order() != p:
            raise ValueError("orbit %s has image of order %d, expected %d"
                             % (orbit, oi.order(), p))
        g0 = next(g for g in oi.generators if not g.is_identity())
        e = next(e for e in range(1, p) if (g0 ** e).apply(1) == 2)
        gi = g0 ** e
        raw = list(range(n))
        for x in range(1, p + 1):
            raw[orbit[x - 1] - 1] = orbit[gi.apply(x) - 1] - 1
        legend.append((orbit, Permutation._from_raw(tuple(raw))))
        powers = []
        cur = Permutation.identity(p)
        for _ in range(p):
            powers.append(tuple(cur.apply(x) for x in range(1, p + 1)))
            cur = cur * gi
        pow_tables.append(powers)
    vectors = []
    for u in group.generators:
        vec = []
        for orbit, powers in zip(orbits, pow_tables):
            pos = {pt: x for x, pt in enumerate(orbit, start=1)}
            restr = tuple(pos[u.apply(pt)] for pt in orbit)
            try:
                vec.append(powers.index(restr))
            except ValueError:
                raise ValueError(
                    "generator is not a power of the orientation on orbit %s"
                    % (orbit,))
        vectors.append(vec)
    code = make_code(p, k, vectors)
    if code.word_count != group.order():
        raise ValueError("group is not elementary abelian")
    return code, tuple(legend)


def elementary_abelian_normaliser(group, budget=None, word_cap=WORD_CAP):
    """Normaliser in Sym(n) of an elementary abelian group.

    Moved points must fall in orbits of one prime length p.  The
    normaliser is the translations (the orientation generators), the
    monomial automorphisms of the associated code lifted back to points,
    and the full symmetric group on any fixed points.
    """
    n = group.degree
    orbits = group.orbit_partition()
    moved = [o for o in orbits if len(o) > 1]
    fixed = [o[0] for o in orbits if len(o) == 1]
    if not moved:
        return symmetric_group(n)
    support = sorted(pt for o in moved for pt in o)
    act = orbit_action(group, support)
    code, legend = code_of_elementary_subdirect(act.image_group())
    p, k = code.prime, code.length
    auts = code_automorphisms(code, budget=budget, word_cap=word_cap)
    pts = []
    for orbit, gi in legend:
        a = orbit[0]
        cycle = [a]
        for _ in range(p - 1):
            cycle.append(gi.apply(cycle[-1]))
        pts.append(cycle)
    gens_local = [gi._img for _, gi in legend]
    m = len(support)
    for mon in auts.generators:
        raw = [0] * m
        for i in range(k):
            j = mon.perm.apply(i + 1) - 1
            s = mon.scalars[i]
            for e in range(p):
                raw[pts[i][e] - 1] = pts[j][(s * e) % p] - 1
        gens_local.append(tuple(raw))
    gens = []
    for raw_local in gens_local:
        raw = list(range(n))
        for x in range(m):
            raw[support[x] - 1] = support[raw_local[x]] - 1
        gens.append(Permutation._from_raw(tuple(raw)))
    if len(fixed) >= 2:
        raw = list(range(n))
        raw[fixed[0] - 1], raw[fixed[1] - 1] = fixed[1] - 1, fixed[0] - 1
        gens.append(Permutation._from_raw(tuple(raw)))
        if len(fixed) >= 3:
            raw = list(range(n))
            for a, b in zip(fixed, fixed[1:] + fixed[:1]):
                raw[a - 1] = b - 1
            gens.append(Permutation._from_raw(tuple(raw)))
    order = p ** k * auts.order() * math.factorial(len(fixed))
    return Group(n, gens, order=order)


def affine_sylow_p(group, p):
    """The Sylow p-subgroup of a group acting with affine orbits of length p.

    Orbits must have length 1 or p, and on each length-p orbit the group
    must act by affine maps x -> ax + b over GF(p).  The multipliers a
    define a homomorphism to an abelian group of order coprime to p
    whose kernel consists of the pure translations, and that kernel is
    the unique Sylow p-subgroup.
    """
    if not _is_prime(p):
        raise ValueError("p must be prime, got %d" % p)
    orbits = [o for o in group.orbit_partition() if len(o) > 1]
    if any(len(o) != p for o in orbits):
        raise ValueError("orbits must have length 1 or %d" % p)
    if not orbits or p == 2:
        return group if orbits else Group(group.degree, [])
    coords = []
    for orbit in orbits:
        oi = orbit_action(group, orbit).image_group()
        if (p * (p - 1)) % oi.order() != 0:
            raise ValueError("orbit image of order %d is not affine of degree %d"
                             % (oi.order(), p))
        els = [g for g in oi.elements() if g.order() == p]
        gi = min(els, key=lambda g: g._img)
        coord = {1: 0}
        x = 1
        for e in range(1, p):
            x = gi.apply(x)
            coord[x] = e
        pos = {pt: x for x, pt in enumerate(orbit, start=1)}
        coords.append((orbit, pos, coord))
    k = len(orbits)
    images = []
    for u in group.generators:
        raw = [0] * (k * (p - 1))
        for i, (orbit, pos, coord) in enumerate(coords):
            base = next(pt for pt in orbit if coord[pos[pt]] == 0)
            second = next(pt for pt in orbit if coord[pos[pt]] == 1)
            shift = coord[pos[u.apply(base)]]
            mult = (coord[pos[u.apply(second)]] - shift) % p
            for pt in orbit:
                e = coord[pos[pt]]
                if coord[pos[u.apply(pt)]] != (mult * e + shift) % p:
                    raise ValueError("orbit image is not affine")
            for v in range(1, p):
                raw[i * (p - 1) + v - 1] = i * (p - 1) + (mult * v) % p - 1
        images.append(Permutation._from_raw(tuple(raw)))
    hom = GroupHom(group, k * (p - 1), images)
    return hom.kernel()


def _affine_quotient(order, p):
    return order % p == 0 and (p * (p - 1)) % order == 0


def index_p_affine_subgroups(group, p, cap=SUBGROUP_ORDER_CAP, budget=None):
    """Index-p subgroups V with affine image on the cosets, up to nothing.

    Small groups are handled by enumerating all subgroups.  Larger ones
    go through the quotient by the second derived subgroup: an affine
    coset image is metabelian, so it factors through that quotient and
    every qualifying V shows up as a preimage.
    """
    if not _is_prime(p):
        raise ValueError("p must be prime, got %d" % p)
    if group.order() % p != 0:
        return []

    def affine_ok(g, v):
        f = coset_action(g, v)
        return _affine_quotient(f.image_group().order(), p)

    dd = second_derived_subgroup(group)
    idx = group.order() // dd.order()
    if 1 < dd.order() and idx <= cap:
        # quotienting first keeps the subgroup lattice walk off the big
        # group; any V with affine coset image contains the kernel of
        # that metabelian image, hence all of dd
        f = coset_action(group, dd)
        q = f.image_group()
        out = []
        for v in all_subgroups(q, cap=cap):
            if v.order() * p == q.order() and affine_ok(q, v):
                out.append(f.preimage_of_subgroup(v, budget=budget))
        return out
    if group.order() <= cap:
        out = []
        for v in all_subgroups(group, cap=cap):
            if v.order() * p == group.order() and affine_ok(group, v):
                out.append(v)
        return out
    raise DegreeCapError(
        "metabelian quotient has order %d, cap is %d" % (idx, cap))


def _conj_raw(u, g):
    c = [0] * len(u)
    for x, ux in enumerate(u):
        c[g[x]] = g[ux]
    return tuple(c)


def _class_reps(subs, big, notes=None):
    """One representative per conjugacy class of subs under big.

    Classes are merged by tracking element sets under generator
    conjugation.  When a subgroup or its orbit is too large to track the
    subgroup is kept as its own representative, which only costs extra
    work downstream, never correctness.
    """
    keys = []
    for v in subs:
        if v.order() <= CLASS_KEY_CAP:
            keys.append(frozenset(g._img for g in v.elements()))
        else:
            keys.append(None)
            if notes is not None:
                notes.append("subgroup of order %d too large to merge classes"
                             % v.order())
    ngens = [g._img for g in big.generators]
    ngens += [inverse_raw(raw) for raw in ngens]
    taken = [False] * len(subs)
    reps = []
    for i, v in enumerate(subs):
        if taken[i]:
            continue
        reps.append(v)
        if keys[i] is None:
            continue
        orbit = {keys[i]}
        frontier = [keys[i]]
        while frontier and len(orbit) <= CLASS_ORBIT_CAP:
            cur = frontier.pop()
            for g in ngens:
                nxt = frozenset(_conj_raw(u, g) for u in cur)
                if nxt not in orbit:
                    orbit.add(nxt)
                    frontier.append(nxt)
        if frontier and notes is not None:
            notes.append("class orbit truncated at %d" % len(orbit))
        for j in range(i + 1, len(subs)):
            if not taken[j] and keys[j] in orbit:
                taken[j] = True
    return reps


def _minimal_index_overgroup(m, u, r, cap, budget):
    """Smallest-index subgroup of m over r meeting u exactly in r, or None."""
    idx = m.order() // r.order()
    if idx > cap:
        return None
    f = coset_action(m, r)
    q = f.image_group()
    for s in sorted(all_subgroups(q, cap=cap), key=lambda s: -s.order()):
        if s.order() == q.order():
            continue
        cand = f.preimage_of_subgroup(s, budget=budget)
        if intersection(cand, u, budget=budget).order() == r.order():
            return cand
    return None


def aff_qu_search(u, big, p, budget=None, cap=SUBGROUP_ORDER_CAP, notes=None):
    """Subgroups H of big suited to cutting down a normaliser through codes.

    For each conjugacy class of index-p affine subgroups R of u, take
    the normaliser M of R in big; if M meets u in more than R, drop to
    the largest subgroup of M over R that meets u exactly in R.  u must
    be normal in big so that conjugate R give conjugate results.
    """
    if u.degree != big.degree or not big.contains_group(u):
        raise ValueError("u must be a subgroup of big")
    if not u.is_normal_in(big):
        raise ValueError("u must be normal in big")
    subs = index_p_affine_subgroups(u, p, cap=cap, budget=budget)
    if not subs:
        return []
    out = []
    for r in _class_reps(subs, big, notes=notes):
        m = normaliser_in(big, r, budget=budget)
        if intersection(m, u, budget=budget).order() == r.order():
            out.append(m)
            continue
        h = _minimal_index_overgroup(m, u, r, cap, budget)
        if h is None:
            if notes is not None:
                notes.append("no workable overgroup for a class at p=%d" % p)
            continue
        out.append(h)
    return out


def _restrict_local(raw, start, span):
    local = [0] * span
    for x in range(span):
        y = raw[start + x]
        if not start <= y < start + span:
            raise ValueError("element leaves its factor block")
        local[x] = y - start
    return tuple(local)


def _copywise_image(local, d, copies, f, m):
    """Image of a block-respecting local element under f applied per copy."""
    img = [0] * (m * copies)
    for i in range(copies):
        si = local[i * d] // d
        comp = [0] * d
        for x in range(d):
            y = local[i * d + x]
            if y // d != si:
                raise ValueError("element does not respect the copy blocks")
            comp[x] = y - si * d
        fim = f.eval_raw(tuple(comp))
        for x in range(m):
            img[i * m + x] = si * m + fim[x]
    return img


class _Component:
    """One coset action of a factor normaliser, applied copy by copy."""

    def __init__(self, start, d, copies, f):
        self.start = start
        self.d = d
        self.copies = copies
        self.f = f
        self.codomain_degree = f.codomain_degree * copies

    def image_raw(self, raw):
        local = _restrict_local(raw, self.start, self.d * self.copies)
        return _copywise_image(local, self.d, self.copies, self.f,
                               self.f.codomain_degree)

    def hom_on(self, domain):
        images = [Permutation._from_raw(tuple(self.image_raw(g._img)))
                  for g in domain.generators]
        return GroupHom(domain, self.codomain_degree, images)

    def image_of(self, group):
        gens = [Permutation._from_raw(tuple(self.image_raw(g._img)))
                for g in group.generators]
        return Group(self.codomain_degree, gens)


def _components(u, wstruct, p, budget, notes):
    comps = []
    off = 0
    for (fac, mult), nor in zip(wstruct.decomposition.factors,
                                wstruct.factor_normalisers):
        d = fac.degree
        try:
            subs = aff_qu_search(fac, nor, p, budget=budget, notes=notes)
        except (DegreeCapError, BudgetExceededError) as exc:
            if notes is not None:
                notes.append("p=%d factor at offset %d skipped: %s"
                             % (p, off, exc))
            subs = []
        for h in subs:
            if nor.order() == h.order():
                continue
            comps.append(_Component(off, d, mult, coset_action(nor, h)))
        off += d * mult
    return comps


def _joint_image(comps, group):
    total = sum(c.codomain_degree for c in comps)
    gens = []
    for g in group.generators:
        raw = []
        off = 0
        for c in comps:
            raw.extend(x + off for x in c.image_raw(g._img))
            off += c.codomain_degree
        gens.append(Permutation._from_raw(tuple(raw)))
    return Group(total, gens)


def code_refine(u, overgroup, wstruct, p, budget=None, rng=None,
                word_cap=WORD_CAP, notes=None):
    """Cut an overgroup of the normaliser of u down through code normalisers.

    u sits inside the product-of-wreaths structure wstruct, and
    overgroup is a subgroup of that structure containing the normaliser
    of u in Sym(n).  Each subgroup found by aff_qu_search on a factor
    yields a coset map; the image of u under the joint map has a Sylow
    p-subgroup that is elementary abelian with affine orbits, so its
    normaliser is a code computation, and pulling that back refines
    overgroup.  When the joint image would have too many code words the
    maps are applied one at a time against shrinking kernels.
    """
    if u.degree != overgroup.degree or not overgroup.contains_group(u):
        raise ValueError("u must be contained in the overgroup")
    comps = _components(u, wstruct, p, budget, notes)
    if not comps:
        return overgroup
    k = affine_sylow_p(_joint_image(comps, u), p)
    if k.order() <= word_cap:
        if k.order() == 1:
            return overgroup
        s = elementary_abelian_normaliser(k, budget=budget,
                                          word_cap=word_cap)
        if len(comps) == 1:
            phi = comps[0].hom_on(overgroup)
        else:
            phi = hom_product([c.hom_on(overgroup) for c in comps])
        return phi.preimage_of_subgroup(s, budget=budget)
    if rng is not None:
        comps = list(comps)
        rng.shuffle(comps)
    cur = overgroup
    for pos, comp in enumerate(comps):
        others = comps[:pos] + comps[pos + 1:]
        if others:
            psi = hom_product([c.hom_on(cur) for c in others])
            usmall = intersection(u, psi.kernel(), budget=budget)
        else:
            usmall = u
        k = affine_sylow_p(comp.image_of(usmall), p)
        if k.order() == 1 or k.order() > word_cap:
            if notes is not None:
                notes.append("p=%d component skipped, image order %d"
                             % (p, k.order()))
            continue
        s = elementary_abelian_normaliser(k, budget=budget,
                                          word_cap=word_cap)
        cur = comp.hom_on(cur).preimage_of_subgroup(s, budget=budget)
    return cur
