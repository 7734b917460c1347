"""Shared helpers: tiny brute-force oracles the fast code is checked against."""

import itertools

import pytest


def compose_raw(a, b):
    # apply a first, then b
    return tuple(b[x] for x in a)


def raw_closure(degree, gens_raw):
    """All elements of the generated group, by plain BFS closure."""
    idn = tuple(range(degree))
    gens = [tuple(g) for g in gens_raw]
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


def group_elements(group):
    """Element set of a Group via closure on its generators (independent of chains)."""
    return raw_closure(group.degree, [g._img for g in group.generators])


def all_perms(n):
    return itertools.permutations(range(n))


def brute_normaliser_raws(group):
    """All elements of Sym(n) conjugating the group onto itself; n small."""
    n = group.degree
    elems = frozenset(group_elements(group))
    gens = [g._img for g in group.generators]
    out = set()
    for g in itertools.permutations(range(n)):
        ok = True
        for u in gens:
            c = [0] * n
            for x in range(n):
                c[g[x]] = g[u[x]]
            if tuple(c) not in elems:
                ok = False
                break
        if ok:
            out.add(tuple(g))
    return out


def brute_conjugating_raws(a, b):
    """All s (raw) with s*a*s^-1 = b; assumes |a| == |b|, degrees small."""
    n = a.degree
    b_elems = frozenset(group_elements(b))
    a_gens = [g._img for g in a.generators]
    out = []
    for s in itertools.permutations(range(n)):
        sinv = [0] * n
        for x in range(n):
            sinv[s[x]] = x
        # s*u*s^-1 sends x to s^-1(u(s(x))) under left-to-right composition
        if all(tuple(sinv[u[s[x]]] for x in range(n)) in b_elems for u in a_gens):
            out.append(s)
    return out


@pytest.fixture
def rng():
    import random

    return random.Random(90210)


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def brute_block_systems(group):
    """Every invariant equal-cell partition (1-based), including trivial ones."""
    n = group.degree
    out = set()
    for part in set_partitions(list(range(1, n + 1))):
        if len({len(c) for c in part}) != 1:
            continue
        cells = [frozenset(c) for c in part]
        index = {}
        for i, c in enumerate(cells):
            for p in c:
                index[p] = i
        ok = True
        for g in group.generators:
            for c in cells:
                img = frozenset(g.apply(p) for p in c)
                if img != cells[index[next(iter(img))]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.add(tuple(sorted(tuple(sorted(c)) for c in cells)))
    return out


def brute_graph_auts(graph):
    """All color and edge preserving vertex bijections as raw tuples; V small."""
    n = graph.vertex_count
    edges = {(min(a, b), max(a, b)) for a, b in graph.edges}
    out = []
    for p in itertools.permutations(range(n)):
        if any(graph.colors[p[v]] != graph.colors[v] for v in range(n)):
            continue
        if all((min(p[a], p[b]), max(p[a], p[b])) in edges for a, b in edges):
            out.append(p)
    return out


def brute_monomial_auts(prime, length, words):
    """Count monomial maps preserving the word set; length and prime small."""
    wordset = set(words)
    count = 0
    for sigma in itertools.permutations(range(length)):
        for scal in itertools.product(range(1, prime), repeat=length):
            ok = True
            for w in wordset:
                img = [0] * length
                for i in range(length):
                    img[sigma[i]] = (scal[i] * w[i]) % prime
                if tuple(img) not in wordset:
                    ok = False
                    break
            if ok:
                count += 1
    return count
