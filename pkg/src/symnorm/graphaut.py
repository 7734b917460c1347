"""Colored-graph automorphisms and the block-system-graph overgroup.

The automorphism engine is equitable-partition refinement with
individualization: cells are split by neighbor counts against a splitter
cell until stable, the search individualizes one vertex of the smallest
non-singleton cell at a time, and leaves are compared against the first
leaf reached.  Found automorphisms prune sibling candidates on the
reference path; off the reference path a subtree is abandoned after its
first automorphism, exactly as in the chain searches.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .actions import block_action, orbit_action
from .blocks import block_stabilizer, principal_block_systems
from .errors import DegreeMismatchError
from .group import Group
from .perm import Permutation
from .search import SearchBudget, _min_in_orbit

STABILIZER_COLOR_THRESHOLD = 200


@dataclass(frozen=True)
class ColoredGraph:
    """Undirected graph with small-integer vertex colors, vertices 0-based."""

    vertex_count: int
    edges: tuple
    colors: tuple

    def __post_init__(self):
        v = self.vertex_count
        if len(self.colors) != v:
            raise ValueError("need one color per vertex")
        cset = set(self.colors)
        if cset != set(range(len(cset))):
            raise ValueError("color ids must be contiguous from 0")
        seen = set()
        for a, b in self.edges:
            if not (0 <= a < v and 0 <= b < v) or a == b:
                raise ValueError("bad edge (%r, %r)" % (a, b))
            key = (min(a, b), max(a, b))
            if key in seen:
                raise ValueError("duplicate edge (%r, %r)" % (a, b))
            seen.add(key)

    def neighbor_sets(self):
        nbr = [set() for _ in range(self.vertex_count)]
        for a, b in self.edges:
            nbr[a].add(b)
            nbr[b].add(a)
        return nbr


def make_graph(vertex_count, edges, colors) -> ColoredGraph:
    canon = tuple(sorted((min(a, b), max(a, b)) for a, b in edges))
    return ColoredGraph(vertex_count, canon, tuple(colors))


def _refine(cells, nbr):
    """Split cells by neighbor counts until the partition is equitable.

    New subcells are ordered by ascending count so the refinement commutes
    with graph isomorphisms, which the leaf correspondence relies on.
    """
    queue = deque(cells)
    while queue:
        splitter = set(queue.popleft())
        ci = 0
        while ci < len(cells):
            cell = cells[ci]
            if len(cell) > 1:
                by_count = {}
                for v in cell:
                    by_count.setdefault(len(nbr[v] & splitter), []).append(v)
                if len(by_count) > 1:
                    parts = [tuple(by_count[c]) for c in sorted(by_count)]
                    cells[ci:ci + 1] = parts
                    queue.extend(parts)
                    ci += len(parts)
                    continue
            ci += 1
    return cells


def _individualize(cells, v):
    out = []
    for cell in cells:
        if v in cell:
            out.append((v,))
            rest = tuple(x for x in cell if x != v)
            if rest:
                out.append(rest)
        else:
            out.append(cell)
    return out


def graph_automorphisms(graph: ColoredGraph, budget=None) -> Group:
    """The full group of color-preserving automorphisms."""
    if budget is None:
        budget = SearchBudget()
    v_count = graph.vertex_count
    nbr = graph.neighbor_sets()
    edge_set = {(min(a, b), max(a, b)) for a, b in graph.edges}
    colors = graph.colors

    by_color = {}
    for v in range(v_count):
        by_color.setdefault(colors[v], []).append(v)
    start = [tuple(by_color[c]) for c in sorted(by_color)]
    start = _refine(start, nbr)

    found = []
    ref_seq = [None]
    ref_shapes = {}

    def verify(mapping):
        for v in range(v_count):
            if colors[mapping[v]] != colors[v]:
                return False
        for a, b in edge_set:
            x, y = mapping[a], mapping[b]
            if (min(x, y), max(x, y)) not in edge_set:
                return False
        return True

    def target_cell(cells):
        best = None
        for cell in cells:
            if len(cell) > 1 and (best is None or len(cell) < len(best)):
                best = cell
        return best

    def explore(cells, fixed, depth, on_ref):
        budget.tick()
        shape = tuple(len(c) for c in cells)
        if on_ref:
            ref_shapes[depth] = shape
        elif ref_shapes.get(depth) != shape:
            return None
        cell = target_cell(cells)
        if cell is None:
            seq = tuple(c[0] for c in cells)
            if on_ref:
                ref_seq[0] = seq
                return None
            mapping = [0] * v_count
            for src, dst in zip(ref_seq[0], seq):
                mapping[src] = dst
            mapping = tuple(mapping)
            return mapping if verify(mapping) else None
        if on_ref:
            v0 = cell[0]
            explore(_refine(_individualize(cells, v0), nbr),
                    fixed + [v0], depth + 1, True)
        rest = cell[1:] if on_ref else cell
        for v in sorted(rest):
            if on_ref:
                gens = [g for g in found if all(g[u] == u for u in fixed)]
                if not _min_in_orbit(v, gens):
                    continue
            got = explore(_refine(_individualize(cells, v), nbr),
                          fixed + [v], depth + 1, False)
            if got is not None:
                if on_ref:
                    found.append(got)
                else:
                    return got
        return None

    explore(list(start), [], 0, True)
    return Group(max(v_count, 1), [Permutation._from_raw(g) for g in found])


def block_system_graph(group: Group, systems):
    """The layered graph of points, blocks and systems, plus a vertex legend.

    Point vertices come first, then all blocks system by system, then one
    vertex per system.  System vertices are colored by the invariants
    (block count, block action image order, block stabilizer image order);
    systems sharing all three stay interchangeable.
    """
    n = group.degree
    legend = [("point", p + 1) for p in range(n)]
    edges = []
    colors = [0] * n

    block_vertex = {}
    for si, system in enumerate(systems):
        for bi, cell in enumerate(system.blocks):
            v = n + len(block_vertex)
            block_vertex[(si, bi)] = v
            legend.append(("block", si, cell))
            colors.append(1)
            for p in cell:
                edges.append((p - 1, v))

    triples = []
    for system in systems:
        k = system.block_count
        img = block_action(group, system).image_group().order()
        stab = block_stabilizer(group, system.blocks[0], system)
        pi_order = orbit_action(stab, system.blocks[0]).image_group().order()
        triples.append((k, img, pi_order))
    palette = {t: 2 + i for i, t in enumerate(sorted(set(triples)))}

    for si, system in enumerate(systems):
        v = n + len(block_vertex) + si
        legend.append(("system", si))
        colors.append(palette[triples[si]])
        for bi in range(system.block_count):
            edges.append((block_vertex[(si, bi)], v))

    used = sorted(set(colors))
    remap = {c: i for i, c in enumerate(used)}
    colors = [remap[c] for c in colors]
    return make_graph(len(legend), edges, colors), legend


def graph_overgroup(group: Group, budget=None) -> Group:
    """Overgroup of the normaliser from block-system-graph automorphisms.

    The graph automorphisms are restricted to the point vertices and
    combined with the group itself.  For large graphs one point vertex is
    pinned by a private color first, which shrinks the search; the group
    restores transitivity afterwards.
    """
    if not group.is_transitive():
        raise ValueError("the graph overgroup needs a transitive group")
    systems = principal_block_systems(group)
    if not systems:
        raise ValueError("no nontrivial block system: group is primitive")
    n = group.degree
    graph, _legend = block_system_graph(group, systems)
    if graph.vertex_count > STABILIZER_COLOR_THRESHOLD:
        colors = list(graph.colors)
        colors = [c + 1 for c in colors]
        colors[0] = 0
        graph = make_graph(graph.vertex_count, graph.edges, colors)
    auts = graph_automorphisms(graph, budget=budget)
    gens = list(group.generators)
    for g in auts.generators:
        raw = g._img[:n]
        if any(x >= n for x in raw):
            raise RuntimeError("graph automorphism mixes points with blocks")
        gens.append(Permutation._from_raw(raw))
    return Group(n, gens)


def to_dimacs(graph: ColoredGraph) -> str:
    """DIMACS-like text export for cross-checking with external tools."""
    lines = ["p edge %d %d" % (graph.vertex_count, len(graph.edges))]
    for a, b in graph.edges:
        lines.append("e %d %d" % (a + 1, b + 1))
    for v, c in enumerate(graph.colors):
        lines.append("c color %d %d" % (v + 1, c))
    return "\n".join(lines) + "\n"
