"""Block systems of transitive groups.

The minimal system joining two points is computed by the union-find
refinement: seed the pair, then whenever two classes merge, enqueue the
generator images of the merged pair until nothing changes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .actions import GroupHom, block_action, coset_action, orbit_action
from .group import Group


@dataclass(frozen=True)
class BlockSystem:
    """A partition of {1..n} into equal cells, cells ordered by least element."""

    degree: int
    blocks: tuple

    @property
    def block_size(self) -> int:
        return len(self.blocks[0])

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    def block_of(self, point: int) -> int:
        """Index of the cell containing the (1-based) point."""
        for i, b in enumerate(self.blocks):
            if point in b:
                return i
        raise ValueError("point %d outside the domain" % point)

    def __str__(self):
        return "|".join(",".join(str(p) for p in b) for b in self.blocks)


def make_block_system(degree: int, blocks) -> BlockSystem:
    cells = sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0])
    seen = set()
    for b in cells:
        if len(b) != len(cells[0]):
            raise ValueError("cells have unequal sizes")
        seen.update(b)
    if len(seen) != degree or seen != set(range(1, degree + 1)):
        raise ValueError("cells do not partition the domain")
    return BlockSystem(degree, tuple(cells))


def is_invariant_system(group: Group, system: BlockSystem) -> bool:
    cellsets = [frozenset(b) for b in system.blocks]
    cell_index = {}
    for i, c in enumerate(cellsets):
        for p in c:
            cell_index[p] = i
    for g in group.generators:
        for c in cellsets:
            image = frozenset(g.apply(p) for p in c)
            if image != cellsets[cell_index[next(iter(image))]]:
                return False
    return True


def minimal_block_system(group: Group, i: int, j: int) -> BlockSystem:
    """Finest block system with i and j in one cell; may be the one-cell system."""
    if not group.is_transitive():
        raise ValueError("block systems are defined for transitive groups")
    n = group.degree
    if not (1 <= i <= n and 1 <= j <= n) or i == j:
        raise ValueError("need two distinct domain points")
    gens = [g._img for g in group.generators]
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    stack = [(i - 1, j - 1)]
    while stack:
        a, b = stack.pop()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        parent[ra] = rb
        for g in gens:
            stack.append((g[a], g[b]))

    cells = {}
    for x in range(n):
        cells.setdefault(find(x), []).append(x + 1)
    return make_block_system(n, cells.values())


def principal_block_systems(group: Group):
    """Deduplicated minimal systems of the pairs (1,j), nontrivial only.

    Ordered by block size ascending, then by first block.
    """
    if not group.is_transitive():
        raise ValueError("block systems are defined for transitive groups")
    n = group.degree
    seen = {}
    for j in range(2, n + 1):
        system = minimal_block_system(group, 1, j)
        if system.block_count > 1 and system.block_size > 1:
            seen.setdefault(system.blocks, system)
    return sorted(seen.values(), key=lambda s: (s.block_size, s.blocks[0]))


def is_primitive(group: Group) -> bool:
    if not group.is_transitive():
        raise ValueError("primitivity is defined for transitive groups")
    return not principal_block_systems(group)


def block_stabilizer(group: Group, block, system: BlockSystem) -> Group:
    """Setwise stabilizer of one cell of the system."""
    cell = tuple(sorted(block))
    try:
        index = system.blocks.index(cell)
    except ValueError:
        raise ValueError("the point set is not a cell of the system") from None
    f = block_action(group, system)
    stab_image = f.image_group().point_stabilizer(index + 1)
    return f.preimage_of_subgroup(stab_image)


def block_image_hom(group: Group, block, system: BlockSystem) -> GroupHom:
    """Action of the block stabilizer on the points of its cell."""
    stab = block_stabilizer(group, block, system)
    return orbit_action(stab, block)


def block_quotient_hom(group: Group, system: BlockSystem, sub: Group,
                       cap=None) -> GroupHom:
    """Coset action of the group on the preimage of sub in a block stabilizer.

    sub must act on the points of the first cell, relabelled to 1..block
    size, and lie inside the image of the block stabilizer there.
    """
    if not is_invariant_system(group, system):
        raise ValueError("system is not invariant under the group")
    cell = system.blocks[0]
    if sub.degree != len(cell):
        raise ValueError("subgroup degree %d does not match block size %d"
                         % (sub.degree, len(cell)))
    stab = block_stabilizer(group, cell, system)
    pi = orbit_action(stab, cell)
    if not pi.image_group().contains_group(sub):
        raise ValueError("subgroup does not lie in the block stabilizer image")
    pre = pi.preimage_of_subgroup(sub)
    if cap is None:
        return coset_action(group, pre)
    return coset_action(group, pre, cap=cap)
