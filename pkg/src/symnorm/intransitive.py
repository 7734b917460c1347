"""Splitting an intransitive group along its orbits.

A group with several orbits embeds into the direct product of its orbit
images.  After sorting the orbits so that images of the same isomorphism
type sit next to each other and act identically, the normaliser in the
full symmetric group is contained in a direct product of wreath products

    prod_j  N_{Sym(d_j)}(G_j) wr Sym(e_j)

where G_j runs over the distinct orbit images and e_j counts how often
each occurs.  orbit_sort produces the relabelling, dpwp_overgroup builds
the wreath overgroup on top of it.
"""

from dataclasses import dataclass

from .actions import direct_product, orbit_action, wreath_product
from .group import Group, conjugate_group, symmetric_group
from .perm import Permutation
from .search import conjugating_element, normaliser_in


@dataclass(frozen=True)
class SubdirectDecomposition:
    """Result of orbit_sort.

    relabelling maps each original point to its new label; applying it
    makes the orbits consecutive, grouped by isomorphism type, with all
    orbits of one type carrying the same image group up to a shift.
    factors lists (image group on 1..d, multiplicity) pairs.
    """

    relabelling: Permutation
    factors: tuple

    @property
    def degree(self) -> int:
        return self.relabelling.degree

    def apply(self, group: Group) -> Group:
        """The group rewritten in the sorted labelling."""
        return conjugate_group(group, self.relabelling.inverse())

    def undo(self, group: Group) -> Group:
        """Back from the sorted labelling to the original one."""
        return conjugate_group(group, self.relabelling)

    def factor_offsets(self):
        """0-based start of each factor's block of d*e points."""
        offsets = []
        total = 0
        for fac, mult in self.factors:
            offsets.append(total)
            total += fac.degree * mult
        return tuple(offsets)


def permutation_isomorphic(a: Group, b: Group, budget=None):
    """A permutation s with conjugate_group(a, s) == b, or None.

    Groups on domains of different sizes are never isomorphic in this
    sense.  Cheap invariants (order, and for transitive groups the rank)
    are checked before any conjugacy search.
    """
    if a.degree != b.degree:
        return None
    if a.equals(b):
        return Permutation.identity(a.degree)
    if a.order() != b.order():
        return None
    if a.degree > 1 and a.is_transitive() and b.is_transitive():
        ranka = len(a.point_stabilizer(1).orbits0())
        rankb = len(b.point_stabilizer(1).orbits0())
        if ranka != rankb:
            return None
    return conjugating_element(a, b, budget=budget)


def orbit_sort(group: Group, budget=None) -> SubdirectDecomposition:
    """Relabel the domain so equal-type orbits are adjacent and aligned.

    Orbit images are collected into permutation-isomorphism classes.  The
    classes are laid out by (degree, order, first appearance); inside a
    class every orbit is rewritten through a conjugator onto the class
    representative, so after relabelling all orbits of one class have
    literally the same image group, shifted along the domain.
    """
    n = group.degree
    orbits = group.orbit_partition()
    images = [orbit_action(group, orb).image_group() for orb in orbits]

    classes = []            # lists of orbit indices
    conjs = {}              # orbit index -> conjugator onto its class rep
    for i, img in enumerate(images):
        placed = False
        for members in classes:
            s = permutation_isomorphic(images[members[0]], img, budget=budget)
            if s is not None:
                # s maps the rep onto img; we need the other direction
                conjs[i] = s.inverse()
                members.append(i)
                placed = True
                break
        if placed:
            continue
        classes.append([i])
        conjs[i] = Permutation.identity(img.degree)

    order = sorted(range(len(classes)),
                   key=lambda ci: (images[classes[ci][0]].degree,
                                   images[classes[ci][0]].order(),
                                   ci))
    new_label = [0] * n      # 0-based old point -> 1-based new label
    offset = 0
    for ci in order:
        for oi in classes[ci]:
            orbit = orbits[oi]
            sinv = conjs[oi].inverse()
            for t, p in enumerate(orbit, start=1):
                new_label[p - 1] = offset + sinv.apply(t)
            offset += len(orbit)
    rho = Permutation._from_raw(tuple(x - 1 for x in new_label))
    factors = tuple((images[classes[ci][0]], len(classes[ci])) for ci in order)
    return SubdirectDecomposition(relabelling=rho, factors=factors)


@dataclass(frozen=True)
class DpwpStructure:
    """The wreath overgroup together with the pieces it was built from."""

    group: Group
    decomposition: SubdirectDecomposition
    factor_normalisers: tuple
    offsets: tuple


def dpwp_structure(dec: SubdirectDecomposition, normaliser_fn,
                   budget=None) -> DpwpStructure:
    parts = []
    nors = []
    for fac, mult in dec.factors:
        nor = normaliser_fn(fac)
        if nor.degree != fac.degree or not nor.contains_group(fac):
            raise ValueError("factor normaliser does not contain the factor")
        nors.append(nor)
        parts.append(wreath_product(nor, symmetric_group(mult)))
    prod, offsets = direct_product(parts)
    return DpwpStructure(group=prod, decomposition=dec,
                         factor_normalisers=tuple(nors), offsets=tuple(offsets))


def dpwp_overgroup(group: Group, budget=None, normaliser_fn=None):
    """Overgroup of the normaliser built from sorted orbits.

    Returns (overgroup, relabelling); the overgroup lives in the sorted
    labelling, i.e. it contains conjugate_group(group, relabelling
    .inverse()).  normaliser_fn computes the normaliser of a transitive
    factor in its symmetric group; the default is the plain backtrack.
    """
    if normaliser_fn is None:
        def normaliser_fn(fac):
            return normaliser_in(symmetric_group(fac.degree), fac,
                                 budget=budget)
    dec = orbit_sort(group, budget=budget)
    st = dpwp_structure(dec, normaliser_fn, budget=budget)
    return st.group, dec.relabelling
