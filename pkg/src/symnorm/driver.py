"""The descending overgroup chain for normalisers in the symmetric group.

Starting from Sym(n), each phase replaces the current overgroup H of
N(G) by a smaller group still known to contain N(G): graph
automorphisms, block actions, wreath closures and code normalisers all
contribute cuts, and a backtrack search inside the final H settles the
answer exactly.  Every step is checked to descend, so a bug in a phase
surfaces as a RuntimeError instead of a wrong normaliser.
"""

import math
import random
from dataclasses import dataclass

from .actions import (GroupHom, block_action, hom_product, orbit_action,
                      wreath_product)
from .blocks import (block_image_hom, block_quotient_hom, is_primitive,
                     principal_block_systems)
from .codes import _is_prime, code_refine
from .errors import BudgetExceededError, DegreeCapError
from .graphaut import graph_overgroup
from .group import Group, conjugate_group, symmetric_group
from .intransitive import dpwp_structure, orbit_sort
from .perm import Permutation
from .search import SearchBudget, intersection, normaliser_in


@dataclass(frozen=True)
class ChainConfig:
    """Tuning knobs for the chain; the defaults suit degrees up to ~50.

    Groups at or below the cutoffs, of small order, or primitive go
    straight to backtrack.  large_index is the overgroup-to-group ratio
    above which the extra quotient refinements are worth their cost.
    Every phase gets a fresh budget, so one stuck phase is abandoned
    without starving the rest.
    """

    transitive_cutoff: int = 35
    small_order_factor: int = 6
    intransitive_cutoff: int = 24
    large_index: int = 10 ** 6
    node_limit: int = 10 ** 7
    time_limit: float = 300.0
    seed: int = 0

    def budget(self):
        return SearchBudget(node_limit=self.node_limit,
                            time_limit=self.time_limit)


class ChainTrace:
    """Log of the chain: one (label, order, index) triple per recorded step.

    index is the factor by which the step shrank the previous group.
    Recording enforces that each group really is a subgroup of the one
    before it, with dividing order; a violation means a phase produced
    something unsound and is raised instead of logged.
    """

    def __init__(self):
        self.steps = []
        self.notes = []
        self.final_order = None
        self._last = None

    def record(self, label, group):
        order = group.order()
        if self._last is None:
            self.steps.append((label, order, 1))
        else:
            prev = self._last.order()
            if order > prev or prev % order != 0:
                raise RuntimeError(
                    "chain step %s went from order %d to %d" %
                    (label, prev, order))
            if not self._last.contains_group(group):
                raise RuntimeError(
                    "chain step %s left the previous overgroup" % label)
            self.steps.append((label, order, prev // order))
        self._last = group
        return group


def refine_by_hom(overgroup, group, f, budget=None):
    """Shrink overgroup to the preimage of a normaliser on the image side.

    f must be a homomorphism with domain overgroup.  Anything that
    normalises group and lies in the overgroup maps into the normaliser
    of the image of group, so the preimage of that normaliser still
    contains everything wanted.
    """
    img_h = f.image_group()
    img_g = f.image_of_subgroup(group)
    if img_g.order() == img_h.order():
        return overgroup
    nn = normaliser_in(img_h, img_g, budget=budget)
    if nn.order() == img_h.order():
        return overgroup
    return f.preimage_of_subgroup(nn, budget=budget)


def _prime_divisors(order, degree):
    return [p for p in range(2, degree + 1)
            if _is_prime(p) and order % p == 0]


def _system_transversal_map(group, system):
    """Permutation sending the wreath layout onto the system's points.

    Copy c of the wreath covers block c, identified with the first block
    along a transversal inside the group, so that the structure the
    blocks share is aligned the same way everywhere.
    """
    blocks = system.blocks
    index = {frozenset(b): i for i, b in enumerate(blocks)}
    reps = {0: Permutation.identity(group.degree)}
    frontier = [0]
    while frontier:
        c = frontier.pop(0)
        for gen in group.generators:
            img = frozenset(gen.apply(p) for p in blocks[c])
            j = index[img]
            if j not in reps:
                reps[j] = reps[c] * gen
                frontier.append(j)
    if len(reps) != len(blocks):
        raise RuntimeError("group is not transitive on the blocks")
    k = len(blocks[0])
    raw = [0] * group.degree
    for c in range(len(blocks)):
        t = reps[c]
        for i, b in enumerate(blocks[0]):
            raw[c * k + i] = t.apply(b) - 1
    return Permutation._from_raw(tuple(raw))


def _wreath_refine(overgroup, group, system, config, trace):
    """Intersect with N(P) wr Sym(blocks), P the block structure of group.

    The identification between blocks runs along a transversal of group,
    which is what makes every normalising element respect the wreath
    shape copy by copy.
    """
    cell = system.blocks[0]
    p_img = block_image_hom(group, cell, system).image_group()
    h_img = block_image_hom(overgroup, cell, system).image_group()
    if p_img.is_normal_in(h_img):
        return overgroup
    knorm = _normaliser_transitive(p_img, config, ChainTrace())
    w2 = wreath_product(knorm, symmetric_group(system.block_count))
    mu = _system_transversal_map(group, system)
    w2rel = conjugate_group(w2, mu.inverse())
    try:
        return intersection(overgroup, w2rel, budget=config.budget())
    except BudgetExceededError as exc:
        trace.notes.append("wreath intersection skipped: %s" % exc)
        return overgroup


def _normaliser_transitive(group, config, trace):
    n = group.degree
    sym = symmetric_group(n)
    if (n <= config.transitive_cutoff
            or group.order() <= config.small_order_factor * n
            or is_primitive(group)):
        return trace.record(
            "backtrack", normaliser_in(sym, group, budget=config.budget()))
    h = trace.record("graph", graph_overgroup(group, budget=config.budget()))
    for system in principal_block_systems(h):
        try:
            h2 = refine_by_hom(h, group, block_action(h, system),
                               budget=config.budget())
        except BudgetExceededError as exc:
            trace.notes.append("block action refinement skipped: %s" % exc)
            continue
        if h2.order() < h.order():
            h = trace.record("blocks:%d" % system.block_size, h2)
    for system in principal_block_systems(h):
        h2 = _wreath_refine(h, group, system, config, trace)
        if h2.order() < h.order():
            h = trace.record("wreath:%d" % system.block_size, h2)
    if h.order() > config.large_index * group.order():
        for system in principal_block_systems(h):
            sub = block_image_hom(group, system.blocks[0],
                                  system).image_group()
            try:
                f = block_quotient_hom(h, system, sub)
                h2 = refine_by_hom(h, group, f, budget=config.budget())
            except (DegreeCapError, BudgetExceededError) as exc:
                trace.notes.append("quotient refinement skipped: %s" % exc)
                continue
            if h2.order() < h.order():
                h = trace.record("quotient:%d" % system.block_size, h2)
    return trace.record("backtrack",
                        normaliser_in(h, group, budget=config.budget()))


def _orbit_block_homs(overgroup):
    """Block actions of the orbit restrictions, one per imprimitive orbit."""
    homs = []
    for orbit in overgroup.orbit_partition():
        if len(orbit) < 4:
            continue
        f1 = orbit_action(overgroup, orbit)
        img = f1.image_group()
        systems = principal_block_systems(img)
        if not systems:
            continue
        f2 = block_action(img, systems[0])
        images = [Permutation._from_raw(f2.eval_raw(im._img))
                  for im in f1.images]
        homs.append(GroupHom(overgroup, f2.codomain_degree, images))
    return homs


def _normaliser_intransitive(group, config, trace):
    n = group.degree
    if n <= config.intransitive_cutoff:
        return trace.record(
            "backtrack",
            normaliser_in(symmetric_group(n), group, budget=config.budget()))
    dec = orbit_sort(group, budget=config.budget())
    grel = dec.apply(group)

    def factor_normaliser(fac):
        if fac.degree <= 1:
            return symmetric_group(fac.degree)
        return _normaliser_transitive(fac, config, ChainTrace())

    wst = dpwp_structure(dec, factor_normaliser, budget=config.budget())
    h = trace.record("dpwp", wst.group)
    rng = random.Random(config.seed)
    for p in _prime_divisors(grel.order(), n):
        try:
            h2 = code_refine(grel, h, wst, p, budget=config.budget(),
                             rng=rng, notes=trace.notes)
        except (DegreeCapError, BudgetExceededError) as exc:
            trace.notes.append("code refinement at p=%d skipped: %s"
                               % (p, exc))
            continue
        if h2.order() < h.order():
            h = trace.record("code:p=%d" % p, h2)
    for orbit in h.orbit_partition():
        if len(orbit) == n:
            continue
        try:
            h2 = refine_by_hom(h, grel, orbit_action(h, orbit),
                               budget=config.budget())
        except BudgetExceededError as exc:
            trace.notes.append("orbit refinement skipped: %s" % exc)
            continue
        if h2.order() < h.order():
            h = trace.record("orbit:%d" % len(orbit), h2)
    homs = _orbit_block_homs(h)
    if homs:
        f = homs[0] if len(homs) == 1 else hom_product(homs)
        try:
            h2 = refine_by_hom(h, grel, f, budget=config.budget())
            if h2.order() < h.order():
                h = trace.record("orbit-blocks", h2)
        except BudgetExceededError as exc:
            trace.notes.append("orbit block refinement skipped: %s" % exc)
    k = 1
    while True:
        parts = h.orbit_partition()
        if k >= len(parts):
            break
        delta = [p for orb in parts[:k] for p in orb]
        try:
            h2 = refine_by_hom(h, grel, orbit_action(h, delta),
                               budget=config.budget())
        except BudgetExceededError as exc:
            trace.notes.append("prefix refinement skipped: %s" % exc)
            h2 = h
        if h2.order() < h.order():
            h = trace.record("prefix:%d" % k, h2)
        k += 1
    res = trace.record("backtrack",
                       normaliser_in(h, grel, budget=config.budget()))
    return dec.undo(res)


def symmetric_normaliser(group, config=None):
    """Normaliser of group in Sym(degree), with the chain trace.

    Returns (normaliser, trace).  The result is checked to contain and
    normalise the input before being returned.
    """
    if config is None:
        config = ChainConfig()
    n = group.degree
    trace = ChainTrace()
    sym = symmetric_group(n)
    trace.record("sym", sym)
    order = group.order()
    full = math.factorial(n)
    if order == 1 or order == full or (n >= 2 and 2 * order == full):
        # the trivial group, Sym itself, and its unique index-2 subgroup
        # are normal in the full symmetric group
        trace.notes.append("order %d at degree %d forces the full "
                           "symmetric group" % (order, n))
        res = sym
    elif group.is_transitive():
        res = _normaliser_transitive(group, config, trace)
    else:
        res = _normaliser_intransitive(group, config, trace)
    if not res.contains_group(group) or not group.is_normal_in(res):
        raise RuntimeError("chain produced a group that does not "
                           "normalise the input")
    trace.final_order = res.order()
    return res, trace
