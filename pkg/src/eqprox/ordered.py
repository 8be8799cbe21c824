"""Ordered proximities on a finite chain.

A proximity on a linearly ordered set corresponds to an ordered
compactification when two extra conditions hold: opposite closed rays at
distinct points are far (op1), and every far pair is separated by finitely
many open convex sets (op2).  On a finite chain the interval topology is
discrete, so "open" imposes nothing here and op2 is searched through the
convex components of the complement; the non-degenerate use of the same
conditions lives in the symbolic rationals model.
"""

from __future__ import annotations

from dataclasses import dataclass


class OrderedCarrier:
    """A carrier together with a strict total order (given as the element
    list in increasing order)."""

    __slots__ = ("carrier", "order", "rank")

    def __init__(self, carrier, order):
        order = tuple(order)
        if sorted(order, key=repr) != sorted(carrier.elements, key=repr) \
                or len(order) != carrier.n:
            raise ValueError("order must list every carrier element exactly once")
        self.carrier = carrier
        self.order = order
        self.rank = {e: i for i, e in enumerate(order)}

    def down_ray(self, x):
        """(-inf, x] in the order."""
        r = self.rank[x]
        return frozenset(self.order[: r + 1])

    def up_ray(self, y):
        """[y, +inf) in the order."""
        r = self.rank[y]
        return frozenset(self.order[r:])

    def __repr__(self):
        return f"OrderedCarrier({list(self.order)!r})"


def is_convex(oc, subset):
    """Whether the set contains every element between two of its members."""
    ranks = sorted(oc.rank[e] for e in subset)
    if not ranks:
        return True
    return ranks[-1] - ranks[0] + 1 == len(ranks)


def convex_components(oc, subset):
    """Maximal convex pieces of a set, in increasing order."""
    ranks = sorted(oc.rank[e] for e in subset)
    comps = []
    cur = []
    for r in ranks:
        if cur and r != cur[-1] + 1:
            comps.append(cur)
            cur = []
        cur.append(r)
    if cur:
        comps.append(cur)
    return tuple(frozenset(oc.order[r] for r in comp) for comp in comps)


@dataclass(frozen=True)
class OrderedProximityReport:
    ordered: bool
    ray_condition: bool
    ray_witness: tuple | None
    cover_condition: bool
    cover_witness: tuple | None

    def lines(self):
        return [
            "opposite rays are far (op1): "
            + ("pass" if self.ray_condition else f"FAIL at {self.ray_witness}"),
            "far pairs separated by convex cover (op2): "
            + ("pass" if self.cover_condition else f"FAIL at {self.cover_witness}"),
        ]


def check_ordered_proximity(oc, p):
    """Check both ordered-proximity conditions for a proximity on a chain.

    op2 is decided by covering A with the convex components of the
    complement of B; components are the maximal convex subsets of X \\ B,
    so if any finite convex cover separates the pair, this one does.
    """
    carrier = oc.carrier
    ray_condition, ray_witness = True, None
    for i, x in enumerate(oc.order):
        for y in oc.order[i + 1:]:
            if p.near(oc.down_ray(x), oc.up_ray(y)):
                ray_condition, ray_witness = False, (x, y)
                break
        if not ray_condition:
            break

    cover_condition, cover_witness = True, None
    all_elems = frozenset(carrier.elements)
    n = carrier.n
    for am in range(1 << n):
        for bm in range(1 << n):
            if p.near_masks(am, bm):
                continue
            A = carrier.mask_subset(am)
            B = carrier.mask_subset(bm)
            comps = convex_components(oc, all_elems - B)
            covered = frozenset().union(*comps) if comps else frozenset()
            if not A <= covered:
                cover_condition, cover_witness = False, (A, B)
                break
        if not cover_condition:
            break

    return OrderedProximityReport(
        ordered=ray_condition and cover_condition,
        ray_condition=ray_condition,
        ray_witness=ray_witness,
        cover_condition=cover_condition,
        cover_witness=cover_witness,
    )
