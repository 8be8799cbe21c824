"""Finite metric and pseudometric spaces under a group action.

Distances are exact rationals, so entourage thresholds can enumerate the
finitely many matrix values instead of juggling tolerances.  The basis of
a (pseudo)metric uniformity consists of the sublevel relations d <= r at
each distinct positive value r, together with the kernel relation d = 0
(the diagonal, for a genuine metric).

For a family of pseudometrics the same sublevel construction applies per
member; the family kernel (simultaneous vanishing) is added so that the
list is a filterbase and not merely a subbase.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import setrel
from .errors import CarrierMismatch, InternalCheckFailure, PreconditionFailure
from .gaction import classify, _group_indices
from .proximity import Prox, _intersectors
from .uniformity import UnifBase, refines


def _validate_pseudometric(carrier, dist):
    n = carrier.n
    if len(dist) != n or any(len(row) != n for row in dist):
        raise ValueError("distance matrix must be n x n")
    for i in range(n):
        if dist[i][i] != 0:
            raise ValueError(f"nonzero self-distance at {carrier.elements[i]!r}")
        for j in range(n):
            if dist[i][j] < 0:
                raise ValueError("negative distance")
            if dist[i][j] != dist[j][i]:
                raise ValueError(
                    f"asymmetric distance at ({carrier.elements[i]!r}, "
                    f"{carrier.elements[j]!r})")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if dist[i][k] > dist[i][j] + dist[j][k]:
                    raise ValueError(
                        "triangle inequality fails at "
                        f"({carrier.elements[i]!r}, {carrier.elements[j]!r}, "
                        f"{carrier.elements[k]!r})")


class FiniteMetric:
    """An exact rational metric on a carrier (pseudometric with pseudo=True)."""

    __slots__ = ("carrier", "dist", "pseudo")

    def __init__(self, carrier, dist, pseudo=False):
        dist = tuple(tuple(Fraction(v) for v in row) for row in dist)
        _validate_pseudometric(carrier, dist)
        if not pseudo:
            n = carrier.n
            for i in range(n):
                for j in range(n):
                    if i != j and dist[i][j] == 0:
                        raise ValueError(
                            "zero distance between distinct points "
                            f"({carrier.elements[i]!r}, {carrier.elements[j]!r})")
        self.carrier = carrier
        self.dist = dist
        self.pseudo = pseudo

    def d(self, x, y):
        idx = self.carrier.index
        return self.dist[idx[x]][idx[y]]

    def set_distance(self, a, b):
        """min distance over the product; None when either set is empty."""
        idx = self.carrier.index
        ai = [idx[x] for x in a]
        bi = [idx[y] for y in b]
        if not ai or not bi:
            return None
        return min(self.dist[i][j] for i in ai for j in bi)

    def positive_values(self):
        vals = {v for row in self.dist for v in row if v > 0}
        return tuple(sorted(vals))

    def __repr__(self):
        return f"FiniteMetric(n={self.carrier.n}, pseudo={self.pseudo})"


class PseudometricFamily:
    """Finitely many bounded pseudometrics on a shared carrier."""

    __slots__ = ("carrier", "members", "bound")

    def __init__(self, carrier, members, bound=None):
        members = tuple(
            m if isinstance(m, FiniteMetric) else FiniteMetric(carrier, m, pseudo=True)
            for m in members)
        if not members:
            raise ValueError("family must be nonempty")
        for m in members:
            if m.carrier != carrier:
                raise CarrierMismatch("family members live on different carriers")
        top = max((v for m in members for row in m.dist for v in row),
                  default=Fraction(0))
        if bound is None:
            bound = top
        bound = Fraction(bound)
        if top > bound:
            raise ValueError("a member exceeds the stated bound")
        self.carrier = carrier
        self.members = members
        self.bound = bound


def _sublevel(carrier, dist, r):
    els = carrier.elements
    n = carrier.n
    return setrel.Rel(carrier, ((els[i], els[j]) for i in range(n)
                                for j in range(n) if dist[i][j] <= r))


def metric_uniformity(m):
    """Sublevel basis of a finite (pseudo)metric.

    One entourage {d <= r} per distinct positive value r, plus the kernel
    {d = 0} (which is the diagonal when d is a metric, playing the
    below-minimum threshold level).
    """
    carrier = m.carrier
    basis = [_sublevel(carrier, m.dist, Fraction(0))]
    for r in m.positive_values():
        basis.append(_sublevel(carrier, m.dist, r))
    return UnifBase(carrier, basis)


def sup_pseudometric(fam, a, group_subset, member_index):
    """Worst-case distance over a set of group elements:
    d'(x, y) = max over g in the set of d(g x, g y).

    Always a pseudometric again (the triangle inequality survives a
    pointwise max over a shared translate), which is re-checked as a trap.
    """
    ids = sorted(_group_indices(a.group, group_subset))
    if not ids:
        raise PreconditionFailure("group subset must be nonempty")
    m = fam.members[member_index]
    if a.carrier != fam.carrier:
        raise CarrierMismatch("action and family carriers differ")
    n = a.carrier.n
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            out[i][j] = max(m.dist[a.act[g][i]][a.act[g][j]] for g in ids)
    try:
        return FiniteMetric(a.carrier, out, pseudo=True)
    except ValueError as exc:
        raise InternalCheckFailure(
            f"sup over translates destroyed the pseudometric axioms: {exc}")


def _family_kernel(carrier, metrics):
    els = carrier.elements
    n = carrier.n
    return setrel.Rel(
        carrier,
        ((els[i], els[j]) for i in range(n) for j in range(n)
         if all(m.dist[i][j] == 0 for m in metrics)))


def family_uniformity(fam):
    """Sublevel basis of a pseudometric family, with the family kernel."""
    carrier = fam.carrier
    basis = [_family_kernel(carrier, fam.members)]
    for m in fam.members:
        for r in (Fraction(0),) + m.positive_values():
            basis.append(_sublevel(carrier, m.dist, r))
    return UnifBase(carrier, basis)


def xi_uniformity(fam, a, subsets_of_group):
    """The uniformity of all worst-case pseudometrics d_{A,i} over the
    given group subsets A and family members i."""
    if not subsets_of_group:
        raise PreconditionFailure("need at least one group subset")
    sups = []
    for s in subsets_of_group:
        for i in range(len(fam.members)):
            sups.append(sup_pseudometric(fam, a, s, i))
    return family_uniformity(PseudometricFamily(fam.carrier, sups))


@dataclass(frozen=True)
class XiReport:
    """Per-conclusion outcomes for the worst-case-uniformity construction.

    Each entry is "pass", "fail" or "n/a" (hypothesis does not hold on the
    instance)."""

    topology_match: str
    quasibounded: str
    refinement: str

    def ok(self):
        return "fail" not in (self.topology_match, self.quasibounded,
                              self.refinement)

    def lines(self):
        return [
            f"equicontinuous subsets preserve the topology: {self.topology_match}",
            f"absorbed subsets give quasiboundedness: {self.quasibounded}",
            f"a subset containing e makes xi finer: {self.refinement}",
        ]


def xi_report(fam, a, subsets_of_group):
    """Instance-check the three expected properties of the construction.

    (1) if every subset acts equicontinuously, the derived uniformity
        induces the same topology;
    (2) if every subset A has a chain level V and a family subset B with
        A.V inside B, the derived uniformity is quasibounded;
    (3) if some subset contains the identity, the derived uniformity
        refines the base one.
    """
    from .uniformity import induced_topology

    base = family_uniformity(fam)
    xi = xi_uniformity(fam, a, subsets_of_group)
    ids = [sorted(_group_indices(a.group, s)) for s in subsets_of_group]

    hyp1 = all(_acts_equicontinuously(a, base, s) for s in ids)
    concl1 = "n/a"
    if hyp1:
        concl1 = ("pass" if set(induced_topology(xi)) == set(induced_topology(base))
                  else "fail")

    group = a.group
    hyp2 = True
    for s in ids:
        sset = frozenset(s)
        found = False
        for level in a.ne.levels:
            av = group.product_set(sset, level)
            if any(av <= frozenset(t) for t in ids):
                found = True
                break
        if not found:
            hyp2 = False
            break
    concl2 = "n/a"
    if hyp2:
        concl2 = "pass" if classify(a, xi).quasibounded else "fail"

    hyp3 = any(group.e in s for s in ids)
    concl3 = "n/a"
    if hyp3:
        concl3 = "pass" if refines(xi, base) else "fail"

    return XiReport(concl1, concl2, concl3)


def _acts_equicontinuously(a, u, subset_ids):
    """Equicontinuity of a fixed set of group elements, at basis level."""
    n = a.carrier.n
    for x0 in range(n):
        for eps in u.basis:
            imgs = eps.image_masks
            good = False
            for delta in u.basis:
                nbhd = delta.image_masks[x0]
                ok = True
                for g in subset_ids:
                    p = a.act[g]
                    m = nbhd
                    while m and ok:
                        low = m & -m
                        if not imgs[p[x0]] >> p[low.bit_length() - 1] & 1:
                            ok = False
                        m ^= low
                    if not ok:
                        break
                if ok:
                    good = True
                    break
            if not good:
                return False
    return True


def is_isometric(m, a):
    """Whether every group element acts by distance-preserving maps."""
    n = m.carrier.n
    for g in range(a.group.order):
        p = a.act[g]
        for i in range(n):
            for j in range(n):
                if m.dist[p[i]][p[j]] != m.dist[i][j]:
                    return False
    return True


def metric_g_proximity(m, a):
    """A and B are near when no chain level pushes their translates a
    positive distance apart: near(A, B) iff d(VA, VB) = 0 for every level V.

    Requires the sublevel uniformity to be quasibounded and saturated; the
    classifier witness is surfaced otherwise.
    """
    u = metric_uniformity(m)
    cls = classify(a, u)
    if not cls.pi_uniform:
        missing = "quasibounded" if not cls.quasibounded else "saturated"
        raise PreconditionFailure(
            f"metric uniformity is not {missing}",
            witness=cls.witnesses.get(missing))
    carrier = m.carrier
    n = carrier.n
    N = 1 << n
    full_bits = (1 << N) - 1
    rows = [full_bits] * N
    # Zero-distance hull per point; for a genuine metric this is the point
    # itself, for a pseudometric its kernel class.
    zero_of = [0] * n
    for i in range(n):
        for j in range(n):
            if m.dist[i][j] == 0:
                zero_of[i] |= 1 << j
    for li in range(len(a.ne.levels)):
        trans = [0] * N
        lem = a.level_elem_masks(li)
        for mask in range(1, N):
            low = mask & -mask
            trans[mask] = trans[mask ^ low] | lem[low.bit_length() - 1]
        ilem = a.level_inverse_elem_masks(li)
        for mask in range(N):
            hull = 0
            mm = trans[mask]
            while mm:
                low = mm & -mm
                hull |= zero_of[low.bit_length() - 1]
                mm ^= low
            # B is near A at this level iff VB meets the zero hull of VA,
            # i.e. B meets its pullback through the level.
            pull = 0
            while hull:
                low = hull & -hull
                pull |= ilem[low.bit_length() - 1]
                hull ^= low
            rows[mask] &= _intersectors(pull, n)
    return Prox(carrier, rows)
