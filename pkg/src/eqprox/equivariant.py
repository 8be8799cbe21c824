"""Group-aware proximities derived from a uniformity.

The central construction is the bracket entourage

    [V, eps] = {(x, y) : exists v1, v2 in V with (v1 x, v2 y) in eps}

indexed by a chain level V and a basis entourage eps.  Taken over all
levels and entourages the brackets form the derived basis computed by
compute_ug; its induced proximity must coincide, pair for pair, with the
translate-nearness relation computed by nu_proximity.  The two sides are
computed through independent code paths precisely so that this equality is
a meaningful machine check rather than a tautology of shared code.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import setrel
from .errors import CarrierMismatch, InternalCheckFailure, PreconditionFailure
from .gaction import FiniteGroup, GActionGerm, NeighborhoodBase, classify, \
    check_action_continuity, _group_indices
from .proximity import P1_P5, Prox, _intersectors, _submask_table, \
    check_axioms, from_uniformity, is_separated
from .uniformity import UnifBase, totally_bounded, validate_basis


def bracket_entourage(a, group_subset, eps):
    """The entourage [V, eps] of pairs whose V-translates meet eps."""
    if eps.carrier != a.carrier:
        raise CarrierMismatch("entourage is not over the action's carrier")
    ids = _group_indices(a.group, group_subset)
    carrier = a.carrier
    n = carrier.n
    els = carrier.elements
    vx = [a.set_translate_mask(ids, 1 << x) for x in range(n)]
    pairs = []
    for x in range(n):
        hit = eps.image_mask(vx[x])
        for y in range(n):
            if vx[y] & hit:
                pairs.append((els[x], els[y]))
    return setrel.Rel(carrier, pairs)


def compute_ug(a, u):
    """The derived basis of all bracket entourages [V_i, eps_j].

    Requires a valid basis and a quasibounded uniformity; under those
    hypotheses the output must itself pass the basis conditions (the
    square condition is exactly what quasiboundedness buys), so a failure
    there is an internal error, not an input error.
    """
    report = validate_basis(u)
    if not report.ok():
        raise PreconditionFailure(
            f"input basis fails condition {report.failures()[0]}",
            witness=report)
    cls = classify(a, u)
    if not cls.quasibounded:
        raise PreconditionFailure(
            "uniformity is not quasibounded",
            witness=cls.witnesses.get("quasibounded"))
    levels = a.ne.levels
    basis = [bracket_entourage(a, v, eps) for v in levels for eps in u.basis]
    out = UnifBase(u.carrier, basis)
    check = validate_basis(out)
    if not check.ok():
        raise InternalCheckFailure(
            "derived bracket basis fails condition "
            f"{check.failures()[0]}: {check.counterexample(check.failures()[0])}")
    return out


def _level_pullback(a, level_index, mask):
    """V^{-1} m: points whose V-translate meets m."""
    out = 0
    masks = a.level_inverse_elem_masks(level_index)
    while mask:
        low = mask & -mask
        out |= masks[low.bit_length() - 1]
        mask ^= low
    return out


def nu_proximity(a, u):
    """Translate nearness: A and B are near when at every chain level the
    level translates are near in the proximity induced by u.

    All chain levels are evaluated; by monotonicity of translation the
    deepest level alone gives the same table, and that reduction is
    asserted rather than assumed.
    """
    report = validate_basis(u)
    if not report.ok():
        raise PreconditionFailure(
            f"input basis fails condition {report.failures()[0]}",
            witness=report)
    carrier = a.carrier
    n = carrier.n
    N = 1 << n
    full_bits = (1 << N) - 1
    levels = range(len(a.ne.levels))

    def rows_for(level_list):
        rows = [full_bits] * N
        for li in level_list:
            trans = [0] * N
            lem = a.level_elem_masks(li)
            for m in range(1, N):
                low = m & -m
                trans[m] = trans[m ^ low] | lem[low.bit_length() - 1]
            for eps in u.basis:
                for m in range(N):
                    pull = _level_pullback(a, li, eps.image_mask(trans[m]))
                    rows[m] &= _intersectors(pull, n)
        return rows

    rows = rows_for(list(levels))
    reduced = rows_for([len(a.ne.levels) - 1])
    if rows != reduced:
        raise InternalCheckFailure(
            "translate nearness differs between the full chain and the "
            "deepest level; the chain is not descending")
    return Prox(carrier, rows)


def beta_g_proximity(a):
    """The maximal group proximity on a finite discrete carrier:
    A and B are near when their translates overlap at every chain level."""
    carrier = a.carrier
    n = carrier.n
    N = 1 << n
    full_bits = (1 << N) - 1
    rows = [full_bits] * N
    for li in range(len(a.ne.levels)):
        trans = [0] * N
        lem = a.level_elem_masks(li)
        for m in range(1, N):
            low = m & -m
            trans[m] = trans[m ^ low] | lem[low.bit_length() - 1]
        for m in range(N):
            rows[m] &= _intersectors(_level_pullback(a, li, trans[m]), n)
    return Prox(carrier, rows)


def is_g_invariant(p, a):
    """Whether near(A, B) implies near(gA, gB) for every group element."""
    carrier = a.carrier
    n = carrier.n
    N = 1 << n
    rows = p.rows
    for g in range(a.group.order):
        perm = a.act[g]
        maskmap = [0] * N
        for m in range(1, N):
            low = m & -m
            maskmap[m] = maskmap[m ^ low] | (1 << perm[low.bit_length() - 1])
        for am in range(N):
            row = rows[am]
            prow = rows[maskmap[am]]
            bm = row
            while bm:
                low = bm & -bm
                b = low.bit_length() - 1
                if not prow >> maskmap[b] & 1:
                    return False, (a.group.names[g], carrier.mask_subset(am),
                                   carrier.mask_subset(b))
                bm ^= low
    return True, None


def is_action_compatible(p, a):
    """Whether every far pair has disjoint translates at some chain level."""
    carrier = a.carrier
    n = carrier.n
    N = 1 << n
    full_bits = (1 << N) - 1
    table = _submask_table(n)
    fulln = N - 1
    disjoint_or = [0] * N
    for li in range(len(a.ne.levels)):
        trans = [0] * N
        lem = a.level_elem_masks(li)
        for m in range(1, N):
            low = m & -m
            trans[m] = trans[m ^ low] | lem[low.bit_length() - 1]
        for m in range(N):
            pull = _level_pullback(a, li, trans[m])
            disjoint_or[m] |= table[fulln ^ pull]
    for am in range(N):
        viol = ~p.rows[am] & full_bits & ~disjoint_or[am]
        if viol:
            b = (viol & -viol).bit_length() - 1
            return False, (carrier.mask_subset(am), carrier.mask_subset(b))
    return True, None


def semigroup_upgrade(p, a):
    """The strengthened compatibility: every far pair has translates that
    are far (not merely disjoint) at some chain level."""
    carrier = a.carrier
    n = carrier.n
    N = 1 << n
    full_bits = (1 << N) - 1
    rows = p.rows
    level_trans = []
    for li in range(len(a.ne.levels)):
        trans = [0] * N
        lem = a.level_elem_masks(li)
        for m in range(1, N):
            low = m & -m
            trans[m] = trans[m ^ low] | lem[low.bit_length() - 1]
        level_trans.append(trans)
    for am in range(N):
        faror = ~rows[am] & full_bits
        while faror:
            low = faror & -faror
            b = low.bit_length() - 1
            if not any(not rows[trans[am]] >> trans[b] & 1
                       for trans in level_trans):
                return False, (carrier.mask_subset(am), carrier.mask_subset(b))
            faror ^= low
    return True, None


@dataclass(frozen=True)
class GProximityReport:
    """Outcome of verifying the derived-proximity identity on one instance."""

    equal: bool
    mismatch: tuple | None
    nu: Prox
    derived: Prox
    g_invariant: bool
    invariance_witness: tuple | None
    compatible: bool
    compatibility_witness: tuple | None
    separated: bool

    @property
    def ok(self):
        return self.equal and self.g_invariant and self.compatible

    def lines(self):
        out = [
            "translate-nearness equals derived-basis proximity: "
            + ("pass" if self.equal else f"FAIL at {self.mismatch}"),
            "invariance under every translation: "
            + ("pass" if self.g_invariant else f"FAIL at {self.invariance_witness}"),
            "far pairs have disjoint translates at some level: "
            + ("pass" if self.compatible else f"FAIL at {self.compatibility_witness}"),
            f"separated (distinct points far): {'yes' if self.separated else 'no'}",
        ]
        return out


def verify_tgprox(a, u):
    """Verify, over all subset pairs, that the translate-nearness relation
    equals the proximity induced by the derived bracket basis, and that it
    is an invariant, action-compatible proximity.

    The hypotheses (quasibounded and saturated uniformity, continuous
    action) are enforced; violations raise with the classifier's witness.
    """
    cls = classify(a, u)
    if not cls.pi_uniform:
        missing = "quasibounded" if not cls.quasibounded else "saturated"
        raise PreconditionFailure(
            f"uniformity is not {missing}",
            witness=cls.witnesses.get(missing))
    cont, cwit = check_action_continuity(a, u)
    if not cont:
        raise PreconditionFailure("action is not continuous", witness=cwit)

    nu = nu_proximity(a, u)
    derived = from_uniformity(compute_ug(a, u))
    mismatch = None
    if nu.rows != derived.rows:
        for am, (r1, r2) in enumerate(zip(nu.rows, derived.rows)):
            diff = r1 ^ r2
            if diff:
                b = (diff & -diff).bit_length() - 1
                mismatch = (a.carrier.mask_subset(am), a.carrier.mask_subset(b))
                break
    inv, invw = is_g_invariant(nu, a)
    comp, compw = is_action_compatible(nu, a)
    return GProximityReport(
        equal=mismatch is None,
        mismatch=mismatch,
        nu=nu,
        derived=derived,
        g_invariant=inv,
        invariance_witness=invw,
        compatible=comp,
        compatibility_witness=compw,
        separated=is_separated(nu),
    )


@dataclass(frozen=True)
class EquinormalReport:
    equinormal: bool
    axioms: object
    separation_ok: bool
    agree: bool

    def lines(self):
        out = [f"equinormal: {'yes' if self.equinormal else 'NO'}"]
        out.extend(self.axioms.lines())
        out.append("pi-disjoint pairs admit pi-disjoint neighborhoods: "
                   + ("pass" if self.separation_ok else "FAIL"))
        return out


def check_equinormal(a):
    """Equinormality of a finite discrete instance.

    The translate-overlap relation is built and run through the full axiom
    check; the verdict is that P1-P5 hold.  The definition is also checked
    directly: every pair of sets with disjoint translates at some level
    must have neighborhoods with the same property.  On a discrete carrier
    every set is an open neighborhood of itself, so the pair itself is the
    canonical witness; the scan still re-verifies it.
    """
    dpi = beta_g_proximity(a)
    axioms = check_axioms(dpi)
    n = a.carrier.n
    N = 1 << n
    separation_ok = True
    for am in range(N):
        for bm in range(N):
            if not _pi_disjoint(a, am, bm):
                continue
            if _find_pi_disjoint_neighborhoods(a, am, bm) is None:
                separation_ok = False
                break
        if not separation_ok:
            break
    equinormal = axioms.ok(P1_P5)
    return EquinormalReport(
        equinormal=equinormal,
        axioms=axioms,
        separation_ok=separation_ok,
        agree=equinormal == separation_ok,
    )


def _pi_disjoint(a, am, bm):
    for li in range(len(a.ne.levels)):
        if not a.translate_mask(li, am) & a.translate_mask(li, bm):
            return True
    return False


def _find_pi_disjoint_neighborhoods(a, am, bm):
    """Open neighborhoods of the two sets whose translates are disjoint at
    some level.  On a discrete carrier every superset is an open
    neighborhood, and the sets themselves are the smallest candidates."""
    if _pi_disjoint(a, am, bm):
        return am, bm
    return None


def is_massive(a, u):
    """Whether the derived bracket basis is totally bounded.

    Trivially true on a finite carrier; the operation exists so that the
    symbolic models can share the interface, and it still produces the
    cover witnesses via the exact net search.
    """
    ok, _covers = totally_bounded(compute_ug(a, u))
    return ok


def enumerate_partition_proximities(carrier):
    """All proximities on a finite carrier, via set partitions.

    For a relation satisfying P1-P5 on a finite set, nearness of two sets
    is determined by nearness of points (split both sides into singletons
    with P4, then observe that point nearness is transitive thanks to P5).
    So the proximities are exactly: fix a partition, call A and B near when
    their block saturations intersect.  Yields (blocks, prox) pairs.
    """
    els = carrier.elements
    n = carrier.n

    def partitions(items):
        if not items:
            yield []
            return
        head, rest = items[0], items[1:]
        for part in partitions(rest):
            for i in range(len(part)):
                yield part[:i] + [part[i] + [head]] + part[i + 1:]
            yield [[head]] + part

    for part in partitions(list(els)):
        blocks = tuple(sorted((frozenset(b) for b in part),
                              key=lambda b: min(carrier.index[x] for x in b)))
        block_mask = {}
        for b in blocks:
            m = carrier.subset_mask(b)
            block_mask[b] = m
        sat = [0] * (1 << n)
        for a in range(1, 1 << n):
            low = a & -a
            el = els[low.bit_length() - 1]
            blk = next(m for b, m in block_mask.items() if el in b)
            sat[a] = sat[a ^ low] | blk
        rows = [_intersectors(sat[a], n) if a else 0 for a in range(1 << n)]
        yield blocks, Prox(carrier, rows)


def subgroup_germ(a, subgroup):
    """Restrict an action germ to a subgroup, with the subspace chain.

    The chain levels become V_i intersect H; the deepest level stays a
    normal subgroup of H, so the restricted chain is always a valid germ.
    """
    group = a.group
    H = sorted(_group_indices(group, subgroup))
    if group.e not in H:
        raise ValueError("subgroup must contain the identity")
    back = {g: i for i, g in enumerate(H)}
    for g in H:
        for h in H:
            if group.mul[g][h] not in back:
                raise ValueError(
                    f"not a subgroup: {group.names[g]!r} * {group.names[h]!r} "
                    "falls outside")
    names = tuple(group.names[g] for g in H)
    mul = [[back[group.mul[g][h]] for h in H] for g in H]
    sub = FiniteGroup(names, mul)
    levels = [frozenset(back[g] for g in level if g in back)
              for level in a.ne.levels]
    ne = NeighborhoodBase(sub, levels)
    act = [a.act[g] for g in H]
    return GActionGerm(sub, ne, a.carrier, act)


def deepest_orbits_coincide(a, subgroup):
    """Whether the subgroup meets every deepest-level orbit relation.

    Compares, point by point, the orbit of the deepest chain level with
    the orbit of its intersection with the subgroup.  When these coincide
    the translate-overlap proximity cannot tell the two groups apart.
    """
    group = a.group
    H = _group_indices(group, subgroup)
    deep = a.ne.deepest
    inter = deep & H
    n = a.carrier.n
    for x in range(n):
        full = 0
        part = 0
        for v in deep:
            full |= 1 << a.act[v][x]
        for v in inter:
            part |= 1 << a.act[v][x]
        if full != part:
            return False
    return True


def betag_on_subgroup_agrees(a, subgroup):
    """Compare the maximal group proximity with the one computed after
    restricting to a subgroup carrying the subspace germ."""
    full = beta_g_proximity(a)
    restricted = beta_g_proximity(subgroup_germ(a, subgroup))
    return full.rows == restricted.rows, full, restricted
