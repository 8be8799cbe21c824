"""Verification families and the invariant suite.

The suite generates a deterministic family of finite instances (group,
action, identity-neighborhood chain, entourage basis), runs every
structural identity of the library against its independent oracle, and
reports one line per invariant with pass counts and the first
counterexample on failure.  Identical parameters and seed produce
byte-identical reports.

Where a family is astronomically large as literally quantified (all
reflexive entourages over five points, all towers over a grid), the suite
exhausts the small strata and samples the rest with the given seed; the
stratum sizes below were chosen to keep the default run in the tens of
seconds.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import rationals as rat
from .equivariant import beta_g_proximity, check_equinormal, compute_ug, \
    deepest_orbits_coincide, enumerate_partition_proximities, \
    is_action_compatible, is_g_invariant, nu_proximity, semigroup_upgrade
from .gaction import FiniteGroup, GActionGerm, NeighborhoodBase, \
    check_action_continuity, classify, saturate_uniformity
from .metricprox import FiniteMetric, PseudometricFamily, is_isometric, \
    metric_g_proximity, metric_uniformity, xi_report, \
    sup_pseudometric
from .proximity import P1_P5, Prox, check_axioms, dominates, from_uniformity
from .setrel import Carrier, Rel, diagonal, full_relation
from .uniformity import UnifBase, discrete_basis, is_hausdorff, \
    refinement_equivalent, validate_basis


# ---------------------------------------------------------------------------
# Group and action families


def suite_groups(max_group=6):
    """The standard small groups, with their generator indices."""
    out = []
    for m in (2, 3, 4):
        if m <= max_group:
            g = FiniteGroup.cyclic(m)
            out.append((f"Z{m}", g, (1,)))
    if 6 <= max_group:
        s3, perms = FiniteGroup.from_permutations([(1, 0, 2), (1, 2, 0)])
        gi = (perms.index((1, 0, 2)), perms.index((1, 2, 0)))
        out.append(("S3", s3, gi))
    return out


def _cycle(n, points):
    p = list(range(n))
    for a, b in zip(points, points[1:]):
        p[a] = b
    if points:
        p[points[-1]] = points[0]
    return tuple(p)


def _compose_perms(p, q):
    return tuple(p[q[i]] for i in range(len(p)))


def action_from_generator_images(group, gen_indices, images, n):
    """Extend generator images to the whole group by breadth-first words.

    If the images violate a group relation the resulting table fails the
    action law and GActionGerm construction raises; callers treat that as
    "not an action" and skip the candidate.
    """
    act = {group.e: tuple(range(n))}
    frontier = [group.e]
    img = dict(zip(gen_indices, (tuple(p) for p in images)))
    while frontier:
        nxt = []
        for h in frontier:
            for gi in gen_indices:
                gh = group.mul[gi][h]
                if gh not in act:
                    act[gh] = _compose_perms(img[gi], act[h])
                    nxt.append(gh)
        frontier = nxt
    if len(act) != group.order:
        raise ValueError("the listed generators do not generate the group")
    return tuple(act[i] for i in range(group.order))


def curated_actions(gname, group, gen_indices, n):
    """A deterministic list of actions (as per-element permutations) of one
    of the standard groups on an n-point carrier."""
    ident = tuple(range(n))
    candidates = []
    if gname in ("Z2", "Z3", "Z4"):
        m = group.order
        images = [ident]
        for k in range(2, n + 1):
            if m % k == 0:
                images.append(_cycle(n, tuple(range(k))))
        if n >= 4 and m % 2 == 0:
            images.append(_compose_perms(_cycle(n, (0, 1)), _cycle(n, (2, 3))))
        if n >= 5 and m == 4:
            images.append(_compose_perms(_cycle(n, (0, 1, 2, 3)), ident))
        candidates = [(im,) for im in images]
    else:  # S3, generators (transposition, 3-cycle)
        candidates = [(ident, ident)]
        if n >= 2:
            candidates.append((_cycle(n, (0, 1)), ident))  # sign character
        if n >= 3:
            candidates.append((_cycle(n, (0, 1)), _cycle(n, (0, 1, 2))))
        if n >= 5:
            candidates.append((
                _compose_perms(_cycle(n, (0, 1)), _cycle(n, (3, 4))),
                _cycle(n, (0, 1, 2))))
    out = []
    seen = set()
    for images in candidates:
        try:
            act = action_from_generator_images(group, gen_indices, images, n)
        except ValueError:
            continue
        if act not in seen:
            seen.add(act)
            out.append(act)
    return out


def germ_chains(group):
    """All valid 1- and 2-level chains built from subgroups: the deepest
    level must be normal, the upper level any subgroup containing it."""
    subs = group.subgroups()
    normals = [h for h in subs if group.is_normal(h)]
    chains = [(h,) for h in normals]
    for h2 in normals:
        for h1 in subs:
            if h2 < h1:
                chains.append((h1, h2))
    return chains


# ---------------------------------------------------------------------------
# Entourage basis pools


def _partitions(items):
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in _partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [head]] + part[i + 1:]
        yield [[head]] + part


def equivalence_rel(carrier, blocks):
    pairs = []
    for block in blocks:
        for x in block:
            for y in block:
                pairs.append((x, y))
    return Rel(carrier, pairs)


def _all_equivalences(carrier):
    out = []
    for part in _partitions(list(carrier.elements)):
        out.append(equivalence_rel(carrier, part))
    out.sort(key=lambda r: (len(r.pairs), sorted(map(r._pair_key, r.pairs))))
    return out


def _random_partition(carrier, rng):
    blocks = []
    for e in carrier.elements:
        if blocks and rng.random() < 0.6:
            rng.choice(blocks).append(e)
        else:
            blocks.append([e])
    return equivalence_rel(carrier, blocks)


def _random_reflexive_superset(carrier, base, rng, p=0.35):
    els = carrier.elements
    pairs = set(base.pairs)
    for x in els:
        for y in els:
            if x != y and (x, y) not in pairs and rng.random() < p:
                pairs.add((x, y))
    return Rel(carrier, pairs)


def basis_pool(carrier, rng):
    """Valid bases over a carrier: singleton equivalences (these are exactly
    the one-entourage bases) and pairs {theta, eps} with theta an
    equivalence inside a reflexive eps.  Exhaustive for n <= 3 equivalences,
    seeded samples beyond."""
    n = carrier.n
    pool = []
    seen = set()

    def add(basis):
        key = tuple(sorted((frozenset(r.pairs) for r in basis), key=sorted))
        if key not in seen:
            seen.add(key)
            pool.append(UnifBase(carrier, basis))

    eqs = _all_equivalences(carrier)
    if n >= 4:
        keep = [eqs[0], eqs[-1]]  # diagonal and full relation
        want = 6 if n == 4 else 4
        while len(keep) < min(want, len(eqs)):
            cand = _random_partition(carrier, rng)
            if all(cand.pairs != k.pairs for k in keep):
                keep.append(cand)
        eqs = keep
    for theta in eqs:
        add([theta])
    add([diagonal(carrier), full_relation(carrier)])
    per_theta = {1: 0, 2: 3, 3: 4, 4: 3, 5: 2}.get(n, 2)
    for theta in eqs:
        for _ in range(per_theta):
            eps = _random_reflexive_superset(carrier, theta, rng)
            if eps.pairs != theta.pairs:
                add([theta, eps])
    return pool


# ---------------------------------------------------------------------------
# Suite plumbing


@dataclass
class InvariantResult:
    name: str
    checked: int = 0
    passed: int = 0
    failure: tuple | None = None  # (label, detail), first one only

    def record(self, ok, label, detail=None):
        self.checked += 1
        if ok:
            self.passed += 1
        elif self.failure is None:
            self.failure = (label, detail)

    @property
    def ok(self):
        return self.checked == self.passed

    def line(self):
        if self.ok:
            return f"{self.name}: {self.checked} checks, all pass"
        label, detail = self.failure
        extra = f" [{detail}]" if detail is not None else ""
        return (f"{self.name}: {self.passed}/{self.checked} pass; "
                f"first counterexample: {label}{extra}")


INVARIANTS = ("tgprox", "betag", "ugclaims", "gprox", "semigr", "maximality",
              "equinormal", "densesub", "axioms", "rationals", "ordcomp",
              "metric", "sigma")


@dataclass
class SuiteReport:
    seed: int
    max_n: int
    max_group: int
    results: list = field(default_factory=list)

    @property
    def ok(self):
        return all(r.ok for r in self.results)

    def lines(self):
        out = [f"suite: seed={self.seed} max_n={self.max_n} "
               f"max_group={self.max_group}"]
        out.extend(r.line() for r in self.results)
        out.append("RESULT: " + ("all invariants hold" if self.ok
                                 else "INVARIANT VIOLATED"))
        return out

    def to_json(self):
        return {
            "schema": 1,
            "seed": self.seed,
            "max_n": self.max_n,
            "max_group": self.max_group,
            "ok": self.ok,
            "invariants": [
                {
                    "name": r.name,
                    "checked": r.checked,
                    "passed": r.passed,
                    "first_counterexample": (
                        None if r.failure is None
                        else {"instance": r.failure[0],
                              "detail": repr(r.failure[1])}),
                }
                for r in self.results
            ],
        }


def iter_family(max_n=5, seed=0, max_group=6):
    """The main instance family: every standard group, curated actions on
    carriers up to max_n, all subgroup chains, pooled bases and their
    saturations.  Yields (label, germ, basis)."""
    rng = random.Random(seed)
    pools = {n: basis_pool(Carrier(range(n)), rng) for n in range(1, max_n + 1)}
    for gname, group, gens in suite_groups(max_group):
        chains = germ_chains(group)
        for n in range(1, max_n + 1):
            carrier = Carrier(range(n))
            actions = curated_actions(gname, group, gens, n)
            for ai, act in enumerate(actions):
                for ci, levels in enumerate(chains):
                    germ = GActionGerm(group, NeighborhoodBase(group, levels),
                                       carrier, act)
                    seen = set()
                    for bi, u in enumerate(pools[n]):
                        label = f"{gname}/n{n}/act{ai}/chain{ci}/basis{bi}"
                        key = tuple(frozenset(r.pairs) for r in u.basis)
                        if key not in seen:
                            seen.add(key)
                            yield label, germ, u
                        sat = saturate_uniformity(germ, u)
                        skey = tuple(frozenset(r.pairs) for r in sat.basis)
                        if skey not in seen:
                            seen.add(skey)
                            yield label + "s", germ, sat


def _corrupt_basis(u):
    """Drop the lexicographically least diagonal pair from the first
    entourage: a deterministic defect that any sound comparison catches at
    the least nonempty subset pair."""
    first = u.basis[0]
    victim = min(((x, y) for x, y in first.pairs if x == y),
                 key=first._pair_key)
    basis = [Rel(u.carrier, first.pairs - {victim})] + list(u.basis[1:])
    return UnifBase(u.carrier, basis)


def _corrupt_prox(p):
    rows = list(p.rows)
    rows[1] ^= 1 << 1
    return Prox(p.carrier, rows, normalize=False)


def run_suite(max_n=5, seed=0, max_group=6, filters=None, inject=None):
    """Run every invariant family and aggregate the report.

    `filters` restricts to a subset of invariant names; `inject` plants a
    deterministic defect ("bracket", "nu" or "betag") to prove the suite
    catches corruption.
    """
    if max_n > 12:
        from .errors import ResourceCap
        raise ResourceCap("the family carrier cap is 12")
    if filters:
        unknown = set(filters) - set(INVARIANTS)
        if unknown:
            raise ValueError(f"unknown invariant filter: {sorted(unknown)[0]!r}")
    want = {name: (not filters or name in filters) for name in INVARIANTS}
    res = {name: InvariantResult(name) for name in INVARIANTS}

    main_needed = any(want[k] for k in (
        "tgprox", "betag", "ugclaims", "gprox", "semigr", "maximality",
        "equinormal", "densesub"))
    if main_needed:
        _run_main_family(res, want, max_n, seed, max_group, inject)
    if want["axioms"]:
        _run_axiom_family(res["axioms"], max_n, seed)
    if want["rationals"]:
        _run_rationals_family(res["rationals"], seed)
    if want["ordcomp"]:
        _run_ordcomp_family(res["ordcomp"], seed)
    if want["metric"]:
        _run_metric_family(res["metric"], max_group)
    if want["sigma"]:
        _run_sigma_family(res["sigma"], seed, max_group)

    report = SuiteReport(seed=seed, max_n=max_n, max_group=max_group)
    report.results = [res[name] for name in INVARIANTS if want[name]]
    return report


def _run_main_family(res, want, max_n, seed, max_group, inject):
    germ_candidates = {}
    done_germs = set()
    for label, germ, u in iter_family(max_n, seed, max_group):
        if not validate_basis(u).ok():
            continue
        cls = classify(germ, u)
        continuous, _ = check_action_continuity(germ, u)
        if want["gprox"]:
            # Composite-verdict inclusion: equiuniform is the stronger notion.
            res["gprox"].record(not cls.equiuniform or cls.pi_uniform,
                                label + "/inclusion", None)

        germ_key = (id(germ.group), germ.ne.levels, germ.carrier.n, germ.act)
        if germ_key not in done_germs:
            done_germs.add(germ_key)
            _per_germ_checks(res, want, label, germ, inject)
            if want["maximality"] and germ.carrier.n <= 4:
                germ_candidates[germ_key] = _g_proximity_candidates(germ)

        if not (cls.pi_uniform and continuous):
            continue

        nu = nu_proximity(germ, u)
        ug = compute_ug(germ, u)
        checked_ug = _corrupt_basis(ug) if inject == "bracket" else ug
        derived = from_uniformity(checked_ug)
        if inject == "nu":
            nu = _corrupt_prox(nu)

        if want["tgprox"]:
            mismatch = _first_mismatch(nu, derived)
            res["tgprox"].record(mismatch is None, label, mismatch)
        if want["ugclaims"]:
            vb = validate_basis(checked_ug)
            ug_cls = classify(germ, checked_ug)
            ok = vb.ok() and ug_cls.bounded
            detail = None
            if not vb.ok():
                detail = f"basis {vb.failures()[0]}"
            elif not ug_cls.bounded:
                detail = "derived basis not bounded"
            if ok and cls.saturated and not ug_cls.saturated:
                ok, detail = False, "saturation not preserved"
            if ok and not refinement_equivalent(u, checked_ug):
                ok, detail = False, "not refinement-equivalent under pi-uniformity"
            res["ugclaims"].record(ok, label, detail)
        if want["gprox"]:
            inv, invw = is_g_invariant(nu, germ)
            comp, compw = is_action_compatible(nu, germ)
            res["gprox"].record(inv and comp, label, invw or compw)
            if cls.equiuniform:
                du = from_uniformity(u)
                inv2, w2 = is_g_invariant(du, germ)
                comp2, w22 = is_action_compatible(du, germ)
                res["gprox"].record(inv2 and comp2, label + "/base", w2 or w22)
        if want["semigr"]:
            ok, wit = semigroup_upgrade(nu, germ)
            res["semigr"].record(ok, label, wit)
        if want["maximality"] and germ.carrier.n <= 4:
            delta_u = from_uniformity(u)
            for ri, rho in enumerate(germ_candidates[germ_key]):
                if dominates(delta_u, rho):
                    res["maximality"].record(
                        dominates(nu, rho), f"{label}/cand{ri}", None)


def _g_proximity_candidates(germ):
    """Every proximity on the carrier that is invariant and compatible with
    this germ; finite proximities are exactly the partition ones, so the
    enumeration is complete."""
    out = []
    for _blocks, rho in enumerate_partition_proximities(germ.carrier):
        if is_g_invariant(rho, germ)[0] and is_action_compatible(rho, germ)[0]:
            out.append(rho)
    return out


def _per_germ_checks(res, want, label, germ, inject):
    bg = beta_g_proximity(germ)
    if inject == "betag":
        bg = _corrupt_prox(bg)
    if want["betag"]:
        nu_d = nu_proximity(germ, discrete_basis(germ.carrier))
        mismatch = _first_mismatch(bg, nu_d)
        res["betag"].record(mismatch is None, label, mismatch)
    if want["semigr"]:
        ok, wit = semigroup_upgrade(bg, germ)
        res["semigr"].record(ok, label + "/betag", wit)
    if want["equinormal"]:
        rep = check_equinormal(germ)
        res["equinormal"].record(rep.equinormal and rep.agree, label, None)
    if want["densesub"]:
        group = germ.group
        deep = germ.ne.deepest
        for h in group.subgroups():
            if group.product_set(h, deep) != frozenset(range(group.order)):
                continue
            if not deepest_orbits_coincide(germ, h):
                continue
            agree, _full, _restr = _betag_subgroup(germ, h)
            res["densesub"].record(
                agree, f"{label}/H={sorted(group.names[i] for i in h)}", None)


def _betag_subgroup(germ, h):
    from .equivariant import betag_on_subgroup_agrees
    return betag_on_subgroup_agrees(germ, sorted(h))


def _first_mismatch(p1, p2):
    if p1.rows == p2.rows:
        return None
    for am, (r1, r2) in enumerate(zip(p1.rows, p2.rows)):
        diff = r1 ^ r2
        if diff:
            b = (diff & -diff).bit_length() - 1
            return (p1.carrier.mask_subset(am), p1.carrier.mask_subset(b))
    return None


# ---------------------------------------------------------------------------
# Axiom family


def _graph_proximity(carrier, rng):
    """near(A, B) iff some edge of a random reflexive symmetric point graph
    joins them.  Satisfies P1-P4 by construction; P5 holds exactly when the
    graph is transitive, which random graphs routinely violate, so these
    exercise the P5/P5' agreement in both directions."""
    n = carrier.n
    els = carrier.elements
    adj = [1 << i for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.4:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    del els

    def hull(mask):
        out = 0
        while mask:
            low = mask & -mask
            out |= adj[low.bit_length() - 1]
            mask ^= low
        return out

    from .proximity import _intersectors
    rows = [_intersectors(hull(a), n) if a else 0 for a in range(1 << n)]
    return Prox(carrier, rows)


def _random_valid_basis(carrier, rng):
    theta = _random_partition(carrier, rng)
    if rng.random() < 0.5:
        return UnifBase(carrier, [theta])
    eps = _random_reflexive_superset(carrier, theta, rng, p=0.25)
    return UnifBase(carrier, [theta, eps])


def _run_axiom_family(result, max_n, seed):
    rng = random.Random(seed + 1)
    # Exhaustive tier: every pooled valid basis on small carriers.
    for n in range(1, min(max_n, 5) + 1):
        carrier = Carrier(range(n))
        for bi, u in enumerate(basis_pool(carrier, rng)):
            label = f"axioms/n{n}/basis{bi}"
            _axiom_checks(result, label, u)
    # Random tier: seeded instances on carriers 6..8.
    per_size = (334, 333, 333)
    for k, n in enumerate((6, 7, 8)):
        carrier = Carrier(range(n))
        for t in range(per_size[k]):
            u = _random_valid_basis(carrier, rng)
            _axiom_checks(result, f"axioms/n{n}/rand{t}", u)
    # P5/P5' agreement on relations that may genuinely fail both.
    for n in (3, 4, 5):
        carrier = Carrier(range(n))
        for t in range(40):
            p = _graph_proximity(carrier, rng)
            rep = check_axioms(p)
            label = f"axioms/graph/n{n}/{t}"
            if rep.ok(("P1", "P2", "P3", "P4")):
                result.record(rep.passed("P5") == rep.passed("P5prime"),
                              label, "P5/P5' disagree")


def _axiom_checks(result, label, u):
    p = from_uniformity(u)
    rep = check_axioms(p)
    detail = None
    ok = rep.ok(P1_P5)
    if not ok:
        detail = f"{rep.failures()[0]} fails"
    if ok and rep.passed("P6") != is_hausdorff(u):
        ok, detail = False, "P6 does not match the diagonal criterion"
    if ok and rep.passed("P5") != rep.passed("P5prime"):
        ok, detail = False, "P5/P5' disagree"
    result.record(ok, label, detail)


# ---------------------------------------------------------------------------
# Rationals family


def _random_fraction(rng, denominators=(1, 2), span=2):
    den = rng.choice(denominators)
    num = rng.randint(-span * den, span * den)
    return Fraction(num, den)


def _random_chain(rng, max_len=4):
    vals = {_random_fraction(rng) for _ in range(rng.randint(0, max_len))}
    return rat.Chain(tuple(sorted(vals)))


def _random_ratset(rng, max_atoms=3):
    atoms = []
    for _ in range(rng.randint(0, max_atoms)):
        if rng.random() < 0.4:
            atoms.append(("pt", _random_fraction(rng)))
        else:
            a, b = _random_fraction(rng), _random_fraction(rng)
            if a == b:
                b = a + 1
            lo, hi = min(a, b), max(a, b)
            if rng.random() < 0.15:
                lo = rat.NEG_INF
            if rng.random() < 0.15:
                hi = rat.POS_INF
            atoms.append(("iv", lo, hi))
    return rat.RatSet(atoms)


def _run_rationals_family(result, seed):
    rng = random.Random(seed + 2)

    # Cell-count law, exhaustive in chain length.
    for m in range(11):
        chain = rat.Chain(tuple(Fraction(k) for k in range(m)))
        result.record(len(rat.orbit_space(chain).cells) == 2 * m + 1,
                      f"rat/cells/{m}", None)
    for t in range(50):
        chain = _random_chain(rng, max_len=10)
        result.record(
            len(rat.orbit_space(chain).cells) == 2 * len(chain) + 1,
            f"rat/cells/rand{t}", None)

    # Towers over the small grid; build_tower raises on any bonding defect.
    fixed = [
        [rat.Chain(())],
        [rat.Chain(()), rat.Chain((Fraction(0),)),
         rat.Chain((Fraction(0), Fraction(1)))],
        [rat.Chain((Fraction(0),)), rat.Chain((Fraction(1),)),
         rat.Chain((Fraction(0), Fraction(1)))],
    ]
    for ti, chains in enumerate(fixed):
        try:
            rat.build_tower(chains)
            result.record(True, f"rat/tower/fixed{ti}", None)
        except Exception as exc:  # noqa: BLE001 - counterexample reporting
            result.record(False, f"rat/tower/fixed{ti}", exc)
    for t in range(150):
        chains = [_random_chain(rng) for _ in range(rng.randint(1, 4))]
        try:
            tower = rat.build_tower(chains)
            tower.threads()
            result.record(True, f"rat/tower/rand{t}", None)
        except Exception as exc:  # noqa: BLE001
            result.record(False, f"rat/tower/rand{t}", exc)

    # Farness fixtures with verified-disjoint saturations.
    fixtures = [
        (rat.RatSet.point(0), rat.RatSet.point(1)),
        (rat.RatSet.interval(0, 1), rat.RatSet.point(1)),
        (rat.RatSet.interval(0, 1), rat.RatSet.interval(1, 2)),
    ]
    for fi, (a, b) in enumerate(fixtures):
        verdict = rat.decide_far(a, b)
        ok = verdict.far and not rat.saturate(verdict.witness, a).intersects(
            rat.saturate(verdict.witness, b))
        result.record(ok, f"rat/far/fixture{fi}", verdict)
    for t in range(100):
        a = _random_ratset(rng)
        b = _random_ratset(rng)
        if not a.intersects(b):
            continue
        verdict = rat.decide_far(a, b)
        result.record(not verdict.far, f"rat/far/near{t}", (str(a), str(b)))

    # Saturation monotonicity: bigger chains, smaller saturations.
    for t in range(1000):
        big = _random_chain(rng, max_len=5)
        small = rat.Chain(tuple(sorted(
            p for p in big.points if rng.random() < 0.6)))
        a = _random_ratset(rng)
        ok = rat.saturate(big, a).issubset(rat.saturate(small, a))
        result.record(ok, f"rat/monotone/{t}", (str(small), str(big), str(a)))

    # Endpoint completeness: bounded falsification must find nothing.
    found = 0
    t = 0
    while found < 200 and t < 2000:
        t += 1
        a = _random_ratset(rng)
        b = _random_ratset(rng)
        if a.is_empty or b.is_empty or a.intersects(b):
            continue
        found += 1
        cex = rat.endpoint_completeness_counterexample(a, b)
        result.record(cex is None, f"rat/endpoint/{found}",
                      (str(a), str(b), str(cex)))


def _run_ordcomp_family(result, seed):
    rng = random.Random(seed + 3)
    done = 0
    tries = 0
    while done < 500 and tries < 5000:
        tries += 1
        o = _random_convex(rng)
        a = _random_subset_of(o, rng)
        if not a.issubset(o):
            continue
        done += 1
        claim = rat.check_ordcomp_claim(a, o)
        ok = (not claim.alarm) and rat.saturate(claim.witness, a).issubset(o)
        result.record(ok, f"ordcomp/{done}", (str(a), str(o)))


def _random_convex(rng):
    kind = rng.random()
    if kind < 0.1:
        return rat.RatSet.interval(rat.NEG_INF, rat.POS_INF)
    a, b = _random_fraction(rng), _random_fraction(rng)
    if a == b:
        b = a + 2
    lo, hi = min(a, b), max(a, b)
    atoms = [("iv", lo, hi)]
    if rng.random() < 0.4:
        atoms.append(("pt", lo))
    if rng.random() < 0.4:
        atoms.append(("pt", hi))
    if kind < 0.2:
        atoms = [("iv", rat.NEG_INF, hi)] + (
            [("pt", hi)] if rng.random() < 0.5 else [])
    elif kind < 0.3:
        atoms = [("iv", lo, rat.POS_INF)] + (
            [("pt", lo)] if rng.random() < 0.5 else [])
    return rat.RatSet(atoms)


def _random_subset_of(o, rng):
    comps = o.components()
    atoms = []
    for lo, lo_in, hi, hi_in in comps:
        if lo_in and rng.random() < 0.5:
            atoms.append(("pt", lo))
        if hi_in and rng.random() < 0.5:
            atoms.append(("pt", hi))
        if isinstance(lo, rat._Infinity) or isinstance(hi, rat._Infinity):
            continue
        if hi - lo > 0 and rng.random() < 0.8:
            span = hi - lo
            q1 = lo + span * Fraction(rng.randint(0, 3), 4)
            q2 = lo + span * Fraction(rng.randint(1, 4), 4)
            if q1 < q2:
                atoms.append(("iv", q1, q2))
            elif rng.random() < 0.5:
                mid = lo + span / 2
                atoms.append(("pt", mid))
    return rat.RatSet(atoms)


# ---------------------------------------------------------------------------
# Metric family


def _metric_matrices(n):
    """All symmetric matrices with off-diagonal values in {1, 2}; any such
    assignment satisfies the triangle inequality."""
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for bits in range(1 << len(slots)):
        m = [[Fraction(0)] * n for _ in range(n)]
        for k, (i, j) in enumerate(slots):
            v = Fraction(2) if bits >> k & 1 else Fraction(1)
            m[i][j] = m[j][i] = v
        yield m


def _run_metric_family(result, max_group):
    groups = [g for g in suite_groups(max_group) if g[0] in ("Z2", "Z4", "S3")]
    for n in (1, 2, 3, 4):
        carrier = Carrier(range(n))
        for mi, matrix in enumerate(_metric_matrices(n)):
            metric = FiniteMetric(carrier, matrix)
            u = metric_uniformity(metric)
            for gname, group, gens in groups:
                chains = germ_chains(group)
                for ai, act in enumerate(curated_actions(gname, group, gens, n)):
                    for ci, levels in enumerate(chains):
                        germ = GActionGerm(
                            group, NeighborhoodBase(group, levels), carrier, act)
                        cls = classify(germ, u)
                        if cls.uniformly_equicontinuous and is_isometric(metric, germ):
                            # Isometric actions must pass without hypotheses.
                            if not cls.pi_uniform:
                                result.record(
                                    False,
                                    f"metric/n{n}/m{mi}/{gname}/act{ai}/chain{ci}",
                                    "isometric action not pi-uniform")
                                continue
                        if not cls.pi_uniform:
                            continue
                        label = f"metric/n{n}/m{mi}/{gname}/act{ai}/chain{ci}"
                        mg = metric_g_proximity(metric, germ)
                        derived = from_uniformity(compute_ug(germ, u))
                        result.record(_first_mismatch(mg, derived) is None,
                                      label, _first_mismatch(mg, derived))


# ---------------------------------------------------------------------------
# Pseudometric family checks


def _run_sigma_family(result, seed, max_group):
    rng = random.Random(seed + 4)
    groups = suite_groups(max_group)
    for n in (3, 4):
        carrier = Carrier(range(n))
        matrices = list(_metric_matrices(n))
        for gname, group, gens in groups:
            chains = germ_chains(group)
            actions = curated_actions(gname, group, gens, n)
            for t in range(6):
                members = [rng.choice(matrices)]
                if rng.random() < 0.5:
                    members.append(rng.choice(matrices))
                fam = PseudometricFamily(carrier, members)
                act = actions[rng.randrange(len(actions))]
                levels = chains[rng.randrange(len(chains))]
                germ = GActionGerm(group, NeighborhoodBase(group, levels),
                                   carrier, act)
                subs = [frozenset({group.e}),
                        frozenset(range(group.order))]
                if len(germ.ne.deepest) > 1:
                    subs.append(germ.ne.deepest)
                label = f"sigma/n{n}/{gname}/{t}"
                rep = xi_report(fam, germ, subs)
                result.record(rep.ok(), label, rep.lines())
                # Worst-case matrices must stay pseudometrics (trap check).
                for si, s in enumerate(subs):
                    for i in range(len(fam.members)):
                        sup_pseudometric(fam, germ, s, i)
                        result.record(True, f"{label}/sup{si}.{i}", None)
