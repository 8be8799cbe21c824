"""Proximity relations on a finite carrier.

A proximity is a "nearness" relation between subsets.  Here it is
materialized as a table: ``rows[a]`` is a ``2**n``-bit integer whose bit b
says whether subset a is near subset b (subsets indexed by their bitmask).
This makes extensional equality, domination and the exhaustive axiom
checks cheap integer algebra even when the quantifiers range over all
``8**n`` subset triples.

The axioms checked are the classical ones:

  P1  overlapping sets are near
  P2  symmetry
  P3  nothing is near the empty set
  P4  near(A, B u C)  iff  near(A, B) or near(A, C)
  P5  a far pair is separated by a cut set C (A far C and X\\C far B)
  P5' a far pair has disjoint strong neighborhoods
  P6  distinct points are far (separatedness; optional)

P5 and P5' are checked by independent searches and must agree on any
relation satisfying P1-P4.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import CarrierMismatch, ResourceCap

AXIOM_CHECK_CAP = 12

P1_P5 = ("P1", "P2", "P3", "P4", "P5")


@lru_cache(maxsize=None)
def _submask_table(n):
    """table[c] = integer with bit s set for every submask s of c.

    Built by doubling: adjoining bit i to c shifts every submask pattern up
    by 2**i.  Entry c is a 2**n-bit integer.
    """
    table = [1] * (1 << n)
    for c in range(1, 1 << n):
        low = c & -c
        table[c] = table[c ^ low] | (table[c ^ low] << low)
    return tuple(table)


def _intersectors(mask, n):
    """Bitmask over subset indices b with b & mask != 0."""
    full_bits = (1 << (1 << n)) - 1
    return full_bits ^ _submask_table(n)[((1 << n) - 1) ^ mask]


class Prox:
    """A materialized proximity table over all subset pairs of a carrier.

    Construction only normalizes the empty row (nothing is near the empty
    set); every other defect is representable so that deliberately broken
    relations can serve as negative fixtures for check_axioms.
    """

    __slots__ = ("carrier", "rows")

    def __init__(self, carrier, rows, normalize=True):
        rows = list(rows)
        if len(rows) != 1 << carrier.n:
            raise ValueError("row count must be 2**n")
        if normalize:
            rows[0] = 0
        self.carrier = carrier
        self.rows = tuple(rows)

    @classmethod
    def from_predicate(cls, carrier, pred):
        """Materialize near(A, B) from a predicate on frozensets."""
        subsets = [carrier.mask_subset(m) for m in range(1 << carrier.n)]
        rows = []
        for a in subsets:
            row = 0
            for bm, b in enumerate(subsets):
                if pred(a, b):
                    row |= 1 << bm
            rows.append(row)
        return cls(carrier, rows)

    @classmethod
    def overlap(cls, carrier):
        """near(A, B) iff A and B intersect (the discrete/finest proximity)."""
        n = carrier.n
        return cls(carrier, [_intersectors(a, n) for a in range(1 << n)])

    @classmethod
    def nonempty_pairs(cls, carrier):
        """near(A, B) iff both are nonempty (the indiscrete/coarsest proximity)."""
        n = carrier.n
        full_bits = (1 << (1 << n)) - 1
        row = full_bits ^ 1
        return cls(carrier, [0] + [row] * ((1 << n) - 1))

    def near(self, a, b):
        am = self.carrier.subset_mask(a)
        bm = self.carrier.subset_mask(b)
        return bool(self.rows[am] >> bm & 1)

    def near_masks(self, am, bm):
        return bool(self.rows[am] >> bm & 1)

    def __eq__(self, other):
        return (isinstance(other, Prox) and self.carrier == other.carrier
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.carrier, self.rows))

    def __repr__(self):
        return f"Prox(n={self.carrier.n})"


class LazyProx:
    """A proximity given by a predicate, for carriers too big to materialize.

    Only spot checks are available above the materialization cap; the empty
    set is still normalized to be far from everything.
    """

    __slots__ = ("carrier", "pred")

    def __init__(self, carrier, pred):
        self.carrier = carrier
        self.pred = pred

    def near(self, a, b):
        a = frozenset(a)
        if not a:
            return False
        return bool(self.pred(a, frozenset(b)))


class AxiomReport:
    """Pass/fail verdicts per axiom, with a concrete counterexample on failure."""

    def __init__(self, results):
        self._results = dict(results)

    @property
    def names(self):
        return tuple(self._results)

    def passed(self, name):
        return self._results[name][0]

    def counterexample(self, name):
        return self._results[name][1]

    def ok(self, names=None):
        names = self.names if names is None else names
        return all(self._results[n][0] for n in names)

    def failures(self):
        return tuple(n for n in self.names if not self._results[n][0])

    def lines(self):
        out = []
        for name, (good, cex) in self._results.items():
            if good:
                out.append(f"{name}: pass")
            else:
                out.append(f"{name}: FAIL  counterexample={_fmt_cex(cex)}")
        return out

    def __str__(self):
        return "\n".join(self.lines())

    def __repr__(self):
        bad = self.failures()
        return f"AxiomReport(failures={list(bad)!r})" if bad else "AxiomReport(all pass)"


def _fmt_cex(cex):
    if isinstance(cex, tuple):
        return "(" + ", ".join(_fmt_cex(c) for c in cex) + ")"
    if isinstance(cex, frozenset):
        return "{" + ", ".join(map(repr, sorted(cex, key=repr))) + "}"
    return repr(cex)


def check_axioms(p, cap=AXIOM_CHECK_CAP):
    """Exhaustively check P1-P6 and P5' over every subset pair.

    Counterexamples are the first violations in the fixed subset
    enumeration order, so reports are reproducible.  The check is
    Theta(8**n) in quantifier volume (vectorized over the last quantifier),
    hence the cap.
    """
    carrier = p.carrier
    n = carrier.n
    if n > cap:
        raise ResourceCap(f"axiom check needs carrier size <= {cap}, got {n}")
    N = 1 << n
    full = N - 1
    full_bits = (1 << N) - 1
    rows = p.rows
    subset = carrier.mask_subset

    results = {}

    # P1: intersecting pairs must be near.
    results["P1"] = (True, None)
    for a in range(N):
        viol = _intersectors(a, n) & ~rows[a] & full_bits
        if viol:
            b = (viol & -viol).bit_length() - 1
            results["P1"] = (False, (subset(a), subset(b)))
            break

    # P2: symmetry.  Columns are built by transposing the set bits.
    cols = [0] * N
    for a in range(N):
        row = rows[a]
        while row:
            low = row & -row
            cols[low.bit_length() - 1] |= 1 << a
            row ^= low
    results["P2"] = (True, None)
    for a in range(N):
        viol = rows[a] & ~cols[a] & full_bits
        if viol:
            b = (viol & -viol).bit_length() - 1
            results["P2"] = (False, (subset(a), subset(b)))
            break

    # P3: the empty set is near nothing.
    if rows[0]:
        b = (rows[0] & -rows[0]).bit_length() - 1
        results["P3"] = (False, (frozenset(), subset(b)))
    else:
        results["P3"] = (True, None)

    # P4: near(A, BuC) iff near(A,B) or near(A,C).  Equivalent to: the row is
    # determined by its singleton bits (all-near if the empty bit is set).
    results["P4"] = (True, None)
    for a in range(N):
        row = rows[a]
        if row & 1:
            if row != full_bits:
                miss = (~row & full_bits)
                b = (miss & -miss).bit_length() - 1
                results["P4"] = (False, (subset(a), subset(b), frozenset()))
                break
            continue
        ok = True
        gs = [0] * N  # OR of singleton bits, built along the mask lattice
        for s in range(1, N):
            low = s & -s
            gs[s] = g = gs[s ^ low] | (row >> low & 1)
            if (row >> s & 1) != g:
                results["P4"] = (False, (subset(a), subset(s ^ low), subset(low)))
                ok = False
                break
        if not ok:
            break

    # Strong-neighborhood masks, shared by P5 and P5'.
    #   sn[a]   = {a1 : A is far from X \ A1}
    #   cutb[b] = {c  : X \ C is far from B}
    sn = [0] * N
    cutb = [0] * N
    for a in range(N):
        m = 0
        row = rows[a]
        for a1 in range(N):
            if not row >> (full ^ a1) & 1:
                m |= 1 << a1
        sn[a] = m
    for b in range(N):
        m = 0
        for c in range(N):
            if not rows[full ^ c] >> b & 1:
                m |= 1 << c
        cutb[b] = m

    # P5: every far pair admits a cut set C with A far C and X\C far B.
    results["P5"] = (True, None)
    done = False
    for a in range(N):
        faror = ~rows[a] & full_bits
        while faror:
            low = faror & -faror
            b = low.bit_length() - 1
            if not (~rows[a] & full_bits) & cutb[b]:
                results["P5"] = (False, (subset(a), subset(b)))
                done = True
                break
            faror ^= low
        if done:
            break

    # P5': every far pair has disjoint strong neighborhoods.  Searched
    # independently of P5 through the submask table.
    table = _submask_table(n)
    reach = [0] * N
    for b in range(N):
        m = sn[b]
        acc = 0
        while m:
            low = m & -m
            acc |= table[full ^ (low.bit_length() - 1)]
            m ^= low
        reach[b] = acc
    results["P5prime"] = (True, None)
    done = False
    for a in range(N):
        faror = ~rows[a] & full_bits
        while faror:
            low = faror & -faror
            b = low.bit_length() - 1
            if not sn[a] & reach[b]:
                results["P5prime"] = (False, (subset(a), subset(b)))
                done = True
                break
            faror ^= low
        if done:
            break

    # P6: distinct points are far.
    results["P6"] = (True, None)
    done = False
    for i in range(n):
        for j in range(n):
            if i != j and rows[1 << i] >> (1 << j) & 1:
                results["P6"] = (False, (subset(1 << i), subset(1 << j)))
                done = True
                break
        if done:
            break

    return AxiomReport(results)


def check_axioms_sampled(p, rng, samples=500):
    """Spot check the universally quantified axioms on random subsets.

    Used above the materialization cap, where exhausting the lattice is not
    an option.  Only definite violations are reported; the existential
    axioms P5/P5' are not sampled.  Returns the list of violations found.
    """
    carrier = p.carrier
    els = carrier.elements
    violations = []

    def rand_subset():
        return frozenset(e for e in els if rng.random() < 0.5)

    for _ in range(samples):
        a, b, c = rand_subset(), rand_subset(), rand_subset()
        if a & b and not p.near(a, b):
            violations.append(("P1", (a, b)))
        if p.near(a, b) != p.near(b, a):
            violations.append(("P2", (a, b)))
        if p.near(frozenset(), b):
            violations.append(("P3", (frozenset(), b)))
        if p.near(a, b | c) != (p.near(a, b) or p.near(a, c)):
            violations.append(("P4", (a, b, c)))
    return violations


def closure(p, subset):
    """Points near the given set: cl(A) = {x : near({x}, A)}."""
    carrier = p.carrier
    am = carrier.subset_mask(subset)
    out = 0
    for i in range(carrier.n):
        if p.rows[1 << i] >> am & 1:
            out |= 1 << i
    return carrier.mask_subset(out)


def dominates(p1, p2):
    """True iff near_1(A, B) implies near_2(A, B) for all subset pairs.

    This is the domination order: p1 dominates p2 (p2 is coarser, having at
    least the near pairs of p1).
    """
    if p1.carrier != p2.carrier:
        raise CarrierMismatch("proximities live on different carriers")
    return all(r1 & ~r2 == 0 for r1, r2 in zip(p1.rows, p2.rows))


def from_uniformity(u):
    """The proximity induced by an entourage basis.

    near(A, B) iff every basis entourage meets A x B.  A basis suffices:
    any filter element contains a basis element, which then also meets
    A x B, so the generated filter gives the same verdict.
    """
    carrier = u.carrier
    n = carrier.n
    N = 1 << n
    full_bits = (1 << N) - 1
    rows = [full_bits] * N
    for eps in u.basis:
        imgs = eps.image_masks
        img = [0] * N
        for a in range(1, N):
            low = a & -a
            img[a] = img[a ^ low] | imgs[low.bit_length() - 1]
        for a in range(N):
            rows[a] &= _intersectors(img[a], n)
    return Prox(carrier, rows)


def is_separated(p):
    """Whether distinct points are always far (axiom P6 alone)."""
    n = p.carrier.n
    for i in range(n):
        for j in range(n):
            if i != j and p.rows[1 << i] >> (1 << j) & 1:
                return False
    return True


@dataclass(frozen=True)
class SeparatedReflection:
    """A proximity pushed down to its point-nearness quotient."""

    blocks: tuple
    quotient_carrier: object
    quotient: Prox


def separated_reflection(p):
    """Quotient by the point-nearness classes x ~ y iff near({x},{y}).

    Point nearness is an equivalence for any relation satisfying P1-P5
    (that is the caller's responsibility).  Blocks are ordered by their
    least member, and block nearness is inherited from the unions.
    """
    from .setrel import Carrier

    carrier = p.carrier
    n = carrier.n
    assigned = {}
    blocks = []
    for i, x in enumerate(carrier.elements):
        if x in assigned:
            continue
        block = [x]
        assigned[x] = len(blocks)
        for j in range(i + 1, n):
            y = carrier.elements[j]
            if y not in assigned and p.rows[1 << i] >> (1 << j) & 1:
                block.append(y)
                assigned[y] = len(blocks)
        blocks.append(frozenset(block))
    blocks = tuple(blocks)
    qcarrier = Carrier(range(len(blocks)))

    def lift(subset):
        out = set()
        for q in subset:
            out |= blocks[q]
        return frozenset(out)

    quotient = Prox.from_predicate(
        qcarrier, lambda a, b: p.near(lift(a), lift(b)))
    return SeparatedReflection(blocks, qcarrier, quotient)
