"""Symbolic model of the ordered rationals under order automorphisms.

Points of the carrier are exact rationals; sets are finite unions of
rational points and open intervals with symbolic infinite endpoints.  The
stabilizer of a finite chain F = {t1 < ... < tm} acts with exactly the
2m+1 obvious orbits

    (-inf, t1), {t1}, (t1, t2), ..., {tm}, (tm, +inf)

(ultrahomogeneity: an order automorphism fixing F can move a point to any
other point of the same cell).  Saturating a set under the stabilizer
therefore means taking the union of the cells it meets, and farness of two
sets in the maximal group proximity becomes a finite search for a chain
whose saturations are disjoint.

All arithmetic is exact (fractions.Fraction); no floats anywhere.

The principal engineering decision is the witness search space for
decide_far: chains are drawn from the endpoint set of the two inputs.  Any
witness found is sound because saturations shrink as chains grow; the
completeness of the endpoint restriction is backed by a bounded
falsification search (endpoint_completeness_counterexample) instead of
being assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import DocumentError, InternalCheckFailure, PreconditionFailure


class _Infinity:
    """Symbolic infinite endpoint, totally ordered against Fraction."""

    __slots__ = ("sign",)

    def __init__(self, sign):
        self.sign = sign

    def __lt__(self, other):
        if isinstance(other, _Infinity):
            return self.sign < other.sign
        return self.sign < 0

    def __gt__(self, other):
        if isinstance(other, _Infinity):
            return self.sign > other.sign
        return self.sign > 0

    def __le__(self, other):
        return self == other or self < other

    def __ge__(self, other):
        return self == other or self > other

    def __eq__(self, other):
        return isinstance(other, _Infinity) and other.sign == self.sign

    def __hash__(self):
        return hash(("infinity", self.sign))

    def __repr__(self):
        return "inf" if self.sign > 0 else "-inf"


NEG_INF = _Infinity(-1)
POS_INF = _Infinity(1)


def fmt_value(v):
    if isinstance(v, _Infinity):
        return repr(v)
    return str(v)


def _pt(q):
    return ("pt", q)


def _iv(lo, hi):
    return ("iv", lo, hi)


def fmt_atom(atom):
    if atom[0] == "pt":
        return "{" + fmt_value(atom[1]) + "}"
    return f"({fmt_value(atom[1])},{fmt_value(atom[2])})"


def _atom_start(atom):
    return atom[1]


def _atoms_intersect(a, b):
    if a[0] == "pt" and b[0] == "pt":
        return a[1] == b[1]
    if a[0] == "pt":
        a, b = b, a
    if b[0] == "pt":
        return a[1] < b[1] < a[2]
    lo = a[1] if a[1] > b[1] else b[1]
    hi = a[2] if a[2] < b[2] else b[2]
    return lo < hi


def _atom_intersection(a, b):
    if a[0] == "pt" and b[0] == "pt":
        return a if a[1] == b[1] else None
    if a[0] == "pt":
        a, b = b, a
    if b[0] == "pt":
        return b if a[1] < b[1] < a[2] else None
    lo = a[1] if a[1] > b[1] else b[1]
    hi = a[2] if a[2] < b[2] else b[2]
    return _iv(lo, hi) if lo < hi else None


class RatSet:
    """A finite union of rational points and open rational intervals.

    Atoms are normalized (overlapping intervals merged, swallowed points
    dropped) but a point adjacent to an open interval stays its own atom:
    the stabilizer cells are exactly such alternations and fusing them
    would force a re-split at every saturation.  Comparisons that must not
    care about the split (equality, subset, convexity) go through the
    fused convex components instead.
    """

    __slots__ = ("atoms",)

    def __init__(self, atoms=()):
        self.atoms = _normalize(atoms)

    @classmethod
    def point(cls, q):
        return cls([_pt(Fraction(q))])

    @classmethod
    def interval(cls, lo, hi):
        lo = lo if isinstance(lo, _Infinity) else Fraction(lo)
        hi = hi if isinstance(hi, _Infinity) else Fraction(hi)
        return cls([_iv(lo, hi)])

    @classmethod
    def empty(cls):
        return cls()

    @property
    def is_empty(self):
        return not self.atoms

    def union(self, other):
        return RatSet(self.atoms + other.atoms)

    def intersects(self, other):
        return any(_atoms_intersect(a, b) for a in self.atoms for b in other.atoms)

    def intersection(self, other):
        out = []
        for a in self.atoms:
            for b in other.atoms:
                c = _atom_intersection(a, b)
                if c is not None:
                    out.append(c)
        return RatSet(out)

    def contains_value(self, q):
        q = Fraction(q)
        for a in self.atoms:
            if a[0] == "pt":
                if a[1] == q:
                    return True
            elif a[1] < q < a[2]:
                return True
        return False

    def components(self):
        """Fused maximal convex pieces as (lo, lo_closed, hi, hi_closed)."""
        comps = []
        for a in self.atoms:
            if a[0] == "pt":
                comps.append([a[1], True, a[1], True])
            else:
                comps.append([a[1], False, a[2], False])
        comps.sort(key=lambda c: (_sort_key(c[0]), not c[1]))
        fused = []
        for c in comps:
            if fused:
                p = fused[-1]
                touches = c[0] < p[2] or (c[0] == p[2] and (c[1] or p[3]))
                if touches:
                    if c[2] > p[2] or (c[2] == p[2] and c[3]):
                        p[2], p[3] = c[2], c[3]
                    continue
            fused.append(c)
        return tuple(tuple(c) for c in fused)

    @property
    def is_convex(self):
        return len(self.components()) <= 1

    def issubset(self, other):
        mine = self.components()
        theirs = other.components()
        for c in mine:
            if not any(_component_inside(c, d) for d in theirs):
                return False
        return True

    def endpoints(self):
        """The finite endpoint values of all atoms, sorted."""
        vals = set()
        for a in self.atoms:
            if a[0] == "pt":
                vals.add(a[1])
            else:
                for v in (a[1], a[2]):
                    if not isinstance(v, _Infinity):
                        vals.add(v)
        return tuple(sorted(vals))

    def __eq__(self, other):
        return isinstance(other, RatSet) and self.components() == other.components()

    def __hash__(self):
        return hash(self.components())

    def __str__(self):
        if not self.atoms:
            return "{}"
        return ",".join(fmt_atom(a) for a in self.atoms)

    def __repr__(self):
        return f"RatSet({self})"


def _sort_key(v):
    if isinstance(v, _Infinity):
        return (v.sign, Fraction(0))
    return (0, v)


def _component_inside(c, d):
    lo_ok = d[0] < c[0] or (d[0] == c[0] and (d[1] or not c[1]))
    hi_ok = d[2] > c[2] or (d[2] == c[2] and (d[3] or not c[3]))
    return lo_ok and hi_ok


def _normalize(atoms):
    ivs = []
    pts = set()
    for a in atoms:
        if a[0] == "pt":
            pts.add(a[1])
        elif a[1] < a[2]:
            ivs.append(a)
    ivs.sort(key=lambda a: (_sort_key(a[1]), _sort_key(a[2])))
    merged = []
    for a in ivs:
        if merged and a[1] < merged[-1][2]:
            if a[2] > merged[-1][2]:
                merged[-1] = _iv(merged[-1][1], a[2])
        else:
            merged.append(a)
    kept = [_pt(q) for q in pts
            if not any(iv[1] < q < iv[2] for iv in merged)]
    out = merged + kept
    out.sort(key=lambda a: (_sort_key(_atom_start(a)), 0 if a[0] == "pt" else 1))
    return tuple(out)


@dataclass(frozen=True)
class Chain:
    """A finite strictly increasing chain of rationals (possibly empty)."""

    points: tuple

    def __post_init__(self):
        pts = tuple(Fraction(p) for p in self.points)
        if any(pts[i] >= pts[i + 1] for i in range(len(pts) - 1)):
            raise ValueError("chain points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @classmethod
    def of(cls, values):
        return cls(tuple(sorted({Fraction(v) for v in values})))

    def issubset(self, other):
        return set(self.points) <= set(other.points)

    def union(self, other):
        return Chain.of(self.points + other.points)

    def __len__(self):
        return len(self.points)

    def __str__(self):
        return "{" + ",".join(str(p) for p in self.points) + "}"

    def __repr__(self):
        return f"Chain({self})"


@dataclass(frozen=True)
class OrbitSpace:
    """The 2m+1 alternating stabilizer cells of a chain, in order."""

    chain: Chain
    cells: tuple

    def cell_index_of_value(self, q):
        q = Fraction(q)
        for i, cell in enumerate(self.cells):
            if cell[0] == "pt":
                if cell[1] == q:
                    return i
            elif cell[1] < q < cell[2]:
                return i
        raise InternalCheckFailure("cells do not partition the rationals")

    def labels(self):
        return tuple(fmt_atom(c) for c in self.cells)


def orbit_space(chain):
    """Cells of the chain stabilizer: rays, points and gaps in order."""
    pts = chain.points
    if not pts:
        return OrbitSpace(chain, (_iv(NEG_INF, POS_INF),))
    cells = [_iv(NEG_INF, pts[0])]
    for i, t in enumerate(pts):
        cells.append(_pt(t))
        hi = pts[i + 1] if i + 1 < len(pts) else POS_INF
        cells.append(_iv(t, hi))
    return OrbitSpace(chain, tuple(cells))


def _cell_representative(cell):
    if cell[0] == "pt":
        return cell[1]
    lo, hi = cell[1], cell[2]
    if isinstance(lo, _Infinity) and isinstance(hi, _Infinity):
        return Fraction(0)
    if isinstance(lo, _Infinity):
        return hi - 1
    if isinstance(hi, _Infinity):
        return lo + 1
    return (lo + hi) / 2


def bonding_map(fbig, fsmall):
    """Index map sending each cell of the finer orbit space to the unique
    cell of the coarser one containing it."""
    if not fsmall.issubset(fbig):
        raise PreconditionFailure(
            f"chain {fsmall} is not included in {fbig}")
    big = orbit_space(fbig)
    small = orbit_space(fsmall)
    return tuple(small.cell_index_of_value(_cell_representative(c))
                 for c in big.cells)


def saturate(chain, ratset):
    """Union of the stabilizer cells that meet the set."""
    cells = orbit_space(chain).cells
    hit = [c for c in cells if ratset.intersects(RatSet([c]))]
    return RatSet(hit)


@dataclass(frozen=True)
class FarVerdict:
    far: bool
    witness: Chain | None

    def __str__(self):
        if not self.far:
            return "near"
        return f"far, witness F={self.witness}"


def decide_far(a, b):
    """Decide farness in the maximal group proximity of the model.

    Intersecting sets are near.  Otherwise chains over the combined
    endpoint set are searched by size and then lexicographically; the first
    chain with disjoint saturations is returned as witness (and
    re-verified).  If no endpoint chain separates, the verdict is near.
    """
    if a.intersects(b):
        return FarVerdict(False, None)
    pool = sorted(set(a.endpoints()) | set(b.endpoints()))
    for size in range(len(pool) + 1):
        for combo in combinations(pool, size):
            chain = Chain(combo)
            sa, sb = saturate(chain, a), saturate(chain, b)
            if not sa.intersects(sb):
                # Re-verify soundness through the other intersection path.
                if not sa.intersection(sb).is_empty:
                    raise InternalCheckFailure("witness re-verification failed")
                return FarVerdict(True, chain)
    return FarVerdict(False, None)


@dataclass(frozen=True)
class Tower:
    """A directed family of chains with all bonding maps between
    comparable levels.  Levels are sorted by (size, points); maps[(i, j)]
    is the cell map from level i down to level j."""

    levels: tuple
    maps: dict

    def top_index(self):
        for i, f in enumerate(self.levels):
            if all(g.issubset(f) for g in self.levels):
                return i
        raise InternalCheckFailure("directed tower has no top level")

    def threads(self):
        """Compatible cell choices, one per level.  The top level (which
        exists after directed closure) determines every thread."""
        top = self.top_index()
        spaces = [orbit_space(f) for f in self.levels]
        out = []
        for c in range(len(spaces[top].cells)):
            thread = []
            for j in range(len(self.levels)):
                if j == top:
                    thread.append(c)
                else:
                    thread.append(self.maps[(top, j)][c])
            out.append(tuple(thread))
        return tuple(out)


def build_tower(chains):
    """Close a family of chains under union, build all bonding maps, and
    validate surjectivity, monotonicity and functoriality.

    The validations guard the construction itself; a failure is an
    internal error.
    """
    family = {Chain.of(c.points) if isinstance(c, Chain) else Chain.of(c)
              for c in chains}
    if not family:
        family = {Chain(())}
    changed = True
    while changed:
        changed = False
        for f in list(family):
            for g in list(family):
                u = f.union(g)
                if u not in family:
                    family.add(u)
                    changed = True
    levels = tuple(sorted(family, key=lambda f: (len(f), f.points)))
    maps = {}
    for i, f in enumerate(levels):
        for j, g in enumerate(levels):
            if g.issubset(f):
                maps[(i, j)] = bonding_map(f, g)
    _validate_tower(levels, maps)
    return Tower(levels, maps)


def _validate_tower(levels, maps):
    for (i, j), m in maps.items():
        small = orbit_space(levels[j])
        if set(m) != set(range(len(small.cells))):
            raise InternalCheckFailure(
                f"bonding {levels[i]} -> {levels[j]} is not surjective")
        if any(m[k] > m[k + 1] for k in range(len(m) - 1)):
            raise InternalCheckFailure(
                f"bonding {levels[i]} -> {levels[j]} is not monotone")
    for (i, j) in maps:
        for (j2, k) in maps:
            if j2 != j or (i, k) not in maps:
                continue
            direct = maps[(i, k)]
            composed = tuple(maps[(j, k)][c] for c in maps[(i, j)])
            if direct != composed:
                raise InternalCheckFailure(
                    f"bonding maps do not compose through {levels[j]}")


def tower_dot(tower):
    """Graphviz rendering: one subgraph per level, nodes labeled by cell
    notation, bonding edges (along covering pairs) labeled by the source
    chain."""
    lines = ["digraph tower {"]
    spaces = [orbit_space(f) for f in tower.levels]
    for i, space in enumerate(spaces):
        lines.append(f"  subgraph cluster_{i} {{")
        lines.append(f'    label="F={tower.levels[i]}";')
        for c, lab in enumerate(space.labels()):
            lines.append(f'    "L{i}_{c}" [label="{lab}"];')
        lines.append("  }")
    for (i, j), m in sorted(tower.maps.items()):
        if i == j or not _covers(tower, i, j):
            continue
        label = str(tower.levels[i])
        for c, target in enumerate(m):
            lines.append(f'  "L{i}_{c}" -> "L{j}_{target}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _covers(tower, i, j):
    """Whether level i covers level j in the inclusion order (no level
    strictly between)."""
    fi, fj = tower.levels[i], tower.levels[j]
    if not (fj.issubset(fi) and fi != fj):
        return False
    for k, fk in enumerate(tower.levels):
        if k in (i, j):
            continue
        if fj.issubset(fk) and fk.issubset(fi) and fk != fi and fk != fj:
            return False
    return True


@dataclass(frozen=True)
class ClaimResult:
    witness: Chain | None

    @property
    def alarm(self):
        return self.witness is None

    def __str__(self):
        if self.alarm:
            return "ALARM: no chain keeps the saturation inside the target"
        return f"witness F={self.witness}"


def check_ordcomp_claim(a, o):
    """Find a chain whose stabilizer saturation of A stays inside the
    convex set O containing A.

    The chain endpoints of O always work (cells at or inside O's endpoints
    are contained in O), so exhaustion of the endpoint subsets without a
    witness is a model-level alarm rather than a normal outcome.
    """
    if not o.is_convex:
        raise PreconditionFailure(f"target set {o} is not convex")
    if not a.issubset(o):
        raise PreconditionFailure(f"{a} is not contained in {o}")
    pool = sorted(set(a.endpoints()) | set(o.endpoints()))
    for size in range(len(pool) + 1):
        for combo in combinations(pool, size):
            chain = Chain(combo)
            if saturate(chain, a).issubset(o):
                return ClaimResult(chain)
    return ClaimResult(None)


def endpoint_completeness_counterexample(a, b, factor=4, pad=1):
    """Bounded falsification of the endpoint-restricted witness search.

    For disjoint sets whose full endpoint chain fails to separate, checks
    the maximal chain over a refinement grid (denominators up to `factor`
    times the largest input denominator, values spanning the endpoint
    hull).  Saturations shrink as chains grow, so if the maximal grid
    chain does not separate, no chain over the grid does; if it does
    separate, the endpoint restriction is incomplete and the grid chain is
    returned as the counterexample.
    """
    if a.intersects(b):
        return None
    pool = sorted(set(a.endpoints()) | set(b.endpoints()))
    full = Chain(tuple(pool))
    if not saturate(full, a).intersects(saturate(full, b)):
        return None
    if not pool:
        return None
    maxden = max(q.denominator for q in pool)
    lo = min(pool) - pad
    hi = max(pool) + pad
    grid = set()
    for den in range(1, factor * maxden + 1):
        num = int(lo * den)
        while Fraction(num, den) <= hi:
            if Fraction(num, den) >= lo:
                grid.add(Fraction(num, den))
            num += 1
    chain = Chain(tuple(sorted(grid)))
    if not saturate(chain, a).intersects(saturate(chain, b)):
        return chain
    return None


# ---------------------------------------------------------------------------
# Command-line grammar


def parse_fraction(text):
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad rational {text!r}: {exc}") from None


def _split_atoms(text):
    parts = []
    depth = 0
    cur = ""
    for pos, ch in enumerate(text):
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
            if depth < 0:
                raise DocumentError(f"unbalanced bracket at position {pos}")
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if depth != 0:
        raise DocumentError("unbalanced brackets")
    parts.append(cur)
    return [p.strip() for p in parts if p.strip()]


def _parse_endpoint(text, low_side):
    text = text.strip()
    if text == "-inf":
        return NEG_INF
    if text == "inf":
        return POS_INF
    del low_side
    return parse_fraction(text)


def parse_ratset(text):
    """Grammar: comma-separated atoms; "{p/q}" a point, "(lo,hi)" an open
    interval with "inf"/"-inf" sentinels; "{}" or "" the empty set."""
    text = text.strip()
    if text in ("", "{}"):
        return RatSet()
    atoms = []
    for part in _split_atoms(text):
        if part.startswith("{") and part.endswith("}"):
            atoms.append(_pt(parse_fraction(part[1:-1])))
        elif part.startswith("(") and part.endswith(")"):
            inner = part[1:-1].split(",")
            if len(inner) != 2:
                raise DocumentError(f"interval needs two endpoints: {part!r}")
            lo = _parse_endpoint(inner[0], True)
            hi = _parse_endpoint(inner[1], False)
            if not lo < hi:
                raise DocumentError(f"empty or inverted interval: {part!r}")
            atoms.append(_iv(lo, hi))
        else:
            raise DocumentError(f"bad atom {part!r}")
    return RatSet(atoms)


def parse_chain(text):
    """Grammar: "{t1,t2,...}" with strictly increasing rationals; "{}" empty."""
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise DocumentError(f"chain must be braced: {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return Chain(())
    return Chain.of(parse_fraction(p) for p in inner.split(","))
