"""Entourage bases for uniformities on a finite carrier.

A uniformity is represented only by a finite basis of entourages, never by
the generated filter; all semantic comparison goes through mutual
refinement.  The four basis conditions checked are:

  B1  every entourage contains the diagonal
  B2  every entourage's converse contains a basis entourage
  B3  any two entourages' intersection contains a basis entourage
  B4  every entourage contains the square of a basis entourage
"""

from __future__ import annotations

from . import setrel
from .errors import CarrierMismatch
from .proximity import AxiomReport


class UnifBase:
    """A nonempty list of entourages.  Stored unvalidated so that broken
    bases can serve as negative fixtures; run validate_basis to check."""

    __slots__ = ("carrier", "basis")

    def __init__(self, carrier, basis):
        basis = tuple(basis)
        if not basis:
            raise ValueError("entourage basis must be nonempty")
        for eps in basis:
            if eps.carrier != carrier:
                raise CarrierMismatch("entourage is not over the stated carrier")
        self.carrier = carrier
        self.basis = basis

    def __eq__(self, other):
        # Listwise equality only; semantic equality is refinement_equivalent.
        return (isinstance(other, UnifBase) and self.carrier == other.carrier
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.carrier, self.basis))

    def __repr__(self):
        return f"UnifBase({len(self.basis)} entourages, n={self.carrier.n})"


def discrete_basis(carrier):
    """{diagonal}: the finest uniformity on a finite carrier."""
    return UnifBase(carrier, [setrel.diagonal(carrier)])


def indiscrete_basis(carrier):
    """{X x X}: the coarsest uniformity."""
    return UnifBase(carrier, [setrel.full_relation(carrier)])


def validate_basis(u):
    """Check the four basis conditions; failures carry the offending entourages."""
    diag = setrel.diagonal(u.carrier).pairs
    basis = u.basis
    results = {}

    results["B1"] = (True, None)
    for k, eps in enumerate(basis):
        missing = diag - eps.pairs
        if missing:
            results["B1"] = (False, (k, min(missing, key=eps._pair_key)))
            break

    results["B2"] = (True, None)
    for k, eps in enumerate(basis):
        inv = setrel.invert(eps)
        if not any(inv.contains(d) for d in basis):
            results["B2"] = (False, (k,))
            break

    results["B3"] = (True, None)
    done = False
    for i, eps in enumerate(basis):
        for j, delta in enumerate(basis):
            meet = eps.pairs & delta.pairs
            if not any(g.pairs <= meet for g in basis):
                results["B3"] = (False, (i, j))
                done = True
                break
        if done:
            break

    results["B4"] = (True, None)
    for k, eps in enumerate(basis):
        if not any(eps.contains(setrel.compose(d, d)) for d in basis):
            results["B4"] = (False, (k,))
            break

    return AxiomReport(results)


def induced_topology(u):
    """Open sets of the uniformity: A is open iff each a in A has some
    entourage neighborhood eps(a) inside A.  Returned as a tuple of
    frozensets in subset-index order."""
    carrier = u.carrier
    n = carrier.n
    elem_nbhds = []
    for i in range(n):
        elem_nbhds.append(tuple(eps.image_masks[i] for eps in u.basis))
    opens = []
    for a in range(1 << n):
        rest = a
        good = True
        while rest:
            low = rest & -rest
            i = low.bit_length() - 1
            if not any(nb | a == a for nb in elem_nbhds[i]):
                good = False
                break
            rest ^= low
        if good:
            opens.append(carrier.mask_subset(a))
    return tuple(opens)


def refines(u1, u2):
    """True iff u1 is finer: every entourage of u2 contains a basis
    entourage of u1 (so the filter of u2 sits inside the filter of u1)."""
    if u1.carrier != u2.carrier:
        raise CarrierMismatch("bases live on different carriers")
    return all(any(eps.contains(d) for d in u1.basis) for eps in u2.basis)


def refinement_equivalent(u1, u2):
    return refines(u1, u2) and refines(u2, u1)


def basis_intersection(u):
    """The intersection of all basis entourages (the smallest filter element)."""
    pairs = set(u.basis[0].pairs)
    for eps in u.basis[1:]:
        pairs &= eps.pairs
    return setrel.Rel(u.carrier, pairs)


def is_hausdorff(u):
    """Separation criterion: the basis intersection is exactly the diagonal."""
    return basis_intersection(u) == setrel.diagonal(u.carrier)


def totally_bounded(u):
    """Total boundedness with witnesses: a minimum-size cover of the carrier
    by eps-small sets for each entourage.

    On a finite carrier the verdict is always True; the witnesses are the
    interesting part.  A set S is eps-small when S x S is inside eps, so a
    minimum cover is found among the maximal small sets by exact search.
    """
    covers = {}
    for k, eps in enumerate(u.basis):
        covers[k] = _min_small_cover(eps)
    return True, covers


def _small_sets(eps):
    """Masks of the maximal eps-small subsets, in mask order."""
    carrier = eps.carrier
    n = carrier.n
    imgs = eps.image_masks
    small = []
    for a in range(1, 1 << n):
        rest, ok = a, True
        while rest:
            low = rest & -rest
            if a & ~imgs[low.bit_length() - 1]:
                ok = False
                break
            rest ^= low
        if ok:
            small.append(a)
    maximal = [a for a in small if not any(b != a and b | a == b for b in small)]
    return maximal


def _min_small_cover(eps):
    carrier = eps.carrier
    full = carrier.full_mask
    candidates = _small_sets(eps)
    best = None

    def search(uncovered, chosen):
        nonlocal best
        if best is not None and len(chosen) >= len(best):
            return
        if not uncovered:
            best = list(chosen)
            return
        low = uncovered & -uncovered
        for c in candidates:
            if c & low:
                search(uncovered & ~c, chosen + [c])

    search(full, [])
    if best is None:
        # Reflexive entourages always admit the singleton cover; a missing
        # diagonal pair leaves some point uncoverable.
        return None
    return tuple(carrier.mask_subset(c) for c in best)
