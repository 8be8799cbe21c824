import random

import pytest

from eqprox.errors import ResourceCap
from eqprox.proximity import LazyProx, P1_P5, Prox, check_axioms, \
    check_axioms_sampled, closure, dominates, from_uniformity, is_separated, \
    separated_reflection
from eqprox.setrel import Carrier, Rel, diagonal, full_relation
from eqprox.uniformity import UnifBase, discrete_basis, indiscrete_basis


def brute_near_from_basis(u, a, b):
    """Oracle for the induced proximity: every entourage meets A x B."""
    return all(any((x, y) in eps.pairs for x in a for y in b)
               for eps in u.basis)


def test_overlap_passes_all_axioms():
    c = Carrier(range(3))
    rep = check_axioms(Prox.overlap(c))
    assert rep.ok()


def test_nonempty_pairs_fails_only_p6():
    c = Carrier(range(2))
    rep = check_axioms(Prox.nonempty_pairs(c))
    assert rep.ok(P1_P5)
    assert rep.passed("P5prime")
    assert not rep.passed("P6")
    a, b = rep.counterexample("P6")
    assert a != b and len(a) == len(b) == 1


def test_corrupted_symmetry_is_caught_with_counterexample():
    c = Carrier(range(3))
    p = Prox.overlap(c)
    rows = list(p.rows)
    am = c.subset_mask({0})
    bm = c.subset_mask({0, 1})
    rows[am] &= ~(1 << bm)  # delete one direction of a symmetric pair
    broken = Prox(c, rows, normalize=False)
    rep = check_axioms(broken)
    assert not rep.passed("P2") or not rep.passed("P1")
    for name in rep.failures():
        assert rep.counterexample(name) is not None


def test_p3_violation_needs_raw_rows():
    c = Carrier(range(2))
    rows = [0] * 4
    rows[0] = 0b10  # empty set near {0}
    broken = Prox(c, rows, normalize=False)
    assert not check_axioms(broken).passed("P3")
    normalized = Prox(c, rows)  # default construction clears the empty row
    assert check_axioms(normalized).passed("P3")


def test_p4_violation_counterexample_is_concrete():
    c = Carrier(range(2))
    p = Prox.overlap(c)
    rows = list(p.rows)
    am = c.subset_mask({0})
    rows[am] &= ~(1 << c.subset_mask({0, 1}))  # near singletons, far union
    broken = Prox(c, rows, normalize=False)
    rep = check_axioms(broken)
    assert not rep.passed("P4")
    a, b, cc = rep.counterexample("P4")
    assert broken.near(a, b | cc) != (broken.near(a, b) or broken.near(a, cc))


def test_transitivity_failure_breaks_p5_and_p5prime_alike():
    # Point graph 0-1-2 without 0-2: P1..P4 hold, P5 and P5' both fail.
    c = Carrier(range(3))
    adj = {0: {0, 1}, 1: {0, 1, 2}, 2: {1, 2}}
    p = Prox.from_predicate(
        c, lambda a, b: any(y in adj[x] for x in a for y in b))
    rep = check_axioms(p)
    assert rep.ok(("P1", "P2", "P3", "P4"))
    assert not rep.passed("P5")
    assert not rep.passed("P5prime")
    assert rep.passed("P5") == rep.passed("P5prime")


def test_p5_p5prime_agree_on_random_graph_relations():
    rng = random.Random(2)
    for n in (2, 3, 4):
        c = Carrier(range(n))
        for _ in range(25):
            adj = {i: {i} for i in range(n)}
            for i in range(n):
                for j in range(i + 1, n):
                    if rng.random() < 0.5:
                        adj[i].add(j)
                        adj[j].add(i)
            p = Prox.from_predicate(
                c, lambda a, b: any(y in adj[x] for x in a for y in b))
            rep = check_axioms(p)
            assert rep.ok(("P1", "P2", "P3", "P4"))
            assert rep.passed("P5") == rep.passed("P5prime")


def test_closure_examples():
    c = Carrier(range(3))
    assert closure(Prox.overlap(c), {0, 2}) == frozenset({0, 2})
    assert closure(Prox.overlap(c), frozenset()) == frozenset()
    c2 = Carrier(["a", "b"])
    assert closure(Prox.nonempty_pairs(c2), {"a"}) == frozenset({"a", "b"})


def test_closure_monotone():
    c = Carrier(range(4))
    rng = random.Random(9)
    p = Prox.overlap(c)
    for _ in range(30):
        a = frozenset(e for e in c.elements if rng.random() < 0.4)
        b = a | frozenset(e for e in c.elements if rng.random() < 0.4)
        assert closure(p, a) <= closure(p, b)


def test_dominates_examples_and_partial_order():
    c = Carrier(range(2))
    ov = Prox.overlap(c)
    ne = Prox.nonempty_pairs(c)
    assert dominates(ov, ov)
    assert dominates(ov, ne)
    assert not dominates(ne, ov)
    # Antisymmetry under extensional equality.
    assert not (dominates(ov, ne) and dominates(ne, ov))


def test_from_uniformity_examples():
    c = Carrier(range(3))
    assert from_uniformity(discrete_basis(c)) == Prox.overlap(c)
    assert from_uniformity(indiscrete_basis(c)) == Prox.nonempty_pairs(c)


def test_from_uniformity_matches_brute_force():
    c = Carrier(range(3))
    rng = random.Random(17)
    els = c.elements
    for _ in range(25):
        theta = Rel(c, [(x, y) for x in els for y in els
                        if x == y or rng.random() < 0.4])
        u = UnifBase(c, [diagonal(c), theta])
        p = from_uniformity(u)
        for am in range(8):
            for bm in range(8):
                a, b = c.mask_subset(am), c.mask_subset(bm)
                expected = bool(a) and bool(b) and brute_near_from_basis(u, a, b)
                assert p.near(a, b) == expected


def test_refinement_invariance_of_induced_proximity():
    c = Carrier(range(3))
    u1 = UnifBase(c, [diagonal(c)])
    u2 = UnifBase(c, [diagonal(c), full_relation(c)])
    assert from_uniformity(u1) == from_uniformity(u2)


def test_axiom_check_resource_cap():
    c = Carrier(range(13), max_size=13)
    p = LazyProx(c, lambda a, b: bool(a & b))
    with pytest.raises(ResourceCap):
        check_axioms(Prox.overlap(Carrier(range(4))), cap=3)
    assert p.near({0}, {0, 1})
    assert not p.near(frozenset(), {0})


def test_lazy_prox_sampling():
    c = Carrier(range(13), max_size=13)
    good = LazyProx(c, lambda a, b: bool(a & b))
    rng = random.Random(1)
    assert check_axioms_sampled(good, rng, samples=300) == []
    bad = LazyProx(c, lambda a, b: len(a) > len(b))  # asymmetric nonsense
    rng = random.Random(1)
    assert check_axioms_sampled(bad, rng, samples=300)


def test_separated_reflection_collapses_near_points():
    c = Carrier(range(3))
    # Points 0 and 1 are glued, 2 stays apart.
    blocks = {0: {0, 1}, 1: {0, 1}, 2: {2}}
    p = Prox.from_predicate(
        c, lambda a, b: any(y in blocks[x] for x in a for y in b))
    assert not is_separated(p)
    refl = separated_reflection(p)
    assert refl.blocks == (frozenset({0, 1}), frozenset({2}))
    assert is_separated(refl.quotient)
    assert check_axioms(refl.quotient).ok()
