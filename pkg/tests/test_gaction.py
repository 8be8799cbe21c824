import pytest

from eqprox.gaction import FiniteGroup, GActionGerm, NeighborhoodBase, \
    check_action_continuity, classify, saturate_uniformity, translate_set
from eqprox.setrel import Carrier, Rel, diagonal, full_relation
from eqprox.uniformity import UnifBase, discrete_basis, indiscrete_basis, \
    refinement_equivalent, validate_basis


def z3_rotation(levels=None):
    g = FiniteGroup.cyclic(3)
    c = Carrier(range(3))
    act = [tuple((x + k) % 3 for x in range(3)) for k in range(3)]
    levels = levels or [frozenset(range(3))]
    return GActionGerm(g, NeighborhoodBase(g, levels), c, act)


def test_group_table_validation_names_the_triple():
    # e is an identity but (a.a).a = b.a = b while a.(a.a) = a.b = a.
    with pytest.raises(ValueError, match=r"associative at triple \('a', 'a', 'a'\)"):
        FiniteGroup(["e", "a", "b"], [[0, 1, 2], [1, 2, 1], [2, 2, 0]])
    with pytest.raises(ValueError, match="no identity"):
        FiniteGroup(["a", "b"], [[1, 1], [1, 1]])
    with pytest.raises(ValueError, match="no inverse"):
        FiniteGroup(["e", "a"], [[0, 1], [1, 1]])
    with pytest.raises(ValueError, match="cap"):
        FiniteGroup.cyclic(49)


def test_cyclic_group_shape():
    g = FiniteGroup.cyclic(4)
    assert g.order == 4
    assert g.names[g.e] == "e"
    assert g.mul[1][1] == 2
    assert g.inv[1] == 3


def test_from_permutations_closure():
    g, perms = FiniteGroup.from_permutations([(1, 0, 2), (1, 2, 0)])
    assert g.order == 6
    assert perms[g.e] == (0, 1, 2)
    # Composition convention: (p*q)(x) = p(q(x)).
    i = perms.index((1, 0, 2))
    j = perms.index((1, 2, 0))
    composed = tuple((1, 0, 2)[(1, 2, 0)[x]] for x in range(3))
    assert perms[g.mul[i][j]] == composed


def test_from_permutations_respects_cap():
    with pytest.raises(ValueError, match="cap"):
        FiniteGroup.from_permutations(
            [tuple(list(range(1, 6)) + [0])], max_size=3)


def test_subgroups_of_s3():
    g = FiniteGroup.symmetric(3)
    subs = g.subgroups()
    assert sorted(len(s) for s in subs) == [1, 2, 2, 2, 3, 6]
    normals = [s for s in subs if g.is_normal(s)]
    assert sorted(len(s) for s in normals) == [1, 3, 6]


def test_neighborhood_base_validation():
    g = FiniteGroup.cyclic(4)
    NeighborhoodBase(g, [frozenset(range(4)), frozenset({0, 2})])
    with pytest.raises(ValueError, match="identity"):
        NeighborhoodBase(g, [frozenset({1})])
    with pytest.raises(ValueError, match="descending between levels 0 and 1"):
        NeighborhoodBase(g, [frozenset({0}), frozenset({0, 2})])
    # Deepest level must absorb its own products: {e, g} is not a subgroup.
    with pytest.raises(ValueError, match="square/inverse witness"):
        NeighborhoodBase(g, [frozenset({0, 1})])


def test_non_normal_deepest_level_is_rejected():
    g = FiniteGroup.symmetric(3)
    t = next(s for s in g.subgroups() if len(s) == 2)
    with pytest.raises(ValueError, match="conjugation witness"):
        NeighborhoodBase(g, [t])


def test_action_validation():
    g = FiniteGroup.cyclic(2)
    c3 = Carrier(range(3))
    # A 3-cycle squares to another 3-cycle, not to the identity.
    with pytest.raises(ValueError, match="action law"):
        GActionGerm(g, NeighborhoodBase(g, [frozenset({0})]), c3,
                    [(0, 1, 2), (1, 2, 0)])
    c2 = Carrier(range(2))
    with pytest.raises(ValueError, match="identity must act"):
        GActionGerm(g, NeighborhoodBase(g, [frozenset({0})]), c2,
                    [(1, 0), (0, 1)])


def test_translate_set_examples():
    a = z3_rotation()
    assert translate_set(a, {"e"}, {0, 2}) == frozenset({0, 2})
    assert translate_set(a, {"e", "g"}, frozenset()) == frozenset()
    assert translate_set(a, {"e", "g"}, {0}) == frozenset({0, 1})


def test_translate_monotone_in_both_arguments():
    a = z3_rotation()
    assert translate_set(a, {"e"}, {0}) <= translate_set(a, {"e", "g"}, {0})
    assert translate_set(a, {"e", "g"}, {0}) <= \
        translate_set(a, {"e", "g"}, {0, 2})


def test_translate_is_action_of_products():
    a = z3_rotation()
    g = a.group
    v = {"e", "g"}
    w = {"g"}
    vw = {g.names[g.mul[g.name_index[x]][g.name_index[y]]]
          for x in v for y in w}
    for subset in ({0}, {0, 1}, {1, 2}):
        assert translate_set(a, vw, subset) == \
            translate_set(a, v, translate_set(a, w, subset))


def test_classify_trivial_group():
    g = FiniteGroup.cyclic(2)
    c = Carrier(range(3))
    a = GActionGerm(g, NeighborhoodBase(g, [frozenset({0})]), c,
                    [(0, 1, 2), (0, 1, 2)])
    cls = classify(a, discrete_basis(c))
    assert cls.saturated and cls.bounded and cls.quasibounded
    assert cls.equiuniform and cls.pi_uniform
    assert cls.action_continuous


def test_classify_z3_discrete_germ():
    a = z3_rotation(levels=[frozenset({0})])
    cls = classify(a, discrete_basis(a.carrier))
    assert cls.bounded and cls.saturated and cls.equiuniform


def test_classify_z3_indiscrete_germ():
    # Transitive rotation, full-group chain, diagonal basis: quasibounded
    # and saturated but not bounded, with the stated witness.
    a = z3_rotation()
    cls = classify(a, discrete_basis(a.carrier))
    assert not cls.bounded
    assert cls.quasibounded and cls.saturated
    eps_index, v, x = cls.witnesses["bounded"]
    assert (eps_index, v, x) == (0, "g", 0)


def test_action_continuity_examples():
    # Discrete germ: always continuous when the basis is saturated.
    a = z3_rotation(levels=[frozenset({0})])
    ok, _ = check_action_continuity(a, discrete_basis(a.carrier))
    assert ok
    # Indiscrete germ on a transitive action: fails at x0=0 with the
    # diagonal entourage.
    b = z3_rotation()
    ok, witness = check_action_continuity(b, discrete_basis(b.carrier))
    assert not ok
    g0, x0, eps_index = witness
    assert (x0, eps_index) == (0, 0)
    # Trivial action: always continuous.
    g = FiniteGroup.cyclic(3)
    c = Carrier(range(3))
    triv = GActionGerm(g, NeighborhoodBase(g, [frozenset(range(3))]), c,
                       [(0, 1, 2)] * 3)
    assert check_action_continuity(triv, indiscrete_basis(c))[0]


def test_saturate_uniformity_trivial_cases():
    g = FiniteGroup.cyclic(2)
    c = Carrier(range(2))
    triv = GActionGerm(g, NeighborhoodBase(g, [frozenset({0})]), c,
                       [(0, 1), (0, 1)])
    u = UnifBase(c, [diagonal(c), full_relation(c)])
    assert refinement_equivalent(saturate_uniformity(triv, u), u)


def test_saturate_uniformity_symmetrizes_the_swap_example():
    g = FiniteGroup.cyclic(2)
    c = Carrier(["a", "b"])
    swap = GActionGerm(g, NeighborhoodBase(g, [frozenset({0})]), c,
                       [(0, 1), (1, 0)])
    skew = Rel(c, [("a", "a"), ("b", "b"), ("a", "b")])
    u = UnifBase(c, [diagonal(c), skew])
    assert validate_basis(u).ok()
    out = saturate_uniformity(swap, u)
    # Intersecting over both translates leaves only the diagonal part.
    for rel in out.basis:
        assert swap.push_rel(1, rel) == rel
    assert validate_basis(out).ok()
    assert classify(swap, out).saturated


def test_saturated_output_for_already_saturated_input():
    a = z3_rotation()
    u = discrete_basis(a.carrier)
    out = saturate_uniformity(a, u)
    assert refinement_equivalent(out, u)


def test_saturation_always_refines_the_input():
    import random

    rng = random.Random(41)
    a = z3_rotation()
    els = list(range(3))
    for _ in range(20):
        eps = Rel(a.carrier, [(x, y) for x in els for y in els
                              if x == y or rng.random() < 0.4])
        u = UnifBase(a.carrier, [diagonal(a.carrier), eps])
        out = saturate_uniformity(a, u)
        from eqprox.uniformity import refines
        assert refines(out, u)


def test_bounded_and_saturated_implies_quasibounded_and_saturated():
    # The composite verdicts must respect the inclusion: being equiuniform
    # is at least as strong as being pi-uniform, on every instance.
    import random

    rng = random.Random(43)
    for germ in (z3_rotation(), z3_rotation(levels=[frozenset({0})])):
        els = list(range(3))
        for _ in range(15):
            eps = Rel(germ.carrier, [(x, y) for x in els for y in els
                                     if x == y or rng.random() < 0.4])
            u = UnifBase(germ.carrier, [diagonal(germ.carrier), eps])
            cls = classify(germ, u)
            assert not cls.equiuniform or cls.pi_uniform
