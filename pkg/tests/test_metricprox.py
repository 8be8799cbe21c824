import random
from fractions import Fraction as F

import pytest

from eqprox.equivariant import compute_ug
from eqprox.errors import PreconditionFailure
from eqprox.gaction import FiniteGroup, GActionGerm, NeighborhoodBase, classify
from eqprox.metricprox import FiniteMetric, PseudometricFamily, \
    family_uniformity, is_isometric, metric_g_proximity, metric_uniformity, \
    sup_pseudometric, xi_report, xi_uniformity
from eqprox.proximity import Prox, from_uniformity
from eqprox.setrel import Carrier
from eqprox.uniformity import refinement_equivalent, refines, validate_basis


def four_cycle():
    c = Carrier(range(4))

    def d(i, j):
        k = abs(i - j)
        return min(k, 4 - k)

    metric = FiniteMetric(c, [[d(i, j) for j in range(4)] for i in range(4)])
    g = FiniteGroup.cyclic(4)
    act = [tuple((x + k) % 4 for x in range(4)) for k in range(4)]
    germ = GActionGerm(g, NeighborhoodBase(g, [frozenset(range(4))]), c, act)
    return metric, germ


def test_metric_validation():
    c = Carrier(range(3))
    with pytest.raises(ValueError, match="symmetric|asymmetric"):
        FiniteMetric(c, [[0, 1, 1], [2, 0, 1], [1, 1, 0]])
    with pytest.raises(ValueError, match="triangle"):
        FiniteMetric(c, [[0, 1, 3], [1, 0, 1], [3, 1, 0]])
    with pytest.raises(ValueError, match="self-distance"):
        FiniteMetric(c, [[1, 1, 1], [1, 0, 1], [1, 1, 0]])
    with pytest.raises(ValueError, match="distinct"):
        FiniteMetric(c, [[0, 0, 1], [0, 0, 1], [1, 1, 0]])
    FiniteMetric(c, [[0, 0, 1], [0, 0, 1], [1, 1, 0]], pseudo=True)


def test_metric_uniformity_threshold_structure():
    c2 = Carrier(["a", "b"])
    u = metric_uniformity(FiniteMetric(c2, [[0, 1], [1, 0]]))
    assert sorted(len(e.pairs) for e in u.basis) == [2, 4]
    assert validate_basis(u).ok()
    c3 = Carrier(range(3))
    u3 = metric_uniformity(FiniteMetric(c3, [[0, 1, 2], [1, 0, 1], [2, 1, 0]]))
    assert len({e.pairs for e in u3.basis}) == 3
    assert validate_basis(u3).ok()


def test_sub_minimum_level_is_the_diagonal():
    metric, _ = four_cycle()
    u = metric_uniformity(metric)
    finest = min(u.basis, key=lambda e: len(e.pairs))
    assert finest.pairs == {(x, x) for x in metric.carrier.elements}


def test_finite_metric_proximity_is_overlap():
    c3 = Carrier(range(3))
    m = FiniteMetric(c3, [[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    assert from_uniformity(metric_uniformity(m)) == Prox.overlap(c3)


def test_sup_pseudometric_identity_subset():
    metric, germ = four_cycle()
    fam = PseudometricFamily(metric.carrier, [metric])
    out = sup_pseudometric(fam, germ, {"e"}, 0)
    assert out.dist == metric.dist


def test_sup_pseudometric_invariant_metric():
    metric, germ = four_cycle()
    assert is_isometric(metric, germ)
    fam = PseudometricFamily(metric.carrier, [metric])
    out = sup_pseudometric(fam, germ, set(germ.group.names), 0)
    assert out.dist == metric.dist


def test_sup_pseudometric_s3_example():
    c = Carrier(range(3))
    m = FiniteMetric(c, [[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    g, perms = FiniteGroup.from_permutations([(1, 0, 2), (1, 2, 0)])
    germ = GActionGerm(g, NeighborhoodBase(g, [frozenset(range(6))]), c, perms)
    fam = PseudometricFamily(c, [m])
    out = sup_pseudometric(fam, germ, set(g.names), 0)
    assert out.d(0, 1) == F(2)


def test_sup_pseudometric_monotone_in_the_subset():
    metric, germ = four_cycle()
    fam = PseudometricFamily(metric.carrier, [metric])
    rng = random.Random(8)
    names = list(germ.group.names)
    for _ in range(20):
        small = {nm for nm in names if rng.random() < 0.5} | {"e"}
        big = small | {nm for nm in names if rng.random() < 0.5}
        ds = sup_pseudometric(fam, germ, small, 0)
        db = sup_pseudometric(fam, germ, big, 0)
        for i in range(4):
            for j in range(4):
                assert ds.dist[i][j] <= db.dist[i][j]
    with pytest.raises(PreconditionFailure):
        sup_pseudometric(fam, germ, set(), 0)


def test_xi_uniformity_identity_family():
    metric, germ = four_cycle()
    fam = PseudometricFamily(metric.carrier, [metric])
    xi = xi_uniformity(fam, germ, [frozenset({germ.group.e})])
    assert validate_basis(xi).ok()
    assert refinement_equivalent(xi, family_uniformity(fam))


def test_xi_uniformity_invariant_whole_group():
    metric, germ = four_cycle()
    fam = PseudometricFamily(metric.carrier, [metric])
    xi = xi_uniformity(fam, germ, [frozenset(range(4))])
    assert refinement_equivalent(xi, family_uniformity(fam))
    assert classify(germ, xi).quasibounded
    assert refines(xi, family_uniformity(fam))


def test_xi_report_cases():
    metric, germ = four_cycle()
    fam = PseudometricFamily(metric.carrier, [metric])
    rep = xi_report(fam, germ, [frozenset(range(4))])
    assert rep.ok()
    assert rep.quasibounded == "pass"
    rep2 = xi_report(fam, germ, [frozenset({germ.group.e})])
    assert rep2.ok()
    assert rep2.quasibounded == "n/a"  # {e}.V = G is not inside {e}
    assert rep2.refinement == "pass"


def test_metric_g_proximity_discrete_germ():
    c = Carrier(range(3))
    m = FiniteMetric(c, [[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    g = FiniteGroup.cyclic(1)
    germ = GActionGerm(g, NeighborhoodBase(g, [frozenset({0})]), c, [(0, 1, 2)])
    assert metric_g_proximity(m, germ) == Prox.overlap(c)


def test_metric_g_proximity_transitive_rotation():
    metric, germ = four_cycle()
    p = metric_g_proximity(metric, germ)
    assert p.near({0}, {2})
    assert p == Prox.nonempty_pairs(metric.carrier)


def test_metric_g_proximity_matches_derived_uniformity():
    metric, germ = four_cycle()
    derived = from_uniformity(compute_ug(germ, metric_uniformity(metric)))
    assert metric_g_proximity(metric, germ) == derived


def test_metric_g_proximity_precondition():
    # A genuine finite metric always induces the discrete uniformity, where
    # every translation is uniformly continuous; failing the hypothesis
    # needs a pseudometric whose kernel the action breaks.
    c = Carrier(range(3))
    m = FiniteMetric(c, [[0, 0, 1], [0, 0, 1], [1, 1, 0]], pseudo=True)
    g = FiniteGroup.cyclic(2)
    germ = GActionGerm(g, NeighborhoodBase(g, [frozenset({0, 1})]), c,
                       [(0, 1, 2), (0, 2, 1)])
    assert not is_isometric(m, germ)
    assert not classify(germ, metric_uniformity(m)).saturated
    with pytest.raises(PreconditionFailure):
        metric_g_proximity(m, germ)


def test_isometric_shortcut():
    metric, germ = four_cycle()
    cls = classify(germ, metric_uniformity(metric))
    assert cls.uniformly_equicontinuous
    assert cls.pi_uniform
    metric_g_proximity(metric, germ)  # defined without further hypotheses
