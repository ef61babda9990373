from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from segtri.errors import ValidationError
from segtri.fixtures import example1, example2
from segtri.market import Instance, Market
from segtri.segmentation import (
    Atom,
    DirectSegmentation,
    Entry,
    PricingRule,
    RevisedSegmentation,
    Segmentation,
    is_optimal_pricing,
    joint_distribution,
    max_pricing,
    min_pricing,
    non_optimal_prices,
    revise,
    surplus,
    triangle,
    with_pricing,
)
from segtri.verify import random_instance, random_segmentation

INST1 = Instance.from_values((1, 2), (F(1, 2), F(1, 2)))
INST2 = Instance.from_values((1, 2, 3), (F(1, 2), F(1, 3), F(1, 6)))


def by_consumer(instance, triples):
    """Surplus summed one valuation type at a time: buy iff valuation >= price."""
    v = instance.grid.values
    u = pi = F(0)
    for x, w, row in triples:
        for k, p in enumerate(row):
            for j, m in enumerate(x):
                if v[j] >= v[k]:
                    u += w * p * m * (v[j] - v[k])
                    pi += w * p * m * v[k]
    return u, pi


def test_example1_surplus():
    seg, rule = example1()
    pt, tot = surplus(seg, rule)
    # price 1: u = 1/2, pi = 1; price 2: u = 0, pi = 1; each posted with prob 1/2
    assert (pt.u, pt.pi, tot) == (F(1, 4), 1, F(5, 4))
    assert by_consumer(INST1, [((F(1, 2), F(1, 2)), 1, (F(1, 2), F(1, 2)))]) == (pt.u, pt.pi)


def test_example2_surplus_and_joint():
    seg, rule = example2()
    pt, tot = surplus(seg, rule)
    assert (pt.u, pt.pi, tot) == (F(5, 12), 1, F(17, 12))
    assert tot == pt.u + pt.pi
    joint = joint_distribution(seg, rule)
    assert joint.price_marginal() == (F(1, 2), F(1, 2), 0)
    assert joint.valuation_marginal() == INST2.aggregate.masses
    assert joint.conditional(0) == joint.conditional(1) == (F(1, 2), F(1, 3), F(1, 6))
    assert joint.accounted_surplus(INST2.grid.values) == tot


def test_segmentation_merges_and_sorts():
    seg = Segmentation.from_pairs(INST1, [((F(1, 2), F(1, 2)), F(1, 3)), ((F(1, 2), F(1, 2)), F(2, 3))])
    assert seg.markets == (Market((F(1, 2), F(1, 2))),) and seg.weights == (1,)
    seg = Segmentation.from_pairs(INST1, [((0, 1), F(1, 2)), ((1, 0), F(1, 2))])
    assert seg.markets == (Market((0, 1)), Market((1, 0)))


def test_segmentation_rejects_bad_input():
    with pytest.raises(ValidationError):
        Segmentation.from_pairs(INST1, [((1, 0), F(1, 2)), ((1, 0), F(1, 2))])
    with pytest.raises(ValidationError):
        Segmentation.from_pairs(INST1, [((1, 0), F(1, 2)), ((0, 1), F(1, 3))])
    with pytest.raises(ValidationError):
        Segmentation.from_pairs(INST1, [((1, 0), F(1, 2)), ((0, 1), F(1, 2)), ((F(1, 2), F(1, 2)), 0)])
    with pytest.raises(ValidationError):
        with_pricing(INST1, [((1, 0), F(1, 2), (1, 0)), ((1, 0), F(0), (0, 1))])


def test_with_pricing_rejects_conflicting_rows():
    x = (F(1, 2), F(1, 2))
    with pytest.raises(ValidationError):
        with_pricing(INST1, [(x, F(1, 2), (1, 0)), (x, F(1, 2), (0, 1))])


def test_pricing_rule_validation():
    with pytest.raises(ValidationError):
        PricingRule(((F(1, 2), F(1, 3)),))
    with pytest.raises(ValidationError):
        PricingRule(((F(3, 2), F(-1, 2)),))
    r = PricingRule.deterministic(3, [0, 2])
    assert r.rows == ((1, 0, 0), (0, 0, 1))
    assert r.mixed(PricingRule.deterministic(3, [1, 1]), F(1, 4)).rows == (
        (F(1, 4), F(3, 4), 0),
        (0, F(3, 4), F(1, 4)),
    )


def test_optimality_checks():
    seg, rule = example2()
    assert is_optimal_pricing(seg, rule)
    bad = PricingRule.deterministic(3, [2, 2, 2])
    assert non_optimal_prices(seg, bad) == [(1, 2), (2, 2)]
    assert not is_optimal_pricing(seg, bad)
    with pytest.raises(ValidationError):
        revise(seg, bad)
    assert is_optimal_pricing(seg, min_pricing(seg))
    assert is_optimal_pricing(seg, max_pricing(seg))


def test_triangle():
    tri = triangle(INST2)
    assert (tri.pi_star, tri.w_star, tri.width) == (1, F(5, 3), F(2, 3))
    assert tri.vertices == ((0, 1), (F(2, 3), 1), (0, F(5, 3)))


def test_revised_and_direct_validation():
    x = Market((F(1, 2), F(1, 2)))
    with pytest.raises(ValidationError):
        RevisedSegmentation(INST1, (Atom(Market((1, 0)), 1, F(1, 2)), Atom(Market((0, 1)), 1, F(1, 2))))
    rho = RevisedSegmentation(INST1, (Atom(x, 0, F(1, 2)), Atom(x, 1, F(1, 4)), Atom(x, 1, F(1, 4))))
    assert len(rho.atoms) == 2 and rho.is_direct
    d = DirectSegmentation(INST1, (Entry(1, x, 1),))
    assert d.surplus()[0] == (0, 1)
    with pytest.raises(ValidationError):
        DirectSegmentation(INST1, (Entry(0, x, F(1, 2)), Entry(1, x, F(1, 2))))
    loose = DirectSegmentation(INST1, (Entry(0, x, F(1, 2)), Entry(1, x, F(1, 2))), check=False)
    assert "two price indices share the same market" in loose.problems()


def test_direct_round_trip_through_general():
    d = DirectSegmentation(INST2, (Entry(0, Market((F(1, 2), F(1, 6), F(1, 3))), F(1, 2)),
                                   Entry(1, Market((F(1, 2), F(1, 2), 0)), F(1, 2))))
    seg, rule = d.to_segmentation()
    assert surplus(seg, rule) == d.surplus()
    assert joint_distribution(seg, rule) == d.joint_distribution()


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6), K=st.integers(2, 5), kind=st.sampled_from(["generic", "tie", "unit"]))
def test_surplus_matches_consumer_accounting(seed, K, kind):
    inst = random_instance(seed, K, kind)
    seg, rule = random_segmentation(seed, inst)
    pt, tot = surplus(seg, rule)
    assert (pt.u, pt.pi) == by_consumer(inst, zip(seg.markets, seg.weights, rule.rows))
    assert tot == pt.u + pt.pi
    tri = triangle(inst)
    assert pt.u >= 0 and pt.pi >= tri.pi_star and tot <= tri.w_star
    joint = joint_distribution(seg, rule)
    assert joint.valuation_marginal() == inst.aggregate.masses
    assert sum(joint.price_marginal()) == 1
