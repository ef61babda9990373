from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from segtri.conversion import bbm_convert, induced_markets, joint_equal, revised_convert
from segtri.errors import ValidationError
from segtri.fixtures import example1, example2
from segtri.market import Market, is_in_Xk
from segtri.segmentation import JointDistribution, PricingRule, joint_distribution, revise, surplus
from segtri.verify import random_instance, random_segmentation


def test_example1_collision_and_revised_fix():
    seg, rule = example1()
    out = bbm_convert(seg, rule)
    assert not out.success
    (c,) = out.collisions
    assert c.prices == (0, 1) and c.market == Market((F(1, 2), F(1, 2)))
    fixed = revised_convert(revise(seg, rule))
    assert [(a.price, a.weight) for a in fixed.atoms] == [(0, F(1, 2)), (1, F(1, 2))]
    assert fixed.joint_distribution() == joint_distribution(seg, rule)


def test_example2_collision():
    seg, rule = example2()
    out = bbm_convert(seg, rule)
    assert [e.price for e in out.induced] == [0, 1]
    assert all(e.market == Market((F(1, 2), F(1, 3), F(1, 6))) for e in out.induced)
    assert out.collisions[0].prices == (0, 1)
    fixed = revised_convert(revise(seg, rule))
    assert fixed.surplus() == surplus(seg, rule)


def test_success_case_is_direct():
    seg, rule = example2()
    # post the lowest price everywhere: a single pooled segment equal to the aggregate
    rule = PricingRule.deterministic(3, [0, 0, 0])
    out = bbm_convert(seg, rule)
    assert out.success and len(out.direct.entries) == 1
    assert out.direct.joint_distribution() == joint_distribution(seg, rule)


def test_non_optimal_rule_rejected():
    seg, _ = example2()
    with pytest.raises(ValidationError):
        bbm_convert(seg, PricingRule.deterministic(3, [2, 2, 2]))


def test_joint_equal_size_mismatch():
    a = JointDistribution(((1, 0), (0, 0)))
    b = JointDistribution(((1, 0, 0), (0, 0, 0), (0, 0, 0)))
    with pytest.raises(ValueError):
        joint_equal(a, b)


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 10**6), K=st.integers(2, 5), kind=st.sampled_from(["generic", "tie", "unit"]))
def test_conversions_preserve_everything(seed, K, kind):
    inst = random_instance(seed, K, kind)
    seg, rule = random_segmentation(seed, inst)
    joint = joint_distribution(seg, rule)
    for e in induced_markets(seg, rule):
        assert is_in_Xk(inst.grid, e.market, e.price)
    out = bbm_convert(seg, rule)
    if out.success:
        assert out.direct.joint_distribution() == joint
        assert out.direct.surplus() == surplus(seg, rule)
    else:
        assert all(len(c.prices) > 1 for c in out.collisions)
    fixed = revised_convert(revise(seg, rule))
    assert fixed.is_direct and len(fixed.atoms) <= K
    assert fixed.joint_distribution() == joint
    assert fixed.surplus() == surplus(seg, rule)
