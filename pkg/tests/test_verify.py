import random
from fractions import Fraction as F

import pytest

from segtri.fixtures import EXAMPLE2_SEGMENTS
from segtri.market import Instance, Market, ValuationGrid, optimal_price_set
from segtri.segmentation import DirectSegmentation, Entry, joint_distribution
from segtri.synthesis import synthesize_direct
from segtri.verify import (
    INSTANCE_KINDS,
    brute_optimal_prices,
    equal_revenue_witness,
    prop3_search,
    random_instance,
    random_segmentation,
    verify_direct,
)

UNIT3 = Instance.from_values((1, 2, 3), (F(1, 2), F(1, 6), F(1, 3)))
INST2 = Instance.from_values((1, 2, 3), (F(1, 2), F(1, 3), F(1, 6)))


def test_brute_matches_optimal_price_set():
    rng = random.Random(7)
    for _ in range(10_000):
        K = rng.randint(2, 6)
        grid = ValuationGrid(tuple(sorted(rng.sample(range(1, 12), K))))
        # small integer masses make ties frequent
        ints = [rng.randint(0, 4) for _ in range(K)]
        if not any(ints):
            ints[0] = 1
        x = Market(tuple(F(i, sum(ints)) for i in ints))
        assert brute_optimal_prices(grid, x) == optimal_price_set(grid, x)


def test_verify_accepts_synthesized():
    res = synthesize_direct(INST2, F(1, 3), F(7, 6))
    rep = verify_direct(INST2, res.direct, target=(F(1, 3), F(7, 6)))
    assert rep.overall and not rep.failures
    assert "overall: pass" in str(rep)


def test_verify_flags_non_optimal_price():
    # the example2 segments with (1/2, 1/2, 0) moved to price index 2, where it sells nothing
    (x0, w0, _), (x1, w1, _), (x2, w2, _) = EXAMPLE2_SEGMENTS
    d = DirectSegmentation(INST2, (Entry(0, Market(x0), w0), Entry(2, Market(x1), w1), Entry(1, Market(x2), w2)),
                           check=False)
    rep = verify_direct(INST2, d)
    assert not rep.overall
    assert [c.name for c in rep.failures] == ["optimal[2]"]


def test_verify_flags_shared_market_and_bad_average():
    x = Market((F(1, 2), F(1, 3), F(1, 6)))
    d = DirectSegmentation(INST2, (Entry(0, x, F(1, 2)), Entry(1, x, F(1, 2))), check=False)
    assert [c.name for c in verify_direct(INST2, d).failures] == ["distinct-markets"]
    d = DirectSegmentation(INST2, (Entry(0, Market((1, 0, 0)), F(1, 2)), Entry(1, x, F(1, 2))), check=False)
    names = [c.name for c in verify_direct(INST2, d).failures]
    assert "average" in names


def test_verify_flags_wrong_target():
    res = synthesize_direct(INST2, 0, 1)
    rep = verify_direct(INST2, res.direct, target=(F(1, 10), 1))
    assert [c.name for c in rep.failures] == ["surplus"]


def test_verify_shape():
    d = DirectSegmentation(INST2, (Entry(5, Market((1, 0, 0)), 1),), check=False)
    rep = verify_direct(INST2, d)
    assert [c.name for c in rep.failures] == ["shape"]


def test_equal_revenue_witness():
    single = DirectSegmentation(UNIT3, (Entry(1, UNIT3.aggregate, 1),))
    assert equal_revenue_witness(UNIT3, single).overall
    # y priced at 0 and z at 2 both earn 1, but z earns 7/6 at price index 1
    y = Market((F(7, 12), F(1, 12), F(1, 3)))
    z = Market((F(5, 12), F(1, 4), F(1, 3)))
    d = DirectSegmentation(UNIT3, (Entry(0, y, F(1, 2)), Entry(2, z, F(1, 2))), check=False)
    assert d.surplus()[0].pi == 1
    rep = equal_revenue_witness(UNIT3, d)
    assert not rep.overall
    assert "revenue at price index 1 is 7/6" in str(rep)
    assert not verify_direct(UNIT3, d).overall


def test_random_instances_are_deterministic():
    for kind in INSTANCE_KINDS:
        for K in (2, 3, 5):
            assert random_instance(11, K, kind) == random_instance(11, K, kind)
    a = random_instance(3, 4, "tie")
    assert random_segmentation(5, a) == random_segmentation(5, a)


def test_random_instance_kinds():
    for seed in range(30):
        for K in (3, 4, 5):
            P = optimal_price_set(*_parts(random_instance(seed, K, "tie")))
            assert len(P) >= 2
            P = optimal_price_set(*_parts(random_instance(seed, K, "endpoint-tie")))
            assert P[0] == 0 and P[-1] == K - 1 and len(P) < K
            assert random_instance(seed, K, "generic").aggregate != random_instance(seed, K, "unit").aggregate
    with pytest.raises(ValueError):
        random_instance(0, 3, "bogus")


def _parts(inst):
    return inst.grid, inst.aggregate


def test_random_segmentation_is_valid():
    for seed in range(50):
        inst = random_instance(seed, 2 + seed % 4, INSTANCE_KINDS[seed % 4])
        seg, rule = random_segmentation(seed, inst)
        assert joint_distribution(seg, rule).valuation_marginal() == inst.aggregate.masses


def test_prop3_search():
    rep = prop3_search(UNIT3, 200, seed=1)
    assert rep.overall
    with pytest.raises(ValueError):
        prop3_search(INST2, 10)
