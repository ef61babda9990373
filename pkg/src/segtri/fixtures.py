"""The two counterexample instances, with their segmentations and pricing rules."""

from __future__ import annotations

from fractions import Fraction as F

from .market import Instance
from .segmentation import PricingRule, Segmentation, with_pricing

EXAMPLE1_VALUES = (1, 2)
EXAMPLE1_AGGREGATE = (F(1, 2), F(1, 2))

EXAMPLE2_VALUES = (1, 2, 3)
EXAMPLE2_AGGREGATE = (F(1, 2), F(1, 3), F(1, 6))
# (market, weight, posted price index)
EXAMPLE2_SEGMENTS = (
    ((F(1, 2), F(1, 6), F(1, 3)), F(1, 4), 0),
    ((F(1, 2), F(1, 2), F(0)), F(1, 4), 0),
    ((F(1, 2), F(1, 3), F(1, 6)), F(1, 2), 1),
)


def example1() -> tuple[Segmentation, PricingRule]:
    """One segment (the aggregate), both prices posted with probability 1/2."""
    inst = Instance.from_values(EXAMPLE1_VALUES, EXAMPLE1_AGGREGATE)
    return with_pricing(inst, [(EXAMPLE1_AGGREGATE, F(1), (F(1, 2), F(1, 2)))])


def example2() -> tuple[Segmentation, PricingRule]:
    """Three segments, deterministic pricing, two prices pooling to the same market."""
    inst = Instance.from_values(EXAMPLE2_VALUES, EXAMPLE2_AGGREGATE)
    return with_pricing(
        inst,
        [(x, w, tuple(int(j == k) for j in range(3))) for x, w, k in EXAMPLE2_SEGMENTS],
    )


DEMOS = {"example1": example1, "example2": example2}
