"""Conversions from general segmentations to direct ones.

``bbm_convert`` pools every segment by posted price. Under the original
(market-only) definition this fails exactly when two prices pool to the same
market; the outcome then carries the colliding price groups. ``revised_convert``
performs the same pooling on (market, price) pairs and always succeeds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ValidationError
from .market import Market, is_in_Xk, mix
from .segmentation import (
    Atom,
    DirectSegmentation,
    Entry,
    JointDistribution,
    PricingRule,
    RevisedSegmentation,
    Segmentation,
    joint_distribution,
    non_optimal_prices,
)


@dataclass(frozen=True)
class Collision:
    prices: tuple[int, ...]
    market: Market


@dataclass(frozen=True)
class ConversionOutcome:
    induced: tuple[Entry, ...]
    direct: DirectSegmentation | None = None
    collisions: tuple[Collision, ...] = ()

    @property
    def success(self) -> bool:
        return self.direct is not None


def joint_equal(a: JointDistribution, b: JointDistribution) -> bool:
    if a.K != b.K:
        raise ValueError(f"joint distributions have different sizes {a.K} and {b.K}")
    return a.mass == b.mass


def induced_markets(seg: Segmentation, rule: PricingRule) -> tuple[Entry, ...]:
    """Pooled market and weight for every price posted with positive probability."""
    K = seg.instance.K
    out = []
    for k in range(K):
        terms = [(w * row[k], x) for x, w, row in zip(seg.markets, seg.weights, rule.rows) if row[k]]
        if not terms:
            continue
        wk = sum(t for t, _ in terms)
        out.append(Entry(k, Market(tuple(v / wk for v in mix(terms))), wk))
    return tuple(out)


def bbm_convert(seg: Segmentation, rule: PricingRule) -> ConversionOutcome:
    """Pool segments by posted price and test the pooled markets for distinctness."""
    if non_optimal_prices(seg, rule):
        raise ValidationError("pricing rule is not optimal for the segmentation")
    induced = induced_markets(seg, rule)
    grid = seg.instance.grid
    for e in induced:
        # convexity of X_k
        assert is_in_Xk(grid, e.market, e.price), e

    groups: dict[Market, list[int]] = {}
    for e in induced:
        groups.setdefault(e.market, []).append(e.price)
    collisions = tuple(Collision(tuple(ks), x) for x, ks in groups.items() if len(ks) > 1)
    if collisions:
        return ConversionOutcome(induced, collisions=collisions)

    direct = DirectSegmentation(seg.instance, induced)
    if not joint_equal(direct.joint_distribution(), joint_distribution(seg, rule)):
        raise AssertionError("pooled direct segmentation changed the joint distribution")
    return ConversionOutcome(induced, direct=direct)


def revised_convert(rho: RevisedSegmentation) -> RevisedSegmentation:
    """Pool atoms by price tag; at most one atom per price in the result."""
    by_price: dict[int, list[tuple[Fraction, Market]]] = {}
    for a in rho.atoms:
        by_price.setdefault(a.price, []).append((a.weight, a.market))
    atoms = []
    for k, terms in sorted(by_price.items()):
        wk = sum(w for w, _ in terms)
        atoms.append(Atom(Market(tuple(v / wk for v in mix(terms))), k, wk))
    out = RevisedSegmentation(rho.instance, tuple(atoms))
    if not joint_equal(out.joint_distribution(), rho.joint_distribution()):
        raise AssertionError("revised conversion changed the joint distribution")
    return out
