"""Segmentations, pricing rules and surplus accounting.

Three flavours of segmentation live here:

* :class:`Segmentation` -- a distribution over markets (pricing chosen separately
  through a :class:`PricingRule`);
* :class:`RevisedSegmentation` -- a distribution over (market, price) pairs, so two
  segments with the same valuation profile can still carry different prices;
* :class:`DirectSegmentation` -- at most one market per posted price, priced
  deterministically at its own index.

All of them are canonicalized so that exact equality is meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import ValidationError
from .market import (
    Instance,
    Market,
    consumer_surplus,
    mix,
    optimal_price_set,
    rational,
    revenue,
    total_surplus,
)

ZERO = Fraction(0)


class SurplusPoint(NamedTuple):
    u: Fraction
    pi: Fraction


@dataclass(frozen=True)
class Segmentation:
    """Finite-support distribution over markets averaging to the aggregate.

    Construction sorts markets and merges duplicates, so ``markets`` are
    pairwise distinct and in ascending lexicographic order.
    """

    instance: Instance
    markets: tuple[Market, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.markets) != len(self.weights):
            raise ValidationError("markets and weights differ in length")
        merged: dict[Market, Fraction] = {}
        for x, w in zip(self.markets, self.weights):
            if not isinstance(x, Market):
                x = Market(tuple(x))
            w = rational(w)
            if w <= 0:
                raise ValidationError(f"segment weight {w} is not strictly positive")
            if len(x) != self.instance.K:
                raise ValidationError(f"segment {x} does not match K={self.instance.K}")
            merged[x] = merged.get(x, ZERO) + w
        order = sorted(merged)
        object.__setattr__(self, "markets", tuple(order))
        object.__setattr__(self, "weights", tuple(merged[x] for x in order))
        if sum(self.weights) != 1:
            raise ValidationError(f"segment weights sum to {sum(self.weights)}, not 1")
        avg = mix(zip(self.weights, self.markets))
        if avg != self.instance.aggregate.masses:
            raise ValidationError("segments do not average to the aggregate market")

    @classmethod
    def from_pairs(cls, instance: Instance, pairs: Iterable[tuple[Sequence, Fraction]]) -> "Segmentation":
        pairs = list(pairs)
        return cls(instance, tuple(Market(tuple(x)) for x, _ in pairs), tuple(w for _, w in pairs))

    def __len__(self):
        return len(self.markets)

    def index(self, x: Market) -> int:
        return self.markets.index(x)


@dataclass(frozen=True)
class PricingRule:
    """One price distribution per segment, aligned with ``Segmentation.markets``."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(rational(p) for p in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        for r in rows:
            if any(p < 0 for p in r) or sum(r) != 1:
                raise ValidationError(f"pricing row {r} is not a probability vector")

    @classmethod
    def deterministic(cls, K: int, prices: Iterable[int]) -> "PricingRule":
        return cls(tuple(tuple(Fraction(int(j == k)) for j in range(K)) for k in prices))

    @classmethod
    def from_mapping(cls, seg: Segmentation, phi: Mapping[Market, Sequence]) -> "PricingRule":
        """Build the rule from a market -> price-distribution map."""
        return cls(tuple(tuple(phi[x]) for x in seg.markets))

    def mixed(self, other: "PricingRule", weight) -> "PricingRule":
        """``weight * self + (1 - weight) * other``."""
        weight = rational(weight)
        return PricingRule(
            tuple(
                tuple(weight * a + (1 - weight) * b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            )
        )


def with_pricing(instance: Instance, triples: Iterable[tuple[Sequence, Fraction, Sequence]]):
    """Build an aligned ``(Segmentation, PricingRule)`` from (market, weight, row) triples.

    Equal markets are merged; giving them different price rows is rejected,
    since a pricing rule is a function of the market.
    """
    rows: dict[Market, tuple[Fraction, ...]] = {}
    pairs = []
    for x, w, row in triples:
        x = Market(tuple(x))
        row = tuple(rational(p) for p in row)
        if rows.setdefault(x, row) != row:
            raise ValidationError(f"market {x} appears twice with different pricing")
        pairs.append((x, w))
    seg = Segmentation.from_pairs(instance, pairs)
    return seg, PricingRule.from_mapping(seg, rows)


def _check_aligned(seg: Segmentation, rule: PricingRule):
    if len(rule.rows) != len(seg.markets):
        raise ValidationError(f"pricing rule has {len(rule.rows)} rows for {len(seg.markets)} segments")
    if any(len(r) != seg.instance.K for r in rule.rows):
        raise ValidationError("pricing row length does not match K")


def surplus(seg: Segmentation, rule: PricingRule) -> tuple[SurplusPoint, Fraction]:
    """Consumer surplus, producer surplus, and total surplus (each summed separately)."""
    _check_aligned(seg, rule)
    grid = seg.instance.grid
    u = pi = tot = ZERO
    for x, w, row in zip(seg.markets, seg.weights, rule.rows):
        for k, p in enumerate(row):
            if p:
                u += w * p * consumer_surplus(grid, x, k)
                pi += w * p * revenue(grid, x, k)
                tot += w * p * total_surplus(grid, x, k)
    return SurplusPoint(u, pi), tot


@dataclass(frozen=True)
class JointDistribution:
    """``mass[j][k]``: probability of valuation ``j`` meeting price ``k``."""

    mass: tuple[tuple[Fraction, ...], ...]

    @property
    def K(self) -> int:
        return len(self.mass)

    def valuation_marginal(self) -> tuple[Fraction, ...]:
        return tuple(sum(r, ZERO) for r in self.mass)

    def price_marginal(self) -> tuple[Fraction, ...]:
        return tuple(sum((r[k] for r in self.mass), ZERO) for k in range(self.K))

    def conditional(self, k: int) -> tuple[Fraction, ...]:
        """Valuation distribution given price ``k``."""
        tot = self.price_marginal()[k]
        if tot == 0:
            raise ZeroDivisionError(f"price index {k} is never posted")
        return tuple(r[k] / tot for r in self.mass)

    def accounted_surplus(self, values: Sequence[Fraction]) -> Fraction:
        """Value of all trades: sum of ``v_j * mass[j][k]`` over ``j >= k``."""
        return sum(
            (values[j] * self.mass[j][k] for j in range(self.K) for k in range(j + 1)),
            ZERO,
        )


def _joint_from(K: int, terms: Iterable[tuple[Fraction, Market, int]]) -> JointDistribution:
    m = [[ZERO] * K for _ in range(K)]
    for w, x, k in terms:
        for j in range(K):
            m[j][k] += w * x[j]
    return JointDistribution(tuple(tuple(r) for r in m))


def joint_distribution(seg: Segmentation, rule: PricingRule) -> JointDistribution:
    _check_aligned(seg, rule)
    return _joint_from(
        seg.instance.K,
        (
            (w * p, x, k)
            for x, w, row in zip(seg.markets, seg.weights, rule.rows)
            for k, p in enumerate(row)
            if p
        ),
    )


def non_optimal_prices(seg: Segmentation, rule: PricingRule) -> list[tuple[int, int]]:
    """(segment, price) pairs posted with positive probability but not optimal there."""
    _check_aligned(seg, rule)
    bad = []
    for i, (x, row) in enumerate(zip(seg.markets, rule.rows)):
        opt = optimal_price_set(seg.instance.grid, x)
        bad.extend((i, k) for k, p in enumerate(row) if p and k not in opt)
    return bad


def is_optimal_pricing(seg: Segmentation, rule: PricingRule) -> bool:
    return not non_optimal_prices(seg, rule)


def min_pricing(seg: Segmentation) -> PricingRule:
    """Post the lowest optimal price in every segment (the lowest support point on ``x^S``)."""
    grid = seg.instance.grid
    return PricingRule.deterministic(grid.K, (optimal_price_set(grid, x)[0] for x in seg.markets))


def max_pricing(seg: Segmentation) -> PricingRule:
    """Post the highest optimal price in every segment (the highest support point on ``x^S``)."""
    grid = seg.instance.grid
    return PricingRule.deterministic(grid.K, (optimal_price_set(grid, x)[-1] for x in seg.markets))


@dataclass(frozen=True)
class TriangleSummary:
    pi_star: Fraction
    w_star: Fraction

    @property
    def vertices(self) -> tuple[SurplusPoint, SurplusPoint, SurplusPoint]:
        """Uniform-pricing, consumer-optimal and full-extraction corners."""
        return (
            SurplusPoint(ZERO, self.pi_star),
            SurplusPoint(self.w_star - self.pi_star, self.pi_star),
            SurplusPoint(ZERO, self.w_star),
        )

    @property
    def width(self) -> Fraction:
        return self.w_star - self.pi_star


def triangle(instance: Instance) -> TriangleSummary:
    grid, xs = instance.grid, instance.aggregate
    pi_star = max(revenue(grid, xs, k) for k in range(grid.K))
    w_star = sum((v * m for v, m in zip(grid, xs)), ZERO)
    return TriangleSummary(pi_star, w_star)


class Atom(NamedTuple):
    market: Market
    price: int
    weight: Fraction


@dataclass(frozen=True)
class RevisedSegmentation:
    """Distribution over (market, price) pairs; each price must be optimal for its market."""

    instance: Instance
    atoms: tuple[Atom, ...]

    def __post_init__(self):
        merged: dict[tuple[Market, int], Fraction] = {}
        grid = self.instance.grid
        for x, k, w in self.atoms:
            x = x if isinstance(x, Market) else Market(tuple(x))
            w = rational(w)
            if w <= 0:
                raise ValidationError(f"atom weight {w} is not strictly positive")
            if len(x) != grid.K:
                raise ValidationError(f"atom market {x} does not match K={grid.K}")
            if k not in optimal_price_set(grid, x):
                raise ValidationError(f"price index {k} is not optimal for market {x}")
            merged[(x, k)] = merged.get((x, k), ZERO) + w
        atoms = tuple(Atom(x, k, merged[(x, k)]) for x, k in sorted(merged))
        object.__setattr__(self, "atoms", atoms)
        if sum(a.weight for a in atoms) != 1:
            raise ValidationError("atom weights do not sum to 1")
        if mix((a.weight, a.market) for a in atoms) != self.instance.aggregate.masses:
            raise ValidationError("atoms do not average to the aggregate market")

    @property
    def is_direct(self) -> bool:
        prices = [a.price for a in self.atoms]
        return len(prices) == len(set(prices))

    def joint_distribution(self) -> JointDistribution:
        return _joint_from(self.instance.K, ((a.weight, a.market, a.price) for a in self.atoms))

    def surplus(self) -> tuple[SurplusPoint, Fraction]:
        grid = self.instance.grid
        u = sum((a.weight * consumer_surplus(grid, a.market, a.price) for a in self.atoms), ZERO)
        pi = sum((a.weight * revenue(grid, a.market, a.price) for a in self.atoms), ZERO)
        tot = sum((a.weight * total_surplus(grid, a.market, a.price) for a in self.atoms), ZERO)
        return SurplusPoint(u, pi), tot


def revise(seg: Segmentation, rule: PricingRule) -> RevisedSegmentation:
    """Lift ``(seg, rule)`` to a distribution over (market, price) pairs.

    Raises ``ValidationError`` if the rule posts a non-optimal price.
    """
    bad = non_optimal_prices(seg, rule)
    if bad:
        i, k = bad[0]
        raise ValidationError(f"price index {k} is not optimal in segment {seg.markets[i]}")
    atoms = tuple(
        Atom(x, k, w * p)
        for x, w, row in zip(seg.markets, seg.weights, rule.rows)
        for k, p in enumerate(row)
        if p
    )
    return RevisedSegmentation(seg.instance, atoms)


class Entry(NamedTuple):
    price: int
    market: Market
    weight: Fraction


@dataclass(frozen=True)
class DirectSegmentation:
    """At most one segment per price index, each priced at its own index.

    With ``check=False`` the invariants are not enforced, which lets the
    verifier inspect hand-edited or tampered inputs.
    """

    instance: Instance
    entries: tuple[Entry, ...]
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        entries = tuple(
            sorted(Entry(int(k), x if isinstance(x, Market) else Market(tuple(x)), rational(w)) for k, x, w in self.entries)
        )
        object.__setattr__(self, "entries", entries)
        if self.check:
            problems = self.problems()
            if problems:
                raise ValidationError("; ".join(problems))

    @classmethod
    def from_mapping(cls, instance: Instance, entries: Mapping[int, tuple[Market, Fraction]], check=True):
        return cls(instance, tuple(Entry(k, x, w) for k, (x, w) in entries.items()), check)

    def problems(self) -> list[str]:
        """Human-readable invariant violations (empty when valid)."""
        out = []
        K = self.instance.K
        prices = [e.price for e in self.entries]
        if len(set(prices)) != len(prices):
            out.append("a price index appears more than once")
        for e in self.entries:
            if not 0 <= e.price < K or len(e.market) != K:
                out.append(f"entry at price index {e.price} is out of shape for K={K}")
                return out
            if e.weight <= 0:
                out.append(f"weight {e.weight} at price index {e.price} is not positive")
            if e.price not in optimal_price_set(self.instance.grid, e.market):
                out.append(f"price index {e.price} is not optimal for its market {e.market}")
        if sum(e.weight for e in self.entries) != 1:
            out.append("weights do not sum to 1")
        elif mix((e.weight, e.market) for e in self.entries) != self.instance.aggregate.masses:
            out.append("segments do not average to the aggregate market")
        markets = [e.market for e in self.entries]
        if len(set(markets)) != len(markets):
            out.append("two price indices share the same market")
        return out

    def as_dict(self) -> dict[int, tuple[Market, Fraction]]:
        return {e.price: (e.market, e.weight) for e in self.entries}

    def joint_distribution(self) -> JointDistribution:
        return _joint_from(self.instance.K, ((e.weight, e.market, e.price) for e in self.entries))

    def surplus(self) -> tuple[SurplusPoint, Fraction]:
        grid = self.instance.grid
        u = sum((e.weight * consumer_surplus(grid, e.market, e.price) for e in self.entries), ZERO)
        pi = sum((e.weight * revenue(grid, e.market, e.price) for e in self.entries), ZERO)
        tot = sum((e.weight * total_surplus(grid, e.market, e.price) for e in self.entries), ZERO)
        return SurplusPoint(u, pi), tot

    def to_segmentation(self) -> tuple[Segmentation, PricingRule]:
        """The same object as an ordinary ``(Segmentation, PricingRule)`` pair."""
        K = self.instance.K
        return with_pricing(
            self.instance,
            ((e.market, e.weight, [int(j == e.price) for j in range(K)]) for e in self.entries),
        )
