"""Brute-force checks and seeded random generators.

Nothing in here trusts the optimized paths: optimal prices are found by
exhaustive pairwise comparison, and surplus is recomputed consumer by consumer.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .market import (
    Instance,
    Market,
    ValuationGrid,
    decompose_in_Xk,
    extremal_market,
    mix,
    optimal_price_set,
    subsets_between,
)
from .segmentation import DirectSegmentation, PricingRule, Segmentation, surplus, triangle

ZERO = Fraction(0)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: str = ""


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, passed: bool, witness: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), witness))
        return passed

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __str__(self):
        lines = []
        for c in self.checks:
            tag = "ok  " if c.passed else "FAIL"
            lines.append(f"{tag} {c.name}" + (f": {c.witness}" if c.witness else ""))
        lines.append("overall: " + ("pass" if self.overall else "fail"))
        return "\n".join(lines)


def brute_optimal_prices(grid: ValuationGrid, x) -> tuple[int, ...]:
    """Optimal price indices by comparing every pair of candidate prices."""
    K = len(grid)
    rev = []
    for k in range(K):
        buyers = [x[j] for j in range(K) if grid[j] >= grid[k]]
        rev.append(grid[k] * sum(buyers, ZERO))
    return tuple(k for k in range(K) if all(rev[k] >= rev[i] for i in range(K)))


def _label(k: int) -> str:
    return f"price index {k}"


def verify_direct(instance: Instance, d: DirectSegmentation, target=None) -> VerificationReport:
    """Check every direct-segmentation invariant; optionally compare against a target (u, pi)."""
    rep = VerificationReport()
    grid, xs, K = instance.grid, instance.aggregate, instance.K
    entries = d.entries
    prices = [e.price for e in entries]

    shape_ok = all(0 <= e.price < K and len(e.market) == K for e in entries) and len(entries) <= K
    rep.add("shape", shape_ok and len(set(prices)) == len(prices), f"prices {prices}")
    if not shape_ok:
        return rep
    bad_w = [e.price for e in entries if e.weight <= 0]
    rep.add("weights-positive", not bad_w, f"nonpositive weight at {bad_w}" if bad_w else "")
    total = sum((e.weight for e in entries), ZERO)
    rep.add("weights-sum", total == 1, f"weights sum to {total}")
    bad_m = [e.price for e in entries if any(m < 0 for m in e.market) or sum(e.market) != 1]
    rep.add("markets-valid", not bad_m, f"invalid market at {bad_m}" if bad_m else "")

    avg = tuple(sum((e.weight * e.market[j] for e in entries), ZERO) for j in range(K))
    rep.add("average", avg == tuple(xs), "average " + "(" + ", ".join(map(str, avg)) + ")")

    for e in entries:
        opt = brute_optimal_prices(grid, e.market)
        rep.add(f"optimal[{e.price}]", e.price in opt,
                f"{_label(e.price)} posted on {e.market}, optimal set {opt}")

    seen: dict = {}
    clash = []
    for e in entries:
        if e.market.masses in seen:
            clash.append((seen[e.market.masses], e.price))
        seen.setdefault(e.market.masses, e.price)
    rep.add("distinct-markets", not clash, f"shared market at price indices {clash}" if clash else "")

    # per consumer type: buys iff valuation >= posted price
    u = pi = ZERO
    for e in entries:
        p = grid[e.price]
        for j in range(K):
            if grid[j] >= p:
                u += e.weight * e.market[j] * (grid[j] - p)
                pi += e.weight * e.market[j] * p
    if target is not None:
        tu, tp = (Fraction(t) for t in target)
        rep.add("surplus", (u, pi) == (tu, tp), f"achieved ({u}, {pi}), target ({tu}, {tp})")
    else:
        rep.add("surplus", True, f"achieved ({u}, {pi})")
    return rep


def equal_revenue_witness(instance: Instance, d: DirectSegmentation) -> VerificationReport:
    """Deductive check behind the unit-elastic bottom edge.

    If the aggregate is equal-revenue and a direct segmentation earns exactly
    the uniform-price profit ``v_1``, optimality forces every segment to earn
    ``v_1`` at every price, i.e. to equal the aggregate. Segments breaking the
    forced equality are reported, as is any second segment (which would
    duplicate the aggregate and so cannot be distinct).
    """
    rep = VerificationReport()
    grid, K = instance.grid, instance.K
    v1 = grid[0]
    for e in d.entries:
        revs = [grid[k] * sum(e.market.masses[k:], ZERO) for k in range(K)]
        off = [(k, r) for k, r in enumerate(revs) if r != v1]
        rep.add(
            f"equal-revenue[{e.price}]",
            not off,
            ", ".join(f"revenue at price index {k} is {r} != {v1}" for k, r in off),
        )
    if rep.overall and len(d.entries) > 1:
        rep.add("single-support", False, f"{len(d.entries)} segments all equal to the aggregate")
    return rep


def random_rational(rng: random.Random, lo: int = 1, hi: int = 60) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, 4))


def _random_grid(rng: random.Random, K: int) -> ValuationGrid:
    den = rng.randint(1, 3)
    nums = sorted(rng.sample(range(1, 6 * K + 1), K))
    return ValuationGrid(tuple(Fraction(n, den) for n in nums))


def _random_weights(rng: random.Random, n: int, budget: int = 60) -> list[Fraction]:
    top = max(1, budget // n)
    ints = [rng.randint(1, top) for _ in range(n)]
    s = sum(ints)
    return [Fraction(i, s) for i in ints]


INSTANCE_KINDS = ("generic", "tie", "endpoint-tie", "unit")


def random_instance(seed: int, K: int, kind: str = "generic") -> Instance:
    """Seeded random instance.

    ``kind`` selects the aggregate: ``"generic"`` (random full-support masses,
    never equal-revenue), ``"tie"`` (several optimal prices), ``"endpoint-tie"``
    (lowest and highest price both optimal, not all prices), ``"unit"``
    (the equal-revenue market over the whole grid).
    """
    if kind not in INSTANCE_KINDS:
        raise ValueError(f"unknown instance kind {kind!r}")
    rng = random.Random(f"instance:{seed}:{K}:{kind}")
    grid = _random_grid(rng, K)
    full = tuple(range(K))
    if kind == "unit":
        return Instance(grid, extremal_market(grid, full))
    if kind == "generic" or (kind == "endpoint-tie" and K < 3):
        while True:
            xs = Market(tuple(_random_weights(rng, K)))
            if xs != extremal_market(grid, full):
                return Instance(grid, xs)
    if kind == "tie":
        P = tuple(sorted(rng.sample(range(K), rng.randint(2, K - 1)))) if K > 2 else (rng.randrange(K),)
    else:
        inner = [j for j in range(1, K - 1) if rng.random() < 0.4]
        if len(inner) == K - 2:
            inner = inner[:-1]
        P = tuple(sorted({0, K - 1, *inner}))
    family = subsets_between(K, lower=P)
    weights = _random_weights(rng, len(family), budget=12)
    xs = Market(mix((w, extremal_market(grid, S)) for w, S in zip(weights, family)))
    return Instance(grid, xs)


def random_segmentation(seed: int, instance: Instance) -> tuple[Segmentation, PricingRule]:
    """Seeded random segmentation with a random optimal pricing rule.

    Pieces of the aggregate (extremal-market decomposition terms and point
    masses) are split and regrouped at random; each group becomes a segment.
    """
    rng = random.Random(f"segmentation:{seed}")
    grid, xs, K = instance.grid, instance.aggregate, instance.K

    theta = Fraction(rng.randint(0, 4), 4)
    pieces: list[tuple[Fraction, Market]] = []
    if theta:
        k = rng.choice(optimal_price_set(grid, xs))
        for S, a in decompose_in_Xk(grid, xs, k).terms:
            pieces.append((theta * a, extremal_market(grid, S)))
    if theta < 1:
        for j in range(K):
            pieces.append(((1 - theta) * xs[j], extremal_market(grid, (j,))))

    split = []
    for w, x in pieces:
        if rng.random() < 0.5:
            f = Fraction(rng.randint(1, 3), 4)
            split += [(w * f, x), (w * (1 - f), x)]
        else:
            split.append((w, x))

    m = rng.randint(1, len(split))
    groups: list[list[tuple[Fraction, Market]]] = [[] for _ in range(m)]
    for i, piece in enumerate(split):
        groups[i if i < m else rng.randrange(m)].append(piece)

    pairs = []
    for g in groups:
        wg = sum(w for w, _ in g)
        pairs.append((Market(tuple(v / wg for v in mix(g))), wg))
    seg = Segmentation.from_pairs(instance, pairs)

    rows = []
    for x in seg.markets:
        opt = optimal_price_set(grid, x)
        row = [ZERO] * K
        if len(opt) == 1 or rng.random() < 0.5:
            row[rng.choice(opt)] = Fraction(1)
        else:
            ws = _random_weights(rng, len(opt), budget=8)
            for k, w in zip(opt, ws):
                row[k] = w
        rows.append(tuple(row))
    return seg, PricingRule(tuple(rows))


def prop3_search(instance: Instance, trials: int, seed: int = 0) -> VerificationReport:
    """Look for a multi-segment direct segmentation earning exactly the uniform profit.

    Only meaningful (and only allowed) when the aggregate is equal-revenue.
    Random direct segmentations come from pooling random optimal
    segmentations; every candidate at the uniform profit is also run through
    :func:`equal_revenue_witness`. Sampling cannot prove that none exists;
    the deductive check is what carries that direction.
    """
    from .conversion import bbm_convert

    grid, xs, K = instance.grid, instance.aggregate, instance.K
    if xs != extremal_market(grid, range(K)):
        raise ValueError("prop3_search needs an equal-revenue aggregate market")
    pi_star = triangle(instance).pi_star
    rep = VerificationReport()
    direct = hits = 0
    violations = []
    for t in range(trials):
        seg, rule = random_segmentation(seed * 1_000_003 + t, instance)
        # pooling preserves profit, so only candidates at the uniform profit matter
        if surplus(seg, rule)[0].pi != pi_star:
            continue
        hits += 1
        out = bbm_convert(seg, rule)
        if not out.success:
            continue
        direct += 1
        d = out.direct
        single = len(d.entries) == 1 and d.entries[0].market == xs
        if not single or not equal_revenue_witness(instance, d).overall:
            violations.append(d)
    rep.add("search", not violations,
            f"{trials} trials, {hits} at the uniform profit, {direct} of those direct, {len(violations)} violations")
    return rep
