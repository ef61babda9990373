"""Constructing direct segmentations for a target (consumer, producer) surplus pair.

The feasible region is the surplus triangle ``u >= 0, pi >= pi*, u + pi <= w*``.
Direct segmentations reach all of it unless the aggregate market is the
equal-revenue market over the whole grid, in which case the bottom edge
``pi == pi*`` is reachable only at ``K`` isolated points.

Routes (see :func:`synthesize_direct`):

* ``"perfect-mix"``   pi > pi*: blend perfect discrimination with an extremal
  decomposition of the aggregate, price by a min/max mixture, pool by price;
* ``"unit-elastic"``  pi == pi*, aggregate equal-revenue: a single segment;
* ``"interior-max"`` / ``"interior-min"`` / ``"interior-mix"``  pi == pi*: a strictly
  positive decomposition over ``{x^S : P <= S}`` priced by max, min, or a mixture;
* ``"two-segment"``   pi == pi*, both grid endpoints optimal: two perturbed copies of
  the aggregate, merged over a rational bracket so the target is hit exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .conversion import bbm_convert
from .errors import SynthesisAnomaly, ValidationError
from .market import (
    Decomposition,
    Instance,
    Market,
    consumer_surplus,
    decompose_in_Xk,
    extremal_market,
    interior_decompose,
    mix,
    optimal_price_set,
    rational,
    subsets_between,
)
from .segmentation import (
    DirectSegmentation,
    Entry,
    Segmentation,
    SurplusPoint,
    max_pricing,
    min_pricing,
    triangle,
)

OUTSIDE_TRIANGLE = "outside-triangle"
PROP3_GAP = "prop3-gap"

DEFAULT_BRACKET = (Fraction(1, 2), Fraction(9, 10))


def in_triangle(instance: Instance, u, pi) -> bool:
    u, pi = rational(u), rational(pi)
    tri = triangle(instance)
    return u >= 0 and pi >= tri.pi_star and u + pi <= tri.w_star


def is_unit_elastic(instance: Instance) -> bool:
    """True when the aggregate is the equal-revenue market over the whole grid."""
    return instance.aggregate == extremal_market(instance.grid, range(instance.K))


def prop3_point_set(instance: Instance) -> list[Fraction]:
    """Consumer surplus of posting each single price to the whole aggregate."""
    return [consumer_surplus(instance.grid, instance.aggregate, k) for k in range(instance.K)]


@dataclass(frozen=True)
class SynthesisParameters:
    """Weight ``alpha`` on full extraction, ``beta`` on min-pricing in the remainder."""

    alpha: Fraction
    beta: Fraction

    @classmethod
    def for_target(cls, instance: Instance, u, pi) -> "SynthesisParameters":
        tri = triangle(instance)
        u, pi = rational(u), rational(pi)
        alpha = (pi - tri.pi_star) / tri.width
        beta = Fraction(0) if alpha == 1 else u / ((1 - alpha) * tri.width)
        return cls(alpha, beta)

    def point(self, instance: Instance) -> SurplusPoint:
        tri = triangle(instance)
        a, b = self.alpha, self.beta
        return SurplusPoint(
            (1 - a) * b * tri.width,
            a * tri.w_star + (1 - a) * tri.pi_star,
        )


@dataclass(frozen=True)
class TwoSegmentConstruction:
    """Two-segment direct segmentations shifting mass between ``x^S1`` and ``x^S2``.

    For ``beta`` in (0, 1) the lowest price goes to ``x'(beta)`` with weight
    ``beta`` and the highest price to ``x''(beta)`` with weight ``1 - beta``.
    The final object blends ``beta1`` and ``beta2`` with weight ``lam``.
    """

    instance: Instance
    P: tuple[int, ...]
    decomposition: Decomposition
    S1: tuple[int, ...]
    S2: tuple[int, ...]
    epsilon: Fraction
    beta1: Fraction
    beta2: Fraction
    lam: Fraction

    def _coefficients(self, shift: Fraction):
        w = self.decomposition.weights
        total = w[self.S1] + w[self.S2]
        coeffs = dict(w)
        coeffs[self.S1] = w[self.S1] + total * shift
        coeffs[self.S2] = w[self.S2] - total * shift
        if any(c < 0 for c in coeffs.values()):
            raise ValidationError(f"epsilon {self.epsilon} too large for shift {shift}")
        return coeffs

    def _market(self, shift: Fraction) -> Market:
        grid = self.instance.grid
        coeffs = self._coefficients(shift)
        return Market(mix((c, extremal_market(grid, S)) for S, c in coeffs.items()))

    def x_prime(self, beta) -> Market:
        return self._market((1 - rational(beta)) * self.epsilon)

    def x_double_prime(self, beta) -> Market:
        return self._market(-rational(beta) * self.epsilon)

    def consumer_surplus_at(self, beta) -> Fraction:
        """``beta * (C + (1 - beta) * E)``, the closed form of the low-price segment's surplus."""
        beta = rational(beta)
        C, E = _two_segment_constants(self.instance, self.decomposition, self.S1, self.S2, self.epsilon)
        return beta * (C + (1 - beta) * E)

    def single(self, beta) -> DirectSegmentation:
        beta = rational(beta)
        K = self.instance.K
        return DirectSegmentation(
            self.instance,
            (Entry(0, self.x_prime(beta), beta), Entry(K - 1, self.x_double_prime(beta), 1 - beta)),
        )

    def merged(self) -> DirectSegmentation:
        b1, b2, lam = self.beta1, self.beta2, self.lam
        if b1 == b2 or lam == 1:
            return self.single(b1)
        if lam == 0:
            return self.single(b2)
        K = self.instance.K
        w_low = lam * b1 + (1 - lam) * b2
        w_high = lam * (1 - b1) + (1 - lam) * (1 - b2)
        low = mix([(lam * b1, self.x_prime(b1)), ((1 - lam) * b2, self.x_prime(b2))])
        high = mix([(lam * (1 - b1), self.x_double_prime(b1)), ((1 - lam) * (1 - b2), self.x_double_prime(b2))])
        return DirectSegmentation(
            self.instance,
            (
                Entry(0, Market(tuple(v / w_low for v in low)), w_low),
                Entry(K - 1, Market(tuple(v / w_high for v in high)), w_high),
            ),
        )


def _two_segment_constants(instance, decomposition, S1, S2, epsilon):
    grid, w = instance.grid, decomposition.weights
    C = consumer_surplus(grid, instance.aggregate, 0)
    cs1 = consumer_surplus(grid, extremal_market(grid, S1), 0)
    cs2 = consumer_surplus(grid, extremal_market(grid, S2), 0)
    E = (w[S1] + w[S2]) * epsilon * (cs1 - cs2)
    return C, E


def two_segment_solve(
    instance: Instance,
    P,
    decomposition: Decomposition,
    u,
    bracket: tuple[Fraction, Fraction] = DEFAULT_BRACKET,
    pair: tuple[tuple[int, ...], tuple[int, ...]] | None = None,
) -> TwoSegmentConstruction:
    """Exact two-segment construction for ``0 < u < w* - pi*`` when both endpoints are optimal.

    The surplus map ``beta -> beta * (C + (1 - beta) * E)`` is quadratic, so its
    solution is generally irrational. Instead we find rational ``beta1, beta2``
    with ``u'(beta1) <= u <= u'(beta2)`` by bisecting toward 0 and toward 1 from
    ``bracket``, and blend the two constructions with weight ``lam``.

    ``pair`` overrides the shifted subsets (default: the first two supersets
    of ``P`` in enumeration order).
    """
    K = instance.K
    P = tuple(sorted(P))
    u = rational(u)
    width = triangle(instance).width
    if not (P[0] == 0 and P[-1] == K - 1 and len(P) < K):
        raise ValidationError(f"two-segment construction needs both endpoints in P and P != V, got P={P}")
    if not 0 < u < width:
        raise ValidationError(f"two-segment construction needs 0 < u < {width}, got {u}")

    S1, S2 = pair if pair is not None else subsets_between(K, lower=P)[:2]
    if S1 == S2 or not set(P) <= set(S1) or not set(P) <= set(S2):
        raise ValidationError(f"shifted subsets must be distinct supersets of P, got {S1}, {S2}")
    w = decomposition.weights
    if w.get(S1, 0) <= 0 or w.get(S2, 0) <= 0:
        raise ValidationError("decomposition must put positive weight on both shifted subsets")
    epsilon = min(w[S1], w[S2]) / (w[S1] + w[S2]) / 2

    C, E = _two_segment_constants(instance, decomposition, S1, S2, epsilon)

    def surplus_at(beta):
        return beta * (C + (1 - beta) * E)

    if E == 0:
        beta = u / C
        return TwoSegmentConstruction(instance, P, decomposition, S1, S2, epsilon, beta, beta, Fraction(1))

    lo, hi = bracket
    while surplus_at(lo) > u:
        lo /= 2
    while surplus_at(hi) < u:
        hi = 1 - (1 - hi) / 2
    s_lo, s_hi = surplus_at(lo), surplus_at(hi)
    lam = Fraction(1) if s_hi == s_lo else (s_hi - u) / (s_hi - s_lo)
    return TwoSegmentConstruction(instance, P, decomposition, S1, S2, epsilon, lo, hi, lam)


@dataclass(frozen=True)
class SynthesisResult:
    direct: DirectSegmentation | None = None
    reason: str | None = None
    route: str | None = None
    parameters: SynthesisParameters | None = None
    construction: TwoSegmentConstruction | None = None

    @property
    def success(self) -> bool:
        return self.direct is not None

    @property
    def achieved(self) -> SurplusPoint | None:
        return self.direct.surplus()[0] if self.direct is not None else None


def _pool(seg: Segmentation, rule, route: str) -> DirectSegmentation:
    out = bbm_convert(seg, rule)
    if not out.success:
        raise SynthesisAnomaly(f"route {route}: pooled markets collide at {out.collisions}")
    return out.direct


def synthesize_direct(instance: Instance, u, pi) -> SynthesisResult:
    """Build a direct segmentation reaching ``(u, pi)`` exactly, or say why none exists.

    Targets must be exact rationals (ints, Fractions, or "p/q" strings).
    """
    u, pi = rational(u), rational(pi)
    if not in_triangle(instance, u, pi):
        return SynthesisResult(reason=OUTSIDE_TRIANGLE)
    grid, xs = instance.grid, instance.aggregate
    K = instance.K
    tri = triangle(instance)

    if pi > tri.pi_star:
        params = SynthesisParameters.for_target(instance, u, pi)
        pairs = [(extremal_market(grid, (k,)), params.alpha * xs[k]) for k in range(K)]
        if params.alpha < 1:
            kstar = optimal_price_set(grid, xs)[0]
            dec = decompose_in_Xk(grid, xs, kstar)
            pairs += [(extremal_market(grid, S), (1 - params.alpha) * a) for S, a in dec.terms]
        seg = Segmentation.from_pairs(instance, pairs)
        rule = min_pricing(seg).mixed(max_pricing(seg), params.beta)
        result = SynthesisResult(_pool(seg, rule, "perfect-mix"), route="perfect-mix", parameters=params)

    elif is_unit_elastic(instance):
        hits = [k for k, val in enumerate(prop3_point_set(instance)) if val == u]
        if not hits:
            return SynthesisResult(reason=PROP3_GAP)
        d = DirectSegmentation(instance, (Entry(hits[0], xs, Fraction(1)),))
        result = SynthesisResult(d, route="unit-elastic")

    else:
        result = _bottom_edge(instance, u)

    achieved = result.achieved
    if achieved != (u, pi):
        raise AssertionError(f"route {result.route} reached {achieved}, target was {(u, pi)}")
    return result


def _bottom_edge(instance: Instance, u: Fraction) -> SynthesisResult:
    grid, xs, K = instance.grid, instance.aggregate, instance.K
    width = triangle(instance).width
    P = optimal_price_set(grid, xs)
    dec = interior_decompose(grid, xs, P)
    seg = Segmentation.from_pairs(instance, ((extremal_market(grid, S), a) for S, a in dec.terms))

    if u == 0:
        return SynthesisResult(_pool(seg, max_pricing(seg), "interior-max"), route="interior-max")
    if u == width:
        return SynthesisResult(_pool(seg, min_pricing(seg), "interior-min"), route="interior-min")

    spans = len(P) > 1 and P[0] == 0 and P[-1] == K - 1
    if not spans:
        rule = min_pricing(seg).mixed(max_pricing(seg), u / width)
        out = bbm_convert(seg, rule)
        if out.success:
            return SynthesisResult(out.direct, route="interior-mix")
        if not (0 in P and K - 1 in P):
            raise SynthesisAnomaly(f"mixture pricing collided at {out.collisions}; no fallback for P={P}")

    cons = two_segment_solve(instance, P, dec, u)
    return SynthesisResult(cons.merged(), route="two-segment", construction=cons)


def synthesize_direct_approx(instance: Instance, u, pi, max_denominator: int) -> SynthesisResult:
    """Synthesize for the nearest rationals to ``(u, pi)`` with bounded denominators."""
    u = Fraction(u).limit_denominator(max_denominator)
    pi = Fraction(pi).limit_denominator(max_denominator)
    return synthesize_direct(instance, u, pi)
