"""JSON file formats. Rationals travel as "p/q" or integer strings, never floats.

Instance file::

    {"valuations": ["1", "2", "3"], "aggregate": ["1/2", "1/3", "1/6"]}

Segmentation file (the instance keys plus)::

    {"segments": [{"market": [...], "weight": "p/q", "price_index": k}, ...],
     "pricing": [[...], ...],      # general segmentations only
     "revised": false}

``price_index`` is 0-based. A file with ``pricing`` is a general segmentation;
one with ``price_index`` on every segment is direct (``revised: false``) or a
revised segmentation (``revised: true``).
"""

from __future__ import annotations

import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .errors import ValidationError
from .market import Instance, Market, ValuationGrid
from .segmentation import Atom, DirectSegmentation, Entry, PricingRule, RevisedSegmentation, Segmentation

_RATIONAL = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")

GENERAL, DIRECT, REVISED = "general", "direct", "revised"


def parse_rational(value: Any) -> Fraction:
    if isinstance(value, bool):
        raise ValidationError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str) or not _RATIONAL.match(value):
        raise ValidationError(f"malformed rational {value!r} (use \"p/q\" or an integer)")
    num, _, den = value.replace(" ", "").partition("/")
    if den and int(den) == 0:
        raise ValidationError(f"malformed rational {value!r}: zero denominator")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


def _vec(raw, name) -> tuple[Fraction, ...]:
    if not isinstance(raw, list):
        raise ValidationError(f"{name} must be a list of rationals")
    return tuple(parse_rational(v) for v in raw)


def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def load_json(path: str) -> dict:
    try:
        doc = json.loads(read_text(path))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: expected a JSON object")
    return doc


def instance_from_doc(doc: dict) -> Instance:
    try:
        vals, agg = doc["valuations"], doc["aggregate"]
    except KeyError as exc:
        raise ValidationError(f"missing key {exc}") from exc
    return Instance(ValuationGrid(_vec(vals, "valuations")), Market(_vec(agg, "aggregate")))


def instance_to_doc(inst: Instance) -> dict:
    return {
        "valuations": [format_rational(v) for v in inst.grid],
        "aggregate": [format_rational(m) for m in inst.aggregate],
    }


def load_instance(path: str) -> Instance:
    return instance_from_doc(load_json(path))


@dataclass(frozen=True)
class RawSegment:
    market: tuple[Fraction, ...]
    weight: Fraction
    price_index: int | None


@dataclass(frozen=True)
class SegmentationDoc:
    """Parsed but not yet validated segmentation file."""

    instance: Instance
    kind: str
    segments: tuple[RawSegment, ...]
    pricing: tuple[tuple[Fraction, ...], ...] | None

    def general(self) -> tuple[Segmentation, PricingRule]:
        """Build ``(Segmentation, PricingRule)``; a direct file becomes deterministic rows."""
        from .segmentation import with_pricing

        K = self.instance.K
        if self.kind == REVISED:
            raise ValidationError("revised segmentation has no market-only form")
        if self.kind == DIRECT:
            rows = [tuple(int(j == s.price_index) for j in range(K)) for s in self.segments]
        else:
            rows = self.pricing
        return with_pricing(self.instance, ((s.market, s.weight, r) for s, r in zip(self.segments, rows)))

    def direct(self, check: bool = True) -> DirectSegmentation:
        if self.kind != DIRECT:
            raise ValidationError(f"expected a direct segmentation, file is {self.kind}")
        return DirectSegmentation(
            self.instance,
            tuple(Entry(s.price_index, Market(s.market), s.weight) for s in self.segments),
            check=check,
        )

    def revised(self) -> RevisedSegmentation:
        if self.kind == GENERAL:
            raise ValidationError("general segmentation: revise it first")
        return RevisedSegmentation(
            self.instance, tuple(Atom(Market(s.market), s.price_index, s.weight) for s in self.segments)
        )


def segmentation_from_doc(doc: dict) -> SegmentationDoc:
    inst = instance_from_doc(doc)
    raw = doc.get("segments")
    if not isinstance(raw, list) or not raw:
        raise ValidationError("segments must be a nonempty list")
    segs = []
    for s in raw:
        if not isinstance(s, dict) or "market" not in s or "weight" not in s:
            raise ValidationError(f"segment {s!r} needs market and weight")
        k = s.get("price_index")
        if k is not None and (isinstance(k, bool) or not isinstance(k, int) or not 0 <= k < inst.K):
            raise ValidationError(f"price_index {k!r} out of range for K={inst.K}")
        market = _vec(s["market"], "market")
        if len(market) != inst.K:
            raise ValidationError(f"market {s['market']} has {len(market)} entries, expected {inst.K}")
        segs.append(RawSegment(market, parse_rational(s["weight"]), k))
    revised = bool(doc.get("revised", False))
    pricing = doc.get("pricing")
    tagged = [s.price_index is not None for s in segs]
    if pricing is not None:
        if revised or any(tagged):
            raise ValidationError("pricing rows only apply to untagged, unrevised segmentations")
        if not isinstance(pricing, list) or len(pricing) != len(segs):
            raise ValidationError("need one pricing row per segment")
        rows = tuple(_vec(r, "pricing row") for r in pricing)
        if any(len(r) != inst.K for r in rows):
            raise ValidationError(f"pricing rows must have {inst.K} entries")
        return SegmentationDoc(inst, GENERAL, tuple(segs), rows)
    if not all(tagged):
        raise ValidationError("segments without price_index need a pricing array")
    return SegmentationDoc(inst, REVISED if revised else DIRECT, tuple(segs), None)


def load_segmentation(path: str) -> SegmentationDoc:
    return segmentation_from_doc(load_json(path))


def _seg_entry(market, weight, k=None) -> dict:
    out = {"market": [format_rational(m) for m in market], "weight": format_rational(weight)}
    if k is not None:
        out["price_index"] = k
    return out


def general_to_doc(seg: Segmentation, rule: PricingRule) -> dict:
    doc = instance_to_doc(seg.instance)
    doc["segments"] = [_seg_entry(x, w) for x, w in zip(seg.markets, seg.weights)]
    doc["pricing"] = [[format_rational(p) for p in r] for r in rule.rows]
    doc["revised"] = False
    return doc


def direct_to_doc(d: DirectSegmentation) -> dict:
    doc = instance_to_doc(d.instance)
    doc["segments"] = [_seg_entry(e.market, e.weight, e.price) for e in d.entries]
    doc["revised"] = False
    return doc


def revised_to_doc(rho: RevisedSegmentation) -> dict:
    doc = instance_to_doc(rho.instance)
    doc["segments"] = [_seg_entry(a.market, a.weight, a.price) for a in rho.atoms]
    doc["revised"] = True
    return doc


def dumps(doc: dict) -> str:
    """One JSON document per line."""
    return json.dumps(doc, separators=(", ", ": ")) + "\n"
