"""Exact market segmentation for third-degree price discrimination."""

from .conversion import Collision, ConversionOutcome, bbm_convert, joint_equal, revised_convert
from .errors import DecompositionError, SynthesisAnomaly, ValidationError
from .fixtures import example1, example2
from .lp import LPResult, solve_exact_lp
from .market import (
    Decomposition,
    Instance,
    Market,
    ValuationGrid,
    decompose_in_Xk,
    extremal_market,
    interior_decompose,
    is_in_Xk,
    optimal_price_set,
    revenue,
)
from .segmentation import (
    Atom,
    DirectSegmentation,
    Entry,
    JointDistribution,
    PricingRule,
    RevisedSegmentation,
    Segmentation,
    SurplusPoint,
    TriangleSummary,
    is_optimal_pricing,
    joint_distribution,
    max_pricing,
    min_pricing,
    revise,
    surplus,
    triangle,
    with_pricing,
)
from .synthesis import (
    SynthesisParameters,
    SynthesisResult,
    TwoSegmentConstruction,
    in_triangle,
    is_unit_elastic,
    synthesize_direct_approx,
    prop3_point_set,
    synthesize_direct,
    two_segment_solve,
)
from .verify import VerificationReport, brute_optimal_prices, prop3_search, random_instance, random_segmentation, verify_direct

__all__ = [
    "Atom",
    "bbm_convert",
    "brute_optimal_prices",
    "Collision",
    "ConversionOutcome",
    "decompose_in_Xk",
    "Decomposition",
    "DecompositionError",
    "DirectSegmentation",
    "Entry",
    "example1",
    "example2",
    "extremal_market",
    "in_triangle",
    "Instance",
    "interior_decompose",
    "is_in_Xk",
    "is_optimal_pricing",
    "is_unit_elastic",
    "joint_distribution",
    "joint_equal",
    "JointDistribution",
    "LPResult",
    "Market",
    "max_pricing",
    "min_pricing",
    "optimal_price_set",
    "PricingRule",
    "prop3_point_set",
    "prop3_search",
    "random_instance",
    "random_segmentation",
    "revenue",
    "revise",
    "revised_convert",
    "RevisedSegmentation",
    "Segmentation",
    "solve_exact_lp",
    "surplus",
    "SurplusPoint",
    "SynthesisAnomaly",
    "SynthesisParameters",
    "SynthesisResult",
    "synthesize_direct",
    "synthesize_direct_approx",
    "triangle",
    "TriangleSummary",
    "two_segment_solve",
    "TwoSegmentConstruction",
    "ValidationError",
    "ValuationGrid",
    "VerificationReport",
    "verify_direct",
    "with_pricing",
]

__version__ = "0.1.0"
