"""Classification and verification of linear-fractional rational difference equations."""
from .classifier import (
    HypothesisReport,
    TheoremId,
    Theorem3Shape,
    Verdict,
    VerdictKind,
    check_t1,
    check_t2,
    check_t3,
    check_t4,
    classify,
    recognize_t3,
)
from .equation import (
    Equation,
    EquilibriumSet,
    IndexProfile,
    equilibria,
    index_profile,
    mediant_bounds,
    step,
)
from .numtheory import frobenius_number, gcd_set, representable
from .rational import QuadraticSurd, parse_ratio, surd

__all__ = [
    "Equation", "EquilibriumSet", "HypothesisReport", "IndexProfile", "QuadraticSurd",
    "TheoremId", "Theorem3Shape", "Verdict", "VerdictKind", "check_t1", "check_t2",
    "check_t3", "check_t4", "classify", "equilibria", "frobenius_number", "gcd_set",
    "index_profile", "mediant_bounds", "parse_ratio", "recognize_t3", "representable",
    "step", "surd",
]
