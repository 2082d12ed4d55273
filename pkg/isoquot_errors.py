"""
Error taxonomy for the isoquot engines.

Every error carries a machine-readable ``code`` which the CLI and the HTTP
service emit verbatim.
"""
from typing import Any, Dict, Optional


class IsoQuotError(Exception):
    code = "isoquot_error"

    def __init__(self, message: str = "", details: Optional[Dict[str, Any]] = None):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {"error": self.code, "message": self.message, "details": self.details}


# exactnum
class NotInvertible(IsoQuotError):
    code = "not_invertible"


# series
class NonUnitConstantTerm(IsoQuotError):
    code = "non_unit_constant_term"


# rootsum
class DenominatorVanishesAtRoot(IsoQuotError):
    code = "denominator_vanishes_at_root"


class DenominatorVanishesAtPair(IsoQuotError):
    code = "denominator_vanishes_at_pair"


class NonRationalResult(IsoQuotError):
    code = "non_rational_result"


# symprod
class HomogeneityMismatch(IsoQuotError):
    code = "homogeneity_mismatch"


class EllExceedsGenus(IsoQuotError):
    code = "ell_exceeds_genus"


class TruncationTooShallow(IsoQuotError):
    code = "truncation_too_shallow"


# invariants
class UnsupportedFamily(IsoQuotError):
    code = "unsupported_family"


class DegreeMismatch(IsoQuotError):
    code = "degree_mismatch"


class HypothesisViolated(IsoQuotError):
    code = "hypothesis_violated"


# fclass
class NonUnitDenominator(IsoQuotError):
    code = "non_unit_denominator"


# grw
class UnreachableRegime(IsoQuotError):
    code = "unreachable_regime"


class UnsupportedRegime(IsoQuotError):
    code = "unsupported_regime"


# localize
class TIndependenceFailure(IsoQuotError):
    code = "t_independence_failure"


class DegenerateParameter(IsoQuotError):
    code = "degenerate_parameter"


# cli / app input
class InvalidQuery(IsoQuotError):
    code = "invalid_query"
