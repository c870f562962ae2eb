"""
Error hierarchy for the strip factorization lab.
Every error carries a stable ``kind`` string reported by the CLI.
"""

from typing import Any, Dict, Optional


class StripLabError(Exception):
    """Base exception for all strip lab errors"""

    kind = "strip-lab"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.details = details or {}


class InvalidParameterError(StripLabError):
    """Custom exception for out-of-range numeric parameters"""
    kind = "invalid-parameter"


class IllPosedContinuationError(StripLabError):
    """Raised when a Fourier multiplier would overflow during continuation"""
    kind = "ill-posed-continuation"

    def __init__(self, message: str, frequency: float):
        super().__init__(message, {"frequency": frequency})
        self.frequency = frequency


class OperatorOverflowError(IllPosedContinuationError):
    """Raised when e^{±2αP} cannot be represented on the grid"""
    kind = "operator-overflow"


class DeltaOverflowError(StripLabError):
    """Raised when Δ(z) leaves the double range"""
    kind = "overflow"


class PoleEvaluationError(StripLabError):
    """Raised when a closed-form factor is evaluated at a pole"""
    kind = "pole-evaluation"

    def __init__(self, message: str, nearest_pole: complex):
        super().__init__(message, {"nearest_pole": [nearest_pole.real, nearest_pole.imag]})
        self.nearest_pole = nearest_pole


class DomainExclusionError(StripLabError):
    """Raised when a residual point sits too close to a catalog zero or pole"""
    kind = "domain-exclusion"


class AdmissibilityError(StripLabError):
    """Raised when f is not admissible for the factorization solver"""
    kind = "admissibility"

    def __init__(self, message: str, line: Optional[float] = None, location: Optional[float] = None):
        super().__init__(message, {"line": line, "location": location})
        self.line = line
        self.location = location


class FactorizationError(StripLabError):
    """Raised when the affine fit does not converge below its threshold"""
    kind = "non-convergence"


class InvariantViolationError(StripLabError):
    """Raised when an internal consistency check fails"""
    kind = "internal-invariant"


class StripDomainError(StripLabError):
    """Raised when a requested line lies outside a holomorphy strip"""
    kind = "domain"


class GridMismatchError(StripLabError):
    """Raised when two objects live on different grids"""
    kind = "grid-mismatch"


class RankDeficiencyError(StripLabError):
    """Raised when a discretized operator has numerically trivial singular values"""
    kind = "rank-deficient"


class UsageError(StripLabError):
    """Raised for bad command-line or config file input"""
    kind = "usage"
