"""
Report schemas for the strip factorization lab.
Results of estimates, residual checks and decompositions.
"""

from typing import Dict, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .domain import FactorPair, LineSample


class MembershipReport(BaseModel):
    """Sampled estimate of the weighted class norms"""
    sup_norms: Dict[float, float] = Field(..., description="Max weighted norm over lines, per gamma")
    lines: List[float] = Field(..., description="Sampled line offsets")
    verdict: str = Field(..., description="'finite' or 'overflow'")

    @property
    def finite(self) -> bool:
        return self.verdict == "finite"


class ZeroPoleCatalog(BaseModel):
    """Simple zeros and poles of the closed-form pair"""
    w1_zeros: List[complex]
    w1_poles: List[complex]
    w2_zeros: List[complex]
    w2_poles: List[complex]

    def singularities(self) -> List[complex]:
        return self.w1_zeros + self.w1_poles + self.w2_zeros + self.w2_poles


class PolarResult(BaseModel):
    """Polar decomposition f(z) = u_f(z + αi)·g_f(z) sampled on lines"""
    u_real: LineSample = Field(..., description="u_f on the real line")
    u_upper: LineSample = Field(..., description="u_f on Im z = α")
    g_real: LineSample = Field(..., description="g_f on the real line")
    g_lower: LineSample = Field(..., description="g_f on Im z = -α")
    recon_residual: float = Field(..., description="max |f - u·g| / max |f| on the central half-window")


class SvdPolarReport(BaseModel):
    """Comparison of the factor-pair polar factors with a dense SVD"""
    unitary_residual: float = Field(..., description="Polar unitary against w1·w̄2 after one global phase")
    modulus_residual: float = Field(..., description="|L_f| against w2·e^(2αP)·w̄2")
    adjoint_modulus_residual: float = Field(..., description="|L_f†| against w1·e^(2αP)·w̄1")


class ResidualRow(BaseModel):
    """One asserted relation in a residual table"""
    relation: str = Field(..., description="Name of the checked relation")
    residual: float
    tolerance: float
    asserted: bool = Field(default=True, description="Whether the row counts toward the verdict")
    lower_bound: bool = Field(default=False, description="Negative control: passes when residual > tolerance")

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.residual):
            return False
        if self.lower_bound:
            return self.residual > self.tolerance
        return self.residual <= self.tolerance


class VerificationResult(BaseModel):
    """Verdict over a residual table"""
    verified: bool = Field(..., description="Whether every asserted row passed")
    details: str = Field(..., description="Human-readable verification details")
    rows: List[ResidualRow] = Field(default_factory=list)

    model_config = ConfigDict(frozen=True)

    @property
    def exit_status(self) -> int:
        return 0 if self.verified else 1


class FactorResidual(BaseModel):
    """Residuals of the two boundary relations for a factor pair"""
    res_b2: float = Field(..., description="max |w1(x) - f(x-αi)·w2(x-2αi)| on the central half-window")
    res_b3: float = Field(..., description="max |w2(x) - f̄(x-αi)·w1(x-2αi)| on the central half-window")
    pair: FactorPair = Field(..., description="The pair with refreshed diagnostics")
