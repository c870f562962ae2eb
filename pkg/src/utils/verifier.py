"""
Residual verification for the strip lab.
Turns named residuals into a residual table and a pass/fail verdict.
"""

import logging
from typing import Dict, Iterable, List, Optional, Tuple

from models.reports import ResidualRow, VerificationResult

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCES: Dict[str, float] = {
    "exact": 1e-8,
    "identity": 1e-10,
    "unimodular": 1e-9,
    "delta": 1e-10,
    "machine": 1e-12,
    "gauge": 1e-6,
    "oracle": 1e-3,
    "polar": 1e-6,
    "covariance": 1e-8,
    "operator": 1e-6,
    "equivalence": 1e-3,
    "negative-control": 1e-1,
    "blow-up": 1e6,
    "contraction": 1.0,
    "norm-overflow": 1e200,
}


class ResidualVerifier:
    """Collects residual rows against named tolerances"""

    def __init__(self, tolerances: Optional[Dict[str, float]] = None):
        """
        Initialize verifier

        Args:
            tolerances: Overrides of the default tolerance classes
        """
        self.tolerances = dict(DEFAULT_TOLERANCES)
        if tolerances:
            self.tolerances.update(tolerances)
        self.rows: List[ResidualRow] = []

    def tolerance(self, name: str) -> float:
        if name not in self.tolerances:
            raise KeyError(f"Unknown tolerance class: {name}")
        return self.tolerances[name]

    def check(self, relation: str, residual: float, tolerance: str, asserted: bool = True) -> ResidualRow:
        """
        Record residual <= tolerance

        Args:
            relation: Name of the checked relation
            residual: Measured residual
            tolerance: Tolerance class name
            asserted: Whether the row counts toward the verdict

        Returns:
            The recorded row
        """
        row = ResidualRow(relation=relation, residual=float(residual),
                          tolerance=self.tolerance(tolerance), asserted=asserted)
        self.rows.append(row)
        if asserted and not row.passed:
            logger.warning(f"{relation}: residual {row.residual:.3e} above tolerance {row.tolerance:.1e}")
        return row

    def check_above(self, relation: str, residual: float, tolerance: str) -> ResidualRow:
        """Record a negative control, which passes when residual > tolerance"""
        row = ResidualRow(relation=relation, residual=float(residual),
                          tolerance=self.tolerance(tolerance), lower_bound=True)
        self.rows.append(row)
        if not row.passed:
            logger.warning(f"{relation}: negative control residual {residual:.3e} is too small")
        return row

    def extend(self, residuals: Iterable[Tuple[str, float]], tolerance: str) -> None:
        for relation, residual in residuals:
            self.check(relation, residual, tolerance)

    def result(self) -> VerificationResult:
        """Verdict over every asserted row"""
        failed = [row for row in self.rows if row.asserted and not row.passed]
        if failed:
            details = "Failed: " + ", ".join(f"{row.relation} ({row.residual:.3e})" for row in failed)
        else:
            details = f"All {sum(row.asserted for row in self.rows)} asserted residuals within tolerance"
        logger.info(details)
        return VerificationResult(verified=not failed, details=details, rows=list(self.rows))


def format_table(result: VerificationResult) -> str:
    """Aligned text rendering of a residual table"""
    if not result.rows:
        return result.details
    width = max(len(row.relation) for row in result.rows)
    lines = [f"{'relation'.ljust(width)}  {'residual':>11}  {'tolerance':>9}  verdict"]
    for row in result.rows:
        verdict = ("✅ pass" if row.passed else "❌ fail") if row.asserted else "(report)"
        bound = f">{row.tolerance:.1e}" if row.lower_bound else f"{row.tolerance:.1e}"
        lines.append(f"{row.relation.ljust(width)}  {row.residual:11.3e}  {bound:>9}  {verdict}")
    lines.append(result.details)
    return "\n".join(lines)
