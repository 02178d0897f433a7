"""Reference residual table for the benchmark points.

Twelve standard points pair the two parameter sets (x, rho) = (0.40, 0.005)
with M = 8 and (1.00, 0.020) with M = 12.5 against six polar angles.  For
each, the reference records |curly F| -- the magnitude of the residual
curly_F_residual computes -- together with the truncation index n used.

The printed index counts the highest retained coefficient, so a table row
with index n corresponds to n + 1 asymptotic terms (n_terms below); the
alpha = 0, M = 8 row pins this convention to five significant figures.

Three printed entries are mistranscribed (an index off by one, a duplicated
value, a power-of-ten slip); KNOWN_REFERENCE_DEFECTS holds the evidence.
The remaining nine reproduce to three significant figures (or well within
1%).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .oracle import EvalPoint


@dataclass(frozen=True)
class ReferenceRow:
    alpha_over_pi: float
    x: float
    rho: float
    residual_abs: float      # printed |curly F|
    n_index: int             # printed truncation index (highest k retained)

    @property
    def alpha(self) -> float:
        return self.alpha_over_pi * math.pi

    @property
    def M(self) -> float:
        return self.x * self.x / (4.0 * self.rho)

    @property
    def n_terms(self) -> int:
        """Number of asymptotic terms in the tabulated sum (k = 0 .. n_index)."""
        return self.n_index + 1

    def point(self) -> EvalPoint:
        return EvalPoint(self.x, self.rho, self.alpha)


TABLE1_ROWS = (
    ReferenceRow(0.00, 0.40, 0.005, 6.368e-6, 8),
    ReferenceRow(0.00, 1.00, 0.020, 2.613e-7, 12),
    ReferenceRow(0.10, 0.40, 0.005, 3.146e-6, 5),
    ReferenceRow(0.10, 1.00, 0.020, 1.998e-6, 12),
    ReferenceRow(0.20, 0.40, 0.005, 3.146e-6, 6),
    ReferenceRow(0.20, 1.00, 0.020, 1.899e-5, 11),
    ReferenceRow(0.25, 0.40, 0.005, 4.687e-3, 5),
    ReferenceRow(0.25, 1.00, 0.020, 1.428e-5, 9),
    ReferenceRow(0.30, 0.40, 0.005, 2.976e-3, 3),
    ReferenceRow(0.30, 1.00, 0.020, 2.890e-4, 9),
    ReferenceRow(0.40, 0.40, 0.005, 4.326e-2, 1),
    ReferenceRow(0.40, 1.00, 0.020, 7.928e-4, 8),
)

#: Rows of the printed reference that are demonstrably mistranscribed,
#: keyed by (alpha_over_pi, x).  The computed residuals at these points are
#: correct (they satisfy every internal identity and the saddle envelope);
#: it is the printed entries that cannot be reproduced.
KNOWN_REFERENCE_DEFECTS = {
    (0.10, 0.40): (
        "printed residual 3.146e-6 is reproduced exactly (3.1458e-6) at "
        "index 6, not the printed index 5; the printed index is off by one"),
    (0.20, 0.40): (
        "printed residual duplicates the 0.10 row value; no truncation "
        "index yields it at this point (the best achievable residual over "
        "n = 0..10 is ~8.7e-5, a factor ~27 above the printed value, and "
        "the saddle term alone is ~9.2e-4 at the printed index)"),
    (0.25, 0.40): (
        "printed residual 4.687e-3 carries a power-of-ten slip: the "
        "computed residual at the printed index is 4.68729e-4, matching "
        "all four mantissa digits at one tenth the magnitude"),
}


def row_is_defective(row: ReferenceRow) -> bool:
    return (row.alpha_over_pi, row.x) in KNOWN_REFERENCE_DEFECTS


def matches_reference(computed_abs: float, printed: float) -> bool:
    """Acceptance rule for one row: equal to three significant figures, or
    within 1% relative (the looser gate absorbs last-digit differences in
    the reference's own F values)."""
    if f"{computed_abs:.2e}" == f"{printed:.2e}":
        return True
    return abs(computed_abs / printed - 1.0) <= 0.01
