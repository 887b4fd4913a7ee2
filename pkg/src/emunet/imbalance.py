"""Trade-balance accounting on a closed bilateral matrix.

Row sums are exports, column sums imports; because the matrix is closed,
the surpluses and deficits cancel exactly.  The skewness of the matrix is
the sum of the surpluses (absolute) or that sum over total trade
(relative), a number in [0, 1] that is zero only for perfectly balanced
flows.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .network import TradeMatrix, ValidationError

SURPLUS = "surplus"
DEFICIT = "deficit"
BALANCED = "balanced"


@dataclass(frozen=True)
class SkewnessSummary:
    """Per-country balances plus matrix-level skewness for one year."""

    year: int
    countries: tuple[str, ...]
    exports_total: np.ndarray = field(repr=False)
    imports_total: np.ndarray = field(repr=False)
    balance: np.ndarray = field(repr=False)
    total_trade: float = 0.0
    absolute_skewness: float = 0.0
    relative_skewness: float = 0.0

    def balance_of(self, code: str) -> float:
        return float(self.balance[self.countries.index(code)])


def frisch_summary(matrix: TradeMatrix) -> SkewnessSummary:
    """Compute surpluses, deficits and skewness for one yearly matrix."""
    w = matrix.weights
    exports = w.sum(axis=1)
    imports = w.sum(axis=0)
    balance = exports - imports
    total = float(w.sum())
    surplus_sum = float(balance[balance > 0].sum())
    deficit_sum = float(-balance[balance < 0].sum())
    # Closed matrix: the two sides must agree up to float accumulation.
    if not np.isclose(surplus_sum, deficit_sum, rtol=1e-6, atol=1e-6 * max(total, 1.0)):
        raise ValidationError(
            f"surplus/deficit mismatch ({surplus_sum} vs {deficit_sum})"
        )
    relative = surplus_sum / total if total > 0 else 0.0
    for arr in (exports, imports, balance):
        arr.flags.writeable = False
    return SkewnessSummary(year=matrix.year, countries=matrix.countries,
                           exports_total=exports, imports_total=imports,
                           balance=balance, total_trade=total,
                           absolute_skewness=surplus_sum,
                           relative_skewness=relative)


def skewness_series(matrices) -> list[SkewnessSummary]:
    """Summaries for a year-sorted run of matrices (one matrix per year)."""
    summaries = []
    seen = set()
    for matrix in matrices:
        if matrix.year in seen:
            raise ValidationError(f"duplicate year {matrix.year} in series")
        seen.add(matrix.year)
        summaries.append(frisch_summary(matrix))
    return sorted(summaries, key=lambda s: s.year)


def surplus_classification(summary: SkewnessSummary,
                           tol: float = 0.0) -> dict[str, str]:
    """Classify each country by the sign of its balance.

    ``tol`` is an absolute dead zone around zero; with the default 0 the
    sign is strict, a positive value lets data rounded to a coarse grid
    count as balanced.
    """
    out = {}
    for code, value in zip(summary.countries, summary.balance):
        if value > tol:
            out[code] = SURPLUS
        elif value < -tol:
            out[code] = DEFICIT
        else:
            out[code] = BALANCED
    return out


def series_to_csv(summaries, dest, *, scale: float = 1e-9) -> None:
    """Write the yearly series as ``year,total_trade,absolute_skewness,relative_skewness``.

    ``scale`` converts stored currency units for display (default prints
    billions); relative skewness is written as a fraction.
    """
    close = False
    if isinstance(dest, (str, bytes)) or hasattr(dest, "__fspath__"):
        dest = open(dest, "w", newline="")
        close = True
    try:
        writer = csv.writer(dest)
        writer.writerow(["year", "total_trade", "absolute_skewness",
                         "relative_skewness"])
        for s in summaries:
            writer.writerow([s.year,
                             f"{s.total_trade * scale:.6g}",
                             f"{s.absolute_skewness * scale:.6g}",
                             f"{s.relative_skewness:.6g}"])
    finally:
        if close:
            dest.close()


def summary_to_csv(summary: SkewnessSummary, dest, *, scale: float = 1e-9,
                   tol: float = 0.0) -> None:
    """Write one year's per-country balances and classification."""
    labels = surplus_classification(summary, tol)
    close = False
    if isinstance(dest, (str, bytes)) or hasattr(dest, "__fspath__"):
        dest = open(dest, "w", newline="")
        close = True
    try:
        writer = csv.writer(dest)
        writer.writerow(["country", "exports_total", "imports_total",
                         "balance", "classification"])
        for i, code in enumerate(summary.countries):
            writer.writerow([code,
                             f"{summary.exports_total[i] * scale:.6g}",
                             f"{summary.imports_total[i] * scale:.6g}",
                             f"{summary.balance[i] * scale:.6g}",
                             labels[code]])
    finally:
        if close:
            dest.close()
