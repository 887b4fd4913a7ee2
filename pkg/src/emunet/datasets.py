"""Bundled euro-area goods-trade matrices.

Two yearly matrices for the 19 euro-area countries ship with the package
(1995 and 2019), transcribed at 0.1-billion-dollar precision from
Observatory of Economic Complexity trade data.  Values are stored in the
CSVs in billions and loaded in full dollars.
"""

from __future__ import annotations

from importlib import resources

from .network import TradeMatrix, matrix_from_csv

BUNDLED_YEARS = (1995, 2019)
BILLION = 1e9


def bundled_matrix(year: int) -> TradeMatrix:
    """Load one of the packaged yearly matrices (weights in dollars)."""
    if year not in BUNDLED_YEARS:
        raise KeyError(f"no bundled matrix for {year}; available: {BUNDLED_YEARS}")
    path = resources.files("emunet") / "data" / f"emu_goods_{year}.csv"
    with path.open(newline="") as f:
        return matrix_from_csv(f, year=year, scale=BILLION)


def bundled_matrices() -> list[TradeMatrix]:
    """All packaged matrices, sorted by year."""
    return [bundled_matrix(year) for year in BUNDLED_YEARS]
