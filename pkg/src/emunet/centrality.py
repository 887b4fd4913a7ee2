"""Centrality measures computed as direct sums over the weight matrix.

All scores here are raw, in powers of the currency unit: degrees are
linear in the weights, reciprocity and popularity quadratic, triad counts
cubic.  Normalisation for presentation lives in :mod:`emunet.report`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .network import TradeMatrix

# Measure identifiers, also used as CLI names and table column labels.
OUT_DEGREE = "out-degree"
IN_DEGREE = "in-degree"
RECIPROCITY = "reciprocity"
TRANSITIVE_TRIPLETS = "triplets"
THREE_CYCLES = "three-cycles"
IN_POPULARITY = "in-popularity"
OUT_POPULARITY = "out-popularity"
BETWEENNESS = "betweenness"
CLOSENESS = "closeness"
NORMALIZED_CLOSENESS = "normalized-closeness"

RAW = "raw"
BASELINE = "baseline"
SHARE = "share"

# Interpretations of the degree-popularity scores.  The source formulas
# are ambiguous about index binding, so the reading is selectable; the
# defaults below were fixed by calibration (see emunet.calibration) and
# are recorded in report metadata.
POPULARITY_MODES = ("target-in", "target-out", "product", "own-square")
DEFAULT_IN_POPULARITY_MODE = "target-in"
DEFAULT_OUT_POPULARITY_MODE = "own-square"


@dataclass(frozen=True)
class CentralityVector:
    """Per-country scores for one measure in one year."""

    measure: str
    year: int
    countries: tuple[str, ...]
    values: np.ndarray = field(repr=False)
    normalization: str = RAW
    meta: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.countries),):
            raise ValueError("values length must match countries")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "meta", MappingProxyType(dict(self.meta)))

    def value(self, code: str) -> float:
        return float(self.values[self.countries.index(code)])

    def as_dict(self) -> dict[str, float]:
        return {c: float(v) for c, v in zip(self.countries, self.values)}


def _vector(matrix: TradeMatrix, measure: str, values: np.ndarray,
            **meta) -> CentralityVector:
    return CentralityVector(measure=measure, year=matrix.year,
                            countries=matrix.countries, values=values,
                            meta=meta)


def out_degree(matrix: TradeMatrix) -> CentralityVector:
    """Weighted out-degree: row sums, a country's total exports."""
    return _vector(matrix, OUT_DEGREE, matrix.weights.sum(axis=1))


def in_degree(matrix: TradeMatrix) -> CentralityVector:
    """Weighted in-degree: column sums, a country's total imports."""
    return _vector(matrix, IN_DEGREE, matrix.weights.sum(axis=0))


def reciprocity(matrix: TradeMatrix) -> CentralityVector:
    """Mutual-connection intensity: sum over partners of w_ij * w_ji."""
    w = matrix.weights
    return _vector(matrix, RECIPROCITY, (w * w.T).sum(axis=1))


def transitive_triplets(matrix: TradeMatrix) -> CentralityVector:
    """Closed two-path intensity at i: sum over (j, h) of w_ij w_jh w_ih.

    The zero diagonal makes every term with a repeated index vanish, so
    the sum effectively runs over pairwise-distinct (i, j, h).
    """
    w = matrix.weights
    return _vector(matrix, TRANSITIVE_TRIPLETS, ((w @ w) * w).sum(axis=1))


def three_cycles(matrix: TradeMatrix) -> CentralityVector:
    """Directed triangle intensity at i: sum over (j, h) of w_ij w_jh w_hi."""
    w = matrix.weights
    return _vector(matrix, THREE_CYCLES, np.diagonal(w @ w @ w).copy())


def _popularity(matrix: TradeMatrix, mode: str, own: str) -> np.ndarray:
    w = matrix.weights
    od = w.sum(axis=1)
    id_ = w.sum(axis=0)
    if mode == "target-in":
        return w @ id_
    if mode == "target-out":
        return w @ od
    if mode == "product":
        return od * id_
    if mode == "own-square":
        return (od if own == "out" else id_) ** 2
    raise ValueError(f"unknown popularity mode {mode!r}; choose from {POPULARITY_MODES}")


def in_popularity(matrix: TradeMatrix,
                  mode: str = DEFAULT_IN_POPULARITY_MODE) -> CentralityVector:
    """Attractiveness of a country's import markets to its export partners.

    Default reading (``target-in``): sum over export partners j of
    w_ij times j's in-degree.
    """
    values = _popularity(matrix, mode, own="in")
    return _vector(matrix, IN_POPULARITY, values, mode=mode)


def out_popularity(matrix: TradeMatrix,
                   mode: str = DEFAULT_OUT_POPULARITY_MODE) -> CentralityVector:
    """Export-side attachment score.

    Default reading (``own-square``): the squared out-degree, i.e. the
    product of the two identical row sums in the defining expression.
    """
    values = _popularity(matrix, mode, own="out")
    return _vector(matrix, OUT_POPULARITY, values, mode=mode)


# Registry of the matrix-local measures with the power of the currency
# unit each one carries (used by the presentation layer to rescale raw
# scores) and whether the measure takes a popularity mode.
LOCAL_MEASURES: dict[str, tuple[object, int]] = {
    OUT_DEGREE: (out_degree, 1),
    IN_DEGREE: (in_degree, 1),
    RECIPROCITY: (reciprocity, 2),
    TRANSITIVE_TRIPLETS: (transitive_triplets, 3),
    THREE_CYCLES: (three_cycles, 3),
    OUT_POPULARITY: (out_popularity, 2),
    IN_POPULARITY: (in_popularity, 2),
}

WEIGHT_POWER = {name: power for name, (_, power) in LOCAL_MEASURES.items()}
WEIGHT_POWER[BETWEENNESS] = 0
WEIGHT_POWER[CLOSENESS] = 1
WEIGHT_POWER[NORMALIZED_CLOSENESS] = 0


def compute_local(matrix: TradeMatrix, measure: str, *,
                  in_popularity_mode: str = DEFAULT_IN_POPULARITY_MODE,
                  out_popularity_mode: str = DEFAULT_OUT_POPULARITY_MODE) -> CentralityVector:
    """Dispatch a local measure by name."""
    if measure == IN_POPULARITY:
        return in_popularity(matrix, in_popularity_mode)
    if measure == OUT_POPULARITY:
        return out_popularity(matrix, out_popularity_mode)
    try:
        fn, _ = LOCAL_MEASURES[measure]
    except KeyError:
        raise ValueError(f"unknown local measure {measure!r}") from None
    return fn(matrix)
