"""Empirical selection of the ambiguous measure readings.

Two definitions in this package admit more than one literal reading: the
degree-popularity scores (index binding in the defining sums) and
closeness (directed weighted lengths, link counts, or symmetrised
bilateral intensity, plus the null-model construction behind the
normalised score).  The routines here pick the reading that best
reproduces known reference values on the bundled 1995/2019 data; the
winners are frozen as the package defaults (``DEFAULT_*`` constants) and
echoed into report metadata so published numbers are self-describing.
"""

from __future__ import annotations

import numpy as np

from . import centrality, paths
from .datasets import bundled_matrix
from .network import TradeMatrix

# Reference ratios for 2019 relative to the German 1995 baseline, for the
# three largest economies, as independently published for this dataset.
POPULARITY_REFERENCE = {
    centrality.IN_POPULARITY: {"DE": 4.6, "FR": 3.0, "NL": 3.9},
    centrality.OUT_POPULARITY: {"DE": 5.0, "FR": 1.1, "NL": 1.4},
}

# Published normalised-closeness columns for the bundled years (country
# order as in the bundled matrices).
CLOSENESS_REFERENCE = {
    1995: (0.58, 0.59, 0.12, 0.19, 0.51, 0.60, 0.61, 0.42, 0.48, 0.60,
           0.12, 0.17, 0.39, 0.25, 0.59, 0.49, 0.37, 0.41, 0.57),
    2019: (0.80, 0.82, 0.17, 0.31, 0.64, 0.83, 0.87, 0.47, 0.70, 0.82,
           0.26, 0.39, 0.45, 0.19, 0.84, 0.65, 0.71, 0.55, 0.79),
}

# Candidate (mode, null_mode, null_pattern) constructions for the
# normalised closeness.  The first two are the literal directed readings
# over the observed link pattern; the remainder vary the scoring of the
# original network and of the randomised networks independently, since
# the published numbers do not say which combination was used.
CLOSENESS_CANDIDATES = (
    ("length", "length", "observed"),
    ("hops", "hops", "observed"),
    ("length", "length", "complete"),
    ("bilateral", "bilateral", "complete"),
    ("bilateral", "length", "observed"),
    ("bilateral", "length", "complete"),
)


def pick_popularity_mode(measure: str, baseline: TradeMatrix | None = None,
                         comparison: TradeMatrix | None = None,
                         reference: dict[str, float] | None = None,
                         ref_country: str = "DE") -> tuple[str, dict[str, float]]:
    """Choose the popularity reading that best matches the reference ratios.

    Scores every mode by its worst absolute deviation from the reference
    (comparison-year value over the baseline reference-country value) and
    returns (winning mode, deviation per mode).
    """
    if measure not in POPULARITY_REFERENCE:
        raise ValueError(f"measure must be a popularity measure, got {measure!r}")
    baseline = baseline if baseline is not None else bundled_matrix(1995)
    comparison = comparison if comparison is not None else bundled_matrix(2019)
    reference = reference or POPULARITY_REFERENCE[measure]
    fn = (centrality.in_popularity if measure == centrality.IN_POPULARITY
          else centrality.out_popularity)

    deviations = {}
    for mode in centrality.POPULARITY_MODES:
        base = fn(baseline, mode).value(ref_country)
        vec = fn(comparison, mode)
        if base <= 0:
            deviations[mode] = np.inf
            continue
        deviations[mode] = max(abs(vec.value(c) / base - target)
                               for c, target in reference.items())
    winner = min(deviations, key=deviations.get)
    return winner, deviations


def pick_closeness_construction(matrices=None, reference=None, *,
                                k_runs: int = 10000, seed: int = 42,
                                candidates=CLOSENESS_CANDIDATES):
    """Choose the normalised-closeness construction tracking the reference.

    Runs the randomised normalisation under each candidate on every matrix
    and scores candidates by mean absolute error against the reference
    columns.  Returns (winning candidate, error per candidate).
    """
    if matrices is None:
        matrices = [bundled_matrix(year) for year in sorted(CLOSENESS_REFERENCE)]
    reference = reference or CLOSENESS_REFERENCE

    errors = {}
    for mode, null_mode, null_pattern in candidates:
        abs_err = []
        for matrix in matrices:
            result = paths.normalized_closeness(matrix, k_runs, seed, mode,
                                                null_mode=null_mode,
                                                null_pattern=null_pattern)
            target = np.asarray(reference[matrix.year])
            abs_err.extend(np.abs(result.scores.values - target))
        errors[(mode, null_mode, null_pattern)] = float(np.mean(abs_err))
    winner = min(errors, key=errors.get)
    return winner, errors
