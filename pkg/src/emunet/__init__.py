"""Weighted directed network analytics for euro-area bilateral goods trade.

The package models each year of bilateral flows as a dense weighted
directed network and computes trade-balance skewness, local centrality
measures (degrees, reciprocity, triads, popularity), shortest-path
statistics (betweenness, closeness, direct-link counts) and a randomised
closeness normalisation, plus reporting utilities and a CLI (``emunet``).
"""

__version__ = "0.1.0"

from .network import (  # noqa: F401
    EMU_COUNTRIES,
    TradeMatrix,
    ValidationError,
    matrix_from_csv,
    matrix_to_csv,
    scale_weights,
    to_lengths,
    total_weight,
    validate,
)
from .flows import (  # noqa: F401
    BeLuTrend,
    BlxShareTable,
    TradeFlowRecord,
    build_matrix,
    estimate_blx_shares,
    fit_be_lu_trend,
    make_record,
    parse_flows,
    split_blx,
    write_flows,
)
from .centrality import (  # noqa: F401
    CentralityVector,
    in_degree,
    in_popularity,
    out_degree,
    out_popularity,
    reciprocity,
    three_cycles,
    transitive_triplets,
)
from .paths import (  # noqa: F401
    ClosenessNormalization,
    DirectCounts,
    PathStats,
    betweenness,
    bilateral_closeness,
    closeness,
    closeness_scores,
    direct_counts,
    normalized_closeness,
    shortest_paths,
    symmetrized,
)
from .imbalance import (  # noqa: F401
    SkewnessSummary,
    frisch_summary,
    skewness_series,
    surplus_classification,
)
from .datasets import BUNDLED_YEARS, bundled_matrices, bundled_matrix  # noqa: F401
from .report import (  # noqa: F401
    ReportConfig,
    RenderedTable,
    normalize_baseline,
    normalize_intra_year,
    render_table,
    run_pipeline,
)
