"""Shortest-path statistics under inverse-weight link lengths.

Distances use Dijkstra's algorithm on lengths l = 1/w, so the heaviest
trade links are the shortest.  Alongside distances we track the number of
minimal paths (sigma), the hop count of the shortest minimal path (mu),
and whether the one-link route itself is minimal.  The closeness
normalisation at the bottom rescales closeness by the maximum closeness
seen across K randomised networks that redistribute the same total weight.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .centrality import BETWEENNESS, CLOSENESS, NORMALIZED_CLOSENESS, CentralityVector
from .network import TradeMatrix, ValidationError, to_lengths, total_weight, validate

# Paths within this relative factor of the minimum length count as
# shortest.  Real-valued weights almost never tie exactly, but data
# rounded to a coarse grid can.
DEFAULT_TIE_TOL = 1e-9

# "length" and "hops" score the directed network (weighted distances vs.
# link counts along weighted shortest paths); "bilateral" scores the
# symmetrised network in which each country pair carries the sum of its
# two directed flows.  The default was fixed by calibration (see
# emunet.calibration).
CLOSENESS_MODES = ("length", "hops", "bilateral")
DEFAULT_CLOSENESS_MODE = "bilateral"

NULL_PATTERNS = ("complete", "observed")
DEFAULT_NULL_PATTERN = "complete"


@dataclass(frozen=True)
class PathStats:
    """All-pairs shortest-path data for one yearly network.

    ``dist[i, j]`` is the minimal total length from i to j (+inf if
    unreachable), ``sigma[i, j]`` the number of minimal paths, ``hops[i, j]``
    the fewest links among minimal paths (0 where undefined), and
    ``direct_shortest[i, j]`` whether the one-link path i->j attains the
    minimum.
    """

    year: int
    countries: tuple[str, ...]
    dist: np.ndarray = field(repr=False)
    hops: np.ndarray = field(repr=False)
    sigma: np.ndarray = field(repr=False)
    direct_shortest: np.ndarray = field(repr=False)
    tie_tol: float = DEFAULT_TIE_TOL

    @property
    def n(self) -> int:
        return len(self.countries)


@dataclass(frozen=True)
class DirectCounts:
    """How many counterparties each country serves by a direct shortest link."""

    year: int
    countries: tuple[str, ...]
    exporter: np.ndarray = field(repr=False)
    importer: np.ndarray = field(repr=False)

    def as_dict(self) -> dict[str, tuple[int, int]]:
        return {c: (int(e), int(m)) for c, e, m in
                zip(self.countries, self.exporter, self.importer)}


def _dijkstra(lengths: np.ndarray, source: int) -> np.ndarray:
    n = lengths.shape[0]
    dist = np.full(n, np.inf)
    dist[source] = 0.0
    done = np.zeros(n, dtype=bool)
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        row = lengths[u]
        for v in np.nonzero(np.isfinite(row))[0]:
            nd = d + row[v]
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, int(v)))
    return dist


def shortest_paths(matrix: TradeMatrix, *, tie_tol: float = DEFAULT_TIE_TOL) -> PathStats:
    """Compute all-pairs distances, minimal-path counts and hop counts.

    Unreachable pairs are a valid result: dist +inf, sigma 0, hops 0.
    Path counting follows the shortest-path DAG of each source; two paths
    count as tied when their lengths agree within ``tie_tol`` relative.
    """
    lengths = to_lengths(matrix)
    n = matrix.n
    dist = np.empty((n, n))
    sigma = np.zeros((n, n))
    hops = np.zeros((n, n), dtype=np.int64)
    direct = np.zeros((n, n), dtype=bool)

    for s in range(n):
        d = _dijkstra(lengths, s)
        dist[s] = d
        sig = np.zeros(n)
        sig[s] = 1.0
        mu = np.zeros(n, dtype=np.int64)
        order = [int(v) for v in np.argsort(d, kind="stable") if np.isfinite(d[v])]
        for v in order:
            if v == s:
                continue
            # Predecessors on some minimal path: d[u] + l(u,v) ~ d[v].
            best_mu = None
            for u in np.nonzero(np.isfinite(lengths[:, v]))[0]:
                if np.isfinite(d[u]) and d[u] + lengths[u, v] <= d[v] * (1.0 + tie_tol):
                    sig[v] += sig[u]
                    cand = mu[u] + 1
                    if best_mu is None or cand < best_mu:
                        best_mu = cand
            mu[v] = best_mu if best_mu is not None else 0
        sigma[s] = sig
        hops[s] = mu
        reachable = np.isfinite(d)
        direct[s] = (np.isfinite(lengths[s])
                     & reachable
                     & (lengths[s] <= d * (1.0 + tie_tol)))

    dist.flags.writeable = False
    sigma.flags.writeable = False
    hops.flags.writeable = False
    direct.flags.writeable = False
    return PathStats(year=matrix.year, countries=matrix.countries, dist=dist,
                     hops=hops, sigma=sigma, direct_shortest=direct,
                     tie_tol=tie_tol)


def betweenness(stats: PathStats) -> CentralityVector:
    """Pass-through fractions summed over ordered pairs with i strictly interior.

    For each pair (j, k) the number of minimal paths through i is
    sigma[j, i] * sigma[i, k] when d[j, i] + d[i, k] equals d[j, k]
    (within the tie tolerance); pairs with no path contribute nothing.
    """
    d = stats.dist
    sig = stats.sigma
    n = stats.n
    tol = stats.tie_tol
    safe_sig = np.where(sig > 0, sig, 1.0)
    b = np.zeros(n)
    for i in range(n):
        through = d[:, i, None] + d[None, i, :]
        on_path = np.isfinite(through) & (through <= d * (1.0 + tol)) & (sig > 0)
        frac = np.where(on_path, (sig[:, i, None] * sig[None, i, :]) / safe_sig, 0.0)
        frac[i, :] = 0.0
        frac[:, i] = 0.0
        np.fill_diagonal(frac, 0.0)
        b[i] = frac.sum()
    return CentralityVector(measure=BETWEENNESS, year=stats.year,
                            countries=stats.countries, values=b,
                            meta={"tie_tol": tol})


def closeness(stats: PathStats, mode: str = "length") -> CentralityVector:
    """Closeness n / (sum of remoteness to all other countries).

    ``mode="length"`` sums weighted distances; ``mode="hops"`` sums the
    link counts of the shortest paths.  A country that cannot reach every
    other one scores 0.  For the "bilateral" reading, which needs the
    symmetrised matrix rather than directed path stats, see
    :func:`bilateral_closeness`.
    """
    if mode not in ("length", "hops"):
        raise ValueError(
            f"closeness on path stats supports 'length' or 'hops', got {mode!r}"
        )
    n = stats.n
    offdiag = ~np.eye(n, dtype=bool)
    reaches_all = np.isfinite(stats.dist)[offdiag].reshape(n, n - 1).all(axis=1)
    if mode == "hops":
        denom = stats.hops.sum(axis=1).astype(float)
    else:
        denom = np.where(np.isfinite(stats.dist), stats.dist, 0.0).sum(axis=1)
    values = np.divide(n, denom, out=np.zeros(n), where=reaches_all & (denom > 0))
    return CentralityVector(measure=CLOSENESS, year=stats.year,
                            countries=stats.countries, values=values,
                            meta={"mode": mode})


def symmetrized(matrix: TradeMatrix) -> TradeMatrix:
    """Undirected view: each pair carries the sum of its two directed flows."""
    return validate(TradeMatrix(matrix.year, matrix.countries,
                                matrix.weights + matrix.weights.T))


def bilateral_closeness(matrix: TradeMatrix, *,
                        tie_tol: float = DEFAULT_TIE_TOL) -> CentralityVector:
    """Weighted closeness of the symmetrised two-way trade network."""
    vec = closeness(shortest_paths(symmetrized(matrix), tie_tol=tie_tol), "length")
    return CentralityVector(measure=CLOSENESS, year=matrix.year,
                            countries=matrix.countries, values=vec.values,
                            meta={"mode": "bilateral"})


def closeness_scores(matrix: TradeMatrix, mode: str = DEFAULT_CLOSENESS_MODE, *,
                     tie_tol: float = DEFAULT_TIE_TOL) -> CentralityVector:
    """Closeness of a matrix under any supported mode."""
    if mode == "bilateral":
        return bilateral_closeness(matrix, tie_tol=tie_tol)
    return closeness(shortest_paths(matrix, tie_tol=tie_tol), mode)


def direct_counts(stats: PathStats) -> DirectCounts:
    """Count, per country, the partners reached/served best by the direct link."""
    return DirectCounts(year=stats.year, countries=stats.countries,
                        exporter=stats.direct_shortest.sum(axis=1),
                        importer=stats.direct_shortest.sum(axis=0))


# ---------------------------------------------------------------------------
# Randomised closeness normalisation


@dataclass(frozen=True)
class ClosenessNormalization:
    """Closeness rescaled by the best closeness seen across random reweightings.

    ``envelope`` is the maximum over ``k_runs`` randomised networks of the
    per-run maximum closeness; ``scores`` holds closeness divided by that
    envelope.  Deterministic given (matrix, k_runs, seed, modes, pattern).
    """

    year: int
    countries: tuple[str, ...]
    k_runs: int
    seed: int
    mode: str
    null_mode: str
    null_pattern: str
    run_maxima: np.ndarray = field(repr=False)
    envelope: float = 0.0
    closeness: CentralityVector = None
    scores: CentralityVector = None


def _uniform_link_weights(rng: np.random.Generator, n_links: int) -> np.ndarray:
    """Default sampler: i.i.d. uniform(0, 1) draws, redrawing exact zeros."""
    u = rng.random(n_links)
    while True:
        zero = u == 0.0
        if not zero.any():
            return u
        u[zero] = rng.random(int(zero.sum()))


def _pairwise_distances(lengths: np.ndarray, *, need_hops: bool = False,
                        tie_tol: float = DEFAULT_TIE_TOL):
    """Batched all-pairs shortest distances by Floyd-Warshall relaxation.

    ``lengths`` has shape (runs, n, n) with +inf for absent links.  When
    ``need_hops`` is set, also returns the fewest link count among paths
    whose length ties the minimum within ``tie_tol``.
    """
    runs, n, _ = lengths.shape
    idx = np.arange(n)
    dist = lengths.copy()
    dist[:, idx, idx] = 0.0
    hops = None
    if need_hops:
        hops = np.where(np.isfinite(lengths), 1.0, np.inf)
        hops[:, idx, idx] = 0.0
    for k in range(n):
        cand = dist[:, :, k, None] + dist[:, None, k, :]
        if need_hops:
            cand_hops = hops[:, :, k, None] + hops[:, None, k, :]
            better = cand < dist * (1.0 - tie_tol)
            tied = ~better & np.isfinite(cand) & (cand <= dist * (1.0 + tie_tol))
            dist = np.where(better, cand, dist)
            hops = np.where(better, cand_hops, hops)
            hops = np.where(tied, np.minimum(hops, cand_hops), hops)
        else:
            np.minimum(dist, cand, out=dist)
    return (dist, hops) if need_hops else (dist, None)


def _closeness_of_weights(weights: np.ndarray, *, mode: str,
                          tie_tol: float = DEFAULT_TIE_TOL) -> np.ndarray:
    """Per-run closeness vectors for a (runs, n, n) weight stack."""
    if mode == "bilateral":
        weights = weights + np.swapaxes(weights, -1, -2)
    lengths = np.full_like(weights, np.inf)
    pos = weights > 0
    lengths[pos] = 1.0 / weights[pos]
    dist, hops = _pairwise_distances(lengths, need_hops=(mode == "hops"),
                                     tie_tol=tie_tol)
    runs, n, _ = weights.shape
    denom = (hops if mode == "hops" else dist).sum(axis=2)
    with np.errstate(divide="ignore"):
        values = n / denom
    return np.where(np.isfinite(values) & (denom > 0), values, 0.0)


def normalized_closeness(matrix: TradeMatrix, k_runs: int, seed: int,
                         mode: str = DEFAULT_CLOSENESS_MODE, *,
                         null_mode: str | None = None,
                         null_pattern: str = DEFAULT_NULL_PATTERN,
                         sampler=None, tie_tol: float = DEFAULT_TIE_TOL,
                         chunk: int = 2048) -> ClosenessNormalization:
    """Normalise closeness against K random redistributions of total trade.

    Each run draws fresh positive link weights (``sampler(rng, n_links)``,
    uniform by default) and rescales them so their sum equals the original
    total weight; the envelope is the largest per-run maximum closeness.
    ``null_pattern`` picks the links that carry random weights: "complete"
    (default) uses every ordered country pair, because zeros in coarsely
    rounded data are censored small flows rather than missing trade
    relations; "observed" keeps the matrix's zero pattern.  ``null_mode``
    is the closeness reading used inside the ensemble; by default the
    randomised networks are scored as directed networks ("length"), the
    construction that calibration recovered for the "bilateral" default
    (see emunet.calibration).  Per-run random streams are derived from
    (seed, run index), so results do not depend on chunking or execution
    order.
    """
    if mode not in CLOSENESS_MODES:
        raise ValueError(f"unknown closeness mode {mode!r}; choose from {CLOSENESS_MODES}")
    if null_pattern not in NULL_PATTERNS:
        raise ValueError(
            f"unknown null pattern {null_pattern!r}; choose from {NULL_PATTERNS}")
    if null_mode is None:
        null_mode = "length" if mode == "bilateral" else mode
    if null_mode not in CLOSENESS_MODES:
        raise ValueError(f"unknown null mode {null_mode!r}; choose from {CLOSENESS_MODES}")
    if k_runs < 1:
        raise ValueError(f"k_runs must be >= 1, got {k_runs}")
    w = matrix.weights
    if not np.any(w > 0):
        raise ValidationError("cannot normalise closeness on a network with no links")
    n = matrix.n
    if null_pattern == "complete":
        links = np.argwhere(~np.eye(n, dtype=bool))
    else:
        links = np.argwhere(w > 0)
    if sampler is None:
        sampler = _uniform_link_weights

    w_tot = total_weight(matrix)
    base = _closeness_of_weights(w[None], mode=mode, tie_tol=tie_tol)[0]

    streams = np.random.SeedSequence(seed).spawn(k_runs)
    run_maxima = np.empty(k_runs)
    rows, cols = links[:, 0], links[:, 1]
    for start in range(0, k_runs, chunk):
        stop = min(start + chunk, k_runs)
        batch = stop - start
        draws = np.empty((batch, len(links)))
        for r in range(batch):
            rng = np.random.default_rng(streams[start + r])
            sample = np.asarray(sampler(rng, len(links)), dtype=float)
            if sample.shape != (len(links),) or np.any(sample <= 0):
                raise ValidationError("sampler must return positive weights per link")
            draws[r] = sample
        draws *= w_tot / draws.sum(axis=1, keepdims=True)
        weights = np.zeros((batch, n, n))
        weights[:, rows, cols] = draws
        values = _closeness_of_weights(weights, mode=null_mode, tie_tol=tie_tol)
        run_maxima[start:stop] = values.max(axis=1)

    envelope = float(run_maxima.max())
    if not envelope > 0:
        raise ValidationError("closeness envelope is zero; network too disconnected")
    meta = {"mode": mode, "null_mode": null_mode, "null_pattern": null_pattern,
            "k_runs": k_runs, "seed": seed}
    raw = CentralityVector(measure=CLOSENESS, year=matrix.year,
                           countries=matrix.countries, values=base, meta=meta)
    scores = CentralityVector(measure=NORMALIZED_CLOSENESS, year=matrix.year,
                              countries=matrix.countries,
                              values=base / envelope, meta=meta)
    run_maxima.flags.writeable = False
    return ClosenessNormalization(year=matrix.year, countries=matrix.countries,
                                  k_runs=k_runs, seed=seed, mode=mode,
                                  null_mode=null_mode, null_pattern=null_pattern,
                                  run_maxima=run_maxima, envelope=envelope,
                                  closeness=raw, scores=scores)
