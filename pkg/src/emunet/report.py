"""Pipeline orchestration: normalisations, table rendering, file outputs.

Raw centrality scores carry powers of the currency unit; this layer turns
them into the two comparable forms (ratio to a reference country's
baseline-year score, or share of the yearly aggregate), renders tables,
and writes CSV / Markdown / JSON artifacts plus a metadata sidecar that
records every knob needed to reproduce the numbers.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from . import __version__ as _version
from . import centrality as ct
from . import paths as pt
from .centrality import CentralityVector
from .datasets import BUNDLED_YEARS, bundled_matrix
from .flows import build_matrix, estimate_blx_shares, fit_be_lu_trend, parse_flows, split_blx
from .imbalance import frisch_summary, series_to_csv, skewness_series, summary_to_csv
from .network import EMU_COUNTRIES, TradeMatrix, ValidationError, matrix_from_csv, matrix_to_csv

SKEWNESS = "skewness"
DIRECT_COUNTS = "direct-counts"
PATH_MEASURES = (ct.BETWEENNESS, ct.CLOSENESS, ct.NORMALIZED_CLOSENESS, DIRECT_COUNTS)
ALL_MEASURES = (SKEWNESS, *ct.LOCAL_MEASURES, *PATH_MEASURES)

FORMATS = ("csv", "md", "json")


@dataclass(frozen=True)
class ReportConfig:
    """Everything a pipeline run depends on."""

    inputs: tuple[str, ...] = ()
    countries: tuple[str, ...] = EMU_COUNTRIES
    years: tuple[int, ...] = BUNDLED_YEARS
    measures: tuple[str, ...] = ALL_MEASURES
    normalizations: tuple[str, ...] = (ct.BASELINE, ct.SHARE)
    ref_country: str = "DE"
    ref_year: int = 1995
    k_runs: int = 10000
    seed: int = 42
    closeness_mode: str = pt.DEFAULT_CLOSENESS_MODE
    null_pattern: str = pt.DEFAULT_NULL_PATTERN
    in_popularity_mode: str = ct.DEFAULT_IN_POPULARITY_MODE
    out_popularity_mode: str = ct.DEFAULT_OUT_POPULARITY_MODE
    out_format: str = "csv"
    out_dir: str = "out"
    display_scale: float = 1e-9
    baseline_threshold: float = 0.05
    share_threshold: float = 0.0005
    balance_tol: float = 0.0
    chart: bool = False
    delimiter: str = ","
    input_scale: float = 1.0

    def __post_init__(self):
        if ct.BASELINE in self.normalizations:
            if self.ref_country not in self.countries:
                raise ValidationError(f"reference country {self.ref_country!r} "
                                      f"not in country set")
            if self.ref_year not in self.years:
                raise ValidationError(f"reference year {self.ref_year} not in years")
        if self.k_runs < 1:
            raise ValidationError("k_runs must be >= 1")
        if self.out_format not in FORMATS:
            raise ValidationError(f"unknown output format {self.out_format!r}")
        for m in self.measures:
            if m not in ALL_MEASURES:
                raise ValidationError(f"unknown measure {m!r}; "
                                      f"choose from {ALL_MEASURES}")


def normalize_baseline(vectors, ref_country: str, ref_year: int) -> list[CentralityVector]:
    """Divide every score by the reference country's score in the reference year.

    ``vectors`` holds one raw vector per year for a single measure.
    """
    by_year = {v.year: v for v in vectors}
    if ref_year not in by_year:
        raise ValidationError(f"reference year {ref_year} missing from vectors")
    ref = by_year[ref_year].value(ref_country)
    if not ref > 0:
        raise ValidationError(
            f"zero reference score for {ref_country} in {ref_year}; "
            f"cannot normalise {by_year[ref_year].measure}"
        )
    out = []
    for v in vectors:
        meta = dict(v.meta)
        meta.update(ref_country=ref_country, ref_year=ref_year)
        out.append(CentralityVector(measure=v.measure, year=v.year,
                                    countries=v.countries, values=v.values / ref,
                                    normalization=ct.BASELINE, meta=meta))
    return out


def normalize_intra_year(vector: CentralityVector) -> CentralityVector:
    """Express each score as its share of the yearly aggregate (sums to 1)."""
    total = float(vector.values.sum())
    if not total > 0:
        raise ValidationError(
            f"zero aggregate for {vector.measure} in {vector.year}; "
            f"cannot compute shares"
        )
    return CentralityVector(measure=vector.measure, year=vector.year,
                            countries=vector.countries,
                            values=vector.values / total,
                            normalization=ct.SHARE, meta=vector.meta)


@dataclass(frozen=True)
class RenderedTable:
    """A formatted table plus the full-precision values behind every cell."""

    caption: str
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    cells: tuple[tuple[str, ...], ...]
    values: tuple[tuple[float, ...], ...]

    def to_csv(self) -> str:
        lines = [",".join(["country", *self.col_labels])]
        for label, row in zip(self.row_labels, self.cells):
            lines.append(",".join([label, *row]))
        return "\n".join(lines) + "\n"

    def to_markdown(self) -> str:
        header = "| country | " + " | ".join(self.col_labels) + " |"
        rule = "|---" * (len(self.col_labels) + 1) + "|"
        lines = [f"**{self.caption}**", "", header, rule]
        for label, row in zip(self.row_labels, self.cells):
            lines.append("| " + " | ".join([label, *row]) + " |")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "caption": self.caption,
            "columns": list(self.col_labels),
            "rows": {label: {col: val for col, val in zip(self.col_labels, vals)}
                     for label, vals in zip(self.row_labels, self.values)},
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def write(self, path: Path, out_format: str) -> None:
        text = {"csv": self.to_csv, "md": self.to_markdown,
                "json": self.to_json}[out_format]()
        path.write_text(text)

    def cell(self, row_label: str, col_label: str) -> str:
        return self.cells[self.row_labels.index(row_label)][self.col_labels.index(col_label)]


def _formatter(vector: CentralityVector, config: ReportConfig):
    if vector.measure == ct.NORMALIZED_CLOSENESS:
        return lambda v: f"{v:.2f}"
    if vector.normalization == ct.BASELINE:
        thr = config.baseline_threshold
        return lambda v: "-" if v < thr else f"{v:.1f}"
    if vector.normalization == ct.SHARE:
        thr = config.share_threshold
        return lambda v: "-" if v < thr else f"{v * 100:.1f}"
    power = ct.WEIGHT_POWER.get(vector.measure, 0)
    scale = config.display_scale ** power
    return lambda v: f"{v * scale:.6g}"


def render_table(columns, caption: str, config: ReportConfig) -> RenderedTable:
    """Assemble a table from (label, vector-or-(values, formatter)) columns.

    Every column must cover the same countries in the same order.
    """
    col_labels = []
    formatted = []
    numeric = []
    row_labels = None
    for label, col in columns:
        if isinstance(col, CentralityVector):
            values = col.values
            fmt = _formatter(col, config)
            labels = col.countries
        else:
            values, fmt, labels = col
        if row_labels is None:
            row_labels = tuple(labels)
        elif tuple(labels) != row_labels:
            raise ValidationError(f"column {label!r} covers a different country set")
        col_labels.append(label)
        formatted.append([fmt(float(v)) for v in values])
        numeric.append([float(v) for v in values])
    cells = tuple(tuple(col[i] for col in formatted) for i in range(len(row_labels)))
    values = tuple(tuple(col[i] for col in numeric) for i in range(len(row_labels)))
    return RenderedTable(caption=caption, row_labels=row_labels,
                         col_labels=tuple(col_labels), cells=cells, values=values)


# ---------------------------------------------------------------------------
# Input loading


_YEAR_RE = re.compile(r"(19|20)\d{2}")


def _sniff_flow_file(path: str) -> bool:
    with open(path, newline="") as f:
        header = f.readline().lower()
    return "exporter" in header and "importer" in header


def load_matrices(config: ReportConfig) -> dict[int, TradeMatrix]:
    """Load yearly matrices from the configured inputs (bundled by default).

    Flow CSVs are aggregated per requested year; an aggregate "BLX" code,
    if present, is split into BE and LU using shares and a trend estimated
    from the years that report the two countries separately.  Square
    matrix CSVs must carry the year in their filename.
    """
    if not config.inputs:
        out = {}
        for year in config.years:
            if year not in BUNDLED_YEARS:
                raise ValidationError(
                    f"no input files given and {year} is not bundled "
                    f"(bundled: {BUNDLED_YEARS})"
                )
            matrix = bundled_matrix(year)
            if tuple(config.countries) != matrix.countries:
                keep = [matrix.index(c) for c in config.countries]
                sub = matrix.weights[np.ix_(keep, keep)]
                matrix = TradeMatrix(year, tuple(config.countries), sub)
            out[year] = matrix
        return out

    records = []
    matrices: dict[int, TradeMatrix] = {}
    for path in config.inputs:
        if _sniff_flow_file(path):
            records.extend(parse_flows(path, delimiter=config.delimiter))
        else:
            m = _YEAR_RE.search(Path(path).name)
            if not m:
                raise ValidationError(
                    f"matrix CSV {path!r} must carry the year in its filename"
                )
            year = int(m.group(0))
            matrices[year] = matrix_from_csv(path, year=year,
                                             scale=config.input_scale)

    if records:
        codes = {r.exporter for r in records} | {r.importer for r in records}
        if "BLX" in codes:
            later = [r for r in records
                     if "BLX" not in (r.exporter, r.importer)]
            shares = estimate_blx_shares(later)
            trend = fit_be_lu_trend(later)
            records = split_blx(records, shares, trend)
        for year in config.years:
            if year in matrices:
                continue
            matrices[year] = build_matrix(records, year, config.countries,
                                          on_unknown="drop")

    missing = [y for y in config.years if y not in matrices]
    if missing:
        raise ValidationError(f"no input data for years {missing}")
    return {y: matrices[y] for y in config.years}


# ---------------------------------------------------------------------------
# Pipeline


def _local_vectors(matrices, config):
    vectors: dict[str, list[CentralityVector]] = {}
    for measure in config.measures:
        if measure not in ct.LOCAL_MEASURES:
            continue
        vectors[measure] = [
            ct.compute_local(matrices[y], measure,
                             in_popularity_mode=config.in_popularity_mode,
                             out_popularity_mode=config.out_popularity_mode)
            for y in config.years
        ]
    return vectors


def centrality_tables(matrices, config: ReportConfig) -> dict[str, RenderedTable]:
    """One table per requested normalisation over the local measures."""
    raw = _local_vectors(matrices, config)
    tables = {}
    for norm in config.normalizations:
        columns = []
        for measure, vectors in raw.items():
            if norm == ct.BASELINE:
                normed = normalize_baseline(vectors, config.ref_country,
                                            config.ref_year)
            elif norm == ct.SHARE:
                normed = [normalize_intra_year(v) for v in vectors]
            else:
                normed = vectors
            for v in normed:
                columns.append((f"{measure} {v.year}", v))
        if not columns:
            continue
        caption = {
            ct.BASELINE: (f"Centrality relative to {config.ref_country} "
                          f"{config.ref_year} = 1"),
            ct.SHARE: "Centrality shares of the yearly total (%)",
            ct.RAW: "Raw centrality scores",
        }[norm]
        tables[norm] = render_table(columns, caption, config)
    return tables


def paths_table(matrices, config: ReportConfig):
    """Shortest-path summary: normalised closeness, betweenness, direct counts.

    Returns (table, normalisation results per year).
    """
    stats = {y: pt.shortest_paths(matrices[y]) for y in config.years}
    columns = []
    normalizations = {}

    if ct.NORMALIZED_CLOSENESS in config.measures:
        for y in config.years:
            res = pt.normalized_closeness(matrices[y], config.k_runs, config.seed,
                                          config.closeness_mode,
                                          null_pattern=config.null_pattern)
            normalizations[y] = res
            columns.append((f"closeness normalised {y}", res.scores))

    if ct.BETWEENNESS in config.measures:
        vectors = [pt.betweenness(stats[y]) for y in config.years]
        ref_ok = (config.ref_year in config.years
                  and config.ref_country in config.countries)
        if ref_ok:
            for v in normalize_baseline(vectors, config.ref_country, config.ref_year):
                columns.append((f"betweenness vs baseline {v.year}", v))
        for v in vectors:
            columns.append((f"betweenness share {v.year}",
                            normalize_intra_year(v)))

    if DIRECT_COUNTS in config.measures:
        fmt = lambda v: str(int(round(v)))
        for y in config.years:
            counts = pt.direct_counts(stats[y])
            columns.append((f"direct exporter {y}",
                            (counts.exporter, fmt, counts.countries)))
        for y in config.years:
            counts = pt.direct_counts(stats[y])
            columns.append((f"direct importer {y}",
                            (counts.importer, fmt, counts.countries)))

    if not columns:
        return None, normalizations
    table = render_table(columns, "Shortest-path positions", config)
    return table, normalizations


def run_pipeline(config: ReportConfig) -> dict[str, Path]:
    """Execute ingest -> metrics -> normalisation -> rendered files.

    Returns the written files keyed by artifact name.  Two runs with the
    same config and seed produce byte-identical outputs.
    """
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    matrices = load_matrices(config)
    ext = config.out_format
    written: dict[str, Path] = {}

    if SKEWNESS in config.measures:
        summaries = skewness_series([matrices[y] for y in config.years])
        path = out_dir / "skewness_series.csv"
        series_to_csv(summaries, path, scale=config.display_scale)
        written["skewness_series"] = path
        for s in summaries:
            path = out_dir / f"skewness_{s.year}.csv"
            summary_to_csv(s, path, scale=config.display_scale,
                           tol=config.balance_tol)
            written[f"skewness_{s.year}"] = path
        if config.chart:
            from .charts import skewness_chart
            path = out_dir / "skewness_series.svg"
            skewness_chart(summaries, path, scale=config.display_scale)
            written["skewness_chart"] = path

    for norm, table in centrality_tables(matrices, config).items():
        path = out_dir / f"centrality_{norm}.{ext}"
        table.write(path, ext)
        written[f"centrality_{norm}"] = path

    table, normalizations = paths_table(matrices, config)
    if table is not None:
        path = out_dir / f"paths_summary.{ext}"
        table.write(path, ext)
        written["paths_summary"] = path

    meta = {
        "tool": "emunet",
        "version": _version,
        "config": asdict(config),
        "calibrated_defaults": {
            "closeness_mode": pt.DEFAULT_CLOSENESS_MODE,
            "closeness_null_pattern": pt.DEFAULT_NULL_PATTERN,
            "in_popularity_mode": ct.DEFAULT_IN_POPULARITY_MODE,
            "out_popularity_mode": ct.DEFAULT_OUT_POPULARITY_MODE,
        },
        "closeness_envelopes": {
            str(y): normalizations[y].envelope for y in sorted(normalizations)
        },
    }
    path = out_dir / "run_metadata.json"
    path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    written["metadata"] = path
    return written


def write_matrices(matrices: dict[int, TradeMatrix], out_dir,
                   *, scale: float = 1.0) -> dict[str, Path]:
    """Serialise yearly matrices as square CSVs (ingest output)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = {}
    for year in sorted(matrices):
        path = out_dir / f"matrix_{year}.csv"
        matrix_to_csv(matrices[year], path, scale=scale)
        written[f"matrix_{year}"] = path
    return written
