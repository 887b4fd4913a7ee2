"""Bilateral flow records: CSV parsing, yearly aggregation, BLX split.

Flow files are long-format CSV (``year,exporter,importer,value``) with
values in plain currency units.  From 1995 to 1998 the source data report
Belgium and Luxembourg as a single "BLX" entity; the functions at the
bottom reconstruct separate BE and LU flows from the 1999+ split data.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass

import numpy as np

from .network import TradeMatrix, ValidationError, check_country_code, validate

BLX_CODE = "BLX"
EXPORT = "export"
IMPORT = "import"

DEFAULT_SCHEMA = {
    "year": "year",
    "exporter": "exporter",
    "importer": "importer",
    "value": "value",
}


@dataclass(frozen=True)
class TradeFlowRecord:
    """One observed bilateral flow: exporter -> importer in a given year."""

    year: int
    exporter: str
    importer: str
    value: float


def _check_record(year, exporter, importer, value, *, min_year, max_year, where=""):
    if not min_year <= year <= max_year:
        raise ValidationError(f"{where}year {year} outside [{min_year}, {max_year}]")
    check_country_code(exporter)
    check_country_code(importer)
    if exporter == importer:
        raise ValidationError(f"{where}self-loop {exporter}->{importer}")
    if not (np.isfinite(value) and value >= 0):
        raise ValidationError(f"{where}negative or non-finite value {value}")


def make_record(year: int, exporter: str, importer: str, value: float, *,
                min_year: int = 1995, max_year: int = 2100) -> TradeFlowRecord:
    """Build a validated flow record."""
    _check_record(year, exporter, importer, value,
                  min_year=min_year, max_year=max_year)
    return TradeFlowRecord(int(year), exporter, importer, float(value))


def parse_flows(source, *, schema: dict | None = None, delimiter: str = ",",
                countries=None, min_year: int = 1995,
                max_year: int = 2100) -> list[TradeFlowRecord]:
    """Parse a long-format flow CSV into validated records.

    ``schema`` maps the logical fields (year/exporter/importer/value) to
    column names in the file header.  ``countries``, when given, is a
    whitelist: rows naming other codes raise.  All errors carry the
    1-based line number.
    """
    schema = {**DEFAULT_SCHEMA, **(schema or {})}
    close = False
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        source = open(source, newline="")
        close = True
    elif isinstance(source, bytes):
        source = io.StringIO(source.decode("utf-8"))

    try:
        reader = csv.DictReader(source, delimiter=delimiter)
        if reader.fieldnames is None:
            raise ValidationError("flow CSV is empty (no header)")
        missing = [v for v in schema.values() if v not in reader.fieldnames]
        if missing:
            raise ValidationError(f"flow CSV header lacks columns {missing}")

        allowed = set(countries) if countries is not None else None
        records = []
        for row in reader:
            line = reader.line_num
            where = f"line {line}: "
            try:
                year = int(row[schema["year"]])
                value = float(row[schema["value"]])
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"{where}malformed row ({exc})") from None
            exporter = (row[schema["exporter"]] or "").strip()
            importer = (row[schema["importer"]] or "").strip()
            _check_record(year, exporter, importer, value,
                          min_year=min_year, max_year=max_year, where=where)
            if allowed is not None:
                for code in (exporter, importer):
                    if code not in allowed:
                        raise ValidationError(f"{where}unknown country code {code!r}")
            records.append(TradeFlowRecord(year, exporter, importer, value))
        return records
    finally:
        if close:
            source.close()


def write_flows(records, dest, *, delimiter: str = ",") -> None:
    """Write records as flow CSV; values use full repr so re-parsing is exact."""
    close = False
    if isinstance(dest, (str, bytes)) or hasattr(dest, "__fspath__"):
        dest = open(dest, "w", newline="")
        close = True
    try:
        writer = csv.writer(dest, delimiter=delimiter)
        writer.writerow(["year", "exporter", "importer", "value"])
        for r in records:
            writer.writerow([r.year, r.exporter, r.importer, repr(r.value)])
    finally:
        if close:
            dest.close()


def build_matrix(records, year: int, countries, *,
                 on_unknown: str = "error") -> TradeMatrix:
    """Aggregate one year of records into a validated trade matrix.

    Duplicate (exporter, importer) pairs are summed.  ``on_unknown``
    decides what happens to records naming countries outside ``countries``:
    ``"error"`` raises, ``"drop"`` silently skips them.
    """
    if on_unknown not in ("error", "drop"):
        raise ValueError(f"on_unknown must be 'error' or 'drop', got {on_unknown!r}")
    countries = tuple(countries)
    index = {c: i for i, c in enumerate(countries)}
    w = np.zeros((len(countries), len(countries)))
    seen_year = False
    for r in records:
        if r.year != year:
            continue
        seen_year = True
        i = index.get(r.exporter)
        j = index.get(r.importer)
        if i is None or j is None:
            if on_unknown == "drop":
                continue
            bad = r.exporter if i is None else r.importer
            raise ValidationError(f"record {r.exporter}->{r.importer}: "
                                  f"country {bad!r} not in requested set")
        w[i, j] += r.value
    if not seen_year:
        raise ValidationError(f"empty year: no records for {year}")
    return validate(TradeMatrix(year=year, countries=countries, weights=w))


@dataclass(frozen=True)
class BlxShareTable:
    """Belgium's average share of the combined BE+LU flow, per counterparty.

    Keys are (counterparty, direction) with direction "export" for
    BLX -> counterparty flows and "import" for counterparty -> BLX.
    Luxembourg's share is the complement.
    """

    shares: dict[tuple[str, str], float]

    def share_be(self, counterparty: str, direction: str) -> float:
        try:
            return self.shares[(counterparty, direction)]
        except KeyError:
            raise ValidationError(
                f"no BE/LU share for counterparty {counterparty!r} ({direction})"
            ) from None


def estimate_blx_shares(records, *, default_share: float = 1.0) -> BlxShareTable:
    """Average Belgium's share of combined BE+LU flows over the given years.

    For each counterparty and direction the share is the mean over years of
    BE / (BE + LU), skipping years where the combined flow is zero.  A
    counterparty with no combined flow in any year gets ``default_share``
    for Belgium, with a warning.
    """
    flows: dict[tuple[str, str, int], dict[str, float]] = {}
    counterparties = set()
    for r in records:
        if r.exporter in ("BE", "LU") and r.importer not in ("BE", "LU"):
            key = (r.importer, EXPORT, r.year)
            counterparties.add(r.importer)
        elif r.importer in ("BE", "LU") and r.exporter not in ("BE", "LU"):
            key = (r.exporter, IMPORT, r.year)
            counterparties.add(r.exporter)
        else:
            continue
        cell = flows.setdefault(key, {"BE": 0.0, "LU": 0.0})
        cell["BE" if "BE" in (r.exporter, r.importer) else "LU"] += r.value

    years = sorted({y for (_, _, y) in flows})
    shares: dict[tuple[str, str], float] = {}
    for c in sorted(counterparties):
        for direction in (EXPORT, IMPORT):
            ratios = []
            for y in years:
                cell = flows.get((c, direction, y))
                if cell is None:
                    continue
                combined = cell["BE"] + cell["LU"]
                if combined > 0:
                    ratios.append(cell["BE"] / combined)
            if ratios:
                shares[(c, direction)] = float(np.mean(ratios))
            else:
                warnings.warn(
                    f"no BE+LU flow observed for {c} ({direction}); "
                    f"defaulting Belgium's share to {default_share}",
                    stacklevel=2,
                )
                shares[(c, direction)] = default_share
    return BlxShareTable(shares)


@dataclass(frozen=True)
class BeLuTrend:
    """Least-squares linear trend of the BE<->LU bilateral flow vs. year.

    Predictions are clamped at zero: a trade flow cannot be negative.
    """

    slope_be_lu: float
    intercept_be_lu: float
    slope_lu_be: float
    intercept_lu_be: float

    def predict(self, year: int, direction: str) -> float:
        if direction == EXPORT:  # BE -> LU
            raw = self.slope_be_lu * year + self.intercept_be_lu
        elif direction == IMPORT:  # LU -> BE
            raw = self.slope_lu_be * year + self.intercept_lu_be
        else:
            raise ValueError(f"direction must be 'export' or 'import', got {direction!r}")
        return max(0.0, float(raw))


def fit_be_lu_trend(records) -> BeLuTrend:
    """Fit per-direction OLS lines to the observed BE<->LU flows."""
    series: dict[str, dict[int, float]] = {EXPORT: {}, IMPORT: {}}
    for r in records:
        if r.exporter == "BE" and r.importer == "LU":
            series[EXPORT][r.year] = series[EXPORT].get(r.year, 0.0) + r.value
        elif r.exporter == "LU" and r.importer == "BE":
            series[IMPORT][r.year] = series[IMPORT].get(r.year, 0.0) + r.value

    params = {}
    for direction, by_year in series.items():
        if len(by_year) < 2:
            raise ValidationError(
                f"need at least 2 years of BE<->LU data to fit a trend "
                f"({direction}: {len(by_year)} found)"
            )
        years = np.array(sorted(by_year))
        values = np.array([by_year[y] for y in years])
        slope, intercept = np.polyfit(years, values, 1)
        params[direction] = (float(slope), float(intercept))
    return BeLuTrend(
        slope_be_lu=params[EXPORT][0], intercept_be_lu=params[EXPORT][1],
        slope_lu_be=params[IMPORT][0], intercept_lu_be=params[IMPORT][1],
    )


def split_blx(records, shares: BlxShareTable, trend: BeLuTrend) -> list[TradeFlowRecord]:
    """Replace aggregate BLX flows by separate BE and LU flows.

    Each BLX <-> counterparty value is divided using ``shares`` so that
    BE + LU reproduces the aggregate exactly (LU takes the remainder).
    The missing BE <-> LU bilateral flows are injected from ``trend`` for
    every year that contained BLX records.  Records not involving BLX
    pass through unchanged.
    """
    out: list[TradeFlowRecord] = []
    blx_years = set()
    for r in records:
        if r.exporter == BLX_CODE and r.importer == BLX_CODE:
            raise ValidationError("BLX->BLX flow makes no sense")
        if r.exporter == BLX_CODE:
            blx_years.add(r.year)
            share = shares.share_be(r.importer, EXPORT)
            be_value = r.value * share
            out.append(TradeFlowRecord(r.year, "BE", r.importer, be_value))
            out.append(TradeFlowRecord(r.year, "LU", r.importer, r.value - be_value))
        elif r.importer == BLX_CODE:
            blx_years.add(r.year)
            share = shares.share_be(r.exporter, IMPORT)
            be_value = r.value * share
            out.append(TradeFlowRecord(r.year, r.exporter, "BE", be_value))
            out.append(TradeFlowRecord(r.year, r.exporter, "LU", r.value - be_value))
        else:
            out.append(r)
    for year in sorted(blx_years):
        out.append(TradeFlowRecord(year, "BE", "LU", trend.predict(year, EXPORT)))
        out.append(TradeFlowRecord(year, "LU", "BE", trend.predict(year, IMPORT)))
    return out
