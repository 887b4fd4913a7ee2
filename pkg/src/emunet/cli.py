"""Command-line interface: ``emunet ingest|skewness|centrality|paths|report``.

Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import centrality as ct
from . import paths as pt
from . import report as rp
from .imbalance import series_to_csv, skewness_series, summary_to_csv
from .network import EMU_COUNTRIES, ValidationError


def _parse_years(text: str | None, default) -> tuple[int, ...]:
    if not text:
        return tuple(default)
    years: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            years.extend(range(int(lo), int(hi) + 1))
        else:
            years.append(int(part))
    return tuple(sorted(set(years)))


def _parse_countries(text: str | None) -> tuple[str, ...]:
    if not text:
        return EMU_COUNTRIES
    return tuple(code.strip().upper() for code in text.split(",") if code.strip())


def _run(fn):
    try:
        fn()
    except ValidationError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except OSError as exc:
        click.echo(f"i/o error: {exc}", err=True)
        sys.exit(2)


input_opt = click.option("--input", "inputs", multiple=True,
                         type=click.Path(exists=True, dir_okay=False),
                         help="Flow CSV (year,exporter,importer,value) or square "
                              "matrix CSV with the year in its filename. "
                              "Default: bundled 1995/2019 matrices.")
years_opt = click.option("--years", default=None,
                         help="Comma list and/or ranges, e.g. 1995,2019 or 1995-1999.")
countries_opt = click.option("--countries", default=None,
                             help="Comma list of codes (default: the 19 euro-area codes).")
format_opt = click.option("--format", "out_format", default="csv",
                          type=click.Choice(rp.FORMATS), show_default=True)
out_opt = click.option("--out", "out_dir", default="out", show_default=True,
                       help="Output directory.")
delimiter_opt = click.option("--delimiter", default=",", show_default=True)


@click.group()
@click.version_option()
def main():
    """Trade-network analytics over yearly bilateral flow matrices."""


@main.command()
@input_opt
@years_opt
@countries_opt
@out_opt
@delimiter_opt
@click.option("--scale", default=1.0, show_default=True,
              help="Factor applied to stored weights when writing matrix CSVs.")
def ingest(inputs, years, countries, out_dir, delimiter, scale):
    """Aggregate flow files into yearly matrix CSVs (splitting BLX if present)."""
    def body():
        if not inputs:
            raise ValidationError("ingest needs at least one --input flow CSV")
        config = rp.ReportConfig(inputs=inputs, years=_parse_years(years, ()),
                                 countries=_parse_countries(countries),
                                 normalizations=(), delimiter=delimiter)
        if not config.years:
            raise ValidationError("ingest needs --years")
        matrices = rp.load_matrices(config)
        written = rp.write_matrices(matrices, out_dir, scale=scale)
        for name in sorted(written):
            click.echo(written[name])
    _run(body)


@main.command()
@input_opt
@years_opt
@countries_opt
@out_opt
@delimiter_opt
@click.option("--balance-tol", default=0.0, show_default=True,
              help="Absolute dead zone (currency units) for the balanced class.")
@click.option("--chart/--no-chart", default=False, show_default=True,
              help="Also write an SVG chart of the series.")
def skewness(inputs, years, countries, out_dir, delimiter, balance_tol, chart):
    """Per-year trade balances and the skewness series."""
    def body():
        config = rp.ReportConfig(inputs=inputs,
                                 years=_parse_years(years, rp.BUNDLED_YEARS),
                                 countries=_parse_countries(countries),
                                 normalizations=(), measures=(rp.SKEWNESS,),
                                 balance_tol=balance_tol, chart=chart,
                                 delimiter=delimiter, out_dir=out_dir)
        matrices = rp.load_matrices(config)
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        summaries = skewness_series([matrices[y] for y in config.years])
        series_path = out / "skewness_series.csv"
        series_to_csv(summaries, series_path, scale=config.display_scale)
        click.echo(series_path)
        for s in summaries:
            path = out / f"skewness_{s.year}.csv"
            summary_to_csv(s, path, scale=config.display_scale, tol=balance_tol)
            click.echo(path)
        if chart:
            from .charts import skewness_chart
            path = out / "skewness_series.svg"
            skewness_chart(summaries, path, scale=config.display_scale)
            click.echo(path)
    _run(body)


@main.command()
@input_opt
@years_opt
@countries_opt
@click.option("--measure", "measures", multiple=True,
              type=click.Choice(tuple(ct.LOCAL_MEASURES)),
              help="Local measures to include (default: all).")
@click.option("--normalization", default=ct.BASELINE, show_default=True,
              type=click.Choice((ct.RAW, ct.BASELINE, ct.SHARE)))
@click.option("--ref-country", default="DE", show_default=True)
@click.option("--ref-year", default=1995, show_default=True)
@click.option("--popularity-mode", default=None,
              type=click.Choice(ct.POPULARITY_MODES),
              help="Override the calibrated reading for both popularity scores.")
@format_opt
@out_opt
@delimiter_opt
def centrality(inputs, years, countries, measures, normalization, ref_country,
               ref_year, popularity_mode, out_format, out_dir, delimiter):
    """Degree, reciprocity, triad and popularity tables."""
    def body():
        config = rp.ReportConfig(
            inputs=inputs, years=_parse_years(years, rp.BUNDLED_YEARS),
            countries=_parse_countries(countries),
            measures=measures or tuple(ct.LOCAL_MEASURES),
            normalizations=(normalization,),
            ref_country=ref_country, ref_year=ref_year,
            in_popularity_mode=popularity_mode or ct.DEFAULT_IN_POPULARITY_MODE,
            out_popularity_mode=popularity_mode or ct.DEFAULT_OUT_POPULARITY_MODE,
            out_format=out_format, out_dir=out_dir, delimiter=delimiter)
        matrices = rp.load_matrices(config)
        tables = rp.centrality_tables(matrices, config)
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for norm, table in tables.items():
            path = out / f"centrality_{norm}.{out_format}"
            table.write(path, out_format)
            click.echo(path)
    _run(body)


@main.command()
@input_opt
@years_opt
@countries_opt
@click.option("--k", "k_runs", default=10000, show_default=True,
              help="Randomised runs for the closeness normalisation.")
@click.option("--seed", default=42, show_default=True)
@click.option("--closeness-mode", default=pt.DEFAULT_CLOSENESS_MODE,
              type=click.Choice(pt.CLOSENESS_MODES), show_default=True)
@click.option("--null-pattern", default=pt.DEFAULT_NULL_PATTERN,
              type=click.Choice(pt.NULL_PATTERNS), show_default=True,
              help="Link pattern carrying random weights in the null model.")
@click.option("--ref-country", default="DE", show_default=True)
@click.option("--ref-year", default=1995, show_default=True)
@format_opt
@out_opt
@delimiter_opt
def paths(inputs, years, countries, k_runs, seed, closeness_mode, null_pattern,
          ref_country, ref_year, out_format, out_dir, delimiter):
    """Betweenness, normalised closeness and direct exporter/importer counts."""
    def body():
        config = rp.ReportConfig(
            inputs=inputs, years=_parse_years(years, rp.BUNDLED_YEARS),
            countries=_parse_countries(countries),
            measures=rp.PATH_MEASURES, normalizations=(),
            k_runs=k_runs, seed=seed,
            closeness_mode=closeness_mode, null_pattern=null_pattern,
            ref_country=ref_country, ref_year=ref_year,
            out_format=out_format, out_dir=out_dir, delimiter=delimiter)
        matrices = rp.load_matrices(config)
        table, _ = rp.paths_table(matrices, config)
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"paths_summary.{out_format}"
        table.write(path, out_format)
        click.echo(path)
    _run(body)


@main.command()
@input_opt
@years_opt
@countries_opt
@click.option("--measure", "measures", multiple=True,
              type=click.Choice(rp.ALL_MEASURES),
              help="Measures to include (default: all).")
@click.option("--normalization", "normalizations", multiple=True,
              type=click.Choice((ct.RAW, ct.BASELINE, ct.SHARE)),
              help="Table normalisations (default: baseline and share).")
@click.option("--ref-country", default="DE", show_default=True)
@click.option("--ref-year", default=1995, show_default=True)
@click.option("--k", "k_runs", default=10000, show_default=True)
@click.option("--seed", default=42, show_default=True)
@click.option("--closeness-mode", default=pt.DEFAULT_CLOSENESS_MODE,
              type=click.Choice(pt.CLOSENESS_MODES), show_default=True)
@click.option("--null-pattern", default=pt.DEFAULT_NULL_PATTERN,
              type=click.Choice(pt.NULL_PATTERNS), show_default=True)
@click.option("--popularity-mode", default=None,
              type=click.Choice(ct.POPULARITY_MODES))
@click.option("--balance-tol", default=0.0, show_default=True)
@click.option("--chart/--no-chart", default=False, show_default=True)
@format_opt
@out_opt
@delimiter_opt
def report(inputs, years, countries, measures, normalizations, ref_country,
           ref_year, k_runs, seed, closeness_mode, null_pattern, popularity_mode,
           balance_tol, chart, out_format, out_dir, delimiter):
    """Full pipeline: skewness, centrality and path tables plus metadata."""
    def body():
        config = rp.ReportConfig(
            inputs=inputs, years=_parse_years(years, rp.BUNDLED_YEARS),
            countries=_parse_countries(countries),
            measures=measures or rp.ALL_MEASURES,
            normalizations=normalizations or (ct.BASELINE, ct.SHARE),
            ref_country=ref_country, ref_year=ref_year,
            k_runs=k_runs, seed=seed, closeness_mode=closeness_mode,
            null_pattern=null_pattern,
            in_popularity_mode=popularity_mode or ct.DEFAULT_IN_POPULARITY_MODE,
            out_popularity_mode=popularity_mode or ct.DEFAULT_OUT_POPULARITY_MODE,
            balance_tol=balance_tol, chart=chart,
            out_format=out_format, out_dir=out_dir, delimiter=delimiter)
        written = rp.run_pipeline(config)
        for name in sorted(written):
            click.echo(written[name])
    _run(body)


if __name__ == "__main__":
    main()
