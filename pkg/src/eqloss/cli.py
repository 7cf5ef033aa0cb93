"""Command-line entry points.

    eqloss ingest         load gazetteer/exposure/curves into the store
    eqloss estimate       run one alert document through the pipeline
    eqloss normalize      restate a historic loss in reference-year dollars
    eqloss validate-table1  recompute the historic-event validation table
    eqloss emit-kml       write one thematic layer to the KML repository
    eqloss serve          run the HTTP service

Every command takes ``--config`` (YAML); per-file flags override the config.
"""

from __future__ import annotations

import logging
from decimal import Decimal
from pathlib import Path

import click

from . import analytics
from .config import AppConfig
from .errors import EqlossError
from .kml import Technique
from .model import GeoLevel, MonetaryAmount
from .pipeline import run_estimation
from .service import LAYERS, _render_kml, build_context, create_app


def _load_config(path: str | None) -> AppConfig:
    if path is None:
        return AppConfig()
    return AppConfig.from_yaml(path)


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("-v", "--verbose", is_flag=True, default=False)
@click.pass_context
def main(ctx: click.Context, config_path: str | None, verbose: bool) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    ctx.obj = _load_config(config_path)


@main.command("ingest")
@click.option("--gazetteer", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--exposure", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--curves", type=click.Path(exists=True, dir_okay=False), default=None)
@click.pass_obj
def ingest_cmd(config: AppConfig, gazetteer: str | None, exposure: str | None, curves: str | None) -> None:
    """Load reference data (gazetteer, exposure, damage curves) into the store."""
    config = config.with_overrides(
        gazetteer_file=Path(gazetteer) if gazetteer else None,
        exposure_file=Path(exposure) if exposure else None,
        curve_file=Path(curves) if curves else None,
    )
    context = build_context(config)
    hierarchy = context.store.hierarchy()
    click.echo(f"store: {config.store_path}")
    click.echo(f"centres: {len(hierarchy)}")
    click.echo(f"curves: {len(context.curves)} countries")
    click.echo(f"exposure records: {len(context.store.exposure_records())}")


@main.command("estimate")
@click.argument("document", type=click.Path(exists=True, dir_okay=False))
@click.option("--replace", is_flag=True, default=False, help="replace an already-ingested version")
@click.pass_obj
def estimate_cmd(config: AppConfig, document: str, replace: bool) -> None:
    """Estimate losses for one alert XML document and store the results."""
    context = build_context(config)
    try:
        result = run_estimation(
            context.store, Path(document).read_text(encoding="utf-8"),
            context.curves, context.geometry, replace=replace,
        )
    except EqlossError as exc:
        raise click.ClickException(f"{exc.code}: {exc}") from None
    gul, nfl = result.country_totals
    click.echo(f"event {result.event.event_id} version {result.alert_version}")
    click.echo(f"  affected cities: {len(result.hazard.at_level(GeoLevel.CITY))}")
    click.echo(f"  country GUL: {gul}")
    click.echo(f"  country NFL: {nfl}")


@main.command("normalize")
@click.option("--amount", type=float, required=True, help="historic loss, millions USD")
@click.option("--year", type=int, required=True)
@click.option("--country", type=str, default="us", show_default=True)
@click.option("--series", type=click.Path(exists=True, dir_okay=False), default=None)
@click.pass_obj
def normalize_cmd(config: AppConfig, amount: float, year: int, country: str, series: str | None) -> None:
    """Restate a year-y loss in reference-year dollars using the economic series."""
    series_path = Path(series) if series else config.economic_series_file
    all_series = analytics.load_economic_series(series_path)
    if country not in all_series:
        raise click.ClickException(f"no economic series for country '{country}'")
    try:
        multipliers = analytics.multipliers_for_year(all_series[country], year, config.reference_year)
        d_y = MonetaryAmount(Decimal(repr(amount)), year)
        normalized = analytics.normalize_loss(d_y, multipliers, config.reference_year)
    except EqlossError as exc:
        raise click.ClickException(f"{exc.code}: {exc}") from None
    click.echo(f"IPD  {multipliers.ipd:.4f}")
    click.echo(f"ICW  {multipliers.effective_icw:.4f}")
    click.echo(f"W    {multipliers.wealth:.4f}")
    click.echo(f"dP   {multipliers.pop:.4f}")
    click.echo(f"D_{config.reference_year} = {float(normalized.value):.4f} million USD")


@main.command("validate-table1")
@click.option("--table", type=click.Path(exists=True, dir_okay=False),
              default="data/table1_earthquakes.csv", show_default=True)
@click.pass_obj
def validate_table1_cmd(config: AppConfig, table: str) -> None:
    """Recompute normalized losses, percent errors and threshold-bin agreement
    for the historic-event table."""
    rows = analytics.load_historic_events(table)
    report = analytics.validate_historic_events(rows)
    click.echo(f"{'region':34s} {'D_y':>12s} {'recomputed':>12s} {'printed':>12s} {'pct_err':>9s} {'bins':>7s}")
    for check in report.checks:
        row = check.row
        recomputed = f"{check.recomputed_d_2012:12.4f}" if check.recomputed_d_2012 is not None else " " * 12
        pct = f"{check.recomputed_pct_error:9.2f}" if check.recomputed_pct_error is not None else " " * 9
        bins = (
            f"{check.normalized_bin}|{check.predicted_bin}"
            if check.normalized_bin is not None
            else ""
        )
        label = f"{row.region} ({row.country})"
        click.echo(f"{label:34.34s} {row.d_y:12.4f} {recomputed} {row.d_2012:12.4f} {pct} {bins:>7s}")
    for region, (part_sum, combined) in report.combined_sums.items():
        click.echo(f"combined {region}: sub-rows sum to {part_sum:.4f}, combined row {combined:.4f}")
    click.echo(
        f"same-bin agreement: {report.same_bin_count} of {report.event_count} events "
        f"(zeta = {report.zeta})"
    )


@main.command("emit-kml")
@click.option("--event", "event_id", type=str, required=True)
@click.option("--version", type=int, required=True)
@click.option("--layer", type=click.Choice(LAYERS), required=True)
@click.option("--technique", type=click.Choice([t.value for t in Technique]), default="choropleth", show_default=True)
@click.option("--level", type=str, default=None)
@click.pass_obj
def emit_kml_cmd(config: AppConfig, event_id: str, version: int, layer: str, technique: str, level: str | None) -> None:
    """Generate one thematic layer into the KML repository and print its path."""
    context = build_context(config)
    tech = Technique.parse(technique)
    geo_level = GeoLevel.parse(level) if level else (
        GeoLevel.CITY if tech is Technique.PUSHPIN else config.kml_level
    )
    try:
        _, path = _render_kml(context, event_id, version, layer, tech, geo_level)
    except EqlossError as exc:
        raise click.ClickException(f"{exc.code}: {exc}") from None
    click.echo(str(path))


@main.command("serve")
@click.option("--host", type=str, default=None)
@click.option("--port", type=int, default=None)
@click.pass_obj
def serve_cmd(config: AppConfig, host: str | None, port: int | None) -> None:
    """Run the HTTP service."""
    import uvicorn

    config = config.with_overrides(host=host, port=port)
    context = build_context(config)
    app = create_app(context)
    uvicorn.run(app, host=config.host, port=config.port)


if __name__ == "__main__":
    main()
