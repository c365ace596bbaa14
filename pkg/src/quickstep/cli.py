"""Command-line entry points: serve the HTTP API, run the nightly/daily
jobs, compute the evaluation series, and run synthetic trials."""

from __future__ import annotations

import sys
from datetime import date
from pathlib import Path

import click

from .config import load_config
from .evalkit import all_series, series_to_tsv
from .service import GROUPS, QuickstepService, initialize_dataroot
from .simulate import SimulationConfig, run_simulation
from .store import DataRoot


def _service(data: str, config: str | None) -> QuickstepService:
    return QuickstepService(DataRoot(data), load_config(config))


@click.group()
def main():
    """Research-paper recommender: classification, profiles, daily picks."""


@main.command()
@click.option("--data", required=True, help="data directory")
@click.option("--taxonomy", "taxonomy_path", default=None, help="seed taxonomy tsv")
def init(data, taxonomy_path):
    """Seed a fresh data directory with the group taxonomies."""
    initialize_dataroot(DataRoot(data), taxonomy_path)
    click.echo(f"initialized {data}")


@main.command()
@click.option("--data", required=True)
@click.option("--config", default=None, help="JSON config file")
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
def serve(data, config, host, port):
    """Run the HTTP API."""
    import uvicorn

    from .api import create_app

    app = create_app(_service(data, config))
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command("run-cycle")
@click.option("--data", required=True)
@click.option("--config", default=None)
@click.option("--phase", type=click.Choice(["nightly", "daily"]), required=True)
@click.option("--as-of", "as_of", required=True, help="ISO date, e.g. 2025-01-06")
def run_cycle(data, config, phase, as_of):
    """Run one nightly or daily job."""
    from .service import ServiceError

    try:
        report = _service(data, config).run_cycle(phase, date.fromisoformat(as_of))
    except ServiceError as exc:
        raise click.ClickException(str(exc)) from exc
    for key in sorted(report):
        click.echo(f"{key}\t{report[key]}")


@main.command()
@click.option("--data", required=True)
@click.option("--config", default=None)
@click.option("--until", default=None, help="ISO date; omit for the whole log")
@click.option("--out", default=None, help="write TSV here instead of stdout")
def evaluate(data, config, until, out):
    """Emit the cumulative metric series as TSV."""
    service = _service(data, config)
    series = all_series(
        service.events.snapshot(),
        GROUPS,
        date.fromisoformat(until) if until else None,
    )
    tsv = series_to_tsv(series)
    if out:
        Path(out).write_text(tsv, encoding="utf-8")
        click.echo(f"wrote {out}")
    else:
        sys.stdout.write(tsv)


@main.command()
@click.option("--data", required=True, help="data directory to create")
@click.option("--seed", default=42, type=int)
@click.option("--days", default=45, type=int)
@click.option("--users", default=20, type=int)
@click.option("--papers", default=500, type=int)
def simulate(data, seed, days, users, papers):
    """Run the synthetic two-group trial and write data + report.tsv."""
    config = SimulationConfig(users=users, days=days, papers=papers, seed=seed)
    result = run_simulation(config, data)
    report_path = Path(data) / "report.tsv"
    report_path.write_text(result.tsv(), encoding="utf-8")
    for key in sorted(result.report["finals"]):
        value = result.report["finals"][key]
        click.echo(f"{key}\t{value if value is not None else 'n/a'}")
    click.echo(f"report: {report_path}")


if __name__ == "__main__":
    main()
