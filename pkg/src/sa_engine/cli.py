"""`sa` command line: run, serve, replay, and project.

Exit codes: 0 success, 1 scenario/record validation failure, 2 environment
failure (port in use, unreadable/unwritable files).
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

import click

from .net import DEFAULT_HUB_PORT, DEFAULT_UI_PORT, HubService
from .scenario import ScenarioError, load_scenario, project, replay, run, write_records
from .wire import canonical_json

EXIT_VALIDATION = 1
EXIT_ENVIRONMENT = 2


def _load(path):
    try:
        return load_scenario(path)
    except FileNotFoundError:
        click.echo(f"error: scenario file not found: {path}", err=True)
        sys.exit(EXIT_ENVIRONMENT)
    except ScenarioError as exc:
        for issue in exc.issues:
            click.echo(f"validation error: {issue}", err=True)
        sys.exit(EXIT_VALIDATION)


@click.group()
def main():
    """Situational-awareness engine: headless runs, live sessions, replay."""


@main.command("run")
@click.argument("scenario", type=click.Path())
@click.option("-o", "--output", type=click.Path(), required=True,
              help="Record file to write (newline-delimited canonical JSON).")
def run_cmd(scenario, output):
    """Execute a scenario headlessly and write its run records."""
    sc = _load(scenario)
    records = run(sc)
    try:
        write_records(output, sc, records)
    except OSError as exc:
        click.echo(f"error: cannot write {output}: {exc}", err=True)
        sys.exit(EXIT_ENVIRONMENT)
    click.echo(f"wrote {len(records)} records to {output}")


@main.command("replay")
@click.argument("records", type=click.Path())
def replay_cmd(records):
    """Re-execute a record file's inputs and verify outputs byte-for-byte."""
    if not Path(records).exists():
        click.echo(f"error: record file not found: {records}", err=True)
        sys.exit(EXIT_ENVIRONMENT)
    try:
        report = replay(records)
    except ScenarioError as exc:
        for issue in exc.issues:
            click.echo(f"replay error: {issue}", err=True)
        sys.exit(EXIT_VALIDATION)
    click.echo(canonical_json(report.to_record()).decode("utf-8"))
    if not report.ok:
        sys.exit(EXIT_VALIDATION)


@main.command("project")
@click.argument("scenario", type=click.Path())
@click.option("-o", "--output", type=click.Path(), required=True,
              help="Placement file to write (one record per line).")
def project_cmd(scenario, output):
    """Compute camera texture placements for a scenario."""
    sc = _load(scenario)
    placements = project(sc)
    try:
        with open(output, "wb") as fh:
            for rec in placements:
                fh.write(canonical_json(rec) + b"\n")
    except OSError as exc:
        click.echo(f"error: cannot write {output}: {exc}", err=True)
        sys.exit(EXIT_ENVIRONMENT)
    click.echo(f"wrote {len(placements)} placements to {output}")


def _default_ports():
    """SA_HUB_ADDR=host:port sets the hub endpoint; CLI flags take precedence."""
    host, hub_port = "127.0.0.1", DEFAULT_HUB_PORT
    addr = os.environ.get("SA_HUB_ADDR")
    if addr:
        h, _, p = addr.rpartition(":")
        if h:
            host = h
        if p.isdigit():
            hub_port = int(p)
    return host, hub_port


@main.command("serve")
@click.argument("scenario", type=click.Path())
@click.option("--hub-port", type=int, default=None, help="Federate stream port.")
@click.option("--ui-port", type=int, default=DEFAULT_UI_PORT, help="UI websocket/static port.")
@click.option("--host", default=None)
@click.option("--ui-assets", type=click.Path(), default=None,
              help="Directory of built console assets to serve at /.")
def serve_cmd(scenario, hub_port, ui_port, host, ui_assets):
    """Start a live session: hub, engine federate, UI endpoint."""
    sc = _load(scenario)
    env_host, env_port = _default_ports()
    service = HubService(
        sc,
        hub_port=hub_port if hub_port is not None else env_port,
        ui_port=ui_port,
        host=host if host is not None else env_host,
        ui_assets=Path(ui_assets) if ui_assets else _find_ui_assets(),
    )
    click.echo(f"hub on {service.host}:{service.hub_port}, ui on {service.ui_port}")
    try:
        service.run_forever()
    except OSError as exc:
        click.echo(f"error: cannot bind ports: {exc}", err=True)
        sys.exit(EXIT_ENVIRONMENT)
    except KeyboardInterrupt:
        pass


def _find_ui_assets():
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return candidate if candidate.is_dir() else None


if __name__ == "__main__":
    main()
