"""dmcis CLI - validate, run and sweep disaster-warning scenarios.

Exit codes:
    0  success
    1  validation failure, or a sweep with skipped points
    2  scenario parse or schema error
    3  I/O error (missing input, unwritable output)
"""

import sys
from pathlib import Path
from typing import Optional

import click
from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from dmcis import __version__
from dmcis.core.logging import setup_logging

console = Console(stderr=True, force_terminal=False)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_IO = 3

OUT_DIR_ENV = "DMCIS_OUT_DIR"


def _load(path: Path):  # type: ignore[no-untyped-def]
    """Parse a scenario, exiting with the documented code on failure."""
    from dmcis.parsers import ScenarioError, parse_scenario

    try:
        return parse_scenario(path)
    except ScenarioError as e:
        console.print(f"[red]✗ {escape(str(e))}[/red]")
        raise SystemExit(EXIT_PARSE)
    except OSError as e:
        console.print(f"[red]✗ {escape(str(e))}[/red]")
        raise SystemExit(EXIT_IO)


def _print_findings(report) -> None:  # type: ignore[no-untyped-def]
    if not report.findings:
        console.print("[green]✓ No findings[/green]")
        return
    table = Table(title="Validation findings")
    table.add_column("Finding", style="bold")
    table.add_column("Region")
    table.add_column("Entity", style="cyan")
    table.add_column("Message")
    for finding in report.findings:
        style = "red" if finding.severity.value == "error" else "yellow"
        table.add_row(
            f"[{style}]{finding.label()}[/{style}]",
            "-" if finding.region is None else str(finding.region),
            finding.entity or "-",
            escape(finding.message),
        )
    console.print(table)


@click.group()
@click.version_option(version=__version__, prog_name="dmcis")
@click.option("--debug", is_flag=True, help="Enable debug logging")
def cli(debug: bool) -> None:
    """dmcis - Disaster Management Communications and Information System simulator.

    Validate four-level warning topologies, run deterministic simulations
    and sweep parameters such as tau, MAP count and link standard.
    """
    if debug:
        setup_logging("DEBUG")
    else:
        setup_logging()


@cli.command()
@click.argument("scenario_file", type=click.Path(path_type=Path))
@click.option(
    "--format", "-f", "fmt",
    type=click.Choice(["text", "json", "markdown"]),
    default="text",
    help="Output format",
)
def validate(scenario_file: Path, fmt: str) -> None:
    """Check the necessary conditions of every level.

    Exits 0 when there are no ERROR findings (warnings are allowed).

    Examples:

        dmcis validate scenarios/flood.yaml

        dmcis validate scenarios/flood.yaml -f json
    """
    from dmcis.analysis import validate_topology

    scenario = _load(scenario_file)
    report = validate_topology(scenario.topology)

    if fmt == "json":
        from dmcis.reporters import JSONReporter

        reporter = JSONReporter()
        sys.stdout.write(reporter.to_string(reporter.validation_report(scenario.name, report)) + "\n")
    elif fmt == "markdown":
        from dmcis.reporters import MarkdownReporter

        sys.stdout.write(MarkdownReporter().validation_summary(scenario.name, report))
    else:
        _print_findings(report)
        status = "[green]✓ valid[/green]" if report.ok else "[red]✗ invalid[/red]"
        console.print(
            f"{status}: {len(report.errors)} error(s), {len(report.warnings)} warning(s)"
        )

    if not report.ok:
        raise SystemExit(EXIT_INVALID)


@cli.command()
@click.argument("scenario_file", type=click.Path(path_type=Path))
def levels(scenario_file: Path) -> None:
    """Show entities, media and the necessary condition of each level."""
    from dmcis.analysis import level_summary, validate_topology

    scenario = _load(scenario_file)
    report = validate_topology(scenario.topology)

    table = Table(title=f"Levels of {scenario.name}")
    table.add_column("Level", justify="right")
    table.add_column("Name", style="cyan")
    table.add_column("Entities")
    table.add_column("Media", style="magenta")
    table.add_column("Necessary condition")
    table.add_column("Status")
    colors = {"ok": "green", "warning": "yellow", "error": "red"}
    for row in level_summary(scenario.topology, report):
        color = colors[row.status]
        table.add_row(
            str(row.level), row.name, row.entities, row.media, row.condition,
            f"[{color}]{row.status}[/{color}]",
        )
    console.print(table)


@cli.command()
@click.argument("scenario_file", type=click.Path(path_type=Path))
@click.option("--seed", type=int, default=None, help="Random seed (default: scenario seed)")
@click.option("--horizon", type=float, default=None, help="Simulated seconds (default: scenario horizon)")
@click.option(
    "--out", "-o", "out_dir",
    type=click.Path(file_okay=False, path_type=Path),
    envvar=OUT_DIR_ENV,
    default="out",
    show_default=True,
    help=f"Output directory (env: {OUT_DIR_ENV})",
)
def run(scenario_file: Path, seed: Optional[int], horizon: Optional[float], out_dir: Path) -> None:
    """Run one simulation and write trace, metrics, summary and digest.

    The trace digest is printed to stdout.

    Examples:

        dmcis run scenarios/flood.yaml --seed 7 --out runs/flood

        dmcis run scenarios/flood.yaml --horizon 3600
    """
    from dmcis.core import SimulationRunner
    from dmcis.engine import ValidationFailed

    scenario = _load(scenario_file)
    console.print(Panel.fit(f"[bold blue]dmcis run[/bold blue] {escape(scenario.name)}", subtitle=f"v{__version__}"))

    try:
        with console.status("[bold green]Simulating..."):
            result = SimulationRunner(out_dir).execute(scenario, seed=seed, horizon=horizon)
    except ValidationFailed as e:
        _print_findings(e.report)
        console.print(f"[red]✗ {escape(str(e))}[/red]")
        raise SystemExit(EXIT_INVALID)
    except OSError as e:
        console.print(f"[red]✗ Could not write outputs: {escape(str(e))}[/red]")
        raise SystemExit(EXIT_IO)

    m = result.metrics
    console.print(f"✓ {len(result.trace)} trace record(s), {m.bundles_created} bundle(s), {m.warnings} warning(s)")
    console.print(f"✓ Outputs written to {out_dir}")
    sys.stdout.write(f"{result.digest}\n")


@cli.command()
@click.argument("scenario_file", type=click.Path(path_type=Path))
@click.option(
    "--param", "-p", "param",
    type=click.Choice(["tau", "map_count", "link_standard", "match_threshold", "dpc_count"]),
    required=True,
    help="Parameter to vary",
)
@click.option(
    "--values", "-v", "values",
    multiple=True,
    help="Sweep values; repeat the option or separate with commas",
)
@click.option("--reps", "-r", type=int, default=1, show_default=True, help="Replications per value")
@click.option("--base-seed", type=int, default=0, show_default=True, help="Seed of replication 0")
@click.option("--horizon", type=float, default=None, help="Simulated seconds per run")
@click.option("--jobs", "-j", type=int, default=1, show_default=True, help="Worker processes")
@click.option(
    "--out", "-o", "out_dir",
    type=click.Path(file_okay=False, path_type=Path),
    envvar=OUT_DIR_ENV,
    default="out",
    show_default=True,
    help=f"Output directory (env: {OUT_DIR_ENV})",
)
def sweep(
    scenario_file: Path,
    param: str,
    values: tuple[str, ...],
    reps: int,
    base_seed: int,
    horizon: Optional[float],
    jobs: int,
    out_dir: Path,
) -> None:
    """Run a parameter sweep and aggregate metrics per value.

    Writes per-run outputs under OUT/<param>=<value>/rep<r>/ plus
    sweep_metrics.csv, sweep_summary.csv and sweep_summary.md.

    Example:

        dmcis sweep scenarios/flood.yaml -p tau -v 1,2,3,4,5 -r 10 -j 4
    """
    from dmcis.experiments import SweepParameter, SweepSpec, parse_values, run_sweep
    from dmcis.reporters import MarkdownReporter

    scenario = _load(scenario_file)
    parameter = SweepParameter(param)
    try:
        spec = SweepSpec(
            parameter=parameter,
            values=parse_values(parameter, list(values)),
            replications=reps,
            base_seed=base_seed,
        )
    except ValueError as e:
        console.print(f"[red]✗ Invalid sweep: {escape(str(e))}[/red]")
        raise SystemExit(EXIT_PARSE)

    try:
        with console.status(f"[bold green]Sweeping {param}..."):
            outcome = run_sweep(scenario, spec, out_dir=out_dir, horizon=horizon, jobs=jobs)
    except OSError as e:
        console.print(f"[red]✗ Could not write outputs: {escape(str(e))}[/red]")
        raise SystemExit(EXIT_IO)

    sys.stdout.write(MarkdownReporter().sweep_table(outcome.aggregate, param))
    for value, problem in outcome.skipped:
        console.print(f"[yellow]⚠ {param}={value} skipped: {escape(problem)}[/yellow]")
    if not outcome.ok:
        raise SystemExit(EXIT_INVALID)


@cli.command()
@click.argument("metrics_file", type=click.Path(path_type=Path))
@click.option(
    "--format", "-f", "fmt",
    type=click.Choice(["markdown", "csv"]),
    default="markdown",
    help="Output format",
)
def report(metrics_file: Path, fmt: str) -> None:
    """Render a metrics table from metrics.csv, sweep_metrics.csv or trace.jsonl.

    Sweep rows are aggregated per value (mean and standard error); a
    trace file has its metrics recomputed offline.
    """
    import pandas as pd

    from dmcis.engine import TraceError, metrics_from_file
    from dmcis.experiments import aggregate
    from dmcis.reporters import MarkdownReporter

    try:
        if metrics_file.suffix == ".jsonl":
            frame = pd.DataFrame([metrics_from_file(metrics_file).to_row()])
        else:
            frame = pd.read_csv(metrics_file)
    except TraceError as e:
        console.print(f"[red]✗ {metrics_file}: {escape(str(e))}[/red]")
        raise SystemExit(EXIT_PARSE)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        console.print(f"[red]✗ {metrics_file}: {escape(str(e))}[/red]")
        raise SystemExit(EXIT_PARSE)
    except OSError as e:
        console.print(f"[red]✗ {escape(str(e))}[/red]")
        raise SystemExit(EXIT_IO)

    parameter = None
    if "value" in frame.columns:
        if "parameter" in frame.columns and not frame.empty:
            parameter = str(frame["parameter"].iloc[0])
        frame = aggregate(frame)

    if fmt == "csv":
        sys.stdout.write(frame.to_csv(index=False))
    elif parameter is not None or "runs" in frame.columns:
        sys.stdout.write(MarkdownReporter().sweep_table(frame, parameter))
    else:
        sys.stdout.write(MarkdownReporter().frame_table(f"# Metrics: {metrics_file.name}", frame))


if __name__ == "__main__":
    cli()
