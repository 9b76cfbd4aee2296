"""Command-line interface for the X-wave quantization toolkit."""

import functools
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Optional

import click
from dotenv import load_dotenv
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from xwave_quant import __version__
from xwave_quant.data.config_loader import ConfigLoader, config_hash
from xwave_quant.data.writers import field_frame, write_csv, write_summary
from xwave_quant.errors import ConfigError, XWaveError
from xwave_quant.models.field import FieldEnvelope
from xwave_quant.settings import get_settings
from xwave_quant.tools.experiments import run_basis, run_opa, run_propagate

# Load environment variables
load_dotenv()

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

# Rich console for better output
console = Console()


def common_options(command: Callable) -> Callable:
    """Options shared by every subcommand."""
    options = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False, path_type=Path),
                     default=None, help="JSON run configuration (defaults apply when omitted)"),
        click.option("--out", "out_dir", type=click.Path(file_okay=False, path_type=Path),
                     default=Path("xwave_output"), show_default=True, help="Output directory"),
        click.option("--natural-units", is_flag=True, help="Force hbar = c = 1"),
        click.option("--threads", type=click.IntRange(min=1), default=None,
                     help="Worker threads (default: XWAVE_THREADS or 1); results do not depend on it"),
        click.option("--verbose", is_flag=True, help="Log at INFO level"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _print_config_error(exc: ConfigError) -> None:
    console.print(f"[red]Configuration error: {exc}[/red]")
    for line in exc.diagnostics:
        console.print(f"[red]  - {line}[/red]")


def _format(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _print_values(title: str, values: Dict[str, Any]) -> None:
    table = Table(title=title)
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", style="magenta")
    for key, value in values.items():
        table.add_row(key, _format(value))
    console.print(table)


def _print_summary(title: str, values: Dict[str, Any], validation: Dict[str, Any]) -> None:
    _print_values(title, values)

    colour = {"ok": "green", "caution": "yellow", "failure": "red"}[validation["level"]]
    console.print(f"[bold {colour}]Quality: {validation['level'].upper()}[/bold {colour}]")
    for message in validation["violations"]:
        console.print(f"[{colour}]  {message}[/{colour}]")


def _run(
    command: str,
    config_path: Optional[Path],
    out_dir: Path,
    natural_units: bool,
    threads: Optional[int],
    verbose: bool,
    runner: Callable[[ConfigLoader, int], Dict[str, Any]],
    writer: Callable[[Path, Dict[str, Any], str], None],
) -> None:
    """Load, run, write and exit with the documented code."""
    try:
        settings = get_settings()
        settings.configure_logging(verbose)
        loader = ConfigLoader(config_path, natural_units=natural_units)
    except ConfigError as exc:
        _print_config_error(exc)
        sys.exit(EXIT_CONFIG)

    console.print(Panel.fit(
        f"[bold]xwave {command}[/bold]\n"
        f"version {__version__}, config hash {config_hash(loader.config)}, "
        f"units {loader.config.units.system.value}",
        title="X-wave toolkit",
    ))
    try:
        result = runner(loader, threads or settings.threads)
    except ConfigError as exc:
        _print_config_error(exc)
        sys.exit(EXIT_CONFIG)
    except XWaveError as exc:
        console.print(f"[red]Numerical failure ({type(exc).__name__}): {exc}[/red]")
        sys.exit(EXIT_NUMERIC)

    out_dir.mkdir(parents=True, exist_ok=True)
    writer(out_dir, result, config_hash(loader.config))
    if result.get("diagnostics"):
        _print_values(f"{command} diagnostics", result["diagnostics"])
    _print_summary(f"{command} summary", result["summary"], result["validation"])
    console.print(f"[yellow]Results written to {out_dir}[/yellow]")

    if result.get("error") is not None:
        console.print(f"[red]Numerical failure ({type(result['error']).__name__}): {result['error']}[/red]")
        sys.exit(EXIT_NUMERIC)
    if not result["validation"]["passed"]:
        sys.exit(EXIT_NUMERIC)
    sys.exit(EXIT_OK)


def _write_basis(out_dir: Path, result: Dict[str, Any], digest: str) -> None:
    write_csv(out_dir / "basis_spectra.csv", result["spectra"], digest)
    write_csv(out_dir / "orthonormality.csv", result["overlaps"], digest)
    velocities = sorted({field["v"] for field in result["fields"]})
    for field in result["fields"]:
        envelope = FieldEnvelope(r_grid=field["r_grid"], zeta_grid=field["zeta_grid"], values=field["values"])
        name = f"field_p{field['p']}_v{velocities.index(field['v'])}.csv"
        write_csv(out_dir / name, field_frame(envelope), digest)


def _write_propagate(out_dir: Path, result: Dict[str, Any], digest: str) -> None:
    for index, row in enumerate(result["comparison"]):
        write_csv(out_dir / f"field_direct_t{index}.csv", field_frame(row["direct"]), digest)
        write_csv(out_dir / f"field_xwave_t{index}.csv", field_frame(row["xwave"]), digest)
    write_csv(out_dir / "error_report.csv", result["report"], digest)


def _write_opa(out_dir: Path, result: Dict[str, Any], digest: str) -> None:
    for entry in result["maps"]:
        write_csv(out_dir / f"opa_map_p{entry['p']}_q{entry['q']}.csv", entry["frame"], digest)
    write_csv(out_dir / "widths.csv", result["widths"], digest)
    write_csv(out_dir / "schmidt.csv", result["schmidt"], digest)
    write_summary(out_dir / "summary.json", result["summary"])
    write_summary(out_dir / "diagnostics.json", result["diagnostics"])


@click.group(name="xwave")
@click.version_option(__version__, prog_name="xwave")
def cli():
    """X-wave quantization and OPA entanglement toolkit."""
    pass


@cli.command()
@common_options
def basis(config_path, out_dir, natural_units, threads, verbose):
    """Sample the Laguerre spectra, mode fields and orthonormality matrix."""
    _run("basis", config_path, out_dir, natural_units, threads, verbose, run_basis, _write_basis)


@cli.command()
@common_options
def propagate(config_path, out_dir, natural_units, threads, verbose):
    """Propagate an input spectrum directly and through the X-wave expansion."""
    _run("propagate", config_path, out_dir, natural_units, threads, verbose, run_propagate, _write_propagate)


@cli.command()
@common_options
@click.option("--separable-test", is_flag=True, help="Run the Schmidt path on a synthetic product amplitude")
@click.option("--combined-modes", is_flag=True, help="Decompose over all orders up to p_max together")
def opa(config_path, out_dir, natural_units, threads, verbose, separable_test, combined_modes):
    """Pair distributions, locking widths and entanglement of the X-wave amplifier."""
    if separable_test and combined_modes:
        raise click.UsageError("--separable-test and --combined-modes are mutually exclusive")
    runner = functools.partial(run_opa, separable_test=separable_test, combined_modes=combined_modes)
    _run("opa", config_path, out_dir, natural_units, threads, verbose, runner, _write_opa)


if __name__ == "__main__":
    cli()
