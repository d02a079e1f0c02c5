import logging
from pathlib import Path
from typing import Optional

import click

from anisotag.core.config import settings
from anisotag.src.harness.commands.common import config_options, handle_app_errors, map_for
from anisotag.src.harness.schemas.harness import ExperimentSpec, RunConfig
from anisotag.src.harness.sweep import run_sweep

logger = logging.getLogger(__name__)

INTERRUPTED = 130

def parse_values(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(item) for item in text.split(",") if item.strip())
    except ValueError:
        raise click.BadParameter(f"expected comma separated numbers, got {text!r}")

@click.command("sweep")
@click.option("--variable", type=click.Choice(["n_regions", "bits_per_region", "noise_sigma", "region_vs_beam_width",
                                               "gray_vs_binary"]), required=True)
@click.option("--values", "values_text", required=True, help="comma separated sweep values")
@click.option("--trials", type=int, default=None, help=f"[default: {settings.ANISOTAG_DEFAULT_TRIALS}]")
@click.option("--out", "out", type=click.Path(file_okay=False, path_type=Path), default=Path("sweep"), show_default=True)
@config_options
@handle_app_errors
def sweep_command(variable: str, values_text: str, trials: Optional[int], out: Path, scenario_path, **flags):
    """Run a parameter sweep, writing results.csv and summary.csv."""
    base = RunConfig.resolve(flags, scenario_path)
    spec = ExperimentSpec(
        variable=variable,
        values=parse_values(values_text),
        trials=trials or settings.ANISOTAG_DEFAULT_TRIALS,
        seed=base.seed,
        output=out,
        base=base,
    )
    logger.info(f"Sweeping {variable} over {list(spec.values)} with {spec.trials} trials per point")
    outcome = run_sweep(spec, map_for)
    click.echo(f"results: {outcome.results_path}")
    click.echo(f"summary: {outcome.summary_path}")
    if outcome.interrupted:
        raise SystemExit(INTERRUPTED)
