import logging
from pathlib import Path
from typing import Optional

import click

from anisotag.core.config import settings
from anisotag.src.codec.nonlinear_map import build_nonlinear_map, cache_path, save_map
from anisotag.src.harness.commands.common import config_options, handle_app_errors
from anisotag.src.harness.schemas.harness import RunConfig

logger = logging.getLogger(__name__)

@click.command("buildmap")
@click.option("--knots", type=int, default=None, help=f"[default: {settings.ANISOTAG_MAP_KNOTS}]")
@click.option("--cache-dir", type=click.Path(file_okay=False, path_type=Path), default=None,
              help=f"[default: {settings.ANISOTAG_MAP_CACHE_DIR}]")
@config_options
@handle_app_errors
def buildmap_command(knots: Optional[int], cache_dir: Optional[Path], scenario_path, **flags):
    """Build the nonlinear map for the configured geometry and cache it."""
    cfg = RunConfig.resolve(flags, scenario_path)
    knots = knots or settings.ANISOTAG_MAP_KNOTS
    nl_map = build_nonlinear_map(cfg.geometry, knots)
    path = save_map(nl_map, cache_path(cfg.geometry, knots, cache_dir))
    logger.info(f"Map cached at {path}")
    click.echo(f"map: {path}")
    click.echo(f"sha256: {nl_map.digest}")
