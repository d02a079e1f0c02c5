import logging
from pathlib import Path
from typing import Optional

import click

from anisotag.src.codec.codec import state_angles
from anisotag.src.gcode.parser import read_gcode
from anisotag.src.gcode.schemas.gcode import TagLayout
from anisotag.src.harness.commands.common import config_options, handle_app_errors, map_for, read_sidecar
from anisotag.src.harness.pipeline import layout_from_program
from anisotag.src.harness.schemas.harness import RunConfig
from anisotag.src.optics.files import write_references, write_trace
from anisotag.src.optics.rig import frame_period_ms, reference_frames, region_coverage, simulate_swipe

logger = logging.getLogger(__name__)

def references_path(trace_path: Path) -> Path:
    return Path(trace_path).with_suffix(".refs.csv")

@click.command("simulate")
@click.option("--gcode", "gcode_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option("--layout", "layout_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help="layout sidecar written by encode")
@click.option("--out", "out", type=click.Path(dir_okay=False, path_type=Path), required=True, help="trace CSV")
@click.option("--references", "refs_out", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="reference CSV [default: <out>.refs.csv]")
@config_options
@handle_app_errors
def simulate_command(gcode_path: Optional[Path], layout_path: Optional[Path], out: Path, refs_out: Optional[Path],
                     scenario_path, **flags):
    """Swipe a printed tag under the virtual rig and record the sensor trace."""
    if (gcode_path is None) == (layout_path is None):
        raise click.UsageError("give exactly one of --gcode or --layout")
    cfg = RunConfig.resolve(flags, scenario_path)

    if layout_path is not None:
        layout = TagLayout.model_validate(read_sidecar(layout_path)["layout"])
    else:
        layout = layout_from_program(read_gcode(gcode_path), cfg)

    scenario = cfg.scenario(layout, state_angles(cfg.codec, map_for(cfg)))
    frames = simulate_swipe(scenario)
    write_trace(frames, out)
    ambient, states = reference_frames(scenario)
    write_references(ambient, states, refs_out or references_path(out))

    coverage = " ".join(f"{c:.2f}" for c in region_coverage(scenario))
    period = frame_period_ms(cfg.sensor_count)
    logger.info(f"Per-region peak coverage: {coverage}")
    logger.info(f"Frame period {period:.2f} ms, implied swipe speed {cfg.step_mm / period:.3f} m/s")
    click.echo(f"frames: {len(frames)}")
    click.echo(f"trace: {out}")
