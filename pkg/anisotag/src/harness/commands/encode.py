import logging
import math
from pathlib import Path

import click

from anisotag.src.codec.codec import pad_payload
from anisotag.src.codec.gray import bits_from_string, bits_to_string
from anisotag.src.gcode.emitter import emit_gcode, write_gcode
from anisotag.src.harness.commands.common import (
    config_options,
    handle_app_errors,
    map_for,
    sidecar_path,
    write_sidecar,
)
from anisotag.src.harness.pipeline import build_tag
from anisotag.src.harness.schemas.harness import RunConfig

logger = logging.getLogger(__name__)

@click.command("encode")
@click.option("--payload", default="", show_default=True, help="bit string, zero-padded to n*m bits")
@click.option("--out", "out", type=click.Path(dir_okay=False, path_type=Path), required=True, help="G-code output file")
@config_options
@handle_app_errors
def encode_command(payload: str, out: Path, scenario_path, **flags):
    """Encode a payload into a printable tag (.gcode plus layout sidecar)."""
    cfg = RunConfig.resolve(flags, scenario_path)
    nl_map = map_for(cfg)
    bits = pad_payload(bits_from_string(payload), cfg.codec)
    codes, layout = build_tag(bits, cfg, nl_map)

    program = emit_gcode(layout, cfg.profile)
    write_gcode(program, out)
    sidecar = write_sidecar(
        {
            "config": cfg.model_dump(),
            "config_hash": cfg.config_hash,
            "map_hash": nl_map.digest if nl_map is not None else None,
            "payload": bits_to_string(bits),
            "values": [code.value for code in codes],
            "angles_deg": [round(math.degrees(code.angle.delta), 9) for code in codes],
            "layout": layout.model_dump(mode="json"),
        },
        sidecar_path(out),
    )
    logger.info(f"Encoded {len(bits)} bits into {cfg.n_regions} regions")
    click.echo(f"gcode: {out}")
    click.echo(f"layout: {sidecar}")
