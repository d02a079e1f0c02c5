import logging
import math
from decimal import Decimal
from pathlib import Path

from anisotag.core.exceptions import ArtifactIOError
from anisotag.src.gcode.schemas.gcode import (
    GcodeInstruction,
    GcodeProgram,
    OpaqueLine,
    PrinterProfile,
    TagLayout,
)
from anisotag.src.gcode.toolpath import extrusion_length, infill_segments
from anisotag.utils.hashing import model_hash

logger = logging.getLogger(__name__)

LIFT_MM = 5.0

def fixed(value: float) -> Decimal:
    """Quantize to the 5-decimal grid used in the file; never emits -0."""
    q = Decimal(f"{value:.5f}")
    return abs(q) if q == 0 else q

def _header(layout: TagLayout, profile: PrinterProfile) -> list[OpaqueLine]:
    p = profile
    return [OpaqueLine(raw=raw) for raw in (
        "; anisotag tag program",
        f"; profile filament_diameter={fixed(p.filament_diameter)} nozzle_diameter={fixed(p.nozzle_diameter)} "
        f"linewidth={fixed(p.linewidth)} layer_height={fixed(p.layer_height)} z_print={fixed(p.z_print)} "
        f"feed_rate={fixed(p.feed_rate)} extrusion_factor={fixed(p.extrusion_factor)}",
        f"; layout_sha256 {model_hash(layout)}",
        f"; regions {len(layout.regions)} width {fixed(layout.width)} height {fixed(layout.height)}",
        "; extrusion relative, one E value per G1 move",
        "G21 ; millimeters",
        "G90 ; absolute XYZ",
        "M83 ; relative E",
    )]

def emit_gcode(layout: TagLayout, profile: PrinterProfile, origin: tuple[float, float] = (0.0, 0.0)) -> GcodeProgram:
    ox, oy = origin
    z = fixed(profile.z_print)
    feed = fixed(profile.feed_rate)
    travel = fixed(profile.travel_rate)

    lines: list = _header(layout, profile)
    for index, segments in enumerate(infill_segments(layout, profile)):
        region = layout.regions[index]
        lines.append(OpaqueLine(raw=f"; region {index} delta {fixed(math.degrees(region.angle.delta))}"))

        first = segments[0].start
        x, y = fixed(first.x + ox), fixed(first.y + oy)
        lines.append(GcodeInstruction(command="G0", x=x, y=y, z=z, f=travel))

        waypoints = []
        for i, segment in enumerate(segments):
            if i > 0:
                waypoints.append(segment.start)
            waypoints.append(segment.end)

        for point in waypoints:
            nx, ny = fixed(point.x + ox), fixed(point.y + oy)
            length = math.hypot(float(nx - x), float(ny - y))
            if length == 0.0:
                continue
            e = fixed(extrusion_length(length, profile))
            lines.append(GcodeInstruction(command="G1", x=nx, y=ny, f=feed, e=e))
            x, y = nx, ny

    lines.append(GcodeInstruction(command="G0", z=fixed(profile.z_print + LIFT_MM), f=travel))
    lines.append(OpaqueLine(raw="; end"))

    program = GcodeProgram(lines=lines, extrusion_mode="relative")
    logger.info(f"Emitted {len(program.instructions)} moves for {len(layout.regions)} regions")
    return program

def write_gcode(program: GcodeProgram, path: Path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(program.render())
    except (OSError, UnicodeEncodeError) as e:
        logger.error(f"Cannot write G-code to {path}: {e}")
        raise ArtifactIOError(f"cannot write G-code to {path}: {e}")
    return path
