import logging
import math

from shapely import LineString, box

from anisotag.core.exceptions import EmptyRegionError
from anisotag.src.gcode.schemas.gcode import Point2D, PrinterProfile, Region, Segment, TagLayout

logger = logging.getLogger(__name__)

def extrusion_length(l_i: float, profile: PrinterProfile) -> float:
    """Filament length fed for an infill line of length l_i.

    Half-elliptic bead of area pi*h*w/4 equated with fed filament pi*d_f^2/4 * l_f,
    scaled by the extrusion factor.
    """
    if l_i < 0:
        raise ValueError(f"line length must be non-negative, got {l_i}")
    return profile.extrusion_factor * (profile.layer_height * profile.linewidth / profile.filament_diameter ** 2) * l_i

def region_segments(region: Region, height: float, profile: PrinterProfile) -> list[Segment]:
    """Parallel lines at the region's axis angle, w apart, first one w/2 inside, serpentine order."""
    w = profile.linewidth
    if region.width < w:
        raise EmptyRegionError(f"region [{region.start:.5f}, {region.end:.5f}] is narrower than the {w} mm linewidth")

    delta = region.angle.delta
    direction = (math.cos(delta), math.sin(delta))
    normal = (-math.sin(delta), math.cos(delta))
    outline = box(region.start, 0.0, region.end, height)

    corners = [(region.start, 0.0), (region.end, 0.0), (region.start, height), (region.end, height)]
    offsets = [cx * normal[0] + cy * normal[1] for cx, cy in corners]
    c_min, c_max = min(offsets), max(offsets)
    reach = math.hypot(region.width, height) + 1.0

    segments = []
    k = 0
    while True:
        c = c_min + w / 2 + k * w
        if c > c_max - w / 2 + 1e-9:
            break
        px, py = c * normal[0], c * normal[1]
        line = LineString([
            (px - reach * direction[0], py - reach * direction[1]),
            (px + reach * direction[0], py + reach * direction[1]),
        ])
        clipped = outline.intersection(line)
        if not clipped.is_empty and clipped.geom_type == "LineString" and clipped.length > 1e-9:
            (ax, ay), (bx, by) = clipped.coords[0], clipped.coords[-1]
            a, b = Point2D(ax, ay), Point2D(bx, by)
            forward = (b.x - a.x) * direction[0] + (b.y - a.y) * direction[1] >= 0
            start, end = (a, b) if forward else (b, a)
            if len(segments) % 2 == 1:
                start, end = end, start
            segments.append(Segment(start, end))
        k += 1

    if not segments:
        raise EmptyRegionError(f"no infill line fits region [{region.start:.5f}, {region.end:.5f}]")
    return segments

def infill_segments(layout: TagLayout, profile: PrinterProfile) -> list[list[Segment]]:
    per_region = [region_segments(region, layout.height, profile) for region in layout.regions]
    logger.info(f"Infilled {len(per_region)} regions with {sum(len(s) for s in per_region)} lines")
    return per_region
