import bisect
import logging
import math
from typing import Sequence

from anisotag.core.exceptions import AmbiguousRegionError
from anisotag.src.gcode.schemas.gcode import GcodeProgram, Segment

logger = logging.getLogger(__name__)

# segments within this angular distance of the longest one join its vote
VOTE_WINDOW = math.radians(0.5)

def _axial(segment: Segment) -> float:
    angle = math.atan2(segment.end.y - segment.start.y, segment.end.x - segment.start.x)
    return angle % math.pi

def _axial_distance(a: float, b: float) -> float:
    diff = abs(a - b) % math.pi
    return min(diff, math.pi - diff)

def _vote(segments: list[Segment]) -> float:
    longest = max(segments, key=lambda s: s.length)
    seed = _axial(longest)
    sx = sy = 0.0
    for segment in segments:
        angle = _axial(segment)
        if _axial_distance(angle, seed) <= VOTE_WINDOW:
            sx += segment.length * math.cos(2 * angle)
            sy += segment.length * math.sin(2 * angle)
    delta = (math.atan2(sy, sx) / 2) % math.pi
    if math.pi - delta < 1e-12:
        delta = 0.0
    return delta

def angle_estimate(
    program: GcodeProgram,
    layout_bounds: Sequence[tuple[float, float]],
    origin: tuple[float, float] = (0.0, 0.0),
) -> list[float]:
    """Recovered axis angle per region, delta in [0, pi), from the extruding moves."""
    starts = [lo for lo, _ in layout_bounds]
    buckets: list[list[Segment]] = [[] for _ in layout_bounds]
    for segment, _ in program.extruding_moves():
        mid_x = (segment.start.x + segment.end.x) / 2 - origin[0]
        index = bisect.bisect_right(starts, mid_x) - 1
        index = min(max(index, 0), len(layout_bounds) - 1)
        buckets[index].append(segment)

    angles = []
    for index, segments in enumerate(buckets):
        if not segments:
            raise AmbiguousRegionError(f"no extruding segments in region {index} {tuple(layout_bounds[index])}")
        angles.append(_vote(segments))
    logger.info(f"Recovered {len(angles)} region angles from {sum(len(b) for b in buckets)} extruding moves")
    return angles
