import logging
import math

import numpy as np

from anisotag.core.exceptions import DegeneratePatternError, NoIntersectionError
from anisotag.src.geometry.reflection import cone_half_angle, fixed_point, reflect_rays
from anisotag.src.geometry.schemas.geometry import (
    ConicDescriptor,
    DetectionGeometry,
    IlluminationPattern,
    MicrostructureAngle,
)

logger = logging.getLogger(__name__)

# reflected rays with a smaller y-component land too far away to matter
MIN_FORWARD = 1e-6
ROOT_TOLERANCE_MM = 1e-10
SCAN_POINTS = 4096

def theta_grid(n_samples: int) -> np.ndarray:
    """Open grid over (-pi/2, pi/2) that always contains theta = 0."""
    k = np.arange(n_samples) - (n_samples - 1) // 2
    return k * (math.pi / (n_samples + 1))

def project_to_plane(rays: np.ndarray, d: float) -> np.ndarray:
    scale = d / rays[:, 1]
    return np.column_stack((rays[:, 0] * scale, rays[:, 2] * scale))

def sample_pattern(geom: DetectionGeometry, angle: MicrostructureAngle, n_samples: int = 512) -> IlluminationPattern:
    if n_samples < 3:
        raise ValueError(f"n_samples must be at least 3, got {n_samples}")

    thetas = theta_grid(n_samples)
    rays = reflect_rays(geom.alpha, thetas, angle.phi)
    forward = rays[:, 1] > MIN_FORWARD
    thetas, rays = thetas[forward], rays[forward]
    samples = project_to_plane(rays, geom.d)

    degenerate = angle.delta == 0.0
    conic = None if degenerate else conic_params(geom, angle)
    return IlluminationPattern(
        samples=samples,
        thetas=thetas,
        conic=conic,
        generating_angle=angle,
        degenerate=degenerate,
    )

def conic_params(geom: DetectionGeometry, angle: MicrostructureAngle) -> ConicDescriptor:
    """Eccentricity, focus and directrix of the pattern from the Dandelin sphere construction."""
    phi = angle.phi
    xi = cone_half_angle(geom.alpha, phi)
    cos_xi = math.cos(phi) * math.sin(geom.alpha)
    if angle.delta == 0.0 or cos_xi <= 0.0:
        raise DegeneratePatternError(f"pattern for delta={angle.delta} is the line u = 0")

    sin_phi, cos_phi = math.sin(phi), math.cos(phi)
    sin_xi = math.sin(xi)
    # distance from the apex, along the axis, to the sphere touching the plane
    s = geom.d / (cos_phi + sin_xi)
    focus = (-s * sin_phi, 0.0)

    if abs(sin_phi) < 1e-12:
        directrix, branch_sign, eccentricity = None, 0, 0.0
    else:
        directrix = (geom.d * cos_phi - s * cos_xi * cos_xi) / sin_phi
        branch_sign = 1 if sin_phi > 0 else -1
        eccentricity = abs(sin_phi) / cos_xi

    return ConicDescriptor(
        eccentricity=eccentricity,
        focus=focus,
        xi=xi,
        fixed_point=fixed_point(geom),
        directrix=directrix,
        branch_sign=branch_sign,
    )

def _distance_from_fixed_point(geom: DetectionGeometry, phi: float, thetas: np.ndarray) -> np.ndarray:
    rays = reflect_rays(geom.alpha, thetas, phi)
    u0, v0 = fixed_point(geom)
    out = np.full(len(thetas), np.inf)
    forward = rays[:, 1] > 0.0
    if np.any(forward):
        points = project_to_plane(rays[forward], geom.d)
        out[forward] = np.hypot(points[:, 0] - u0, points[:, 1] - v0)
    return out

def _first_crossing(geom: DetectionGeometry, phi: float, branch: int) -> tuple[float, float] | None:
    steps = np.arange(1, SCAN_POINTS + 1) * (math.pi / 2 / (SCAN_POINTS + 1))
    thetas = branch * steps
    reach = _distance_from_fixed_point(geom, phi, thetas) - geom.circle_radius
    hits = np.nonzero(reach >= 0.0)[0]
    if len(hits) == 0:
        return None
    k = int(hits[0])
    lo = 0.0 if k == 0 else float(thetas[k - 1])
    return lo, float(thetas[k])

def circle_intersection_angle(geom: DetectionGeometry, angle: MicrostructureAngle, branch: int = 1) -> float:
    """Polar angle psi, seen from the fixed point, where one branch of the pattern meets the detection circle.

    branch=+1 follows theta > 0, branch=-1 follows theta < 0.
    """
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")

    brackets = {b: _first_crossing(geom, angle.phi, b) for b in (1, -1)}
    missing = [b for b, bracket in brackets.items() if bracket is None]
    if missing:
        raise NoIntersectionError(
            f"pattern for delta={math.degrees(angle.delta):.6f} deg does not reach the "
            f"{geom.circle_radius} mm detection circle",
            delta=angle.delta,
        )

    lo, hi = brackets[branch]
    theta = hi
    for _ in range(200):
        theta = 0.5 * (lo + hi)
        reach = _distance_from_fixed_point(geom, angle.phi, np.array([theta]))[0] - geom.circle_radius
        if abs(reach) <= ROOT_TOLERANCE_MM or theta in (lo, hi):
            break
        if reach < 0.0:
            lo = theta
        else:
            hi = theta

    rays = reflect_rays(geom.alpha, np.array([theta]), angle.phi)
    u, v = project_to_plane(rays, geom.d)[0]
    u0, v0 = fixed_point(geom)
    return math.atan2(v - v0, u - u0)
