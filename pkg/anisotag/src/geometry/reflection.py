"""Specular reflection of the incident beam on a half-cylinder infill line.

The beam travels along a = (0, sin alpha, -cos alpha) and hits the origin.
The surface normal of the line at parameter theta is
n = (sin theta cos phi, sin theta sin phi, cos theta); the reflected ray is
b = a - 2 (n . a) n.
"""
import logging
import math

import numpy as np

from anisotag.core.exceptions import GeometryDomainError
from anisotag.src.geometry.schemas.geometry import DetectionGeometry, Vec3

logger = logging.getLogger(__name__)

HALF_PI = math.pi / 2

def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < HALF_PI:
        raise GeometryDomainError(f"incident angle {alpha} rad outside (0, pi/2)")

def reflect_ray(alpha: float, theta: float, phi: float) -> Vec3:
    _check_alpha(alpha)
    if not -HALF_PI < theta < HALF_PI:
        raise GeometryDomainError(f"normal parameter theta={theta} outside (-pi/2, pi/2)")

    sin_t, cos_t = math.sin(theta), math.cos(theta)
    sin_p, cos_p = math.sin(phi), math.cos(phi)
    sin_a, cos_a = math.sin(alpha), math.cos(alpha)

    gamma = sin_a * sin_t * sin_p - cos_a * cos_t
    return Vec3(
        -2.0 * gamma * sin_t * cos_p,
        sin_a - 2.0 * gamma * sin_t * sin_p,
        -cos_a - 2.0 * gamma * cos_t,
    )

def reflect_rays(alpha: float, thetas: np.ndarray, phi: float) -> np.ndarray:
    """Vectorized reflect_ray; returns an (N, 3) array of unit directions."""
    _check_alpha(alpha)
    thetas = np.asarray(thetas, dtype=float)
    if np.any(np.abs(thetas) >= HALF_PI):
        raise GeometryDomainError("normal parameter theta outside (-pi/2, pi/2)")

    sin_t, cos_t = np.sin(thetas), np.cos(thetas)
    sin_p, cos_p = math.sin(phi), math.cos(phi)
    sin_a, cos_a = math.sin(alpha), math.cos(alpha)

    gamma = sin_a * sin_t * sin_p - cos_a * cos_t
    return np.column_stack((
        -2.0 * gamma * sin_t * cos_p,
        sin_a - 2.0 * gamma * sin_t * sin_p,
        -cos_a - 2.0 * gamma * cos_t,
    ))

def cylinder_axis(phi: float) -> Vec3:
    return Vec3(-math.sin(phi), math.cos(phi), 0.0)

def cone_half_angle(alpha: float, phi: float) -> float:
    """Angle every reflected ray keeps with the cylindrical axis."""
    _check_alpha(alpha)
    return math.acos(max(-1.0, min(1.0, math.cos(phi) * math.sin(alpha))))

def fixed_point(geom: DetectionGeometry) -> tuple[float, float]:
    """Plane point (u, v) = (x, z) hit by the top-surface reflection."""
    return (0.0, geom.d / math.tan(geom.alpha))
