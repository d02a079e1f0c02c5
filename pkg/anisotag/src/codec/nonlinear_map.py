"""Remapping of code values to cylindrical axis angles.

Uniformly spaced axis angles give unevenly spaced intersection angles on the
detection circle. The map inverts psi(delta) so that code value u in
[0, 180) degrees lands on evenly spaced psi values.
"""
import logging
import math
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from anisotag.core.config import settings
from anisotag.core.exceptions import MapCacheError, MonotonicityError
from anisotag.src.geometry.pattern import circle_intersection_angle
from anisotag.src.geometry.schemas.geometry import DetectionGeometry, MicrostructureAngle
from anisotag.utils.hashing import model_hash, sha256_hex

logger = logging.getLogger(__name__)

MAGIC = b"ATMAP1"

def delta_grid(knots: int) -> np.ndarray:
    """Open scan grid over (0, pi)."""
    return math.pi * np.arange(1, knots + 1) / (knots + 1)

class NonlinearMap:
    def __init__(self, geometry: DetectionGeometry, deltas: np.ndarray, psis: np.ndarray):
        deltas = np.asarray(deltas, dtype=float)
        psis = np.asarray(psis, dtype=float)
        if deltas.shape != psis.shape or deltas.ndim != 1 or len(deltas) < 4:
            raise ValueError(f"table must be two equal 1-D arrays of at least 4 knots, got {deltas.shape} and {psis.shape}")

        steps = np.diff(psis)
        if not (np.all(steps > 0) or np.all(steps < 0)):
            bad = int(np.nonzero(np.sign(steps) != np.sign(steps[0]))[0][0]) if np.any(steps) else 0
            raise MonotonicityError(
                f"psi(delta) is not strictly monotone near delta={math.degrees(deltas[bad + 1]):.6f} deg"
            )

        self.geometry = geometry
        self.deltas = deltas
        self.psis = psis
        self.increasing = bool(steps[0] > 0)
        self.psi_start = float(psis[0])
        self.psi_end = float(psis[-1])

        order = slice(None) if self.increasing else slice(None, None, -1)
        self._delta_of_psi = PchipInterpolator(psis[order], deltas[order], extrapolate=False)
        self._psi_of_delta = PchipInterpolator(deltas, psis, extrapolate=False)

    def __call__(self, u_degrees: float) -> float:
        """M(u): code angle in degrees -> axis angle delta in radians."""
        target = self.psi_start + (u_degrees / 180.0) * (self.psi_end - self.psi_start)
        return float(self._delta_of_psi(target))

    def psi_of(self, delta: float) -> float:
        """The map's own psi(delta): exact inverse of the psi -> delta interpolant."""
        lo, hi = sorted((self.psi_start, self.psi_end))
        return brentq(lambda psi: float(self._delta_of_psi(psi)) - delta, lo, hi, xtol=1e-14, rtol=1e-15)

    def inverse(self, delta: float) -> float:
        """M^-1(delta) in degrees."""
        return 180.0 * (self.psi_of(delta) - self.psi_start) / (self.psi_end - self.psi_start)

    def interpolated_psi(self, delta: float) -> float:
        return float(self._psi_of_delta(delta))

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.deltas[0]), float(self.deltas[-1])

    def to_bytes(self) -> bytes:
        geom = self.geometry
        header = np.array(
            [geom.alpha, geom.d, geom.circle_radius, geom.sensor_count, len(self.deltas)],
            dtype="<f8",
        )
        pairs = np.column_stack((self.deltas, self.psis)).astype("<f8")
        return MAGIC + header.tobytes() + pairs.tobytes()

    @property
    def digest(self) -> str:
        return sha256_hex(self.to_bytes())

    @classmethod
    def from_bytes(cls, blob: bytes) -> "NonlinearMap":
        if not blob.startswith(MAGIC):
            raise MapCacheError("missing ATMAP1 magic")
        body = blob[len(MAGIC):]
        if len(body) < 5 * 8:
            raise MapCacheError("truncated header")
        alpha, d, radius, sensors, knots = np.frombuffer(body[:40], dtype="<f8")
        knots = int(knots)
        expected = 40 + knots * 16
        if len(body) != expected:
            raise MapCacheError(f"expected {expected} bytes after magic, found {len(body)}")
        pairs = np.frombuffer(body[40:], dtype="<f8").reshape(knots, 2)
        geometry = DetectionGeometry(alpha=float(alpha), d=float(d), circle_radius=float(radius), sensor_count=int(sensors))
        return cls(geometry, pairs[:, 0].copy(), pairs[:, 1].copy())

def build_nonlinear_map(geom: DetectionGeometry, knots: int | None = None) -> NonlinearMap:
    knots = knots or settings.ANISOTAG_MAP_KNOTS
    deltas = delta_grid(knots)
    logger.info(f"Scanning psi(delta) over {knots} knots for alpha={math.degrees(geom.alpha):.3f} deg, d={geom.d} mm, r={geom.circle_radius} mm")
    psis = np.array([circle_intersection_angle(geom, MicrostructureAngle.from_delta(delta)) for delta in deltas])
    nl_map = NonlinearMap(geom, deltas, psis)
    logger.info(f"Nonlinear map built: psi from {math.degrees(nl_map.psi_start):.3f} to {math.degrees(nl_map.psi_end):.3f} deg")
    return nl_map

def save_map(nl_map: NonlinearMap, path: Path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(nl_map.to_bytes())
    except OSError as e:
        raise MapCacheError(f"cannot write map cache {path}: {e}")
    return path

def load_map(path: Path) -> NonlinearMap:
    path = Path(path)
    try:
        blob = path.read_bytes()
    except OSError as e:
        raise MapCacheError(f"cannot read map cache {path}: {e}")
    return NonlinearMap.from_bytes(blob)

def cache_path(geom: DetectionGeometry, knots: int, cache_dir: Path | str | None = None) -> Path:
    cache_dir = Path(cache_dir or settings.ANISOTAG_MAP_CACHE_DIR)
    return cache_dir / f"map-{model_hash(geom)[:16]}-{knots}.atmap"

def load_or_build_map(geom: DetectionGeometry, cache_dir: Path | str | None = None, knots: int | None = None) -> NonlinearMap:
    knots = knots or settings.ANISOTAG_MAP_KNOTS
    path = cache_path(geom, knots, cache_dir)
    if path.exists():
        try:
            nl_map = load_map(path)
            if nl_map.geometry == geom:
                logger.info(f"Loaded nonlinear map from {path}")
                return nl_map
            logger.warning(f"Map cache {path} holds another geometry, rebuilding")
        except MapCacheError as e:
            logger.warning(f"Ignoring unreadable map cache: {e}")
    nl_map = build_nonlinear_map(geom, knots)
    save_map(nl_map, path)
    logger.info(f"Nonlinear map cached at {path}")
    return nl_map
