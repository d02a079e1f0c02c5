import math

import numpy as np
import pytest

from anisotag.core.config import settings
from anisotag.src.codec.codec import state_angles
from anisotag.src.codec.nonlinear_map import build_nonlinear_map, cache_path, save_map
from anisotag.src.codec.schemas.codec import CodecConfig
from anisotag.src.gcode.schemas.gcode import PrinterProfile, TagLayout
from anisotag.src.geometry.schemas.geometry import DetectionGeometry, MicrostructureAngle
from anisotag.src.harness.schemas.harness import RunConfig

@pytest.fixture(scope="session")
def geometry() -> DetectionGeometry:
    return DetectionGeometry()

@pytest.fixture(scope="session")
def map_cache_dir(tmp_path_factory):
    """Session cache directory, so commands never write into the working tree."""
    path = tmp_path_factory.mktemp("map-cache")
    previous = settings.ANISOTAG_MAP_CACHE_DIR
    settings.ANISOTAG_MAP_CACHE_DIR = str(path)
    yield path
    settings.ANISOTAG_MAP_CACHE_DIR = previous

@pytest.fixture(scope="session")
def nl_map(geometry, map_cache_dir):
    """Nonlinear map for the default rig, built once and seeded into the cache."""
    built = build_nonlinear_map(geometry, settings.ANISOTAG_MAP_KNOTS)
    save_map(built, cache_path(geometry, settings.ANISOTAG_MAP_KNOTS, map_cache_dir))
    return built

@pytest.fixture
def profile() -> PrinterProfile:
    return PrinterProfile()

@pytest.fixture
def noiseless() -> RunConfig:
    return RunConfig(noise_sigma=0.0)

@pytest.fixture(scope="session")
def alphabet(nl_map) -> list[MicrostructureAngle]:
    return state_angles(CodecConfig(), nl_map)

def random_layout(rng: np.random.Generator, width: float = 40.0, height: float = 20.0) -> TagLayout:
    """Random partition into 2..6 regions, each at least 2 mm wide, random axis angles."""
    n = int(rng.integers(2, 7))
    cuts = np.sort(rng.uniform(0.0, width - 2.0 * n, size=n - 1))
    edges = [0.0] + [float(c + 2.0 * (i + 1)) for i, c in enumerate(cuts)] + [width]
    angles = [MicrostructureAngle.from_delta(float(rng.uniform(0.0, math.pi))) for _ in range(n)]
    regions = [{"start": edges[i], "end": edges[i + 1], "angle": angles[i]} for i in range(n)]
    return TagLayout(width=width, height=height, regions=regions)
