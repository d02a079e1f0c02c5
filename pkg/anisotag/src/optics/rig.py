"""Virtual detection rig: sensor ring response, photoresistor divider and ADC, swipe."""
import logging
import math
from functools import lru_cache
from typing import Optional

import numpy as np

from anisotag.src.geometry.pattern import sample_pattern
from anisotag.src.geometry.schemas.geometry import IlluminationPattern, MicrostructureAngle
from anisotag.src.optics.schemas.optics import ADC_MAX, SensorFrame, SensorRing, SwipeScenario

logger = logging.getLogger(__name__)

# one frame: 16 conversions at 25 us plus 0.25 ms to ship 16 x 12 bits at 1.152 Mbps
CONVERSION_MS = 0.025
TRANSMIT_MS = 0.25

def frame_period_ms(sensor_count: int = 16) -> float:
    return sensor_count * CONVERSION_MS + TRANSMIT_MS

def sensor_response(pattern: IlluminationPattern, ring: SensorRing) -> np.ndarray:
    """exp(-dist^2 / 2 sigma^2) from each sensor to the nearest pattern sample."""
    positions = ring.positions
    samples = pattern.samples
    if len(samples) == 0:
        return np.zeros(len(positions))
    diff = positions[:, None, :] - samples[None, :, :]
    nearest = np.sqrt(np.min(np.einsum("ijk,ijk->ij", diff, diff), axis=1))
    return np.exp(-(nearest ** 2) / (2 * ring.aperture_sigma ** 2))

@lru_cache(maxsize=512)
def state_response(ring: SensorRing, angle: MicrostructureAngle, n_samples: int) -> np.ndarray:
    pattern = sample_pattern(ring.geometry, angle, n_samples)
    response = sensor_response(pattern, ring)
    response.setflags(write=False)
    return response

def adc_levels(illum: np.ndarray, scenario: SwipeScenario) -> np.ndarray:
    """Noiseless ADC counts, before ambient offset."""
    s = scenario.sensor
    resistance = s.r_dark / (1.0 + s.kappa * np.asarray(illum, dtype=float))
    volts = s.vref * s.r_fixed / (s.r_fixed + resistance)
    return np.rint(volts / s.vref * ADC_MAX)

def quantize(illum: np.ndarray, scenario: SwipeScenario, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """ADC counts for an (..., sensors) illumination array, with ambient offset and seeded noise."""
    counts = adc_levels(illum, scenario) + scenario.ambient
    if rng is not None and scenario.noise_sigma > 0:
        counts = counts + rng.normal(0.0, scenario.noise_sigma, size=counts.shape)
    return np.clip(np.rint(counts), 0, ADC_MAX).astype(int)

def frame_from_illumination(
    illum: np.ndarray,
    scenario: SwipeScenario,
    rng: Optional[np.random.Generator] = None,
    index: int = 0,
) -> SensorFrame:
    illum = np.asarray(illum, dtype=float)
    if np.any(illum < 0) or np.any(illum > 1):
        raise ValueError("illumination must lie in [0, 1]")
    return SensorFrame(values=tuple(int(v) for v in quantize(illum, scenario, rng)), index=index)

def _covered_area(t: np.ndarray, radius: float) -> np.ndarray:
    """Area of the disk of given radius, centred at 0, lying left of x = t."""
    t = np.clip(t, -radius, radius)
    return radius * radius * np.arccos(-t / radius) + t * np.sqrt(radius * radius - t * t)

def beam_overlap(scenario: SwipeScenario, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Fractions of the beam disk on each region's clean interior and on borderline zones.

    Returns (frames x regions) region fractions and (frames,) border fractions.
    Light falling outside the tag contributes nothing.
    """
    layout = scenario.layout
    radius = scenario.beam.radius
    half_border = scenario.borderline_width / 2
    n = len(layout.regions)
    total = math.pi * radius * radius
    centers = np.asarray(centers, dtype=float)

    def strip(a: float, b: float) -> np.ndarray:
        if b <= a:
            return np.zeros_like(centers)
        return (_covered_area(b - centers, radius) - _covered_area(a - centers, radius)) / total

    regions = np.empty((len(centers), n))
    border = np.zeros(len(centers))
    for i, region in enumerate(layout.regions):
        lo = region.start + (half_border if i > 0 else 0.0)
        hi = region.end - (half_border if i < n - 1 else 0.0)
        regions[:, i] = strip(lo, hi)
        if i > 0:
            border += strip(region.start - half_border, region.start + half_border)
    return regions, border

def frame_centers(scenario: SwipeScenario) -> np.ndarray:
    count = int(math.floor(scenario.layout.width / scenario.step + 1e-9)) + 1
    return np.arange(count) * scenario.step

def region_responses(scenario: SwipeScenario) -> np.ndarray:
    return np.array([
        state_response(scenario.ring, region.angle, scenario.pattern_samples)
        for region in scenario.layout.regions
    ])

def swipe_illumination(scenario: SwipeScenario) -> np.ndarray:
    """Noiseless (frames x sensors) relative illumination for the whole swipe."""
    centers = frame_centers(scenario)
    regions, border = beam_overlap(scenario, centers)
    illum = regions @ region_responses(scenario) + (border * scenario.diffuse_level)[:, None]
    return np.clip(illum * scenario.beam.intensity, 0.0, 1.0)

def simulate_trace(scenario: SwipeScenario) -> np.ndarray:
    """(frames x sensors) integer ADC trace."""
    rng = np.random.default_rng(scenario.seed)
    return quantize(swipe_illumination(scenario), scenario, rng)

def simulate_swipe(scenario: SwipeScenario) -> list[SensorFrame]:
    trace = simulate_trace(scenario)
    frames = [SensorFrame(values=tuple(int(v) for v in row), index=i) for i, row in enumerate(trace)]
    logger.info(f"Simulated {len(frames)} frames over {scenario.layout.width} mm at {scenario.step} mm/frame")
    return frames

def reference_frames(scenario: SwipeScenario) -> tuple[SensorFrame, list[SensorFrame]]:
    """Ambient frame V_A and one noiseless frame per state of the alphabet."""
    n_sensors = scenario.ring.geometry.sensor_count
    ambient = frame_from_illumination(np.zeros(n_sensors), scenario)
    states = [
        frame_from_illumination(state_response(scenario.ring, angle, scenario.pattern_samples), scenario, index=i)
        for i, angle in enumerate(scenario.states)
    ]
    return ambient, states

def region_coverage(scenario: SwipeScenario) -> np.ndarray:
    """Peak beam fraction each region's clean interior reaches during the swipe."""
    regions, _ = beam_overlap(scenario, frame_centers(scenario))
    return regions.max(axis=0)
