import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from anisotag.src.gcode.schemas.gcode import TagLayout
from anisotag.src.geometry.schemas.geometry import DetectionGeometry, MicrostructureAngle

ADC_MAX = 4095

class BeamProfile(BaseModel):
    """Uniform-disk laser spot on the tag."""
    model_config = ConfigDict(frozen=True)

    diameter: float = Field(5.0, gt=0.0, description="mm")
    intensity: float = Field(1.0, gt=0.0, description="relative units")

    @property
    def radius(self) -> float:
        return self.diameter / 2

class SensorRing(BaseModel):
    model_config = ConfigDict(frozen=True)

    geometry: DetectionGeometry = Field(default_factory=DetectionGeometry)
    aperture_sigma: float = Field(2.0, gt=0.0, description="Gaussian response spread, mm")

    @property
    def angles(self) -> np.ndarray:
        n = self.geometry.sensor_count
        return 2 * math.pi * np.arange(n) / n

    @property
    def positions(self) -> np.ndarray:
        u0, v0 = self.geometry.fixed_point
        r = self.geometry.circle_radius
        angles = self.angles
        return np.column_stack((u0 + r * np.cos(angles), v0 + r * np.sin(angles)))

class PhotoresistorModel(BaseModel):
    """Light-dependent resistor in a divider read by a 12-bit ADC.

    R(L) = r_dark / (1 + kappa * L); V = vref * r_fixed / (r_fixed + R(L)).
    """
    model_config = ConfigDict(frozen=True)

    r_dark: float = Field(100_000.0, gt=0.0, description="ohm")
    kappa: float = Field(99.0, ge=0.0)
    r_fixed: float = Field(1_000.0, gt=0.0, description="ohm")
    vref: float = Field(3.3, gt=0.0, description="volt")

class SensorFrame(BaseModel):
    model_config = ConfigDict(frozen=True)

    values: tuple[int, ...]
    index: int = 0

    @field_validator("values")
    @classmethod
    def check_range(cls, values):
        if any(v < 0 or v > ADC_MAX for v in values):
            raise ValueError(f"ADC values must lie in [0, {ADC_MAX}]")
        return values

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

class SwipeScenario(BaseModel):
    model_config = ConfigDict(frozen=True)

    layout: TagLayout
    # the 2^m angle alphabet the references are recorded for
    states: tuple[MicrostructureAngle, ...] = ()
    beam: BeamProfile = Field(default_factory=BeamProfile)
    ring: SensorRing = Field(default_factory=SensorRing)
    sensor: PhotoresistorModel = Field(default_factory=PhotoresistorModel)
    step: float = Field(0.5, gt=0.0, description="mm per frame")
    noise_sigma: float = Field(8.0, ge=0.0, description="ADC counts")
    ambient: float = Field(0.0, description="ADC counts")
    borderline_width: float = Field(1.0, ge=0.0, description="mm")
    diffuse_level: float = Field(0.05, ge=0.0, le=1.0)
    pattern_samples: int = Field(4096, ge=512)
    seed: int = 0
