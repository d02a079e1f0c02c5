import math
from typing import NamedTuple, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

class Vec3(NamedTuple):
    x: float
    y: float
    z: float

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

class DetectionGeometry(BaseModel):
    """Incident beam, background plane and sensor circle of the rig."""
    model_config = ConfigDict(frozen=True)

    alpha: float = Field(math.radians(70.0), gt=0.0, lt=math.pi / 2, description="incident angle, radians")
    d: float = Field(65.0, gt=0.0, description="background plane y = d, mm")
    circle_radius: float = Field(15.0, gt=0.0, description="detection circle radius, mm")
    sensor_count: int = Field(16, ge=2)

    @property
    def fixed_point(self) -> tuple[float, float]:
        return (0.0, self.d / math.tan(self.alpha))

class MicrostructureAngle(BaseModel):
    """Cylindrical axis angle delta and section angle phi = delta - pi/2."""
    model_config = ConfigDict(frozen=True)

    delta: float = Field(..., ge=0.0, lt=math.pi)
    phi: Optional[float] = None

    @model_validator(mode="before")
    @classmethod
    def fill_phi(cls, data):
        if isinstance(data, dict) and data.get("phi") is None and "delta" in data:
            data = {**data, "phi": data["delta"] - math.pi / 2}
        return data

    @model_validator(mode="after")
    def check_phi(self):
        if abs(self.phi - (self.delta - math.pi / 2)) > 1e-12:
            raise ValueError(f"phi={self.phi} does not equal delta - pi/2 for delta={self.delta}")
        return self

    @classmethod
    def from_delta(cls, delta: float) -> "MicrostructureAngle":
        return cls(delta=delta)

    @classmethod
    def from_degrees(cls, degrees: float) -> "MicrostructureAngle":
        return cls(delta=math.radians(degrees))

    @property
    def degrees(self) -> float:
        return math.degrees(self.delta)

class ConicDescriptor(BaseModel):
    model_config = ConfigDict(frozen=True)

    eccentricity: float = Field(..., ge=0.0)
    focus: tuple[float, float]
    xi: float
    fixed_point: tuple[float, float]
    # u-coordinate of the directrix line; None for the circle
    directrix: Optional[float] = None
    # sign of sin(phi): which side of u = 0 the conic opens toward
    branch_sign: int = 0

    def residual(self, point) -> float:
        """Relative focus-directrix residual of a plane point."""
        u, v = float(point[0]), float(point[1])
        fu, fv = self.focus
        dist_focus = math.hypot(u - fu, v - fv)
        if self.directrix is None:
            radius = math.hypot(self.fixed_point[0] - fu, self.fixed_point[1] - fv)
            return abs(dist_focus - radius) / radius
        expected = self.eccentricity * abs(u - self.directrix)
        return abs(dist_focus - expected) / max(dist_focus, expected)

class IlluminationPattern(BaseModel):
    """Reflected curve on the background plane, sampled by the normal parameter theta."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    samples: np.ndarray
    thetas: np.ndarray
    conic: Optional[ConicDescriptor] = None
    generating_angle: MicrostructureAngle
    degenerate: bool = False

    def sample_at(self, theta: float) -> np.ndarray:
        index = int(np.argmin(np.abs(self.thetas - theta)))
        return self.samples[index]
