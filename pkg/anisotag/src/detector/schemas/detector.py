from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from anisotag.src.codec.schemas.codec import CodecConfig
from anisotag.src.optics.schemas.optics import SensorFrame

INVALID = -1

class DetectorConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    threshold: float = Field(0.9, gt=0.0, lt=1.0, examples=[0.9])
    debounce_frames: int = Field(3, ge=1)
    expected_regions: int = Field(17, ge=1)
    bits_per_region: int = Field(3, ge=1, le=16)
    use_gray: bool = True
    # gain dip, relative to the peaks on either side, that splits a run; 0 disables
    dip_ratio: float = Field(0.95, ge=0.0, lt=1.0)

    @property
    def codec(self) -> CodecConfig:
        return CodecConfig(n_regions=self.expected_regions, bits_per_region=self.bits_per_region, use_gray=self.use_gray)

class ReferenceSet(BaseModel):
    """Ambient frame V_A and the per-state reference frames V_i."""
    model_config = ConfigDict(frozen=True)

    ambient: SensorFrame
    states: tuple[SensorFrame, ...]

    @model_validator(mode="after")
    def check_shape(self):
        if len(self.states) < 2:
            raise ValueError("need at least two reference states")
        width = len(self.ambient.values)
        if any(len(frame.values) != width for frame in self.states):
            raise ValueError("reference frames differ in channel count")
        return self

    def matrix(self) -> np.ndarray:
        return np.array([frame.values for frame in self.states], dtype=float)

class DetectionReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    bits: list[int] = []
    region_states: list[int] = []
    frame_states: list[int] = []
    similarities: np.ndarray
    detection_success: bool
    expected_regions: int
    ber: Optional[float] = None

    @property
    def region_count(self) -> int:
        return len(self.region_states)

class DetectionMetrics(BaseModel):
    trials: int
    detections: int
    detection_accuracy: float
    extraction_accuracy: float
    ber: float
