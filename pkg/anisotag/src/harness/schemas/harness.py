import logging
import math
from pathlib import Path
from typing import Literal, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from anisotag.core.config import settings
from anisotag.core.exceptions import ScenarioFileError
from anisotag.src.codec.schemas.codec import CodecConfig
from anisotag.src.detector.schemas.detector import DetectorConfig
from anisotag.src.gcode.schemas.gcode import PrinterProfile, TagLayout
from anisotag.src.geometry.schemas.geometry import DetectionGeometry, MicrostructureAngle
from anisotag.src.optics.files import read_scenario_file
from anisotag.src.optics.schemas.optics import BeamProfile, PhotoresistorModel, SensorRing, SwipeScenario
from anisotag.utils.hashing import model_hash

logger = logging.getLogger(__name__)

class RunConfig(BaseModel):
    """Every tunable of one encode/simulate/decode run, flat so it maps onto flags and scenario keys."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    # rig geometry
    alpha_deg: float = Field(70.0, gt=0.0, lt=90.0)
    distance_mm: float = Field(65.0, gt=0.0)
    circle_radius_mm: float = Field(15.0, gt=0.0)
    sensor_count: int = Field(16, ge=2)
    aperture_sigma_mm: float = Field(2.0, gt=0.0)

    # swipe and sensors
    beam_diameter_mm: float = Field(5.0, gt=0.0)
    step_mm: float = Field(0.5, gt=0.0)
    noise_sigma: float = Field(8.0, ge=0.0)
    ambient: float = 0.0
    borderline_width_mm: float = Field(1.0, ge=0.0)
    diffuse_level: float = Field(0.05, ge=0.0, le=1.0)
    pattern_samples: int = Field(default_factory=lambda: settings.ANISOTAG_PATTERN_SAMPLES, ge=512)
    r_dark_ohm: float = Field(100_000.0, gt=0.0)
    kappa: float = Field(99.0, ge=0.0)
    r_fixed_ohm: float = Field(1_000.0, gt=0.0)
    seed: int = Field(default_factory=lambda: settings.ANISOTAG_DEFAULT_SEED)

    # tag and codec
    n_regions: int = Field(17, ge=1)
    bits_per_region: int = Field(3, ge=1, le=16)
    use_gray: bool = True
    nonlinear_map: bool = True
    tag_width_mm: float = Field(85.6, gt=0.0)
    tag_height_mm: float = Field(53.98, gt=0.0)

    # detector
    threshold: float = Field(0.9, gt=0.0, lt=1.0)
    debounce_frames: int = Field(3, ge=1)
    dip_ratio: float = Field(0.95, ge=0.0, lt=1.0)

    # printer
    filament_diameter_mm: float = Field(1.75, gt=0.0)
    nozzle_diameter_mm: float = Field(0.4, gt=0.0)
    layer_height_mm: float = Field(0.2, gt=0.0)
    extrusion_factor: float = Field(0.9, gt=0.0, le=1.0)
    feed_rate: float = Field(3000.0, gt=0.0)

    @classmethod
    def resolve(cls, flags: Mapping[str, object], scenario_path: Optional[Path] = None) -> "RunConfig":
        """Defaults, then flags that were given, then the scenario file on top."""
        values = {key: value for key, value in flags.items() if value is not None}
        if scenario_path is not None:
            for key, value in read_scenario_file(scenario_path).items():
                if key not in cls.model_fields:
                    logger.warning(f"Ignoring unknown scenario key {key!r} in {scenario_path}")
                    continue
                values[key] = value
        try:
            return cls(**values)
        except ValidationError as e:
            raise ScenarioFileError(f"invalid configuration: {e.errors()[0]['loc'][0]}: {e.errors()[0]['msg']}")

    @property
    def config_hash(self) -> str:
        return model_hash(self)

    @property
    def geometry(self) -> DetectionGeometry:
        return DetectionGeometry(
            alpha=math.radians(self.alpha_deg),
            d=self.distance_mm,
            circle_radius=self.circle_radius_mm,
            sensor_count=self.sensor_count,
        )

    @property
    def codec(self) -> CodecConfig:
        return CodecConfig(n_regions=self.n_regions, bits_per_region=self.bits_per_region, use_gray=self.use_gray)

    @property
    def detector(self) -> DetectorConfig:
        return DetectorConfig(
            threshold=self.threshold,
            debounce_frames=self.debounce_frames,
            expected_regions=self.n_regions,
            bits_per_region=self.bits_per_region,
            use_gray=self.use_gray,
            dip_ratio=self.dip_ratio,
        )

    @property
    def profile(self) -> PrinterProfile:
        return PrinterProfile(
            filament_diameter=self.filament_diameter_mm,
            nozzle_diameter=self.nozzle_diameter_mm,
            layer_height=self.layer_height_mm,
            extrusion_factor=self.extrusion_factor,
            feed_rate=self.feed_rate,
        )

    def layout(self, angles: list[MicrostructureAngle]) -> TagLayout:
        return TagLayout.uniform(angles, width=self.tag_width_mm, height=self.tag_height_mm)

    def scenario(self, layout: TagLayout, states: list[MicrostructureAngle], seed: Optional[int] = None) -> SwipeScenario:
        return SwipeScenario(
            layout=layout,
            states=tuple(states),
            beam=BeamProfile(diameter=self.beam_diameter_mm),
            ring=SensorRing(geometry=self.geometry, aperture_sigma=self.aperture_sigma_mm),
            sensor=PhotoresistorModel(r_dark=self.r_dark_ohm, kappa=self.kappa, r_fixed=self.r_fixed_ohm),
            step=self.step_mm,
            noise_sigma=self.noise_sigma,
            ambient=self.ambient,
            borderline_width=self.borderline_width_mm,
            diffuse_level=self.diffuse_level,
            pattern_samples=self.pattern_samples,
            seed=self.seed if seed is None else seed,
        )

SweepVariable = Literal["n_regions", "bits_per_region", "noise_sigma", "region_vs_beam_width", "gray_vs_binary"]

class ExperimentSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    variable: SweepVariable
    values: tuple[float, ...] = Field(..., min_length=1)
    trials: int = Field(default_factory=lambda: settings.ANISOTAG_DEFAULT_TRIALS, ge=1)
    seed: int = Field(default_factory=lambda: settings.ANISOTAG_DEFAULT_SEED)
    output: Path = Path("sweep")
    base: RunConfig = Field(default_factory=RunConfig)

    @property
    def config_hash(self) -> str:
        return model_hash(self.model_copy(update={"output": Path(".")}))

class TrialResult(BaseModel):
    value: float
    trial: int
    coding: str
    seed: int
    detection_success: bool
    regions: int
    expected_regions: int
    bit_errors: Optional[int] = None
    bits: int
    max_reference_correlation: float

    @property
    def ber(self) -> Optional[float]:
        return None if self.bit_errors is None else self.bit_errors / self.bits
