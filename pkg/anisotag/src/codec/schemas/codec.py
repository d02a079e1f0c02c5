from pydantic import BaseModel, ConfigDict, Field

from anisotag.src.geometry.schemas.geometry import MicrostructureAngle

class CodecConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_regions: int = Field(17, gt=0, examples=[17])
    bits_per_region: int = Field(3, gt=0, le=16, examples=[3])
    use_gray: bool = True

    @property
    def capacity(self) -> int:
        return self.n_regions * self.bits_per_region

    @property
    def state_count(self) -> int:
        return 1 << self.bits_per_region

class AngleCode(BaseModel):
    model_config = ConfigDict(frozen=True)

    region_index: int = Field(..., ge=0)
    value: int = Field(..., ge=0)
    angle: MicrostructureAngle
