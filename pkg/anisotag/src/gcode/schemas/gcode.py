from decimal import Decimal
from typing import Literal, NamedTuple, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from anisotag.src.geometry.schemas.geometry import MicrostructureAngle

class Point2D(NamedTuple):
    x: float
    y: float

class Segment(NamedTuple):
    start: Point2D
    end: Point2D

    @property
    def length(self) -> float:
        return ((self.end.x - self.start.x) ** 2 + (self.end.y - self.start.y) ** 2) ** 0.5

class PrinterProfile(BaseModel):
    model_config = ConfigDict(frozen=True)

    filament_diameter: float = Field(1.75, gt=0.0, examples=[1.75])
    nozzle_diameter: float = Field(0.4, gt=0.0, examples=[0.4])
    linewidth: Optional[float] = Field(None, gt=0.0)
    layer_height: float = Field(0.2, gt=0.0, examples=[0.2])
    z_print: Optional[float] = Field(None, gt=0.0)
    feed_rate: float = Field(3000.0, gt=0.0, description="mm/min")
    travel_rate: float = Field(6000.0, gt=0.0, description="mm/min")
    extrusion_factor: float = Field(0.9, gt=0.0, le=1.0)

    @model_validator(mode="after")
    def fill_defaults(self):
        if self.linewidth is None:
            object.__setattr__(self, "linewidth", self.nozzle_diameter)
        if self.z_print is None:
            # half a layer above the layer height, 0.3 mm for 0.2 mm layers
            object.__setattr__(self, "z_print", round(1.5 * self.layer_height, 10))
        if self.z_print < self.layer_height:
            raise ValueError(f"z_print {self.z_print} is below the layer height {self.layer_height}")
        return self

class Region(BaseModel):
    model_config = ConfigDict(frozen=True)

    start: float
    end: float
    angle: MicrostructureAngle

    @property
    def width(self) -> float:
        return self.end - self.start

class TagLayout(BaseModel):
    """Tag strip partitioned along u (the X axis) into encoding regions."""
    model_config = ConfigDict(frozen=True)

    width: float = Field(85.6, gt=0.0)
    height: float = Field(53.98, gt=0.0)
    regions: list[Region]

    @model_validator(mode="after")
    def check_partition(self):
        if not self.regions:
            raise ValueError("layout needs at least one region")
        edge = 0.0
        for i, region in enumerate(self.regions):
            if abs(region.start - edge) > 1e-9 or region.end <= region.start:
                raise ValueError(f"region {i} [{region.start}, {region.end}] does not continue the partition at {edge}")
            edge = region.end
        if abs(edge - self.width) > 1e-9:
            raise ValueError(f"regions end at {edge}, layout width is {self.width}")
        return self

    @classmethod
    def uniform(cls, angles: list[MicrostructureAngle], width: float = 85.6, height: float = 53.98) -> "TagLayout":
        n = len(angles)
        edges = [width * i / n for i in range(n + 1)]
        edges[-1] = width
        regions = [Region(start=edges[i], end=edges[i + 1], angle=angle) for i, angle in enumerate(angles)]
        return cls(width=width, height=height, regions=regions)

    @property
    def bounds(self) -> list[tuple[float, float]]:
        return [(region.start, region.end) for region in self.regions]

    @property
    def angles(self) -> list[MicrostructureAngle]:
        return [region.angle for region in self.regions]

    def reversed(self) -> "TagLayout":
        """Mirror the layout along u, region order reversed."""
        regions = [
            Region(start=self.width - r.end, end=self.width - r.start, angle=r.angle)
            for r in reversed(self.regions)
        ]
        regions[0] = regions[0].model_copy(update={"start": 0.0})
        regions[-1] = regions[-1].model_copy(update={"end": self.width})
        return TagLayout(width=self.width, height=self.height, regions=regions)

class GcodeInstruction(BaseModel):
    model_config = ConfigDict(frozen=True)

    command: Literal["G0", "G1"]
    x: Optional[Decimal] = None
    y: Optional[Decimal] = None
    z: Optional[Decimal] = None
    f: Optional[Decimal] = None
    e: Optional[Decimal] = None
    comment: Optional[str] = None

    def render(self) -> str:
        parts = [self.command]
        for letter in "XYZFE":
            value = getattr(self, letter.lower())
            if value is not None:
                parts.append(f"{letter}{format(value, 'f')}")
        line = " ".join(parts)
        if self.comment is not None:
            line += f" ;{self.comment}"
        return line

    @property
    def extrudes(self) -> bool:
        return self.command == "G1" and self.e is not None and self.e > 0

class OpaqueLine(BaseModel):
    """Comment, blank line or any command outside the G0/G1 dialect, kept verbatim."""
    model_config = ConfigDict(frozen=True)

    raw: str

    def render(self) -> str:
        return self.raw

GcodeLine = Union[GcodeInstruction, OpaqueLine]

class GcodeProgram(BaseModel):
    model_config = ConfigDict(frozen=True)

    lines: list[GcodeLine] = Field(default_factory=list)
    extrusion_mode: Literal["relative", "absolute"] = "relative"

    @property
    def instructions(self) -> list[GcodeInstruction]:
        return [line for line in self.lines if isinstance(line, GcodeInstruction)]

    def render(self) -> str:
        if not self.lines:
            return ""
        return "\n".join(line.render() for line in self.lines) + "\n"

    def extruding_moves(self) -> list[tuple[Segment, Decimal]]:
        """(segment, E) for every G1 that extrudes, positions tracked across all moves."""
        moves = []
        x = y = 0.0
        for ins in self.instructions:
            nx = float(ins.x) if ins.x is not None else x
            ny = float(ins.y) if ins.y is not None else y
            if ins.extrudes:
                moves.append((Segment(Point2D(x, y), Point2D(nx, ny)), ins.e))
            x, y = nx, ny
        return moves

    def total_extrusion(self) -> Decimal:
        return sum((e for _, e in self.extruding_moves()), Decimal(0))

    def extruding_length(self) -> float:
        return sum(segment.length for segment, _ in self.extruding_moves())
