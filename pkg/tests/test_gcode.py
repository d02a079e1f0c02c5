import math
import re
from decimal import Decimal

import numpy as np
import pytest
from conftest import random_layout

from anisotag.core.exceptions import AmbiguousRegionError, ArtifactIOError, EmptyRegionError, GcodeParseError
from anisotag.src.gcode.analysis import angle_estimate
from anisotag.src.gcode.emitter import emit_gcode, fixed, write_gcode
from anisotag.src.gcode.parser import parse_gcode, read_gcode
from anisotag.src.gcode.schemas.gcode import GcodeProgram, OpaqueLine, PrinterProfile, Region, TagLayout
from anisotag.src.gcode.toolpath import extrusion_length, region_segments
from anisotag.src.geometry.schemas.geometry import MicrostructureAngle

MOVE = re.compile(r"^G[01]( X-?\d+\.\d{5})?( Y-?\d+\.\d{5})?( Z-?\d+\.\d{5})?( F-?\d+\.\d{5})?( E-?\d+\.\d{5})?$")

def two_region_layout(first: float, second: float) -> TagLayout:
    return TagLayout(width=20.0, height=10.0, regions=[
        Region(start=0.0, end=10.0, angle=MicrostructureAngle.from_degrees(first)),
        Region(start=10.0, end=20.0, angle=MicrostructureAngle.from_degrees(second)),
    ])

def angular_error(a: float, b: float) -> float:
    diff = abs(a - b) % math.pi
    return min(diff, math.pi - diff)

class TestProfile:
    def test_defaults(self, profile):
        assert profile.linewidth == profile.nozzle_diameter == 0.4
        assert profile.z_print == pytest.approx(0.3)

    def test_z_print_below_layer(self):
        with pytest.raises(ValueError):
            PrinterProfile(layer_height=0.2, z_print=0.1)

class TestExtrusion:
    def test_zero_length(self, profile):
        assert extrusion_length(0.0, profile) == 0.0

    def test_unit_factor_value(self):
        profile = PrinterProfile(extrusion_factor=1.0)
        assert extrusion_length(10.0, profile) == pytest.approx(0.26122, abs=1e-5)

    def test_inverse_square_in_filament(self):
        thick = PrinterProfile(filament_diameter=1.75)
        thin = PrinterProfile(filament_diameter=0.875)
        assert extrusion_length(10.0, thin) == pytest.approx(4 * extrusion_length(10.0, thick))

    def test_negative_length(self, profile):
        with pytest.raises(ValueError):
            extrusion_length(-1.0, profile)

class TestToolpath:
    def test_vertical_lines(self, profile):
        region = Region(start=0.0, end=5.0, angle=MicrostructureAngle.from_degrees(90.0))
        segments = region_segments(region, 20.0, profile)
        assert len(segments) in (12, 13)
        for segment in segments:
            assert segment.start.x == pytest.approx(segment.end.x, abs=1e-9)
            assert segment.length == pytest.approx(20.0)

    def test_horizontal_lines(self, profile):
        region = Region(start=0.0, end=5.0, angle=MicrostructureAngle(delta=0.0))
        segments = region_segments(region, 4.0, profile)
        ys = sorted(s.start.y for s in segments)
        assert ys[0] == pytest.approx(0.2)
        assert list(np.diff(ys)) == pytest.approx([0.4] * (len(ys) - 1))

    def test_serpentine(self, profile):
        region = Region(start=0.0, end=5.0, angle=MicrostructureAngle(delta=0.0))
        segments = region_segments(region, 4.0, profile)
        for a, b in zip(segments, segments[1:]):
            assert (a.end.x - a.start.x) * (b.end.x - b.start.x) < 0

    def test_coverage(self, profile):
        rng = np.random.default_rng(2)
        for delta in rng.uniform(0.0, math.pi, size=20):
            region = Region(start=0.0, end=8.0, angle=MicrostructureAngle.from_delta(float(delta)))
            segments = region_segments(region, 30.0, profile)
            covered = sum(s.length for s in segments) * profile.linewidth
            assert covered == pytest.approx(8.0 * 30.0, rel=0.05)

    def test_spacing_is_linewidth(self, profile):
        delta = math.radians(37.0)
        region = Region(start=0.0, end=8.0, angle=MicrostructureAngle.from_delta(delta))
        normal = (-math.sin(delta), math.cos(delta))
        offsets = sorted(s.start.x * normal[0] + s.start.y * normal[1] for s in region_segments(region, 30.0, profile))
        assert min(np.diff(offsets)) >= 0.999 * profile.linewidth

    def test_region_narrower_than_linewidth(self, profile):
        region = Region(start=0.0, end=0.3, angle=MicrostructureAngle.from_degrees(90.0))
        with pytest.raises(EmptyRegionError):
            region_segments(region, 10.0, profile)

class TestEmitter:
    def test_fixed_never_negative_zero(self):
        assert str(fixed(-0.000001)) == "0.00000"
        assert str(fixed(1.5)) == "1.50000"

    def test_header_and_footer(self, profile):
        text = emit_gcode(two_region_layout(30.0, 120.0), profile).render()
        lines = text.splitlines()
        assert "G21 ; millimeters" in lines
        assert "G90 ; absolute XYZ" in lines
        assert "M83 ; relative E" in lines
        assert any(line.startswith("; layout_sha256 ") for line in lines)
        assert lines[-2] == "G0 Z5.30000 F6000.00000"
        assert lines[-1] == "; end"
        assert text.endswith("\n") and "\r" not in text

    def test_move_grammar(self, profile):
        program = emit_gcode(two_region_layout(30.0, 120.0), profile)
        for line in program.render().splitlines():
            if line.startswith("G0") or line.startswith("G1"):
                assert MOVE.match(line), line

    def test_one_travel_per_region(self, profile):
        program = emit_gcode(two_region_layout(30.0, 120.0), profile)
        travels = [ins for ins in program.instructions if ins.command == "G0" and ins.x is not None]
        assert len(travels) == 2
        assert all(ins.z == Decimal("0.30000") for ins in travels)
        assert all(ins.e is not None and ins.e > 0 for ins in program.instructions if ins.command == "G1")

    def test_deterministic(self, profile):
        layout = two_region_layout(30.0, 120.0)
        assert emit_gcode(layout, profile).render() == emit_gcode(layout, profile).render()

    def test_origin_offset(self, profile):
        layout = two_region_layout(0.0, 90.0)
        shifted = emit_gcode(layout, profile, origin=(100.0, 50.0))
        assert angle_estimate(shifted, layout.bounds, origin=(100.0, 50.0)) == pytest.approx([0.0, math.pi / 2], abs=1e-6)

    def test_per_move_extrusion(self, profile):
        program = emit_gcode(two_region_layout(30.0, 120.0), profile)
        for segment, e in program.extruding_moves():
            assert float(e) == pytest.approx(extrusion_length(segment.length, profile), abs=5e-6)

    def test_write_and_read(self, profile, tmp_path):
        program = emit_gcode(two_region_layout(30.0, 120.0), profile)
        path = write_gcode(program, tmp_path / "out" / "tag.gcode")
        assert path.read_bytes() == program.render().encode("ascii")
        assert read_gcode(path).render() == program.render()

    def test_unwritable_path(self, profile, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        with pytest.raises(ArtifactIOError):
            write_gcode(emit_gcode(two_region_layout(0.0, 90.0), profile), blocker / "tag.gcode")

class TestParser:
    def test_example_instruction(self):
        program = parse_gcode("G1 X0.1 Y200 Z0.3 F1500 E15")
        (ins,) = program.instructions
        assert (ins.command, ins.x, ins.y, ins.z, ins.f, ins.e) == (
            "G1", Decimal("0.1"), Decimal("200"), Decimal("0.3"), Decimal("1500"), Decimal("15"),
        )
        assert program.render() == "G1 X0.1 Y200 Z0.3 F1500 E15\n"

    def test_empty_file(self):
        program = parse_gcode("")
        assert program.lines == []
        assert program.render() == ""

    def test_opaque_lines_kept(self):
        text = "M104 S200\n; comment\n\nG28\nG1 X1.00000 Y2.00000 F3000.00000 E0.10000\n"
        program = parse_gcode(text)
        assert program.render() == text
        assert isinstance(program.lines[0], OpaqueLine)
        assert len(program.instructions) == 1

    def test_extrusion_mode(self):
        assert parse_gcode("M82\nG1 X1 E1").extrusion_mode == "absolute"
        assert parse_gcode("M83\nG1 X1 E1").extrusion_mode == "relative"

    @pytest.mark.parametrize("text, line, column", [
        ("G1 X1 Q2", 1, 7),
        ("G21\nG1 X1.2.3", 2, 5),
        ("G1 X1 X2", 1, 7),
        ("G0 Y", 1, 5),
    ])
    def test_malformed_fields(self, text, line, column):
        with pytest.raises(GcodeParseError) as excinfo:
            parse_gcode(text)
        assert (excinfo.value.line, excinfo.value.column) == (line, column)

    def test_read_error_names_path(self, tmp_path):
        path = tmp_path / "bad.gcode"
        path.write_text("G1 X1 Q2\n")
        with pytest.raises(GcodeParseError) as excinfo:
            read_gcode(path)
        assert str(path) in str(excinfo.value)
        assert excinfo.value.line == 1

class TestRoundtrip:
    def test_random_layouts(self, profile):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            layout = random_layout(rng)
            program = emit_gcode(layout, profile)
            text = program.render()
            parsed = parse_gcode(text)
            assert parsed.render() == text

            recovered = angle_estimate(parsed, layout.bounds)
            for got, region in zip(recovered, layout.regions):
                assert 0.0 <= got < math.pi
                assert math.degrees(angular_error(got, region.angle.delta)) < 0.05

            moves = parsed.extruding_moves()
            expected = sum(extrusion_length(segment.length, profile) for segment, _ in moves)
            assert abs(float(parsed.total_extrusion()) - expected) <= len(moves) * 5e-6
            assert float(parsed.total_extrusion()) == pytest.approx(
                extrusion_length(parsed.extruding_length(), profile), rel=1e-4
            )

    def test_two_known_angles(self, profile):
        layout = two_region_layout(30.0, 120.0)
        recovered = angle_estimate(emit_gcode(layout, profile), layout.bounds)
        assert [math.degrees(a) for a in recovered] == pytest.approx([30.0, 120.0], abs=0.05)

    def test_axis_aligned_is_exact(self, profile):
        layout = two_region_layout(0.0, 90.0)
        recovered = angle_estimate(emit_gcode(layout, profile), layout.bounds)
        assert recovered[0] == 0.0

    def test_region_without_moves(self):
        with pytest.raises(AmbiguousRegionError):
            angle_estimate(GcodeProgram(lines=[]), [(0.0, 10.0)])
