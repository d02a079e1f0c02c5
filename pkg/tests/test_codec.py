import logging
import math

import numpy as np
import pytest

from anisotag.core.exceptions import CodecRangeError, LengthMismatchError, MapCacheError, MonotonicityError
from anisotag.src.codec.codec import decode, encode, pad_payload, state_angles, value_to_delta
from anisotag.src.codec.gray import (
    binary_decode,
    binary_encode,
    bits_from_string,
    bits_to_string,
    gray_decode,
    gray_encode,
    hamming,
)
from anisotag.src.codec.nonlinear_map import (
    NonlinearMap,
    build_nonlinear_map,
    delta_grid,
    load_map,
    load_or_build_map,
    save_map,
)
from anisotag.src.codec.schemas.codec import CodecConfig
from anisotag.src.geometry.pattern import circle_intersection_angle
from anisotag.src.geometry.schemas.geometry import MicrostructureAngle

def gaps(psis: list[float]) -> np.ndarray:
    return np.abs(np.diff(psis))

class TestGray:
    def test_three_bit_table(self):
        table = [bits_to_string(gray_encode(v, 3)) for v in range(8)]
        assert table == ["000", "001", "011", "010", "110", "111", "101", "100"]

    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6])
    def test_neighbours_differ_in_one_bit(self, m):
        for v in range(1 << m):
            nxt = (v + 1) % (1 << m)
            assert hamming(gray_encode(v, m), gray_encode(nxt, m)) == 1

    def test_decode_inverts_encode(self):
        for v in range(256):
            assert gray_decode(gray_encode(v, 8)) == v
            assert binary_decode(binary_encode(v, 8)) == v

    @pytest.mark.parametrize("value", [-1, 8, 100])
    def test_out_of_range(self, value):
        with pytest.raises(CodecRangeError):
            gray_encode(value, 3)
        with pytest.raises(CodecRangeError):
            binary_encode(value, 3)

    def test_bits_from_string(self):
        assert bits_from_string("10 1\n1") == [1, 0, 1, 1]
        assert bits_from_string("") == []
        with pytest.raises(CodecRangeError):
            bits_from_string("1021")

class TestCodec:
    def test_capacity(self):
        cfg = CodecConfig()
        assert cfg.capacity == 51
        assert cfg.state_count == 8

    def test_pad_payload(self):
        cfg = CodecConfig()
        assert pad_payload([], cfg) == [0] * 51
        assert pad_payload([1, 1], cfg)[:3] == [1, 1, 0]
        with pytest.raises(LengthMismatchError):
            pad_payload([0] * 52, cfg)

    def test_all_zero_tag(self, nl_map):
        cfg = CodecConfig()
        codes = encode([0] * 51, cfg, nl_map)
        assert [code.value for code in codes] == [0] * 17
        assert all(code.angle.delta == pytest.approx(nl_map(0.0)) for code in codes)

    def test_gray_symbols(self):
        cfg = CodecConfig(n_regions=2, bits_per_region=3)
        codes = encode([0, 1, 1, 1, 0, 0], cfg, None)
        assert [code.value for code in codes] == [2, 7]

    def test_binary_symbols(self):
        cfg = CodecConfig(n_regions=2, bits_per_region=3, use_gray=False)
        codes = encode([0, 1, 1, 1, 0, 0], cfg, None)
        assert [code.value for code in codes] == [3, 4]

    def test_linear_angles_without_map(self):
        cfg = CodecConfig(bits_per_region=2)
        assert [a.degrees for a in state_angles(cfg, None)] == pytest.approx([0.0, 45.0, 90.0, 135.0])
        assert value_to_delta(3, cfg, None) == pytest.approx(math.radians(135.0))

    @pytest.mark.parametrize("use_gray", [True, False])
    def test_roundtrip(self, nl_map, use_gray):
        cfg = CodecConfig(use_gray=use_gray)
        rng = np.random.default_rng(11)
        for _ in range(100):
            payload = [int(b) for b in rng.integers(0, 2, size=51)]
            codes = encode(payload, cfg, nl_map)
            assert decode([code.value for code in codes], cfg) == payload

    def test_length_mismatch(self):
        cfg = CodecConfig()
        with pytest.raises(LengthMismatchError):
            encode([0] * 50, cfg, None)
        with pytest.raises(LengthMismatchError):
            decode([0] * 16, cfg)

    def test_state_out_of_range(self):
        cfg = CodecConfig(n_regions=2)
        with pytest.raises(CodecRangeError):
            decode([0, 8], cfg)

class TestNonlinearMap:
    def test_scan_grid_is_open(self):
        grid = delta_grid(1024)
        assert grid[0] > 0.0
        assert grid[-1] < math.pi
        assert len(grid) == 1024

    def test_orientation(self, nl_map):
        assert not nl_map.increasing
        assert math.degrees(nl_map.psi_start) == pytest.approx(90.0, abs=0.5)
        assert math.degrees(nl_map.psi_end) == pytest.approx(-90.0, abs=0.5)

    def test_mapped_states_are_evenly_spaced(self, geometry, alphabet):
        psis = [circle_intersection_angle(geometry, angle) for angle in alphabet]
        spacing = gaps(psis)
        assert spacing.max() / spacing.min() <= 1.005

    def test_unmapped_states_are_uneven(self, geometry):
        psis = [circle_intersection_angle(geometry, MicrostructureAngle.from_degrees(22.5 * v)) for v in range(1, 8)]
        spacing = gaps(psis)
        assert spacing.max() / spacing.min() >= 1.5

    def test_mapped_states_land_on_sensors(self, geometry, alphabet):
        step = 2 * math.pi / geometry.sensor_count
        for v, angle in enumerate(alphabet):
            psi = circle_intersection_angle(geometry, angle)
            assert math.degrees(psi) == pytest.approx(90.0 - 22.5 * v, abs=0.5)
            assert abs(psi / step - round(psi / step)) * math.degrees(step) < 0.5

    def test_inverse(self, nl_map):
        rng = np.random.default_rng(5)
        lo, hi = nl_map.domain
        for delta in rng.uniform(lo, hi, size=50):
            assert nl_map(nl_map.inverse(delta)) == pytest.approx(delta, abs=1e-9)
        for u in np.linspace(0.0, 179.0, 40):
            assert nl_map.inverse(nl_map(u)) == pytest.approx(u, abs=1e-7)

    def test_interpolant_tracks_scan(self, nl_map, geometry):
        for delta in (0.4, 1.1, 2.3):
            exact = circle_intersection_angle(geometry, MicrostructureAngle.from_delta(delta))
            assert nl_map.interpolated_psi(delta) == pytest.approx(exact, abs=1e-5)

    def test_rejects_non_monotone_table(self, geometry):
        deltas = np.linspace(0.1, 3.0, 10)
        psis = np.array([1.0, 0.9, 0.8, 0.85, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1])
        with pytest.raises(MonotonicityError):
            NonlinearMap(geometry, deltas, psis)

    def test_cache_roundtrip(self, nl_map, tmp_path):
        path = save_map(nl_map, tmp_path / "map.atmap")
        loaded = load_map(path)
        assert loaded.geometry == nl_map.geometry
        assert np.array_equal(loaded.deltas, nl_map.deltas)
        assert np.array_equal(loaded.psis, nl_map.psis)
        assert loaded.digest == nl_map.digest
        assert path.read_bytes().startswith(b"ATMAP1")

    def test_bad_cache_files(self, nl_map, tmp_path):
        bad_magic = tmp_path / "magic.atmap"
        bad_magic.write_bytes(b"NOTMAP" + nl_map.to_bytes()[6:])
        with pytest.raises(MapCacheError):
            load_map(bad_magic)
        truncated = tmp_path / "short.atmap"
        truncated.write_bytes(nl_map.to_bytes()[:-8])
        with pytest.raises(MapCacheError):
            load_map(truncated)
        with pytest.raises(MapCacheError):
            load_map(tmp_path / "missing.atmap")

    def test_load_or_build_uses_cache(self, geometry, tmp_path, caplog):
        with caplog.at_level(logging.INFO):
            first = load_or_build_map(geometry, cache_dir=tmp_path, knots=64)
            caplog.clear()
            second = load_or_build_map(geometry, cache_dir=tmp_path, knots=64)
        assert "Loaded nonlinear map" in caplog.text
        assert second.digest == first.digest

    def test_same_geometry_same_table(self, geometry):
        assert build_nonlinear_map(geometry, 32).digest == build_nonlinear_map(geometry, 32).digest
