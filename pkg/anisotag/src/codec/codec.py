import logging
import math
from typing import Optional, Sequence

from anisotag.core.exceptions import CodecRangeError, LengthMismatchError
from anisotag.src.codec.gray import Bits, binary_decode, binary_encode, gray_decode, gray_encode
from anisotag.src.codec.nonlinear_map import NonlinearMap
from anisotag.src.codec.schemas.codec import AngleCode, CodecConfig
from anisotag.src.geometry.schemas.geometry import MicrostructureAngle

logger = logging.getLogger(__name__)

def value_to_delta(value: int, cfg: CodecConfig, nl_map: Optional[NonlinearMap]) -> float:
    """delta = M(v / 2^m * 180 deg); without a map the code angle is used directly."""
    u_degrees = value / cfg.state_count * 180.0
    if nl_map is None:
        return math.radians(u_degrees)
    return nl_map(u_degrees)

def state_angles(cfg: CodecConfig, nl_map: Optional[NonlinearMap]) -> list[MicrostructureAngle]:
    return [MicrostructureAngle.from_delta(value_to_delta(v, cfg, nl_map)) for v in range(cfg.state_count)]

def pad_payload(bits: Sequence[int], cfg: CodecConfig) -> Bits:
    if len(bits) > cfg.capacity:
        raise LengthMismatchError(f"payload of {len(bits)} bits exceeds capacity {cfg.capacity}")
    return list(bits) + [0] * (cfg.capacity - len(bits))

def symbol_value(symbol: Sequence[int], cfg: CodecConfig) -> int:
    return gray_decode(list(symbol)) if cfg.use_gray else binary_decode(list(symbol))

def symbol_bits(value: int, cfg: CodecConfig) -> Bits:
    m = cfg.bits_per_region
    return gray_encode(value, m) if cfg.use_gray else binary_encode(value, m)

def encode(payload: Sequence[int], cfg: CodecConfig, nl_map: Optional[NonlinearMap]) -> list[AngleCode]:
    if len(payload) != cfg.capacity:
        raise LengthMismatchError(f"payload has {len(payload)} bits, expected n*m = {cfg.capacity}")

    m = cfg.bits_per_region
    codes = []
    for i in range(cfg.n_regions):
        value = symbol_value(payload[i * m:(i + 1) * m], cfg)
        angle = MicrostructureAngle.from_delta(value_to_delta(value, cfg, nl_map))
        codes.append(AngleCode(region_index=i, value=value, angle=angle))
    return codes

def decode(states: Sequence[int], cfg: CodecConfig) -> Bits:
    if len(states) != cfg.n_regions:
        raise LengthMismatchError(f"detected {len(states)} regions, expected {cfg.n_regions}")
    bits: Bits = []
    for state in states:
        if not 0 <= state < cfg.state_count:
            raise CodecRangeError(f"state {state} outside [0, {cfg.state_count})")
        bits.extend(symbol_bits(state, cfg))
    return bits
