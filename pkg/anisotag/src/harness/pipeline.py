"""Encode -> print -> swipe -> detect, as used by the commands and the sweeps."""
import logging
from typing import Optional

import numpy as np

from anisotag.src.codec.codec import encode, pad_payload, state_angles
from anisotag.src.codec.gray import Bits
from anisotag.src.codec.nonlinear_map import NonlinearMap
from anisotag.src.codec.schemas.codec import AngleCode
from anisotag.src.detector.detector import segment_and_decode, similarity_matrix
from anisotag.src.detector.schemas.detector import DetectionReport, ReferenceSet
from anisotag.src.gcode.analysis import angle_estimate
from anisotag.src.gcode.emitter import emit_gcode
from anisotag.src.gcode.schemas.gcode import GcodeProgram, TagLayout
from anisotag.src.geometry.schemas.geometry import MicrostructureAngle
from anisotag.src.harness.schemas.harness import RunConfig
from anisotag.src.optics.rig import reference_frames, simulate_trace
from anisotag.src.optics.schemas.optics import SwipeScenario

logger = logging.getLogger(__name__)

def random_payload(rng: np.random.Generator, length: int) -> Bits:
    return [int(b) for b in rng.integers(0, 2, size=length)]

def build_tag(payload: Bits, cfg: RunConfig, nl_map: Optional[NonlinearMap]) -> tuple[list[AngleCode], TagLayout]:
    codec = cfg.codec
    codes = encode(pad_payload(payload, codec), codec, nl_map)
    return codes, cfg.layout([code.angle for code in codes])

def layout_from_program(program: GcodeProgram, cfg: RunConfig) -> TagLayout:
    """Rebuild the printed layout from G-code, assuming the uniform region partition of cfg."""
    blank = cfg.layout([MicrostructureAngle(delta=0.0)] * cfg.n_regions)
    deltas = angle_estimate(program, blank.bounds)
    return cfg.layout([MicrostructureAngle.from_delta(delta) for delta in deltas])

def reference_set(scenario: SwipeScenario) -> ReferenceSet:
    ambient, states = reference_frames(scenario)
    return ReferenceSet(ambient=ambient, states=tuple(states))

def max_reference_correlation(references: ReferenceSet) -> float:
    """Largest off-diagonal correlation among the reference frames."""
    refs = references.matrix()
    gram = similarity_matrix(refs, refs, references.ambient.as_array())
    np.fill_diagonal(gram, -1.0)
    return float(gram.max())

def detect_layout(
    layout: TagLayout,
    cfg: RunConfig,
    nl_map: Optional[NonlinearMap],
    truth: Optional[Bits] = None,
    seed: Optional[int] = None,
    references: Optional[ReferenceSet] = None,
) -> DetectionReport:
    scenario = cfg.scenario(layout, state_angles(cfg.codec, nl_map), seed=seed)
    references = references or reference_set(scenario)
    return segment_and_decode(simulate_trace(scenario), references, cfg.detector, truth=truth)

def roundtrip(
    payload: Bits,
    cfg: RunConfig,
    nl_map: Optional[NonlinearMap],
    seed: Optional[int] = None,
    via_gcode: bool = False,
) -> DetectionReport:
    """Full pipeline for one payload; via_gcode recovers the layout from the emitted program."""
    truth = pad_payload(payload, cfg.codec)
    _, layout = build_tag(truth, cfg, nl_map)
    if via_gcode:
        layout = layout_from_program(emit_gcode(layout, cfg.profile), cfg)
    return detect_layout(layout, cfg, nl_map, truth=truth, seed=seed)
