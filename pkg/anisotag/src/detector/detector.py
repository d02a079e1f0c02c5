"""Correlation detector: per-frame classification, region segmentation and bit recovery."""
import logging
from typing import Optional, Sequence, Union

import numpy as np

from anisotag.core.exceptions import DimensionMismatchError, EmptyInputError, LengthMismatchError
from anisotag.src.codec.codec import decode
from anisotag.src.codec.gray import Bits, hamming
from anisotag.src.detector.schemas.detector import (
    INVALID,
    DetectionMetrics,
    DetectionReport,
    DetectorConfig,
    ReferenceSet,
)
from anisotag.src.optics.files import frames_to_array
from anisotag.src.optics.schemas.optics import SensorFrame

logger = logging.getLogger(__name__)

Trace = Union[Sequence[SensorFrame], np.ndarray]

def _as_vector(frame) -> np.ndarray:
    if isinstance(frame, SensorFrame):
        return frame.as_array()
    return np.asarray(frame, dtype=float)

def _as_matrix(trace: Trace) -> np.ndarray:
    if isinstance(trace, np.ndarray):
        return np.atleast_2d(trace.astype(float))
    return frames_to_array(list(trace))

def similarity(frame, reference, ambient) -> float:
    """Pearson correlation of (V' - V_A) and (V_i - V_A); 0 when either side has no variance."""
    x, r, a = _as_vector(frame), _as_vector(reference), _as_vector(ambient)
    if not (x.shape == r.shape == a.shape):
        raise DimensionMismatchError(f"channel counts differ: frame {x.shape}, reference {r.shape}, ambient {a.shape}")
    return float(similarity_matrix(x[None, :], r[None, :], a)[0, 0])

def similarity_matrix(frames: np.ndarray, references: np.ndarray, ambient: np.ndarray) -> np.ndarray:
    """(frames x states) correlation matrix."""
    if frames.shape[1] != references.shape[1] or references.shape[1] != ambient.shape[-1]:
        raise DimensionMismatchError(
            f"channel counts differ: frames {frames.shape[1]}, references {references.shape[1]}, ambient {ambient.shape[-1]}"
        )
    x = frames - ambient
    r = references - ambient
    x = x - x.mean(axis=1, keepdims=True)
    r = r - r.mean(axis=1, keepdims=True)
    x_norm = np.linalg.norm(x, axis=1)
    r_norm = np.linalg.norm(r, axis=1)
    denom = np.outer(x_norm, r_norm)
    with np.errstate(divide="ignore", invalid="ignore"):
        scores = np.where(denom > 0, (x @ r.T) / denom, 0.0)
    return np.clip(scores, -1.0, 1.0)

def _frame_states(scores: np.ndarray, threshold: float) -> np.ndarray:
    best = np.argmax(scores, axis=1)
    peak = scores[np.arange(len(scores)), best]
    return np.where(peak > threshold, best, INVALID)

def classify_frame(frame, references: ReferenceSet, cfg: DetectorConfig) -> int:
    """argmax_i S_i when it exceeds T, else INVALID; ties go to the lower index."""
    x = _as_vector(frame)
    scores = similarity_matrix(x[None, :], references.matrix(), references.ambient.as_array())
    return int(_frame_states(scores, cfg.threshold)[0])

def _gains(frames: np.ndarray, states: np.ndarray, references: ReferenceSet) -> np.ndarray:
    """Projection gain <x, r> / <r, r> of each valid frame on its matched reference."""
    ambient = references.ambient.as_array()
    refs = references.matrix() - ambient
    gains = np.zeros(len(frames))
    for i in np.nonzero(states != INVALID)[0]:
        r = refs[states[i]]
        rr = float(r @ r)
        gains[i] = float((frames[i] - ambient) @ r) / rr if rr > 0 else 0.0
    return gains

def _runs(states: np.ndarray) -> list[list[int]]:
    runs: list[list[int]] = []
    current: list[int] = []
    for i, state in enumerate(states):
        if current and (state == INVALID or state != states[current[-1]]):
            runs.append(current)
            current = []
        if state != INVALID:
            current.append(i)
    if current:
        runs.append(current)
    return runs

def _split_on_dips(run: list[int], gains: np.ndarray, ratio: float) -> list[list[int]]:
    if ratio <= 0 or len(run) < 3:
        return [run]
    g = gains[run]
    left_peak = np.maximum.accumulate(g)
    right_peak = np.maximum.accumulate(g[::-1])[::-1]
    best, best_ratio = None, ratio
    for j in range(1, len(run) - 1):
        shoulder = min(left_peak[j - 1], right_peak[j + 1])
        if shoulder <= 0:
            continue
        depth = g[j] / shoulder
        if depth < best_ratio:
            best, best_ratio = j, depth
    if best is None:
        return [run]
    return _split_on_dips(run[:best], gains, ratio) + _split_on_dips(run[best + 1:], gains, ratio)

def segment_and_decode(
    trace: Trace,
    references: ReferenceSet,
    cfg: DetectorConfig,
    truth: Optional[Bits] = None,
) -> DetectionReport:
    frames = _as_matrix(trace)
    if frames.size == 0:
        logger.warning("Empty trace, nothing to detect")
        return DetectionReport(similarities=np.zeros((0, len(references.states))), detection_success=False,
                               expected_regions=cfg.expected_regions)

    scores = similarity_matrix(frames, references.matrix(), references.ambient.as_array())
    states = _frame_states(scores, cfg.threshold)
    gains = _gains(frames, states, references)

    regions = []
    for run in _runs(states):
        for piece in _split_on_dips(run, gains, cfg.dip_ratio):
            if len(piece) >= cfg.debounce_frames:
                regions.append(int(states[piece[0]]))

    report = DetectionReport(
        region_states=regions,
        frame_states=[int(s) for s in states],
        similarities=scores,
        detection_success=len(regions) == cfg.expected_regions,
        expected_regions=cfg.expected_regions,
    )
    if report.detection_success:
        report.bits = decode(regions, cfg.codec)
        if truth is not None:
            report.ber = bit_error_rate(report.bits, truth)
    logger.debug(f"Detected {len(regions)}/{cfg.expected_regions} regions over {len(frames)} frames")
    return report

def bit_error_rate(bits: Bits, truth: Bits) -> float:
    if len(bits) != len(truth):
        raise LengthMismatchError(f"decoded {len(bits)} bits, truth has {len(truth)}")
    return hamming(bits, truth) / len(truth) if truth else 0.0

def evaluate(reports: Sequence[DetectionReport], truths: Sequence[Bits]) -> DetectionMetrics:
    """Detection accuracy, extraction accuracy over successful detections, and BER.

    With no successful detection the extraction accuracy is 0 and the BER 1.
    """
    if not reports:
        raise EmptyInputError("no reports to evaluate")
    if len(reports) != len(truths):
        raise LengthMismatchError(f"{len(reports)} reports but {len(truths)} ground truths")

    recovered = [
        1.0 - bit_error_rate(report.bits, truth)
        for report, truth in zip(reports, truths)
        if report.detection_success
    ]
    extraction = float(np.mean(recovered)) if recovered else 0.0
    return DetectionMetrics(
        trials=len(reports),
        detections=len(recovered),
        detection_accuracy=len(recovered) / len(reports),
        extraction_accuracy=extraction,
        ber=1.0 - extraction,
    )

def inject_adjacent_confusion(states: Sequence[int], rng: np.random.Generator, m: int) -> tuple[list[int], int]:
    """Move one random region to a neighbouring state (cyclic in the 2^m alphabet)."""
    if not states:
        raise EmptyInputError("no region states to perturb")
    region = int(rng.integers(len(states)))
    step = 1 if rng.random() < 0.5 else -1
    confused = list(states)
    confused[region] = (confused[region] + step) % (1 << m)
    return confused, region

def confuse_regions(states: Sequence[int], rng: np.random.Generator, m: int, probability: float) -> tuple[list[int], int]:
    """Independently move each region to a neighbouring state with the given probability."""
    confused = list(states)
    events = 0
    for i in range(len(confused)):
        if rng.random() < probability:
            step = 1 if rng.random() < 0.5 else -1
            confused[i] = (confused[i] + step) % (1 << m)
            events += 1
    return confused, events

def render_report(report: DetectionReport) -> str:
    lines = [
        f"detection: {'success' if report.detection_success else 'failure'}",
        f"regions: {report.region_count}/{report.expected_regions}",
        f"frames: {len(report.frame_states)} ({sum(1 for s in report.frame_states if s != INVALID)} valid)",
        f"states: {' '.join(str(s) for s in report.region_states)}",
        f"bits: {''.join(str(b) for b in report.bits)}",
    ]
    if report.ber is not None:
        lines.append(f"ber: {report.ber:.4f}")
    return "\n".join(lines)

REPORT_SCHEMA = "anisotag-report/1"
REPORT_COLUMNS = ["detection_success", "regions", "expected_regions", "ber", "states", "bits"]

def report_row(report: DetectionReport) -> list:
    return [
        int(report.detection_success),
        report.region_count,
        report.expected_regions,
        "" if report.ber is None else f"{report.ber:.6f}",
        " ".join(str(s) for s in report.region_states),
        "".join(str(b) for b in report.bits),
    ]
