import logging
from collections import defaultdict
from pathlib import Path
from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel

from anisotag.src.codec.codec import decode, state_angles
from anisotag.src.codec.gray import hamming
from anisotag.src.codec.nonlinear_map import NonlinearMap
from anisotag.src.detector.detector import confuse_regions
from anisotag.src.detector.schemas.detector import DetectionMetrics
from anisotag.src.harness.pipeline import (
    build_tag,
    detect_layout,
    max_reference_correlation,
    random_payload,
    reference_set,
)
from anisotag.src.harness.schemas.harness import ExperimentSpec, RunConfig, TrialResult
from anisotag.utils.tables import write_table

logger = logging.getLogger(__name__)

SWEEP_SCHEMA = "anisotag-sweep/1"

# BER in percent measured on the physical rig, keyed by bits per region and coding
RIG_REFERENCE_BER = {
    1: {"gray": 0.0, "binary": 0.0},
    2: {"gray": 0.078, "binary": 0.157},
    3: {"gray": 0.627, "binary": 1.255},
    4: {"gray": 2.902, "binary": 7.373},
}

RESULT_COLUMNS = [
    "config_hash", "variable", "value", "trial", "coding", "seed", "detection_success",
    "regions", "expected_regions", "bit_errors", "bits", "ber", "max_reference_correlation", "aperture_sigma_mm",
]
SUMMARY_COLUMNS = [
    "config_hash", "variable", "value", "coding", "trials", "detections", "detection_accuracy",
    "extraction_accuracy", "ber", "max_reference_correlation", "aperture_sigma_mm", "rig_reference_ber_percent",
]

class SweepOutcome(BaseModel):
    results_path: Path
    summary_path: Path
    results: list[TrialResult]
    interrupted: bool = False

def point_config(spec: ExperimentSpec, value: float) -> RunConfig:
    base = spec.base.model_dump()
    match spec.variable:
        case "n_regions":
            base["n_regions"] = int(value)
        case "bits_per_region":
            base["bits_per_region"] = int(value)
        case "noise_sigma":
            base["noise_sigma"] = float(value)
        case "region_vs_beam_width":
            # value is region width over beam diameter
            base["beam_diameter_mm"] = spec.base.tag_width_mm / spec.base.n_regions / float(value)
        case "gray_vs_binary":
            pass
    return RunConfig(**base)

def _coding(use_gray: bool) -> str:
    return "gray" if use_gray else "binary"

def _paired_coding_trial(cfg, nl_map, rng, sim_seed, probability, trial, references, correlation) -> list[TrialResult]:
    m = cfg.bits_per_region
    states = [int(s) for s in rng.integers(0, 1 << m, size=cfg.n_regions)]
    alphabet = state_angles(cfg.codec, nl_map)
    layout = cfg.layout([alphabet[s] for s in states])
    report = detect_layout(layout, cfg, nl_map, seed=sim_seed, references=references)
    confused, _ = confuse_regions(report.region_states, rng, m, probability)

    results = []
    for use_gray in (True, False):
        codec = cfg.codec.model_copy(update={"use_gray": use_gray})
        bit_errors = None
        if report.detection_success:
            bit_errors = hamming(decode(confused, codec), decode(states, codec))
        results.append(TrialResult(
            value=probability, trial=trial, coding=_coding(use_gray), seed=sim_seed,
            detection_success=report.detection_success, regions=report.region_count,
            expected_regions=cfg.n_regions, bit_errors=bit_errors, bits=codec.capacity,
            max_reference_correlation=correlation,
        ))
    return results

def run_point(spec: ExperimentSpec, value: float, nl_map: Optional[NonlinearMap]) -> list[TrialResult]:
    """Trials of one point. Trial k is seeded the same at every point, so longer payloads extend shorter ones."""
    cfg = point_config(spec, value)
    alphabet = state_angles(cfg.codec, nl_map)
    references = reference_set(cfg.scenario(cfg.layout(alphabet[:1] * cfg.n_regions), alphabet))
    correlation = max_reference_correlation(references)

    results = []
    for trial in range(spec.trials):
        rng = np.random.default_rng([spec.seed, trial])
        sim_seed = int(rng.integers(2**31))
        if spec.variable == "gray_vs_binary":
            results += _paired_coding_trial(cfg, nl_map, rng, sim_seed, value, trial, references, correlation)
            continue
        payload = random_payload(rng, cfg.codec.capacity)
        _, layout = build_tag(payload, cfg, nl_map)
        report = detect_layout(layout, cfg, nl_map, truth=payload, seed=sim_seed, references=references)
        results.append(TrialResult(
            value=value, trial=trial, coding=_coding(cfg.use_gray), seed=sim_seed,
            detection_success=report.detection_success, regions=report.region_count,
            expected_regions=cfg.n_regions,
            bit_errors=hamming(report.bits, payload) if report.detection_success else None,
            bits=cfg.codec.capacity, max_reference_correlation=correlation,
        ))
    return results

def summarize(results: list[TrialResult]) -> dict[tuple[float, str], DetectionMetrics]:
    groups: dict[tuple[float, str], list[TrialResult]] = defaultdict(list)
    for result in results:
        groups[(result.value, result.coding)].append(result)

    summary = {}
    for key in sorted(groups):
        rows = groups[key]
        recovered = [1.0 - r.ber for r in rows if r.detection_success]
        extraction = float(np.mean(recovered)) if recovered else 0.0
        summary[key] = DetectionMetrics(
            trials=len(rows),
            detections=len(recovered),
            detection_accuracy=len(recovered) / len(rows),
            extraction_accuracy=extraction,
            ber=1.0 - extraction,
        )
    return summary

def _reference_ber(spec: ExperimentSpec, value: float, coding: str) -> str:
    m = int(value) if spec.variable == "bits_per_region" else spec.base.bits_per_region
    if spec.variable not in ("bits_per_region", "gray_vs_binary") or m not in RIG_REFERENCE_BER:
        return ""
    return f"{RIG_REFERENCE_BER[m][coding]:.3f}"

def write_results(spec: ExperimentSpec, results: list[TrialResult]) -> tuple[Path, Path]:
    config_hash = spec.config_hash
    results = sorted(results, key=lambda r: (r.value, r.trial, r.coding))
    sigma = spec.base.aperture_sigma_mm

    rows = [
        [config_hash, spec.variable, f"{r.value:g}", r.trial, r.coding, r.seed, int(r.detection_success),
         r.regions, r.expected_regions, "" if r.bit_errors is None else r.bit_errors, r.bits,
         "" if r.ber is None else f"{r.ber:.6f}", f"{r.max_reference_correlation:.6f}", f"{sigma:g}"]
        for r in results
    ]
    results_path = write_table(spec.output / "results.csv", RESULT_COLUMNS, rows, schema=SWEEP_SCHEMA)

    correlations = {(r.value, r.coding): r.max_reference_correlation for r in results}
    summary_rows = [
        [config_hash, spec.variable, f"{value:g}", coding, m.trials, m.detections,
         f"{m.detection_accuracy:.6f}", f"{m.extraction_accuracy:.6f}", f"{m.ber:.6f}",
         f"{correlations[(value, coding)]:.6f}", f"{sigma:g}", _reference_ber(spec, value, coding)]
        for (value, coding), m in summarize(results).items()
    ]
    summary_path = write_table(spec.output / "summary.csv", SUMMARY_COLUMNS, summary_rows, schema=SWEEP_SCHEMA)
    return results_path, summary_path

def run_sweep(spec: ExperimentSpec, map_loader: Callable[[RunConfig], Optional[NonlinearMap]]) -> SweepOutcome:
    """Run every (point, trial); on Ctrl-C the finished trials are still written."""
    results: list[TrialResult] = []
    interrupted = False
    try:
        for value in spec.values:
            cfg = point_config(spec, value)
            point = run_point(spec, value, map_loader(cfg))
            results += point
            detected = sum(r.detection_success for r in point)
            logger.info(f"Sweep {spec.variable}={value:g}: {detected}/{len(point)} detections")
    except KeyboardInterrupt:
        interrupted = True
        logger.warning(f"Sweep interrupted, flushing {len(results)} finished trials")

    results_path, summary_path = write_results(spec, results)
    logger.info(f"Sweep results written to {results_path} and {summary_path}")
    return SweepOutcome(results_path=results_path, summary_path=summary_path, results=results, interrupted=interrupted)
