import logging
from pathlib import Path
from typing import Optional

import click

from anisotag.src.codec.codec import pad_payload, state_angles
from anisotag.src.codec.gray import bits_from_string
from anisotag.src.detector.detector import REPORT_COLUMNS, REPORT_SCHEMA, render_report, report_row, segment_and_decode
from anisotag.src.detector.schemas.detector import ReferenceSet
from anisotag.src.harness.commands.common import config_options, handle_app_errors, map_for, read_sidecar
from anisotag.src.harness.pipeline import reference_set
from anisotag.src.harness.schemas.harness import RunConfig
from anisotag.src.optics.files import read_references, read_trace
from anisotag.utils.tables import write_table

logger = logging.getLogger(__name__)

DETECTION_FAILED = 2

@click.command("decode")
@click.option("--trace", "trace_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--references", "refs_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help="reference CSV; recomputed from the configuration when omitted")
@click.option("--truth", default=None, help="ground-truth bit string")
@click.option("--layout", "layout_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help="layout sidecar, its payload is used as ground truth")
@click.option("--report-csv", "report_path", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="also write the report as a one-row CSV")
@config_options
@handle_app_errors
def decode_command(trace_path: Path, refs_path: Optional[Path], truth: Optional[str], layout_path: Optional[Path],
                   report_path: Optional[Path], scenario_path, **flags):
    """Detect regions in a trace and recover the bitstream; exit 2 on detection failure."""
    cfg = RunConfig.resolve(flags, scenario_path)
    frames = read_trace(trace_path)

    if refs_path is not None:
        ambient, states = read_references(refs_path)
        references = ReferenceSet(ambient=ambient, states=tuple(states))
    else:
        alphabet = state_angles(cfg.codec, map_for(cfg))
        references = reference_set(cfg.scenario(cfg.layout(alphabet[:1] * cfg.n_regions), alphabet))

    if truth is None and layout_path is not None:
        truth = read_sidecar(layout_path)["payload"]
    truth_bits = pad_payload(bits_from_string(truth), cfg.codec) if truth is not None else None

    report = segment_and_decode(frames, references, cfg.detector, truth=truth_bits)
    click.echo(render_report(report))
    if report_path is not None:
        write_table(report_path, REPORT_COLUMNS, [report_row(report)], schema=REPORT_SCHEMA)
        logger.info(f"Wrote detection report to {report_path}")
    if not report.detection_success:
        logger.error(f"Detection failed: {report.region_count} regions found, {cfg.n_regions} expected")
        raise SystemExit(DETECTION_FAILED)
    logger.info(f"Detection succeeded over {len(frames)} frames")
