"""Trace, reference and scenario files."""
import logging
from pathlib import Path
from typing import Mapping

import numpy as np

from anisotag.core.exceptions import ArtifactIOError, ScenarioFileError, TraceFormatError
from anisotag.src.optics.schemas.optics import ADC_MAX, SensorFrame
from anisotag.utils.tables import read_table, write_table

logger = logging.getLogger(__name__)

TRACE_SCHEMA = "anisotag-trace/1"
REFERENCE_SCHEMA = "anisotag-references/1"
AMBIENT_LABEL = "ambient"

def _sensor_columns(count: int) -> list[str]:
    return [f"s{i}" for i in range(count)]

def _parse_counts(cells: list[str], where: str) -> tuple[int, ...]:
    try:
        values = tuple(int(cell) for cell in cells)
    except ValueError:
        raise TraceFormatError(f"{where}: non-integer ADC value in {cells}")
    if any(v < 0 or v > ADC_MAX for v in values):
        raise TraceFormatError(f"{where}: ADC value outside [0, {ADC_MAX}]")
    return values

def write_trace(frames: list[SensorFrame], path: Path) -> Path:
    width = len(frames[0].values) if frames else 16
    rows = ([frame.index, *frame.values] for frame in frames)
    write_table(path, ["frame_index", *_sensor_columns(width)], rows, schema=TRACE_SCHEMA)
    logger.info(f"Wrote {len(frames)} frames to {path}")
    return Path(path)

def read_trace(path: Path) -> list[SensorFrame]:
    schema, header, rows = read_table(path)
    if schema is not None and schema != TRACE_SCHEMA:
        raise TraceFormatError(f"{path}: unsupported schema {schema!r}")
    if not header or header[0] != "frame_index" or header[1:] != _sensor_columns(len(header) - 1):
        raise TraceFormatError(f"{path}: expected header frame_index,s0..sN, got {header}")
    frames = []
    for line_no, row in enumerate(rows, start=1):
        if len(row) != len(header):
            raise TraceFormatError(f"{path}: row {line_no} has {len(row)} columns, expected {len(header)}")
        try:
            index = int(row[0])
        except ValueError:
            raise TraceFormatError(f"{path}: row {line_no} has a non-integer frame index {row[0]!r}")
        frames.append(SensorFrame(index=index, values=_parse_counts(row[1:], f"{path} row {line_no}")))
    return frames

def write_references(ambient: SensorFrame, states: list[SensorFrame], path: Path) -> Path:
    rows = [[AMBIENT_LABEL, *ambient.values]]
    rows += [[f"state{i}", *frame.values] for i, frame in enumerate(states)]
    write_table(path, ["label", *_sensor_columns(len(ambient.values))], rows, schema=REFERENCE_SCHEMA)
    return Path(path)

def read_references(path: Path) -> tuple[SensorFrame, list[SensorFrame]]:
    schema, header, rows = read_table(path)
    if schema is not None and schema != REFERENCE_SCHEMA:
        raise TraceFormatError(f"{path}: unsupported schema {schema!r}")
    if not header or header[0] != "label" or header[1:] != _sensor_columns(len(header) - 1):
        raise TraceFormatError(f"{path}: expected header label,s0..sN, got {header}")
    by_label = {}
    for line_no, row in enumerate(rows, start=1):
        if len(row) != len(header):
            raise TraceFormatError(f"{path}: row {line_no} has {len(row)} columns, expected {len(header)}")
        by_label[row[0]] = _parse_counts(row[1:], f"{path} {row[0]}")
    if AMBIENT_LABEL not in by_label:
        raise TraceFormatError(f"{path}: no ambient row")
    ambient = SensorFrame(values=by_label[AMBIENT_LABEL])
    states = []
    while f"state{len(states)}" in by_label:
        states.append(SensorFrame(index=len(states), values=by_label[f"state{len(states)}"]))
    if len(states) < 2:
        raise TraceFormatError(f"{path}: need at least two state rows, found {len(states)}")
    return ambient, states

def frames_to_array(frames: list[SensorFrame]) -> np.ndarray:
    if not frames:
        return np.zeros((0, 0))
    return np.array([frame.values for frame in frames], dtype=float)

def read_scenario_file(path: Path) -> dict[str, str]:
    """Parse `key = value` lines; `#` starts a comment."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ArtifactIOError(f"cannot read scenario file {path}: {e}")

    values: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ScenarioFileError(f"expected 'key = value', got {raw.strip()!r}", line=line_no)
        if key in values:
            raise ScenarioFileError(f"duplicate key {key!r}", line=line_no)
        values[key] = value
    return values

def write_scenario_file(values: Mapping[str, object], path: Path) -> Path:
    path = Path(path)
    lines = [f"{key} = {str(value).lower() if isinstance(value, bool) else value}" for key, value in values.items()]
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as e:
        raise ArtifactIOError(f"cannot write scenario file {path}: {e}")
    return path
