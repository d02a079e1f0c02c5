import csv
from pathlib import Path
from typing import Iterable, Optional, Sequence

from anisotag.core.exceptions import ArtifactIOError

def schema_line(schema: str) -> str:
    return f"# schema: {schema}"

def write_table(path: Path, header: Sequence[str], rows: Iterable[Sequence], schema: Optional[str] = None) -> Path:
    """Write a CSV file with LF endings, optionally led by a schema comment line."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            if schema:
                fh.write(schema_line(schema) + "\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as e:
        raise ArtifactIOError(f"cannot write {path}: {e}")
    return path

def read_table(path: Path) -> tuple[Optional[str], list[str], list[list[str]]]:
    """Return (schema, header, rows); comment lines other than the schema are skipped."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ArtifactIOError(f"cannot read {path}: {e}")

    schema = None
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            if schema is None and line.startswith("# schema:"):
                schema = line.split(":", 1)[1].strip()
            continue
        if line.strip():
            body.append(line)
    rows = list(csv.reader(body))
    if not rows:
        return schema, [], []
    return schema, rows[0], rows[1:]
